import numpy as np
import pytest


def make_shf1(path, values, L=1.0, t=0.0):
    """Write an SHF1 file by hand (the format is four header fields + raw doubles)."""
    values = np.asarray(values, dtype="<f8")
    N = values.shape[0]
    with open(path, "wb") as fh:
        fh.write(f"SHF1 {N} {L:.17g} {t:.17g}\n".encode("ascii"))
        fh.write(values.tobytes())
    return path


def make_trace_csv(path, t, E, Ec=None, Ee=None):
    t = np.asarray(t, dtype=float)
    E = np.asarray(E, dtype=float)
    Ec = E if Ec is None else np.asarray(Ec, dtype=float)
    Ee = E - Ec if Ee is None else np.asarray(Ee, dtype=float)
    lines = ["step,t,E,Ec,Ee,l2,linf"]
    for i in range(len(t)):
        lines.append(f"{i},{float(t[i])!r},{float(E[i])!r},{float(Ec[i])!r},{float(Ee[i])!r},0.0,0.0")
    path.write_text("\n".join(lines) + "\n")
    return path


def make_order_csv(path, taus, errors, included=None):
    included = [1] * len(taus) if included is None else included
    lines = ["tau,error,included"]
    for tau, err, inc in zip(taus, errors, included):
        lines.append(f"{float(tau)!r},{float(err)!r},{int(inc)}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def tiny_field():
    return np.arange(16, dtype=float).reshape(4, 4)
