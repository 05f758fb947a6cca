"""
Reference model built directly from the mode transformation, independent of
the package's closed forms.

Modes are (A, E, E'') before the channel and (B, E', E'') after it. Bob's and
Eve's conditional states come from generic Gaussian conditioning (Schur
complements) and entropies from the generic eigen solver.
"""

import math

import numpy as np

from cvqkd.gaussian import entropy

Z = np.diag([1.0, -1.0])
I2 = np.eye(2)


def input_cm(q_a, p_a, w):
    """Alice's mode with variances (q_a, p_a) next to Eve's EPR pair of variance w."""
    s = math.sqrt(w * w - 1.0)
    v = np.zeros((6, 6))
    v[:2, :2] = np.diag([q_a, p_a])
    v[2:, 2:] = np.block([[w * I2, s * Z], [s * Z, w * I2]])
    return v


def beam_splitter(t):
    r, s = math.sqrt(t), math.sqrt(1.0 - t)
    bs = np.block([[r * I2, s * I2], [-s * I2, r * I2]])
    out = np.eye(6)
    out[:4, :4] = bs
    return out


def output_cm(q_a, p_a, t, w):
    s = beam_splitter(t)
    return s @ input_cm(q_a, p_a, w) @ s.T


def homodyne_condition(v, k):
    """Condition the remaining modes on a Q measurement of mode ``k``."""
    keep = [i for i in range(v.shape[0]) if i not in (2 * k, 2 * k + 1)]
    c = v[np.ix_(keep, [2 * k])]
    return v[np.ix_(keep, keep)] - c @ c.T / v[2 * k, 2 * k]


def heterodyne_condition(v, k):
    idx = [2 * k, 2 * k + 1]
    keep = [i for i in range(v.shape[0]) if i not in idx]
    c = v[np.ix_(keep, idx)]
    return v[np.ix_(keep, keep)] - c @ np.linalg.inv(v[np.ix_(idx, idx)] + I2) @ c.T


def eve(v):
    return v[2:, 2:]


def shannon(v_s, v_0, t, w, detection):
    """Alice-Bob information from the correlation of X_S with Bob's outcome."""
    b = (1 - t) * w + t * (v_s + v_0)
    cov = math.sqrt(t) * v_s
    if detection == "hom":
        rho2 = cov * cov / (v_s * b)
        return -0.5 * math.log2(1.0 - rho2)
    # each heterodyne quadrature is (B + vacuum) / sqrt 2
    rho2 = (cov * cov / 2.0) / (v_s * (b + 1.0) / 2.0)
    return -math.log2(1.0 - rho2)


def reference_rate(protocol, v_s, v_0, t, w):
    v = v_s + v_0
    joint = output_cm(v, v, t, w)
    s_e = entropy(eve(joint))
    rec, det = protocol.split("-")
    if rec == "rr":
        cond = homodyne_condition(joint, 0) if det == "hom" else heterodyne_condition(joint, 0)
        s_cond = entropy(cond)
    else:
        known = output_cm(v_0, v, t, w) if det == "hom" else output_cm(v_0, v_0, t, w)
        s_cond = entropy(eve(known))
    holevo = s_e - s_cond
    mi = shannon(v_s, v_0, t, w, det)
    return mi, holevo, mi - holevo
