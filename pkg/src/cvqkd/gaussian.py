"""
Symplectic linear algebra and entropy functionals for Gaussian states.

All covariance matrices are in shot-noise units (vacuum quadrature variance
equal to 1) with interleaved quadrature ordering ``(Q1, P1, ..., Qn, Pn)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidState, NumericFailure

# Symplectic eigenvalues in [1 - PURITY_TOL, 1) are treated as roundoff.
PURITY_TOL = 1e-9
SYMMETRY_RTOL = 1e-12

_LN2 = math.log(2.0)
_PAULI_Z = np.diag([1.0, -1.0])
_OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form, a direct sum of n copies of [[0, 1], [-1, 0]]."""
    if int(n) != n or n < 1:
        raise InvalidArgument(f"number of modes must be a positive integer, got {n!r}")
    return np.kron(np.eye(int(n)), _OMEGA1)


def as_cm(cm, check_physical: bool = False) -> np.ndarray:
    """
    Validate a covariance matrix and return it as a float array.

    Parameters
    ----------
    cm : array_like
        Real symmetric 2n x 2n matrix.
    check_physical : bool
        Also require every symplectic eigenvalue to be at least ``1 - PURITY_TOL``.
    """
    v = np.asarray(cm, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2 or v.shape[0] == 0:
        raise InvalidArgument(f"covariance matrix must be 2n x 2n, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidArgument("covariance matrix has non-finite entries")
    scale = max(np.max(np.abs(v)), 1.0)
    if np.max(np.abs(v - v.T)) > SYMMETRY_RTOL * scale:
        raise InvalidArgument("covariance matrix is not symmetric")
    if check_physical:
        nu = symplectic_spectrum_generic(v)
        if nu[-1] < 1.0 - PURITY_TOL:
            raise InvalidState(f"smallest symplectic eigenvalue {nu[-1]:.12g} < 1")
    return v


def is_physical(cm) -> bool:
    """True if ``cm`` is symmetric and satisfies the uncertainty principle."""
    try:
        as_cm(cm, check_physical=True)
    except InvalidArgument:
        return False
    return True


def symplectic_spectrum_generic(cm) -> np.ndarray:
    """
    Symplectic eigenvalues of an n-mode covariance matrix, sorted descending.

    The eigenvalues of ``Omega @ V`` come in pairs ``+-i nu_k``; their moduli
    are sorted and every second one is kept.
    """
    v = as_cm(cm)
    n = v.shape[0] // 2
    try:
        ev = np.linalg.eigvals(symplectic_form(n) @ v)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(f"eigen solver failed: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise NumericFailure("eigen solver returned non-finite values")
    moduli = np.sort(np.abs(ev))[::-1]
    return moduli[::2].copy()


def symplectic_spectrum_two_mode(a: float, b: float, c: float, t: float) -> np.ndarray:
    """
    Closed-form spectrum of the two-mode matrix ``[[a I, sqrt(t) c Z], [sqrt(t) c Z, b I]]``.

    Returns ``nu_pm = (sqrt(y) +- (a - b)) / 2`` with ``y = (a + b)**2 - 4 c**2 t``,
    sorted descending. The smaller eigenvalue is obtained from the product
    ``nu_+ nu_- = a b - c**2 t`` to avoid cancellation when ``|a - b|`` is large.
    """
    if c < 0:
        raise InvalidArgument(f"c must be non-negative, got {c}")
    if not 0.0 <= t <= 1.0:
        raise InvalidArgument(f"t must lie in [0, 1], got {t}")
    y = (a + b) ** 2 - 4.0 * c * c * t
    if y < 4.0 - PURITY_TOL:
        raise InvalidState(f"two-mode validity condition y >= 4 violated (y = {y!r})")
    big = 0.5 * (math.sqrt(max(y, 0.0)) + abs(a - b))
    small = (a * b - c * c * t) / big
    return np.array([big, small])


def two_mode_invariants(cm) -> tuple[float, float]:
    """
    Return ``(det V, Delta)`` for a two-mode matrix with blocks ``[[A, C], [C^T, B]]``,
    where ``Delta = det A + det B + 2 det C``.
    """
    v = as_cm(cm)
    if v.shape != (4, 4):
        raise InvalidArgument(f"expected a two-mode (4 x 4) matrix, got {v.shape}")
    A, B, C = v[:2, :2], v[2:, 2:], v[:2, 2:]
    delta = np.linalg.det(A) + np.linalg.det(B) + 2.0 * np.linalg.det(C)
    return float(np.linalg.det(v)), float(delta)


def symplectic_spectrum_invariants(det_v: float, delta: float, disc: float | None = None) -> np.ndarray:
    """
    Two-mode spectrum from the global invariants ``det V = nu_+^2 nu_-^2`` and
    ``Delta = nu_+^2 + nu_-^2``.

    ``disc`` optionally supplies ``Delta**2 - 4 det V`` computed without
    cancellation; near-degenerate spectra otherwise lose half their digits.
    """
    if disc is None:
        disc = delta * delta - 4.0 * det_v
    if disc < -1e-6 * max(1.0, delta * delta):
        raise NumericFailure(f"inconsistent invariants: Delta^2 - 4 det V = {disc!r}")
    big2 = 0.5 * (delta + math.sqrt(max(disc, 0.0)))
    if big2 <= 0.0:
        raise NumericFailure(f"non-positive invariant Delta = {delta!r}")
    small2 = det_v / big2
    if small2 < 0.0:
        raise NumericFailure(f"negative determinant {det_v!r}")
    return np.array([math.sqrt(big2), math.sqrt(small2)])


def _is_qp_decoupled(v: np.ndarray) -> bool:
    # every Q-P covariance vanishes
    return not np.any(v[0::2, 1::2])


def symplectic_spectrum_from_blocks(cm) -> np.ndarray:
    """
    Two-mode spectrum via the determinant and Delta invariants.

    When Q and P are uncorrelated, with ``A = diag(a1, a2)``, ``B = diag(b1, b2)``
    and ``C = diag(c1, c2)``, the invariants are formed directly from the
    entries: ``det V = (a1 b1 - c1^2)(a2 b2 - c2^2)`` and
    ``Delta^2 - 4 det V = (a1 a2 - b1 b2)^2 + 4 (a2 c1 + b1 c2)(a1 c2 + b2 c1)``.
    """
    v = as_cm(cm)
    if v.shape != (4, 4):
        raise InvalidArgument(f"expected a two-mode (4 x 4) matrix, got {v.shape}")
    if not _is_qp_decoupled(v):
        return symplectic_spectrum_invariants(*two_mode_invariants(v))
    a1, a2, b1, b2 = v[0, 0], v[1, 1], v[2, 2], v[3, 3]
    c1, c2 = v[0, 2], v[1, 3]
    det_v = (a1 * b1 - c1 * c1) * (a2 * b2 - c2 * c2)
    delta = a1 * a2 + b1 * b2 + 2.0 * c1 * c2
    disc = (a1 * a2 - b1 * b2) ** 2 + 4.0 * (a2 * c1 + b1 * c2) * (a1 * c2 + b2 * c1)
    return symplectic_spectrum_invariants(float(det_v), float(delta), float(disc))


def g_function(nu: float) -> float:
    """
    Entropy in bits of a single-mode thermal state with symplectic eigenvalue ``nu``.

    ``g(1) = 0`` exactly. Eigenvalues within ``PURITY_TOL`` below 1 are clamped.
    """
    if not nu >= 1.0 - PURITY_TOL:
        raise InvalidArgument(f"symplectic eigenvalue {nu!r} below 1")
    if nu <= 1.0:
        return 0.0
    if math.isinf(nu):
        return math.inf
    # g = log2(x+) + x- log2(1 + 1/x-), x+- = (nu +- 1)/2
    x_minus = 0.5 * (nu - 1.0)
    return math.log2(0.5 * (nu + 1.0)) + x_minus * math.log1p(1.0 / x_minus) / _LN2


def g_asymptotic(nu: float) -> float:
    """Large-eigenvalue form ``log2(e nu / 2)`` of :func:`g_function`."""
    if not nu > 0.0:
        raise InvalidArgument(f"nu must be positive, got {nu!r}")
    return math.log2(nu) + 1.0 / _LN2 - 1.0


def von_neumann_entropy(spectrum) -> float:
    """Entropy in bits of a Gaussian state given its symplectic spectrum."""
    total = 0.0
    for nu in np.atleast_1d(np.asarray(spectrum, dtype=float)):
        if nu < 1.0 - PURITY_TOL:
            raise InvalidState(f"symplectic eigenvalue {nu!r} violates the uncertainty principle")
        total += g_function(float(nu))
    return total


def entropy(cm) -> float:
    """Von Neumann entropy of a Gaussian state given its covariance matrix."""
    return von_neumann_entropy(symplectic_spectrum_generic(cm))


@dataclass(frozen=True)
class CorrelationBlock:
    """
    Correlations between Eve's two modes and one quadrature pair of Bob's mode.

    Represents the 4 x 2 matrix ``D = [[xi I], [phi_corr Z]]``.
    """

    xi: float
    phi_corr: float

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([self.xi * np.eye(2), self.phi_corr * _PAULI_Z])


def _d_matrix(d) -> np.ndarray:
    if isinstance(d, CorrelationBlock):
        return d.matrix
    m = np.asarray(d, dtype=float)
    if m.ndim != 2 or m.shape[1] != 2:
        raise InvalidArgument(f"correlation block must be k x 2, got shape {m.shape}")
    return m


def condition_on_homodyne(cm_e, d, b_v: float) -> np.ndarray:
    """
    Conditional covariance of ``cm_e`` after a homodyne (Q) measurement of a
    correlated mode with variance ``b_v``: ``V_E - D Pi D^T / b_v``.
    """
    if not b_v > 0:
        raise InvalidArgument(f"measured variance must be positive, got {b_v!r}")
    v = as_cm(cm_e)
    dm = _d_matrix(d)
    if dm.shape[0] != v.shape[0]:
        raise InvalidArgument("correlation block does not match the covariance matrix")
    q = dm[:, :1]
    out = v - (q @ q.T) / b_v
    return 0.5 * (out + out.T)


def condition_on_heterodyne(cm_e, d, cm_b) -> np.ndarray:
    """
    Conditional covariance of ``cm_e`` after heterodyne detection of a correlated
    mode with covariance ``cm_b``: ``V_E - D (Omega V_B Omega^T + I) D^T / theta``
    with ``theta = det V_B + Tr V_B + 1``.
    """
    v = as_cm(cm_e)
    vb = as_cm(cm_b)
    if vb.shape != (2, 2):
        raise InvalidArgument(f"measured mode must be single-mode (2 x 2), got {vb.shape}")
    dm = _d_matrix(d)
    if dm.shape[0] != v.shape[0]:
        raise InvalidArgument("correlation block does not match the covariance matrix")
    theta = np.linalg.det(vb) + np.trace(vb) + 1.0
    if not theta > 0:
        raise NumericFailure(f"theta = {theta!r} is not positive")
    kernel = _OMEGA1 @ vb @ _OMEGA1.T + np.eye(2)
    out = v - dm @ kernel @ dm.T / theta
    return 0.5 * (out + out.T)
