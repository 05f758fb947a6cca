"""
Security thresholds, protocol crossovers, parameter sweeps and the
large-preparation-noise (classical) limit of direct-reconciliation homodyne.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import bisect

from .channel import ChannelParams, SourceParams
from .errors import InvalidArgument
from .rates import KeyRateResult, Protocol, key_rate, rate

COARSE_POINTS = 200
DEFAULT_XTOL = 1e-10
AXES = ("t", "w", "v_0", "v_s", "f")


def transmission_grid(points: int = COARSE_POINTS) -> np.ndarray:
    """
    Coarse bracketing grid on the open interval (0, 1).

    ``points`` evenly spaced interior values plus a geometric tail
    ``1 - 10**-k`` (k up to 12) so that thresholds squeezed against T = 1, as
    in the microwave regime, are still bracketed.
    """
    linear = np.linspace(0.0, 1.0, points + 2)[1:-1]
    tail = 1.0 - np.logspace(-2, -12, 41)
    return np.unique(np.concatenate([linear, tail]))


@dataclass(frozen=True)
class Curve:
    """One rate curve: a protocol with a fixed source and channel noise, as a function of T."""

    protocol: Protocol
    src: SourceParams
    w: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))

    def rate(self, t: float) -> float:
        return rate(self.protocol, self.src, ChannelParams(t=float(t), w=self.w))


def _last_sign_change(ts: np.ndarray, values: np.ndarray):
    """Bracket of the highest-T sign change of ``values`` after which it stays positive."""
    if values[-1] <= 0 or np.all(values > 0):
        return None
    i = int(np.nonzero(values <= 0)[0][-1])
    return ts[i], ts[i + 1]


def threshold_find(
    protocol, src: SourceParams, w: float = 1.0, *, points: int = COARSE_POINTS, xtol: float = DEFAULT_XTOL
) -> float | None:
    """
    Smallest transmission T* above which the key rate stays positive.

    The rate is bracketed on :func:`transmission_grid` and the bracket is
    refined by bisection. Returns ``None`` when there is no sign change:
    either secure on all of (0, 1) or insecure arbitrarily close to T = 1.
    """
    curve = Curve(protocol, src, w)
    ts = transmission_grid(points)
    values = np.array([curve.rate(t) for t in ts])
    bracket = _last_sign_change(ts, values)
    if bracket is None:
        return None
    return bisect(curve.rate, *bracket, xtol=xtol)


def crossover_find(
    first: Curve, second: Curve, *, points: int = COARSE_POINTS, xtol: float = DEFAULT_XTOL, atol: float = 1e-12
) -> float | None:
    """
    Highest transmission at which ``first.rate - second.rate`` changes sign.

    Returns ``None`` when the difference never changes sign, including the
    degenerate case of identical curves.
    """
    diff = lambda t: first.rate(t) - second.rate(t)  # noqa: E731
    ts = transmission_grid(points)
    values = np.array([diff(t) for t in ts])
    values[np.abs(values) <= atol] = 0.0
    nz = np.nonzero(values)[0]
    if nz.size == 0:
        return None
    signs = np.sign(values[nz])
    flips = np.nonzero(signs[:-1] != signs[1:])[0]
    if flips.size == 0:
        return None
    k = flips[-1]
    return bisect(diff, ts[nz[k]], ts[nz[k + 1]], xtol=xtol)


# --- classical limit -------------------------------------------------------


@dataclass(frozen=True)
class ClassicalLimitParams:
    """
    Direct-reconciliation homodyne with ``v_s = phi_ratio * v_0`` and ``v_0``
    large. ``v_0_probe`` is the finite preparation noise at which the
    asymptotic expressions are evaluated.
    """

    phi_ratio: float
    t: float
    w: float = 1.0
    v_0_probe: float = 1e6

    def __post_init__(self):
        if not self.phi_ratio > 0:
            raise InvalidArgument(f"phi_ratio must be positive, got {self.phi_ratio!r}")
        if not 0.0 < self.t < 1.0:
            raise InvalidArgument(f"t must lie in (0, 1), got {self.t!r}")
        if not self.w >= 1.0:
            raise InvalidArgument(f"w must be >= 1, got {self.w!r}")
        if not self.v_0_probe > 1.0:
            raise InvalidArgument(f"v_0_probe must exceed 1, got {self.v_0_probe!r}")

    @property
    def source(self) -> SourceParams:
        return SourceParams(v_s=self.phi_ratio * self.v_0_probe, v_0=self.v_0_probe)


def classical_limit_spectra(p: ClassicalLimitParams) -> dict[str, float]:
    """Leading-order symplectic eigenvalues of Eve's state and her state given Alice's Q."""
    t, w, v0 = p.t, p.w, p.v_0_probe
    v = (1.0 + p.phi_ratio) * v0
    return {
        "eve_plus": (1 - t) * v,
        "eve_minus": w,
        "cond_plus": math.sqrt(1 + p.phi_ratio) * (1 - t) * v0,
        "cond_minus": math.sqrt((t + v * w - t * v * w) * (t + v0 * w - t * v0 * w) / (v * v0)) / (1 - t),
    }


def classical_limit_rate(p: ClassicalLimitParams) -> float:
    """
    Asymptotic direct-reconciliation homodyne rate in bits,
    ``log2[sqrt(1 + phi) nu+_{E|A} nu-_{E|A} / (nu+_E nu-_E)]``, with every
    entropy replaced by ``log2(e nu / 2)``.

    Only meaningful for 1/2 < t < 1 with ``(1 - t) v_0`` large; the expression
    is O(1 / v_0) and positive for any t in (0, 1).
    """
    s = classical_limit_spectra(p)
    return math.log2(
        math.sqrt(1 + p.phi_ratio) * s["cond_plus"] * s["cond_minus"] / (s["eve_plus"] * s["eve_minus"])
    )


def classical_limit_ratio(t: float, w: float, v: float, v_0: float) -> float:
    """
    ``[t + v w (1-t)][t + v_0 w (1-t)] / (v v_0 w^2 (1-t)^2)``; a positive
    asymptotic rate requires this to exceed 1. The asymptotic rate equals
    half its base-2 logarithm.
    """
    u = 1.0 - t
    return (t + v * w * u) * (t + v_0 * w * u) / (v * v_0 * w * w * u * u)


def classical_limit_invariants(src: SourceParams, ch: ChannelParams) -> tuple[float, float]:
    """
    Closed polynomial forms of ``Delta`` and ``Delta**2 - 4 det V`` for Eve's
    state conditioned on Alice's Q quadrature.
    """
    t, w, v, v0 = ch.t, ch.w, src.v, src.v_0
    delta = w * w + (v - t * v + t * w) * (v0 - t * v0 + t * w) - 2 * t * (w * w - 1)
    disc = (t - 1) ** 2 * (
        t * t * (v - w) ** 2 * (v0 - w) ** 2
        + (w * w - v * v0) ** 2
        + 2 * t * (v - w) * (w - v0) * (w * w + v * v0 - 2)
    )
    return delta, disc


# --- sweeps ---------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """
    One-dimensional sweep of a protocol's key rate.

    ``fixed`` supplies the remaining parameters among ``t, w, v_0, v_s`` and,
    for the ``f`` axis, ``temperature`` (kelvin). On the ``f`` axis ``v_0`` is
    the thermal variance at each frequency and ``w`` follows it unless fixed.
    """

    protocol: Protocol
    axis: str
    lo: float
    hi: float
    steps: int
    fixed: dict = field(default_factory=dict)
    scale: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))
        if self.axis not in AXES:
            raise InvalidArgument(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.lo < self.hi:
            raise InvalidArgument(f"need lo < hi, got {self.lo} >= {self.hi}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidArgument(f"steps must be an integer >= 2, got {self.steps!r}")
        if self.scale not in ("linear", "log"):
            raise InvalidArgument(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.lo <= 0:
            raise InvalidArgument("log scale requires lo > 0")
        unknown = set(self.fixed) - {"t", "w", "v_0", "v_s", "temperature"}
        if unknown:
            raise InvalidArgument(f"unknown fixed parameters: {sorted(unknown)}")
        # fail fast on out-of-domain endpoints
        self.point(self.lo)
        self.point(self.hi)

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, int(self.steps))
        return np.linspace(self.lo, self.hi, int(self.steps))

    def point(self, x: float) -> tuple[SourceParams, ChannelParams]:
        params = {"t": 0.5, "w": 1.0, "v_0": 1.0, "v_s": 1e3}
        params.update(self.fixed)
        if self.axis == "f":
            from .spectrum import ThermalEnvironment, variance_from_frequency

            env = ThermalEnvironment(temperature=params.get("temperature", 300.0), frequency=float(x))
            params["v_0"] = variance_from_frequency(env)
            if "w" not in self.fixed:
                params["w"] = params["v_0"]
        else:
            params[self.axis] = float(x)
        return (
            SourceParams(v_s=params["v_s"], v_0=params["v_0"]),
            ChannelParams(t=params["t"], w=params["w"]),
        )


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    result: KeyRateResult


def sweep_threads() -> int:
    """Worker count for sweeps, capped by the ``CVQKD_THREADS`` environment variable."""
    raw = os.environ.get("CVQKD_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgument(f"CVQKD_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """Evaluate the key rate at every axis value; rows are ordered by axis value."""
    xs = spec.values()

    def row(x):
        src, ch = spec.point(x)
        return SweepRow(spec.axis, float(x), key_rate(spec.protocol, src, ch))

    workers = sweep_threads() if workers is None else max(1, workers)
    if workers == 1:
        return [row(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row, xs))


def with_fixed(spec: SweepSpec, **fixed) -> SweepSpec:
    """Copy of ``spec`` with extra fixed parameters."""
    return replace(spec, fixed={**spec.fixed, **fixed})
