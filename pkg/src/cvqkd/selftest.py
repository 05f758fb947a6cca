"""Quick end-to-end consistency checks run by ``cvqkd selftest``."""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from . import mc_oracle, rates, spectrum
from .analysis import Curve, crossover_find, threshold_find
from .channel import ChannelParams, SourceParams, output_variances
from .gaussian import (
    g_function,
    symplectic_spectrum_generic,
    symplectic_spectrum_from_blocks,
    symplectic_spectrum_two_mode,
)


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def random_two_mode_family(rng: np.random.Generator):
    """One draw ``(a, b, c, t)`` of the two-mode family with a, b in [1, 100] and c in [0, sqrt(ab - 1)]."""
    a, b = rng.uniform(1.0, 100.0, size=2)
    c = rng.uniform(0.0, math.sqrt(a * b - 1.0))
    t = rng.uniform(0.0, 1.0)
    return a, b, c, t


def two_mode_cm(a, b, c, t) -> np.ndarray:
    z = np.diag([1.0, -1.0])
    off = math.sqrt(t) * c * z
    return np.block([[a * np.eye(2), off], [off, b * np.eye(2)]])


def check_dual_path(draws: int = 200, seed: int = 12345) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        a, b, c, t = random_two_mode_family(rng)
        cm = two_mode_cm(a, b, c, t)
        ref = symplectic_spectrum_generic(cm)
        for other in (symplectic_spectrum_two_mode(a, b, c, t), symplectic_spectrum_from_blocks(cm)):
            worst = max(worst, float(np.max(np.abs(other - ref) / ref)))
    return CheckResult("dual-path symplectic spectra", worst < 1e-9, f"max rel diff {worst:.2e} over {draws} draws")


def check_entropy_anchors() -> CheckResult:
    ok = g_function(1.0) == 0.0 and abs(g_function(3.0) - 2.0) < 1e-12
    return CheckResult("entropy anchors g(1)=0, g(3)=2", ok, f"g(3)={g_function(3.0):.15g}")


def check_monte_carlo(n: int = 200_000, seed: int = 2024) -> CheckResult:
    src, ch = SourceParams(v_s=1e3, v_0=2.0), ChannelParams(t=0.6, w=2.0)
    batch = mc_oracle.sample_protocol(src, ch, n, seed)
    est = mc_oracle.estimate_mi_ab(batch, "hom")
    ref = rates.mi_ab_homodyne(src, ch)
    se = mc_oracle.mi_standard_error(n, ref)
    bv = mc_oracle.variance(batch, "x_b")
    bv_ok = abs(bv.value - output_variances(src, ch).b_v) < 5 * bv.stderr
    ok = abs(est - ref) < 5 * se and bv_ok
    return CheckResult("Monte-Carlo Shannon layer", ok, f"I_mc={est:.5f} I={ref:.5f} (5se={5 * se:.1e})")


def _threshold_check(name, protocol, v0, w, vs, expected, tol) -> Callable[[], CheckResult]:
    def run():
        t = threshold_find(protocol, SourceParams(v_s=vs, v_0=v0), w)
        ok = t is not None and abs(t - expected) <= tol
        return CheckResult(name, ok, f"T*={t!r} expected {expected} +- {tol}")

    return run


def check_planck() -> CheckResult:
    v300 = spectrum.variance_from_frequency(spectrum.ThermalEnvironment(300.0, 300e9))
    v1 = spectrum.variance_from_frequency(spectrum.ThermalEnvironment(300.0, 1e9))
    ok = abs(v300 / 41.66 - 1) <= 2e-3 and abs(v1 / 1.25e4 - 1) <= 1e-2
    return CheckResult("Planck loading at 300 K", ok, f"V(300 GHz)={v300:.4f} V(1 GHz)={v1:.1f}")


def check_eb_bound() -> CheckResult:
    t_eb = spectrum.eb_transmission_bound(41.66)
    return CheckResult("entanglement-breaking bound", abs(t_eb - 0.9766) <= 1e-4, f"T_EB={t_eb:.6f}")


def check_rr_crossover() -> CheckResult:
    # Regression value reproduced from the rate formulas; the published value is quoted as roughly 0.79.
    t = crossover_find(Curve("rr-het", SourceParams(1e3, 1.5)), Curve("rr-hom", SourceParams(1e3, 1.0)))
    ok = t is not None and abs(t - 0.77363) <= 1e-4
    return CheckResult("RR het/hom crossover (regression)", ok, f"T_x={t!r}")


CHECKS: list[Callable[[], CheckResult]] = [
    check_dual_path,
    check_entropy_anchors,
    check_monte_carlo,
    check_planck,
    check_eb_bound,
    _threshold_check("DR-hom threshold, V0=1e4", "dr-hom", 1e4, 1.0, 1e5, 0.5, 1e-3),
    _threshold_check("DR-het threshold, V0=1", "dr-het", 1.0, 1.0, 1e3, 0.73, 1e-2),
    _threshold_check("DR-het threshold, V0=5", "dr-het", 5.0, 1.0, 1e3, 0.68, 1e-2),
    _threshold_check("microwave DR-hom threshold", "dr-hom", 41.66, 41.66, 1e8, 0.981, 2e-3),
    _threshold_check("channel-noise threshold, W=5", "dr-hom", 41.66, 5.0, 1e3, 0.86, 1e-2),
    check_rr_crossover,
]


def run_selftest(echo: Callable[[str], None] = print) -> bool:
    all_ok = True
    for check in CHECKS:
        try:
            res = check()
        except Exception as exc:  # a crash is a failed check
            res = CheckResult(getattr(check, "__name__", "check"), False, f"raised {exc!r}")
        all_ok &= res.passed
        echo(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")
    return all_ok
