"""
Datasets behind the published rate and security plots.

Each builder returns an :class:`OutputRecord` with the caption parameters
baked into its metadata. Rate figures share the columns
``curve,axis,value,mi_ab,holevo,rate``; the spectrum figure uses
``frequency,v_0,t_secure,t_eb``.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .analysis import SweepSpec, crossover_find, Curve, run_sweep, threshold_find
from .channel import SourceParams
from .errors import InvalidArgument
from .records import RATE_COLUMNS, OutputRecord, rate_row
from .spectrum import eb_transmission_bound, security_boundary

CURVE_COLUMNS = ("curve",) + RATE_COLUMNS
T_LO, T_HI, T_STEPS = 0.005, 0.995, 199
MICROWAVE_V0 = 41.66  # 300 GHz at room temperature


def _curves(name: str, curves: list[tuple[str, str, float, float, float]], t_range=(T_LO, T_HI, T_STEPS), **meta):
    """``curves`` holds (label, protocol, v_0, v_s, w) tuples swept over T."""
    lo, hi, steps = t_range
    rows = []
    thresholds = {}
    for label, protocol, v0, vs, w in curves:
        spec = SweepSpec(protocol, "t", lo, hi, steps, fixed={"v_0": v0, "v_s": vs, "w": w})
        for r in run_sweep(spec):
            rows.append(rate_row(r.axis, r.value, r.result, curve=label))
        thresholds[label] = threshold_find(protocol, SourceParams(v_s=vs, v_0=v0), w)
    params = {
        "figure": name,
        "t_lo": lo,
        "t_hi": hi,
        "t_steps": steps,
        "curves": [
            {"label": label, "protocol": p, "v_0": v0, "v_s": vs, "w": w} for label, p, v0, vs, w in curves
        ],
        "thresholds": thresholds,
        **meta,
    }
    return OutputRecord(command=f"figure {name}", params=params, columns=CURVE_COLUMNS, rows=rows)


def _impurity_curves(protocol: str, v0s=(1.0, 2.0, 3.0, 5.0), vs=1e3, w=1.0):
    return [(f"{protocol}:v0={v0:g}", protocol, v0, vs, w) for v0 in v0s]


def fig2a():
    return _curves("fig2a", _impurity_curves("rr-hom"))


def fig2b():
    return _curves("fig2b", _impurity_curves("rr-het"))


def fig3():
    curves = [
        (f"{p}:v0={v0:g}", p, v0, 1e3, 1.0) for p in ("rr-hom", "rr-het") for v0 in (1.0, 1.5)
    ]
    t_x = crossover_find(Curve("rr-het", SourceParams(1e3, 1.5)), Curve("rr-hom", SourceParams(1e3, 1.0)))
    return _curves("fig3", curves, crossover_rr_het_v0_1_5_vs_rr_hom_v0_1=t_x)


def fig4a():
    return _curves("fig4a", _impurity_curves("dr-hom"))


def fig4b():
    return _curves("fig4b", _impurity_curves("dr-het"))


def fig4():
    return _curves("fig4", _impurity_curves("dr-hom") + _impurity_curves("dr-het"))


def fig5():
    curves = [(f"a:{p}:v0={v0:g}", p, v0, 1e3, 1.0) for p in ("dr-hom", "dr-het") for v0 in (1.0, 3.0)]
    curves += [(f"b:{p}:v0={v0:g}", p, v0, 1e3, 1.0) for p in ("dr-hom", "rr-hom") for v0 in (3.0, 5.0)]
    curves += [(f"c:{p}:v0={v0:g}", p, v0, 1e3, 1.0) for p in ("dr-het", "rr-het") for v0 in (3.0, 5.0)]
    return _curves("fig5", curves)


def _noise_figure(name: str, w: float):
    v0s = (1.0, 10.0, 1e2, 1e3, 1e4)
    return _curves(name, [(f"dr-hom:v0={v0:g}", "dr-hom", v0, 1e5, w) for v0 in v0s])


def fig6a():
    return _noise_figure("fig6a", 1.01)


def fig6b():
    return _noise_figure("fig6b", 3.0)


def fig7(temperature: float = 300.0, v_s: float = 1e8, f_lo: float = 1e9, f_hi: float = 430e12, steps: int = 41):
    freqs = np.geomspace(f_lo, f_hi, steps)
    rows = [
        {"frequency": b.frequency, "v_0": b.v_0, "t_secure": b.t_secure, "t_eb": b.t_eb}
        for b in security_boundary(temperature, v_s, freqs)
    ]
    params = {
        "figure": "fig7",
        "protocol": "dr-hom",
        "temperature": temperature,
        "v_s": v_s,
        "w": "thermal variance at each frequency",
        "f_lo": f_lo,
        "f_hi": f_hi,
        "f_steps": steps,
    }
    return OutputRecord("figure fig7", params, ("frequency", "v_0", "t_secure", "t_eb"), rows)


def fig8():
    v0 = w = MICROWAVE_V0
    return _curves(
        "fig8",
        [("dr-hom:v0=w=41.66", "dr-hom", v0, 1e8, w)],
        t_range=(0.95, 0.9995, 200),
        t_eb=eb_transmission_bound(w),
    )


def fig9():
    curves = [(f"dr-hom:w={w:g}", "dr-hom", MICROWAVE_V0, 1e3, w) for w in (5.0, 10.0, 20.0, 50.0, 100.0)]
    return _curves("fig9", curves, t_range=(0.8, 0.9995, 200))


FIGURES: dict[str, Callable[[], OutputRecord]] = {
    "fig2a": fig2a,
    "fig2b": fig2b,
    "fig3": fig3,
    "fig4": fig4,
    "fig4a": fig4a,
    "fig4b": fig4b,
    "fig5": fig5,
    "fig6a": fig6a,
    "fig6b": fig6b,
    "fig7": fig7,
    "fig8": fig8,
    "fig9": fig9,
}


def build_figure(name: str) -> OutputRecord:
    try:
        builder = FIGURES[name]
    except KeyError:
        raise InvalidArgument(f"unknown figure {name!r}; valid names: {', '.join(FIGURES)}") from None
    return builder()
