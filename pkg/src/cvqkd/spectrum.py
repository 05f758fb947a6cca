"""
Security of direct-reconciliation homodyne QKD across the electromagnetic
spectrum. The environment loads both Alice's source and Eve's ancilla with
the Planck occupancy at the carrier frequency; Bob's detector is ideal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .analysis import threshold_find
from .channel import ChannelParams, SourceParams
from .errors import InvalidArgument
from .rates import Protocol, rate

# exact SI values
PLANCK = 6.62607015e-34  # J s
BOLTZMANN = 1.380649e-23  # J / K


@dataclass(frozen=True)
class ThermalEnvironment:
    temperature: float  # kelvin
    frequency: float  # hertz

    def __post_init__(self):
        if not self.temperature > 0:
            raise InvalidArgument(f"temperature must be positive, got {self.temperature!r}")
        if not self.frequency > 0:
            raise InvalidArgument(f"frequency must be positive, got {self.frequency!r}")


def mean_photon_number(env: ThermalEnvironment) -> float:
    """Bose-Einstein occupancy ``1 / (exp(h f / k_B tau) - 1)``."""
    x = PLANCK * env.frequency / (BOLTZMANN * env.temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def variance_from_frequency(env: ThermalEnvironment) -> float:
    """Thermal quadrature variance ``2 n + 1`` in shot-noise units."""
    return 2.0 * mean_photon_number(env) + 1.0


def photon_number_from_variance(v: float) -> float:
    return 0.5 * (v - 1.0)


def eb_transmission_bound(w: float) -> float:
    """
    Transmission ``w / (1 + w)`` at or below which the cloner channel is
    entanglement breaking (equivalent noise of at least one shot-noise unit).
    """
    if not w >= 1.0:
        raise InvalidArgument(f"w must be >= 1, got {w!r}")
    if math.isinf(w):
        return 1.0
    return w / (1.0 + w)


def eb_frequency_bound(t: float, temperature: float) -> float:
    """
    Minimum carrier frequency ``-(k_B tau / h) ln(2 t - 1)`` for which a channel
    of transmission ``t`` is not entanglement breaking when ``w`` equals the
    thermal variance. Returns ``inf`` for ``t <= 1/2``.
    """
    if not temperature > 0:
        raise InvalidArgument(f"temperature must be positive, got {temperature!r}")
    if not 0.0 <= t <= 1.0:
        raise InvalidArgument(f"t must lie in [0, 1], got {t!r}")
    if t <= 0.5:
        return math.inf
    return -(BOLTZMANN * temperature / PLANCK) * math.log(2.0 * t - 1.0)


class Classification(str, Enum):
    SECURE = "secure"
    INSECURE_EB = "insecure-eb"
    INSECURE_RATE = "insecure-rate"


@dataclass(frozen=True)
class SecurityMapCell:
    frequency: float
    transmission: float
    rate: float
    classification: Classification


def _classify(t: float, r: float, t_eb: float) -> Classification:
    if t <= t_eb:
        return Classification.INSECURE_EB
    if r > 0:
        return Classification.SECURE
    return Classification.INSECURE_RATE


def security_map(
    protocol,
    temperature: float,
    v_s: float,
    frequencies: Sequence[float],
    transmissions: Sequence[float],
    w: float | None = None,
) -> list[SecurityMapCell]:
    """
    Classify every (frequency, transmission) cell, ordered by frequency then T.

    ``w`` defaults to the thermal variance at each frequency (Eve matches the
    environment); pass a number to override it. Cells between the
    entanglement-breaking bound and the key-rate threshold are reported as
    ``insecure-rate``.
    """
    protocol = Protocol.parse(protocol)
    if not len(frequencies) or not len(transmissions):
        raise InvalidArgument("frequency and transmission ranges must be non-empty")
    if any(not 0.0 <= t <= 1.0 for t in transmissions):
        raise InvalidArgument("transmissions must lie in [0, 1]")
    cells = []
    for f in sorted(frequencies):
        v0 = variance_from_frequency(ThermalEnvironment(temperature, f))
        ww = v0 if w is None else w
        t_eb = eb_transmission_bound(ww)
        src = SourceParams(v_s=v_s, v_0=v0)
        for t in sorted(transmissions):
            r = rate(protocol, src, ChannelParams(t=t, w=ww))
            cells.append(SecurityMapCell(f, t, r, _classify(t, r, t_eb)))
    return cells


@dataclass(frozen=True)
class SpectrumBoundary:
    frequency: float
    v_0: float
    t_secure: float | None  # key-rate threshold
    t_eb: float  # entanglement-breaking bound


def security_boundary(
    temperature: float,
    v_s: float,
    frequencies: Sequence[float],
    protocol=Protocol.DR_HOM,
    w: float | None = None,
) -> list[SpectrumBoundary]:
    """Key-rate threshold and entanglement-breaking bound at each frequency."""
    rows = []
    for f in sorted(frequencies):
        v0 = variance_from_frequency(ThermalEnvironment(temperature, f))
        ww = v0 if w is None else w
        t_star = threshold_find(protocol, SourceParams(v_s=v_s, v_0=v0), ww)
        rows.append(SpectrumBoundary(f, v0, t_star, eb_transmission_bound(ww)))
    return rows
