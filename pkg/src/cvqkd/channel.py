"""
Thermal-state source and entangling-cloner channel.

Alice sends ``X_A = X_S + X_0`` with signal variance ``v_s`` and thermal
shot-noise variance ``v_0 = 1 + beta``. Eve replaces the channel with a beam
splitter of transmission ``t`` whose unused port is fed by one arm of an EPR
state of variance ``w``:

    X_B  =  sqrt(t) X_A + sqrt(1 - t) E
    E'   = -sqrt(1 - t) X_A + sqrt(t) E

Eve keeps ``E'`` and the other EPR arm ``E''``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import InvalidArgument
from .gaussian import CorrelationBlock

_PAULI_Z = np.diag([1.0, -1.0])


@dataclass(frozen=True)
class SourceParams:
    """Alice's preparation in shot-noise units: signal variance and thermal shot noise."""

    v_s: float
    v_0: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.v_s) and self.v_s >= 0):
            raise InvalidArgument(f"v_s must be a finite number >= 0, got {self.v_s!r}")
        if not (math.isfinite(self.v_0) and self.v_0 >= 1):
            raise InvalidArgument(f"v_0 must be a finite number >= 1, got {self.v_0!r}")

    @property
    def v(self) -> float:
        """Total variance of Alice's mode."""
        return self.v_s + self.v_0

    @property
    def beta(self) -> float:
        """Preparation noise above the vacuum."""
        return self.v_0 - 1.0


@dataclass(frozen=True)
class ChannelParams:
    """Entangling cloner: beam-splitter transmission ``t`` and EPR variance ``w``."""

    t: float
    w: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.t) and 0.0 <= self.t <= 1.0):
            raise InvalidArgument(f"t must lie in [0, 1], got {self.t!r}")
        if not (math.isfinite(self.w) and self.w >= 1.0):
            raise InvalidArgument(f"w must be a finite number >= 1, got {self.w!r}")


class OutputVariances(NamedTuple):
    b_v: float  # Bob, unconditional
    e_v: float  # Eve's E', unconditional
    b_1: float  # Bob, given Alice's classical value
    e_1: float  # Eve's E', given Alice's classical value


def equivalent_noise(ch: ChannelParams) -> float:
    """Input-referred channel noise ``chi = (1 - t)/t + eps = w (1 - t)/t``."""
    if ch.t == 0:
        raise ZeroDivisionError("equivalent noise is undefined at t = 0")
    return ch.w * (1.0 - ch.t) / ch.t


def loss_noise(ch: ChannelParams) -> float:
    """Loss contribution ``(1 - t)/t`` to the equivalent noise."""
    if ch.t == 0:
        raise ZeroDivisionError("equivalent noise is undefined at t = 0")
    return (1.0 - ch.t) / ch.t


def excess_noise(ch: ChannelParams) -> float:
    """Excess noise ``eps = (w - 1)(1 - t)/t``."""
    if ch.t == 0:
        raise ZeroDivisionError("excess noise is undefined at t = 0")
    return (ch.w - 1.0) * (1.0 - ch.t) / ch.t


def w_from_equivalent_noise(t: float, chi: float) -> float:
    """Inverse of :func:`equivalent_noise`: the EPR variance giving noise ``chi``."""
    if not 0.0 < t < 1.0:
        raise InvalidArgument(f"t must lie in (0, 1), got {t!r}")
    return chi * t / (1.0 - t)


def output_variances(src: SourceParams, ch: ChannelParams) -> OutputVariances:
    t, w = ch.t, ch.w
    return OutputVariances(
        b_v=(1 - t) * w + t * src.v,
        e_v=(1 - t) * src.v + t * w,
        b_1=(1 - t) * w + t * src.v_0,
        e_1=(1 - t) * src.v_0 + t * w,
    )


def eve_cm_from_inputs(ch: ChannelParams, q_input: float, p_input: float | None = None) -> np.ndarray:
    """
    Eve's two-mode covariance ``(E', E'')`` when Alice's mode has Q and P
    variances ``q_input`` and ``p_input`` from Eve's point of view.
    """
    if p_input is None:
        p_input = q_input
    for name, x in (("q_input", q_input), ("p_input", p_input)):
        if not (math.isfinite(x) and x >= 1.0):
            raise InvalidArgument(f"{name} must be a variance >= 1, got {x!r}")
    t, w = ch.t, ch.w
    phi = math.sqrt(t * (w * w - 1.0))
    e_block = np.diag([(1 - t) * q_input + t * w, (1 - t) * p_input + t * w])
    return np.block([[e_block, phi * _PAULI_Z], [phi * _PAULI_Z, w * np.eye(2)]])


def eve_cm(
    src: SourceParams, ch: ChannelParams, given: Literal["none", "q", "qp"] = "none"
) -> np.ndarray:
    """
    Eve's covariance matrix, optionally conditioned on Alice's classical data.

    ``given`` selects which of Alice's encoded quadratures are known:
    ``"none"`` gives V_E(V, V), ``"q"`` gives V_E(V0, V) (homodyne, direct
    reconciliation) and ``"qp"`` gives V_E(V0, V0) (heterodyne, direct
    reconciliation).
    """
    if given == "none":
        return eve_cm_from_inputs(ch, src.v, src.v)
    if given == "q":
        return eve_cm_from_inputs(ch, src.v_0, src.v)
    if given == "qp":
        return eve_cm_from_inputs(ch, src.v_0, src.v_0)
    raise InvalidArgument(f"given must be 'none', 'q' or 'qp', got {given!r}")


def correlation_block(src: SourceParams, ch: ChannelParams) -> CorrelationBlock:
    """Covariances of Eve's ``E'`` and ``E''`` with Bob's output quadrature."""
    t, w = ch.t, ch.w
    xi = -math.sqrt(t * (1 - t)) * (src.v - w)
    phi_corr = math.sqrt(1 - t) * math.sqrt(w * w - 1.0)
    return CorrelationBlock(xi=xi, phi_corr=phi_corr)
