"""
Secret key rates for the four protocol variants.

The rate is ``R = I(A:B) - chi(ref:E)`` where ``ref`` is Alice for direct
reconciliation and Bob for reverse reconciliation. Reconciliation is assumed
ideal. Rates are in bits per channel use and are returned unclamped, so a
negative value means the protocol is insecure at that point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import channel as chn
from .channel import ChannelParams, SourceParams
from .errors import InvalidArgument
from .gaussian import (
    condition_on_heterodyne,
    condition_on_homodyne,
    symplectic_spectrum_from_blocks,
    symplectic_spectrum_two_mode,
    von_neumann_entropy,
)


class Reconciliation(Enum):
    DIRECT = "dr"
    REVERSE = "rr"


class Detection(Enum):
    HOMODYNE = "hom"
    HETERODYNE = "het"


class Protocol(Enum):
    DR_HOM = "dr-hom"
    DR_HET = "dr-het"
    RR_HOM = "rr-hom"
    RR_HET = "rr-het"

    @property
    def reconciliation(self) -> Reconciliation:
        return Reconciliation(self.value[:2])

    @property
    def detection(self) -> Detection:
        return Detection(self.value[3:])

    @classmethod
    def parse(cls, name) -> "Protocol":
        if isinstance(name, Protocol):
            return name
        try:
            return cls(str(name).lower().replace("_", "-"))
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise InvalidArgument(f"unknown protocol {name!r}; expected one of {valid}") from None

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class KeyRateResult:
    protocol: Protocol
    mi_ab: float
    holevo: float
    rate: float
    diagnostics: dict = field(default_factory=dict, compare=False)


def mi_ab_homodyne(src: SourceParams, ch: ChannelParams) -> float:
    """Alice-Bob mutual information (bits) when Bob measures one quadrature."""
    b = (1 - ch.t) * ch.w + ch.t * src.v_0
    return 0.5 * math.log2((b + ch.t * src.v_s) / b)


def mi_ab_heterodyne(src: SourceParams, ch: ChannelParams) -> float:
    """Alice-Bob mutual information (bits) when Bob measures both quadratures."""
    b = (1 - ch.t) * ch.w + ch.t * src.v_0 + 1.0
    return math.log2((b + ch.t * src.v_s) / b)


def eve_spectrum(src: SourceParams, ch: ChannelParams) -> np.ndarray:
    """Spectrum of Eve's unconditioned two-mode state (closed form)."""
    e_v = chn.output_variances(src, ch).e_v
    return symplectic_spectrum_two_mode(e_v, ch.w, math.sqrt(ch.w**2 - 1.0), ch.t)


def conditional_eve_cm(protocol: Protocol, src: SourceParams, ch: ChannelParams) -> np.ndarray:
    """Eve's covariance matrix conditioned on the reconciliation reference's data."""
    protocol = Protocol.parse(protocol)
    if protocol is Protocol.DR_HOM:
        return chn.eve_cm(src, ch, given="q")
    if protocol is Protocol.DR_HET:
        return chn.eve_cm(src, ch, given="qp")
    v_e = chn.eve_cm(src, ch)
    d = chn.correlation_block(src, ch)
    b_v = chn.output_variances(src, ch).b_v
    if protocol is Protocol.RR_HOM:
        return condition_on_homodyne(v_e, d, b_v)
    return condition_on_heterodyne(v_e, d, b_v * np.eye(2))


def conditional_spectrum(protocol: Protocol, src: SourceParams, ch: ChannelParams) -> np.ndarray:
    protocol = Protocol.parse(protocol)
    if protocol is Protocol.DR_HET:
        e_1 = chn.output_variances(src, ch).e_1
        return symplectic_spectrum_two_mode(e_1, ch.w, math.sqrt(ch.w**2 - 1.0), ch.t)
    cm = conditional_eve_cm(protocol, src, ch)
    if protocol is Protocol.RR_HET:
        # a I (+) b I with off-diagonal sqrt(t) c Z; the sqrt(t) factor is already in the entry
        return symplectic_spectrum_two_mode(cm[0, 0], cm[2, 2], abs(cm[0, 2]), 1.0)
    return symplectic_spectrum_from_blocks(cm)


def _holevo(protocol: Protocol, src: SourceParams, ch: ChannelParams):
    nu_e = eve_spectrum(src, ch)
    nu_c = conditional_spectrum(protocol, src, ch)
    return von_neumann_entropy(nu_e) - von_neumann_entropy(nu_c), nu_e, nu_c


def holevo_rr_homodyne(src: SourceParams, ch: ChannelParams) -> float:
    return _holevo(Protocol.RR_HOM, src, ch)[0]


def holevo_rr_heterodyne(src: SourceParams, ch: ChannelParams) -> float:
    return _holevo(Protocol.RR_HET, src, ch)[0]


def holevo_dr_homodyne(src: SourceParams, ch: ChannelParams) -> float:
    return _holevo(Protocol.DR_HOM, src, ch)[0]


def holevo_dr_heterodyne(src: SourceParams, ch: ChannelParams) -> float:
    return _holevo(Protocol.DR_HET, src, ch)[0]


def holevo(protocol, src: SourceParams, ch: ChannelParams) -> float:
    """Holevo information between Eve and the reconciliation reference."""
    return _holevo(Protocol.parse(protocol), src, ch)[0]


def mi_ab(protocol, src: SourceParams, ch: ChannelParams) -> float:
    if Protocol.parse(protocol).detection is Detection.HOMODYNE:
        return mi_ab_homodyne(src, ch)
    return mi_ab_heterodyne(src, ch)


def key_rate(protocol, src: SourceParams, ch: ChannelParams) -> KeyRateResult:
    """
    Evaluate the secret key rate of ``protocol`` at one parameter point.

    >>> r = key_rate("rr-hom", SourceParams(v_s=1e3, v_0=1.0), ChannelParams(t=0.6, w=1.0))
    >>> r.rate > 0
    True
    """
    protocol = Protocol.parse(protocol)
    info = mi_ab(protocol, src, ch)
    chi, nu_e, nu_c = _holevo(protocol, src, ch)
    ov = chn.output_variances(src, ch)
    return KeyRateResult(
        protocol=protocol,
        mi_ab=info,
        holevo=chi,
        rate=info - chi,
        diagnostics={
            "b_v": ov.b_v,
            "e_v": ov.e_v,
            "eve_spectrum": tuple(float(x) for x in nu_e),
            "conditional_spectrum": tuple(float(x) for x in nu_c),
        },
    )


def rate(protocol, src: SourceParams, ch: ChannelParams) -> float:
    """Shorthand for ``key_rate(...).rate``."""
    protocol = Protocol.parse(protocol)
    return mi_ab(protocol, src, ch) - _holevo(protocol, src, ch)[0]
