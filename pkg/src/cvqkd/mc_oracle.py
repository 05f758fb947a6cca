"""
Monte-Carlo check of the Shannon layer.

Samples one quadrature of the prepare-and-measure model classically and
estimates variances, conditional variances and mutual informations from the
draws. Random numbers come from numpy's ``PCG64`` bit generator and the
ziggurat ``standard_normal`` transform, so a seed fixes the batch exactly.

Eve's EPR pair is sampled on its Q quadrature only, where ``(E, E'')`` is an
ordinary bivariate normal with covariance ``[[w, sqrt(w^2-1)], [sqrt(w^2-1), w]]``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import ChannelParams, SourceParams
from .errors import InvalidArgument, NumericFailure

RAW_COLUMNS = ("x_s", "x_0", "e", "e_dprime", "vac")
DERIVED_COLUMNS = ("x_a", "x_b", "e_prime", "x_b_het")
MIN_SAMPLES_MI = 10_000


class Estimate(NamedTuple):
    value: float
    stderr: float


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """
    Per-sample quadrature values. Raw draws are stored; ``x_a``, ``x_b``,
    ``e_prime`` and ``x_b_het`` (one heterodyne output quadrature, with the
    extra vacuum unit) are derived on access.
    """

    src: SourceParams
    ch: ChannelParams
    seed: int
    raw: dict

    @property
    def n_samples(self) -> int:
        return len(self.raw["x_s"])

    @property
    def columns(self) -> tuple[str, ...]:
        return RAW_COLUMNS + DERIVED_COLUMNS

    def __getitem__(self, name: str) -> np.ndarray:
        if name in self.raw:
            return self.raw[name]
        t = self.ch.t
        if name == "x_a":
            return self.raw["x_s"] + self.raw["x_0"]
        if name == "x_b":
            return math.sqrt(t) * self["x_a"] + math.sqrt(1 - t) * self.raw["e"]
        if name == "e_prime":
            return -math.sqrt(1 - t) * self["x_a"] + math.sqrt(t) * self.raw["e"]
        if name == "x_b_het":
            return (self["x_b"] + self.raw["vac"]) / math.sqrt(2.0)
        raise KeyError(f"unknown column {name!r}; available: {', '.join(self.columns)}")

    def to_csv(self, fh, columns=None, limit: int | None = None) -> None:
        """Write the batch (optionally the first ``limit`` rows) as CSV to an open file."""
        columns = list(columns or self.columns)
        data = [self[c][:limit] for c in columns]
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in zip(*data):
            writer.writerow([repr(float(x)) for x in row])


def sample_protocol(src: SourceParams, ch: ChannelParams, n: int, seed: int) -> SampleBatch:
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    n = int(n)
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.standard_normal((len(RAW_COLUMNS), n))
    w = ch.w
    # (E, E'') Q-quadrature correlation of the EPR pair
    rho = math.sqrt(w * w - 1.0) / w
    e = math.sqrt(w) * z[2]
    e_dprime = math.sqrt(w) * (rho * z[2] + math.sqrt(1.0 - rho * rho) * z[3])
    raw = {
        "x_s": math.sqrt(src.v_s) * z[0],
        "x_0": math.sqrt(src.v_0) * z[1],
        "e": e,
        "e_dprime": e_dprime,
        "vac": z[4],
    }
    return SampleBatch(src=src, ch=ch, seed=seed, raw=raw)


def _moments(x: np.ndarray, y: np.ndarray):
    xc = x - x.mean()
    yc = y - y.mean()
    n = len(x)
    return float(xc @ xc) / (n - 1), float(yc @ yc) / (n - 1), float(xc @ yc) / (n - 1)


def variance(batch: SampleBatch, col: str) -> Estimate:
    x = batch[col]
    n = len(x)
    v = float(np.var(x, ddof=1))
    return Estimate(v, v * math.sqrt(2.0 / (n - 1)))


def covariance(batch: SampleBatch, x: str, y: str) -> Estimate:
    vx, vy, c = _moments(batch[x], batch[y])
    return Estimate(c, math.sqrt((vx * vy + c * c) / len(batch[x])))


def conditional_variance(batch: SampleBatch, y: str, given: str) -> Estimate:
    """``V(y | x) = V(y) - <x y>^2 / V(x)`` from sample moments."""
    vx, vy, c = _moments(batch[given], batch[y])
    if vx < 1e-12:
        raise NumericFailure(f"column {given!r} has degenerate variance {vx!r}")
    v = vy - c * c / vx
    return Estimate(v, abs(v) * math.sqrt(2.0 / (len(batch[y]) - 2)))


def estimate_mi(batch: SampleBatch, x: str, y: str) -> float:
    """Plug-in Gaussian mutual information ``0.5 log2(V(y) / V(y|x))`` in bits."""
    n = batch.n_samples
    if n < MIN_SAMPLES_MI:
        raise InvalidArgument(f"need at least {MIN_SAMPLES_MI} samples, got {n}")
    vx, vy, c = _moments(batch[x], batch[y])
    if vx < 1e-12 or vy < 1e-12:
        raise NumericFailure("degenerate marginal variance")
    cond = vy - c * c / vx
    if cond < 1e-12 * max(vy, 1.0):
        raise NumericFailure(f"conditional variance {cond!r} is degenerate (columns are deterministic)")
    return 0.5 * math.log2(vy / cond)


def estimate_mi_ab(batch: SampleBatch, detection: str = "hom") -> float:
    """
    Alice-Bob information per channel use. Heterodyne yields two independent
    identically distributed quadrature pairs, so its estimate is twice the
    single-quadrature value.
    """
    if detection == "hom":
        return estimate_mi(batch, "x_s", "x_b")
    if detection == "het":
        return 2.0 * estimate_mi(batch, "x_s", "x_b_het")
    raise InvalidArgument(f"detection must be 'hom' or 'het', got {detection!r}")


def mi_standard_error(n: int, mi_bits: float) -> float:
    """Large-sample standard error ``r / (ln 2 sqrt(n))`` of the single-quadrature estimate."""
    r = math.sqrt(1.0 - 2.0 ** (-2.0 * mi_bits))
    return r / (math.log(2.0) * math.sqrt(n))
