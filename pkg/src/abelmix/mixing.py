"""Distance to stationarity, mixing thresholds and related diagnostics.

Distances are on the L1 scale: ``d(t) = |P^t - U|_1`` with ``d(0) = 2(N-1)/N``.
The total-variation distance is ``d(t) / 2``.

The deviation ``P^t(x) - 1/N`` is computed from the nontrivial characters
only, as the inverse Fourier transform of ``lambda_k^t`` with the ``k = 0``
term removed. Nothing of size ``1/N`` is ever subtracted, so distances far
below machine epsilon (down to the float underflow limit) keep full
relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import CapExceededError, ThresholdUndefinedError
from .group_core import WalkSpec
from .spectral import Spectrum, spectrum as compute_spectrum

__all__ = [
    "DeviationField",
    "MixingCurve",
    "Sandwich",
    "PeresProducts",
    "deviation_field",
    "deviation_field_direct",
    "l1_distance",
    "distances",
    "mixing_curve",
    "threshold",
    "threshold_scan",
    "cutoff_ratio",
    "lemma2_sandwich",
    "peres_products",
]

SLACK = 1e-12
_BATCH_BYTES = 64 * 2**20


@dataclass(frozen=True, eq=False)
class DeviationField:
    dev: np.ndarray
    t: int

    @property
    def l1(self) -> float:
        return math.fsum(np.abs(self.dev))


def _spec(walk: WalkSpec, spec: Spectrum | None) -> Spectrum:
    return compute_spectrum(walk) if spec is None else spec


def _initial_deviation(n: int) -> np.ndarray:
    dev = np.full(n, -1.0 / n)
    dev[0] = 1.0 - 1.0 / n
    return dev


def _deviation_batch(spec: Spectrum, ts: np.ndarray) -> np.ndarray:
    """Deviation fields for every ``t`` in ``ts``; shape ``(len(ts), N)``."""
    n = len(spec.values)
    out = np.empty((len(ts), n))
    lam = spec.values.copy()
    lam[0] = 0.0
    rows = max(1, _BATCH_BYTES // (16 * n))
    axes = tuple(range(1, len(spec.moduli) + 1))
    for start in range(0, len(ts), rows):
        chunk = np.asarray(ts[start : start + rows], dtype=np.int64)
        powers = np.power(lam[None, :], chunk[:, None].astype(float))
        powers = powers.reshape((len(chunk),) + spec.moduli)
        dev = np.fft.ifftn(powers, axes=axes).real.reshape(len(chunk), n)
        zero = chunk == 0
        if zero.any():
            dev[zero] = _initial_deviation(n)
        out[start : start + len(chunk)] = dev
    return out


def deviation_field(walk: WalkSpec, spec: Spectrum | None = None, t: int = 0) -> DeviationField:
    """``P^t(x) - 1/N`` for every ``x``, from the nontrivial modes."""
    if t < 0:
        raise ValueError("t must be non-negative")
    spec = _spec(walk, spec)
    return DeviationField(_deviation_batch(spec, np.array([t]))[0], t)


def deviation_field_direct(walk: WalkSpec, spec: Spectrum | None = None, t: int = 0) -> DeviationField:
    """Reference evaluation of :func:`deviation_field` by explicit character sums.

    Each entry is a compensated sum over ``k != 0`` in ascending index order.
    Cost is ``O(N^2)``; intended for cross-checking at small ``N``.
    """
    spec = _spec(walk, spec)
    group = walk.group
    coords = group.all_coords()
    L = math.lcm(*group.moduli)
    scale = np.array([L // n for n in group.moduli], dtype=np.int64)
    weights = np.power(spec.values[1:], float(t))
    ks = coords[1:] * scale
    n = group.order
    dev = np.empty(n)
    for x in range(n):
        m = (ks @ coords[x]) % L
        terms = weights * np.cos(2.0 * np.pi * m / L)
        dev[x] = math.fsum(terms) / n
    return DeviationField(dev, t)


def distances(walk: WalkSpec, ts: Sequence[int], spec: Spectrum | None = None) -> np.ndarray:
    """``d(t)`` for each requested ``t``."""
    spec = _spec(walk, spec)
    ts = np.asarray(ts, dtype=np.int64)
    if (ts < 0).any():
        raise ValueError("t must be non-negative")
    out = np.empty(len(ts))
    rows = max(1, _BATCH_BYTES // (16 * len(spec.values)))
    for start in range(0, len(ts), rows):
        dev = _deviation_batch(spec, ts[start : start + rows])
        for i, row in enumerate(np.abs(dev)):
            out[start + i] = math.fsum(row)
    return out


def l1_distance(walk: WalkSpec, t: int, spec: Spectrum | None = None) -> float:
    """``|P^t - U|_1`` started from the identity."""
    return float(distances(walk, [t], spec)[0])


@dataclass(frozen=True, eq=False)
class MixingCurve:
    d_values: np.ndarray
    walk: WalkSpec
    t_max: int
    floor: float
    stopped_early: bool

    @property
    def tv_values(self) -> np.ndarray:
        return self.d_values / 2.0

    def __len__(self) -> int:
        return len(self.d_values)


def mixing_curve(walk: WalkSpec, t_max: int, floor: float = 0.0, spec: Spectrum | None = None) -> MixingCurve:
    """``d(0..t_max)``, truncated after the first value below ``floor``."""
    if t_max < 0 or floor < 0:
        raise ValueError("t_max and floor must be non-negative")
    spec = _spec(walk, spec)
    n = len(spec.values)
    block = max(64, min(4096, _BATCH_BYTES // (16 * n)))
    values: list[float] = []
    start = 0
    stopped = False
    while start <= t_max and not stopped:
        ts = np.arange(start, min(t_max, start + block - 1) + 1)
        for d in distances(walk, ts, spec):
            values.append(float(d))
            if d < floor:
                stopped = True
                break
        start += block
    stopped = stopped and len(values) < t_max + 1
    return MixingCurve(np.array(values), walk, t_max, floor, stopped)


def _check_threshold_args(d0: float, d: float) -> None:
    if not d > 0:
        raise ValueError(f"threshold distance must be positive, got {d}")
    if d > d0:
        raise ThresholdUndefinedError(f"d = {d} exceeds the initial distance d(0) = {d0}")


def threshold(walk: WalkSpec, d: float, t_cap: int, spec: Spectrum | None = None) -> int:
    """Largest ``t`` with ``d(t) >= d``.

    Uses doubling followed by bisection on the monotone distance curve;
    :func:`threshold_scan` is the step-by-step reference with identical
    semantics.
    """
    spec = _spec(walk, spec)
    n = len(spec.values)
    d0 = 2.0 * (n - 1) / n
    _check_threshold_args(d0, d)
    lo = 0  # d(lo) >= d
    hi = 1
    while True:
        if hi >= t_cap:
            if l1_distance(walk, t_cap, spec) >= d:
                raise CapExceededError(f"{walk.label()}: d({t_cap}) still >= {d}")
            hi = t_cap
            break
        if l1_distance(walk, hi, spec) < d:
            break
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if l1_distance(walk, mid, spec) >= d:
            lo = mid
        else:
            hi = mid
    return lo


def threshold_scan(walk: WalkSpec, d: float, t_cap: int, spec: Spectrum | None = None) -> int:
    """Forward scan: first ``t`` with ``d(t) < d``, minus one."""
    spec = _spec(walk, spec)
    n = len(spec.values)
    _check_threshold_args(2.0 * (n - 1) / n, d)
    block = 256
    for start in range(0, t_cap + 1, block):
        ts = np.arange(start, min(t_cap, start + block - 1) + 1)
        below = np.flatnonzero(distances(walk, ts, spec) < d)
        if len(below):
            return int(ts[below[0]]) - 1
    raise CapExceededError(f"{walk.label()}: d({t_cap}) still >= {d}")


def cutoff_ratio(walk: WalkSpec, eps: float, t_cap: int, spec: Spectrum | None = None) -> float | None:
    """``t(eps) / t(1 - eps)`` on the L1 scale; ``None`` when ``t(1 - eps) == 0``."""
    spec = _spec(walk, spec)
    t_lo = threshold(walk, 1.0 - eps, t_cap, spec)
    if t_lo == 0:
        return None
    return threshold(walk, eps, t_cap, spec) / t_lo


class Sandwich(NamedTuple):
    lower: float
    exact_sq: float
    upper: float
    holds: bool


def lemma2_sandwich(walk: WalkSpec, t: int, spec: Spectrum | None = None) -> Sandwich:
    """``|lambda_m|^(2t) <= d(t)^2 <= sum_{k != 0} lambda_k^(2t)``."""
    spec = _spec(walk, spec)
    lower = spec.abs_dominant ** (2 * t)
    exact_sq = l1_distance(walk, t, spec) ** 2
    upper = math.fsum(np.power(spec.nontrivial(), 2.0 * t))
    holds = lower <= exact_sq + SLACK and exact_sq <= upper + SLACK
    return Sandwich(lower, exact_sq, upper, holds)


class PeresProducts(NamedTuple):
    gap_product: float
    log_product: float
    t_half: int


def peres_products(walk: WalkSpec, t_cap: int, spec: Spectrum | None = None) -> PeresProducts:
    """Spectral gap and ``-log|lambda_m|`` each multiplied by ``t(1/2)``."""
    spec = _spec(walk, spec)
    t_half = threshold(walk, 0.5, t_cap, spec)
    return PeresProducts(spec.gap * t_half, -math.log(spec.abs_dominant) * t_half, t_half)
