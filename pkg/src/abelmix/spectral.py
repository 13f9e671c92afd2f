"""Eigenvalues of a walk from its characters.

The character indexed by ``k`` is ``chi_k(x) = exp(2 pi i sum_j k_j x_j / n_j)``
and diagonalizes every convolution operator on the group, so

    lambda_k = 1/(2r+1) + sum_i 2/(2r+1) cos(2 pi <k, a_i>)

with ``<k, a> = sum_j k_j a_j / n_j``. The pairing is evaluated in exact
integer arithmetic over ``L = lcm(n_j)`` and folded into ``[0, L/2]`` before
taking the cosine, which makes ``lambda_k == lambda_{-k}`` bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .group_core import WalkSpec

__all__ = ["Spectrum", "pairings", "eigenvalue", "spectrum", "spectral_gap"]

# Relative tolerance under which two |lambda| values count as tied.
TIE_RTOL = 1e-14


def _lcm(moduli: Sequence[int]) -> int:
    return math.lcm(*moduli)


def pairings(walk: WalkSpec, ks: np.ndarray) -> np.ndarray:
    """Integer pairings ``<k, a_i> * L`` reduced into ``(-L/2, L/2]``.

    ``ks`` has shape ``(M, rank)``; returns shape ``(M, r)`` and ``L``.
    """
    moduli = walk.group.moduli
    L = _lcm(moduli)
    scale = np.array([L // n for n in moduli], dtype=np.int64)
    gens = np.array([a.coords for a in walk.generators], dtype=np.int64)  # (r, rank)
    ks = np.asarray(ks, dtype=np.int64)
    m = ((ks * scale) @ gens.T) % L
    m = np.where(2 * m > L, m - L, m)
    return m, L


def _eigen_from_pairings(m: np.ndarray, L: int, r: int) -> np.ndarray:
    cosines = np.cos(2.0 * np.pi * np.abs(m) / L)
    return (1.0 + 2.0 * cosines.sum(axis=-1)) / (2 * r + 1)


def eigenvalue(walk: WalkSpec, k: int | Sequence[int]) -> float:
    """Eigenvalue for the character ``k``."""
    if isinstance(k, (int, np.integer)):
        k = (int(k),)
    m, L = pairings(walk, np.array([k]))
    return float(_eigen_from_pairings(m, L, walk.r)[0])


@dataclass(frozen=True, eq=False)
class Spectrum:
    """All ``N`` eigenvalues in element-index order, plus the dominant mode."""

    values: np.ndarray
    moduli: tuple[int, ...]
    r: int
    dominant_flat: int

    @property
    def dominant_index(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(self.dominant_flat, self.moduli))

    @property
    def dominant_value(self) -> float:
        return float(self.values[self.dominant_flat])

    @property
    def abs_dominant(self) -> float:
        return abs(self.dominant_value)

    @property
    def gap(self) -> float:
        return 1.0 - self.abs_dominant

    def grid(self) -> np.ndarray:
        return self.values.reshape(self.moduli)

    def nontrivial(self) -> np.ndarray:
        return self.values[1:]

    def __len__(self) -> int:
        return len(self.values)


def spectrum(walk: WalkSpec) -> Spectrum:
    """Every eigenvalue of the walk.

    The dominant mode is the ``k != 0`` of largest ``|lambda_k|``; values
    within ``TIE_RTOL`` of the maximum are treated as tied and the smallest
    element index wins.
    """
    group = walk.group
    m, L = pairings(walk, group.all_coords())
    values = _eigen_from_pairings(m, L, walk.r)
    values[0] = 1.0
    if group.order == 1:
        return Spectrum(values, group.moduli, walk.r, 0)
    mags = np.abs(values[1:])
    top = mags.max()
    dominant = 1 + int(np.flatnonzero(mags >= top * (1.0 - TIE_RTOL))[0])
    return Spectrum(values, group.moduli, walk.r, dominant)


def spectral_gap(spec: Spectrum) -> float:
    """``1 - |lambda_m|``."""
    return spec.gap
