"""Seeded simulation of walk endpoints, compared against the exact law.

Randomness comes from numpy's counter-based Philox generator. Samples are
grouped in fixed blocks of ``BLOCK`` consecutive sample indices and block
``b`` draws from ``Philox(SeedSequence([seed, b]))``, so the endpoint of
sample ``i`` depends only on ``(seed, i)``. Blocks may run on any number
of threads; aggregation is integer counting and therefore exact.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .group_core import GroupElement, WalkSpec
from .mixing import deviation_field

__all__ = ["SimConfig", "sample_path", "sample_endpoints", "empirical_distribution", "empirical_check", "BLOCK"]

BLOCK = 1 << 14


@dataclass(frozen=True, eq=False)
class SimConfig:
    walk: WalkSpec
    t: int
    samples: int
    seed: int = 0


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _endpoints(walk: WalkSpec, t: int, rng: np.random.Generator, count: int) -> np.ndarray:
    """Element indices of ``count`` independent ``t``-step endpoints."""
    symbols = walk.symbol_coords()  # (2r+1, rank)
    n_sym = len(symbols)
    moduli = np.array(walk.group.moduli, dtype=np.int64)
    pos = np.zeros((count, walk.group.rank), dtype=np.int64)
    # draw in slabs of steps to bound memory
    slab = max(1, (1 << 22) // max(count, 1))
    done = 0
    while done < t:
        steps = min(slab, t - done)
        draws = rng.integers(0, n_sym, size=(steps, count), dtype=np.uint8)
        for s in range(1, n_sym):
            hits = np.count_nonzero(draws == s, axis=0)
            pos += hits[:, None] * symbols[s][None, :]
        pos %= moduli
        done += steps
    return np.ravel_multi_index(pos.T, walk.group.moduli)


def sample_path(walk: WalkSpec, t: int, seed: int) -> GroupElement:
    """Endpoint of one ``t``-step path from the identity."""
    if t < 0:
        raise ValueError("t must be non-negative")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    idx = int(_endpoints(walk, t, rng, 1)[0])
    return walk.group.from_index(idx)


def sample_endpoints(config: SimConfig, workers: int = 1) -> np.ndarray:
    """Endpoint counts per element for ``config.samples`` paths."""
    if config.samples < 1:
        raise ValueError("samples must be >= 1")
    n_blocks = -(-config.samples // BLOCK)

    def run(block: int) -> np.ndarray:
        count = min(BLOCK, config.samples - block * BLOCK)
        idx = _endpoints(config.walk, config.t, _block_rng(config.seed, block), count)
        return np.bincount(idx, minlength=config.walk.group.order)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    else:
        parts = [run(b) for b in range(n_blocks)]
    return np.sum(parts, axis=0)


def empirical_distribution(config: SimConfig, workers: int = 1) -> np.ndarray:
    return sample_endpoints(config, workers) / config.samples


class EmpiricalCheck(NamedTuple):
    max_abs_dev: float
    violations: int
    empirical: np.ndarray
    exact: np.ndarray
    band: np.ndarray


def empirical_check(config: SimConfig, workers: int = 1, sigmas: float = 5.0) -> EmpiricalCheck:
    """Compare empirical endpoint frequencies with the exact ``P^t``.

    A coordinate is a violation when its frequency is farther than
    ``sigmas * sqrt(p (1 - p) / S)`` from the exact probability ``p``.
    """
    n = config.walk.group.order
    exact = 1.0 / n + deviation_field(config.walk, t=config.t).dev
    exact = np.clip(exact, 0.0, 1.0)
    emp = empirical_distribution(config, workers)
    band = sigmas * np.sqrt(exact * (1.0 - exact) / config.samples)
    diff = np.abs(emp - exact)
    violations = int(np.count_nonzero(diff > band + 1e-15))
    return EmpiricalCheck(float(diff.max()), violations, emp, exact, band)
