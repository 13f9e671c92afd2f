"""Finite Abelian groups, lazy symmetric walks on them, and direct evolution.

Groups are products of cyclic factors ``Z/n_1 x ... x Z/n_s``. Elements are
indexed in mixed radix with the first modulus most significant, which is the
C order of an array of shape ``moduli``. Distributions are plain float
vectors of length ``N`` in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InvalidGroupError, NotIrreducibleError, TypeConditionError

__all__ = [
    "AbelianGroup",
    "GroupElement",
    "WalkSpec",
    "make_group",
    "make_walk",
    "step_distribution",
    "evolve",
    "point_mass",
    "uniform",
    "transition_matrix",
]


@dataclass(frozen=True)
class AbelianGroup:
    moduli: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        """Number of cyclic factors."""
        return len(self.moduli)

    @property
    def is_cyclic_presentation(self) -> bool:
        return len(self.moduli) == 1

    def element(self, coords: int | Sequence[int]) -> GroupElement:
        if isinstance(coords, (int, np.integer)):
            coords = (int(coords),)
        if len(coords) != len(self.moduli):
            raise ValueError(
                f"element {tuple(coords)} has {len(coords)} coordinates, group has {len(self.moduli)}"
            )
        return GroupElement(tuple(int(c) % n for c, n in zip(coords, self.moduli)), self.moduli)

    def identity(self) -> GroupElement:
        return GroupElement((0,) * len(self.moduli), self.moduli)

    def index(self, coords: Sequence[int]) -> int:
        idx = 0
        for c, n in zip(coords, self.moduli):
            idx = idx * n + (int(c) % n)
        return idx

    def from_index(self, index: int) -> GroupElement:
        if not 0 <= index < self.order:
            raise IndexError(index)
        coords = []
        for n in reversed(self.moduli):
            index, c = divmod(index, n)
            coords.append(c)
        return GroupElement(tuple(reversed(coords)), self.moduli)

    def all_coords(self) -> np.ndarray:
        """Coordinates of every element, shape ``(N, rank)``, in index order."""
        grids = np.indices(self.moduli).reshape(len(self.moduli), -1)
        return grids.T.astype(np.int64)

    def __str__(self) -> str:
        return " x ".join(f"Z/{n}" for n in self.moduli)


@dataclass(frozen=True)
class GroupElement:
    coords: tuple[int, ...]
    moduli: tuple[int, ...]

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(
            tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.moduli)),
            self.moduli,
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(tuple((-a) % n for a, n in zip(self.coords, self.moduli)), self.moduli)

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def is_identity(self) -> bool:
        return not any(self.coords)

    @property
    def index(self) -> int:
        idx = 0
        for c, n in zip(self.coords, self.moduli):
            idx = idx * n + c
        return idx

    def _check(self, other: GroupElement) -> None:
        if self.moduli != other.moduli:
            raise ValueError(f"elements of different groups: {self.moduli} vs {other.moduli}")

    def __str__(self) -> str:
        if len(self.coords) == 1:
            return str(self.coords[0])
        return "(" + ",".join(map(str, self.coords)) + ")"


def make_group(moduli: Iterable[int]) -> AbelianGroup:
    """Build ``Z/n_1 x ... x Z/n_s``; every modulus must be at least 2."""
    moduli = tuple(int(n) for n in moduli)
    if not moduli:
        raise InvalidGroupError("moduli list is empty")
    bad = [n for n in moduli if n < 2]
    if bad:
        raise InvalidGroupError(f"moduli must be >= 2, got {bad}")
    return AbelianGroup(moduli)


@dataclass(frozen=True, eq=False)
class WalkSpec:
    """Lazy walk applying one of ``{+a_i, -a_i, 0}`` uniformly at random.

    ``symbols`` lists the 2r+1 step elements as element indices (identity
    first, then ``+a_1, -a_1, +a_2, ...``); coincident symbols keep their
    separate 1/(2r+1) shares, which accumulate in the step distribution.
    """

    group: AbelianGroup
    generators: tuple[GroupElement, ...]
    symbols: tuple[int, ...] = field(repr=False)

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def hold_prob(self) -> Fraction:
        return Fraction(1, 2 * self.r + 1)

    @property
    def type_valid(self) -> bool:
        return self.group.order >= math.pi**self.r

    @property
    def is_cyclic(self) -> bool:
        return self.group.is_cyclic_presentation

    def step_masses(self) -> dict[int, float]:
        """Accumulated step probabilities keyed by element index."""
        p = 1.0 / (2 * self.r + 1)
        masses: dict[int, float] = {}
        for s in self.symbols:
            masses[s] = masses.get(s, 0.0) + p
        return masses

    def symbol_coords(self) -> np.ndarray:
        """Coordinates of the 2r+1 symbols, shape ``(2r+1, rank)``."""
        rows = [self.group.identity().coords]
        for a in self.generators:
            rows.append(a.coords)
            rows.append((-a).coords)
        return np.array(rows, dtype=np.int64)

    def label(self) -> str:
        gens = ",".join(str(a) for a in self.generators)
        return f"{self.group}{{{gens}}}"

    def __repr__(self) -> str:
        return f"WalkSpec({self.label()})"


def _coerce_generator(group: AbelianGroup, g) -> GroupElement:
    if isinstance(g, GroupElement):
        if g.moduli != group.moduli:
            raise ValueError(f"generator {g} does not belong to {group}")
        return g
    return group.element(g)


def generated_subgroup_size(group: AbelianGroup, generators: Sequence[GroupElement]) -> int:
    """Size of the subgroup generated by ``generators`` (breadth-first closure)."""
    moduli = np.array(group.moduli, dtype=np.int64)
    steps = np.array([a.coords for a in generators] + [(-a).coords for a in generators], dtype=np.int64)
    reached = np.zeros(group.order, dtype=bool)
    reached[0] = True
    frontier = np.zeros((1, group.rank), dtype=np.int64)
    while len(frontier):
        nxt = ((frontier[:, None, :] + steps[None, :, :]) % moduli).reshape(-1, group.rank)
        idx = np.ravel_multi_index(nxt.T, group.moduli)
        idx, first = np.unique(idx, return_index=True)
        fresh = ~reached[idx]
        reached[idx[fresh]] = True
        frontier = nxt[first[fresh]]
    return int(reached.sum())


def make_walk(group: AbelianGroup, generators, require_type: bool = False) -> WalkSpec:
    """Validate generators and build the walk.

    Generators may be :class:`GroupElement` values, coordinate sequences, or
    plain integers for a single cyclic factor.

    Raises NotIrreducibleError when the generators span a proper subgroup and
    TypeConditionError when ``require_type`` is set and ``N < pi**r``.
    """
    gens = tuple(_coerce_generator(group, g) for g in generators)
    if not gens:
        raise ValueError("at least one generator is required")
    size = generated_subgroup_size(group, gens)
    if size != group.order:
        raise NotIrreducibleError(
            f"generators {[str(a) for a in gens]} span a subgroup of order {size} in {group} (order {group.order})"
        )
    symbols = [0]
    for a in gens:
        symbols.append(a.index)
        symbols.append((-a).index)
    walk = WalkSpec(group, gens, tuple(symbols))
    if require_type and not walk.type_valid:
        raise TypeConditionError(f"|G| = {group.order} < pi^{walk.r} = {math.pi ** walk.r:.6g}")
    return walk


def point_mass(group: AbelianGroup, at: int = 0) -> np.ndarray:
    x = np.zeros(group.order)
    x[at] = 1.0
    return x


def uniform(group: AbelianGroup) -> np.ndarray:
    return np.full(group.order, 1.0 / group.order)


def step_distribution(walk: WalkSpec) -> np.ndarray:
    """One-step distribution from the identity."""
    dist = np.zeros(walk.group.order)
    for idx, mass in walk.step_masses().items():
        dist[idx] = mass
    return dist


def evolve(walk: WalkSpec, dist: np.ndarray, t: int) -> np.ndarray:
    """Apply ``t`` steps of the walk to ``dist`` by direct convolution.

    This never touches characters or FFTs and serves as the brute-force
    reference for the spectral code path.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    group = walk.group
    shifts = [(group.from_index(idx).coords, mass) for idx, mass in sorted(walk.step_masses().items())]
    axes = tuple(range(group.rank))
    cur = np.asarray(dist, dtype=float).reshape(group.moduli)
    for _ in range(t):
        nxt = np.zeros_like(cur)
        for shift, mass in shifts:
            nxt += mass * np.roll(cur, shift, axis=axes)
        cur = nxt
    return cur.reshape(-1).copy()


def transition_matrix(walk: WalkSpec) -> np.ndarray:
    """Dense ``N x N`` matrix with ``P[x, y] = Pr(x -> y)``; symmetric."""
    group = walk.group
    coords = group.all_coords()
    moduli = np.array(group.moduli)
    P = np.zeros((group.order, group.order))
    rows = np.arange(group.order)
    for idx, mass in walk.step_masses().items():
        g = np.array(group.from_index(idx).coords)
        cols = np.ravel_multi_index(((coords + g) % moduli).T, group.moduli)
        P[rows, cols] += mass
    return P
