"""Inequality checks behind the no-cutoff argument for bounded-type walks.

Each check evaluates both sides numerically and reports whether the
inequality holds up to an additive slack of ``1e-12``. A failure beyond the
slack is returned as ``holds=False``; nothing is clamped.

``kappa`` is the acute-cone covering constant. It is known in closed form
only at rank one, where ``Z`` splits into two open rays and ``kappa = 2``;
for higher ranks callers must supply it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import BoundNotApplicableError
from .group_core import WalkSpec
from .mixing import l1_distance
from .spectral import Spectrum, eigenvalue, pairings, spectrum as compute_spectrum

__all__ = [
    "SLACK",
    "KAPPA_RANK1",
    "frac",
    "frac_vector",
    "frac_vectors",
    "trig_bounds",
    "concavity_pair",
    "eigen_exp_bound",
    "eigen_exp_bounds",
    "short_mode",
    "lambda_lower_bound",
    "ShiftedLattice",
    "walk_lattice",
    "theta_sum",
    "lemma3_check",
    "chain_check",
    "ratio_floor",
]

SLACK = 1e-12
KAPPA_RANK1 = 2.0
PIGEONHOLE_RADIUS = 1.0 / (2.0 * math.pi)


def frac(x: float) -> float:
    """Representative of ``x`` modulo 1 in ``(-1/2, 1/2]``."""
    return x - math.ceil(x - 0.5)


def _require_cyclic(walk: WalkSpec) -> int:
    if not walk.is_cyclic:
        raise ValueError(f"{walk.label()}: operation defined for cyclic groups only")
    return walk.group.order


def frac_vectors(walk: WalkSpec, ks: np.ndarray) -> np.ndarray:
    """Rows ``<k a_i / n>`` for each character in ``ks``; shape ``(M, r)``.

    Pairings are reduced exactly in integers, so ``1/2`` stays ``+1/2``.
    """
    m, L = pairings(walk, ks)
    return m / L


def frac_vector(walk: WalkSpec, k: int | Sequence[int]) -> np.ndarray:
    if isinstance(k, (int, np.integer)):
        k = (int(k),)
    return frac_vectors(walk, np.array([k]))[0]


class TrigBounds(NamedTuple):
    cos_x: float
    upper: float
    lower: float
    upper_ok: bool | None
    lower_ok: bool | None


def trig_bounds(x: float) -> TrigBounds:
    """``exp(-x^2) <= cos x <= exp(-x^2 / (2 pi^2))`` on their ranges.

    The upper bound is asserted on ``[-3pi/2, 3pi/2]`` and the lower on
    ``[-1, 1]``; outside a range the flag is ``None``.
    """
    c = math.cos(x)
    upper = math.exp(-x * x / (2.0 * math.pi**2))
    lower = math.exp(-x * x)
    upper_ok = c <= upper if abs(x) <= 1.5 * math.pi else None
    lower_ok = lower <= c if abs(x) <= 1.0 else None
    return TrigBounds(c, upper, lower, upper_ok, lower_ok)


def concavity_pair(a: float, b: float) -> tuple[bool, bool | None]:
    """Convexity of exp on the left, concavity of ``exp(-x^2)`` on the right.

    The right inequality needs ``a, b`` in ``[-1/sqrt 2, 1/sqrt 2]`` and is
    ``None`` outside that square.
    """
    mean = 0.5 * math.exp(-a * a) + 0.5 * math.exp(-b * b)
    left_ok = math.exp(-0.5 * a * a - 0.5 * b * b) <= mean
    half = 1.0 / math.sqrt(2.0)
    if abs(a) <= half and abs(b) <= half:
        right_ok = mean <= math.exp(-((0.5 * a + 0.5 * b) ** 2))
    else:
        right_ok = None
    return left_ok, right_ok


def _exp_bound(v: np.ndarray, r: int) -> np.ndarray:
    return np.exp(-(8.0 / (2 * r + 1) ** 2) * np.sum(v * v, axis=-1))


def eigen_exp_bound(walk: WalkSpec, k: int | Sequence[int]) -> tuple[float, bool]:
    """``lambda_k <= exp(-8 |<k a/n>|^2 / (2r+1)^2)``."""
    v = frac_vector(walk, k)
    bound = float(_exp_bound(v, walk.r))
    lam = eigenvalue(walk, k)
    return bound, lam <= bound + SLACK


def eigen_exp_bounds(walk: WalkSpec, spec: Spectrum | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Bounds and eigenvalues for every ``k != 0`` (index order)."""
    spec = compute_spectrum(walk) if spec is None else spec
    v = frac_vectors(walk, walk.group.all_coords()[1:])
    return _exp_bound(v, walk.r), spec.values[1:]


class ShortMode(NamedTuple):
    k: int
    linf: float
    within_pigeonhole: bool


def short_mode(walk: WalkSpec) -> ShortMode:
    """Nonzero ``k`` minimizing ``max_i |<k a_i / n>|`` (ties: smallest ``k``)."""
    n = _require_cyclic(walk)
    ks = np.arange(1, n).reshape(-1, 1)
    m, L = pairings(walk, ks)
    worst = np.abs(m).max(axis=1)
    i = int(np.argmin(worst))
    linf = float(worst[i]) / L
    return ShortMode(int(ks[i, 0]), linf, linf <= PIGEONHOLE_RADIUS)


def lambda_lower_bound(walk: WalkSpec, spec: Spectrum | None = None) -> tuple[float, bool]:
    """``|lambda_m| >= |lambda_{k*}| >= exp(-8 pi^2 |<k* a/n>|^2 / (2r+1))``.

    Raises BoundNotApplicableError unless the short mode lies within the
    ``1/(2 pi)`` cube.
    """
    spec = compute_spectrum(walk) if spec is None else spec
    mode = short_mode(walk)
    if not mode.within_pigeonhole:
        raise BoundNotApplicableError(
            f"{walk.label()}: shortest mode has sup-norm {mode.linf:.6g} > 1/(2 pi)"
        )
    v = frac_vector(walk, mode.k)
    bound = math.exp(-(8.0 * math.pi**2 / (2 * walk.r + 1)) * float(v @ v))
    lam_k = abs(float(spec.values[mode.k]))
    holds = spec.abs_dominant >= lam_k and lam_k >= bound - SLACK
    return bound, holds


@dataclass(frozen=True, eq=False)
class ShiftedLattice:
    """The lattice ``Z^r + Z * (a / n)`` in ``R^r``.

    Every point is ``m + <k a / n>`` for an integer vector ``m`` and one of
    the distinct coset representatives (``n`` of them when the shift has
    order ``n``), with the zero coset first. ``n = 1`` gives ``Z^r``.
    """

    n: int
    numerators: tuple[int, ...]
    cosets: np.ndarray = field(repr=False)

    @classmethod
    def from_shift(cls, n: int, numerators: Sequence[int]) -> ShiftedLattice:
        if n < 1:
            raise ValueError("n must be positive")
        nums = np.array([int(a) % n for a in numerators], dtype=np.int64)
        m = (np.arange(n, dtype=np.int64)[:, None] * nums[None, :]) % n
        m = np.where(2 * m > n, m - n, m)
        # distinct cosets only; k -> k a/n repeats when gcd(a_1..a_r, n) > 1
        _, first = np.unique(m, axis=0, return_index=True)
        m = m[np.sort(first)]
        return cls(n, tuple(int(a) for a in nums), m / n)

    @property
    def rank(self) -> int:
        return len(self.numerators)

    @property
    def shift(self) -> np.ndarray:
        return np.array(self.numerators) / self.n

    @property
    def mu(self) -> float:
        """Length of the shortest nonzero lattice vector."""
        if len(self.cosets) == 1:
            return 1.0
        norms = np.sqrt(np.sum(self.cosets[1:] ** 2, axis=1))
        return float(min(1.0, norms.min()))


def walk_lattice(walk: WalkSpec) -> ShiftedLattice:
    n = _require_cyclic(walk)
    return ShiftedLattice.from_shift(n, [a.coords[0] for a in walk.generators])


class ThetaSumResult(NamedTuple):
    value: float
    tail_bound: float
    radius: int


def _one_dim_tail(c: float, M: int) -> float:
    """Bound on ``sum_{|m| > M} exp(-c (m + v)^2)`` for any ``|v| <= 1/2``."""
    h = M + 0.5
    return 2.0 * math.exp(-c * h * h) / -math.expm1(-2.0 * c * h)


def _radius_for(c: float, lattice: ShiftedLattice, tail_tol: float) -> int:
    # a priori: sum_m exp(-c (m+v)^2) <= 1 + sqrt(pi / c)
    full = 1.0 + math.sqrt(math.pi / c)
    r = lattice.rank
    M = 1
    while len(lattice.cosets) * r * _one_dim_tail(c, M) * full ** (r - 1) > tail_tol:
        M += 1
    return M


def theta_sum(lattice: ShiftedLattice, c: float, tail_tol: float = 1e-15, radius: int | None = None) -> ThetaSumResult:
    """``sum_sigma exp(-c |sigma|^2)`` over the lattice, with a certified tail.

    The sum runs over ``|m|_inf <= M`` for each coset. Because the box
    factorizes, each coset contributes a product of one-dimensional sums
    ``S_i``; if each omitted one-dimensional tail is at most ``T``, the
    omitted mass of the coset is at most ``prod(S_i + T) - prod(S_i)``.
    ``M`` is the smallest radius whose a priori bound is below ``tail_tol``
    unless given explicitly.
    """
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    M = _radius_for(c, lattice, tail_tol) if radius is None else int(radius)
    ms = np.arange(-M, M + 1, dtype=float)
    # (cosets, r, 2M+1) -> one-dimensional sums per coset and coordinate
    pts = lattice.cosets[:, :, None] + ms[None, None, :]
    one_dim = np.exp(-c * pts * pts).sum(axis=2)
    per_coset = one_dim.prod(axis=1)
    T = _one_dim_tail(c, M)
    value = math.fsum(per_coset)
    # prod(S + T) - prod(S), written to avoid cancellation when all S > 0
    positive = (one_dim > 0).all(axis=1)
    omitted = (one_dim + T).prod(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.log1p(T / one_dim).sum(axis=1)
    omitted[positive] = per_coset[positive] * np.expm1(ratio[positive])
    tail = math.fsum(omitted)
    return ThetaSumResult(value, tail, M)


def _lemma3_rhs(kappa: float, y: float, r: int) -> tuple[float, float]:
    """``(kappa / (y - 1), kappa / (y - 1)^r)``; ``y - 1`` may be tiny."""
    if y <= 1.0:
        return math.inf, math.inf
    den = y - 1.0
    return kappa / den, kappa / den**r


class Lemma3Result(NamedTuple):
    theta: float
    bound1: float
    bound_r: float
    holds1: bool
    holds_r: bool

    @property
    def holds(self) -> bool:
        return self.holds1 or self.holds_r


def lemma3_check(lattice: ShiftedLattice, c: float, kappa: float) -> Lemma3Result:
    """Theta sum against ``1 + kappa/(e^{c mu^2} - 1)`` and its ``r``-th power form."""
    theta = theta_sum(lattice, c).value
    den = math.expm1(c * lattice.mu**2)
    b1 = 1.0 + kappa / den
    br = 1.0 + kappa / den**lattice.rank
    return Lemma3Result(theta, b1, br, theta <= b1 + SLACK, theta <= br + SLACK)


@dataclass(frozen=True)
class ChainReport:
    """Values and per-link results of the final distance chain at one ``t``.

    Links, left to right::

        d(t)^2 <= sum_{k != 0} lambda_k^(2t) <= theta(c) - 1 <= max(k/(Y-1), k/(Y-1)^r) <= max(k/(X-1), k/(X-1)^r)

    with ``c = 16 t / (2r+1)^2``, ``Y = exp(c mu^2)`` and
    ``X = |lambda_m|^(-2t / (pi^2 (2r+1)))``.
    """

    walk: str
    t: int
    kappa: float
    d_sq: float
    spectral_sum: float
    theta_minus_one: float
    theta_tail: float
    lemma3_rhs: float
    final_rhs: float
    X: float
    Y: float
    vacuous: bool
    link_distance_spectral: bool
    link_spectral_theta: bool
    link_theta_lemma3: bool
    link_lemma3_final: bool

    @property
    def holds(self) -> bool:
        return (
            self.link_distance_spectral
            and self.link_spectral_theta
            and self.link_theta_lemma3
            and (self.vacuous or self.link_lemma3_final)
        )


def chain_check(walk: WalkSpec, t: int, kappa: float, spec: Spectrum | None = None) -> ChainReport:
    if t < 1:
        raise ValueError("chain_check needs t >= 1")
    spec = compute_spectrum(walk) if spec is None else spec
    r = walk.r
    lattice = walk_lattice(walk)
    c = 16.0 * t / (2 * r + 1) ** 2
    d_sq = l1_distance(walk, t, spec) ** 2
    spectral_sum = math.fsum(np.power(spec.nontrivial(), 2.0 * t))
    theta = theta_sum(lattice, c)
    theta_m1 = theta.value - 1.0
    Y = math.exp(c * lattice.mu**2)
    l3 = max(_lemma3_rhs(kappa, Y, r))
    X = spec.abs_dominant ** (-2.0 * t / (math.pi**2 * (2 * r + 1)))
    vacuous = not X > 1.0
    final = max(_lemma3_rhs(kappa, X, r))
    return ChainReport(
        walk=walk.label(),
        t=t,
        kappa=kappa,
        d_sq=d_sq,
        spectral_sum=spectral_sum,
        theta_minus_one=theta_m1,
        theta_tail=theta.tail_bound,
        lemma3_rhs=l3,
        final_rhs=final,
        X=X,
        Y=Y,
        vacuous=vacuous,
        link_distance_spectral=d_sq <= spectral_sum + SLACK,
        link_spectral_theta=spectral_sum <= theta_m1 + SLACK,
        link_theta_lemma3=theta_m1 <= l3 + SLACK,
        link_lemma3_final=l3 <= final + SLACK,
    )


class RatioFloor(NamedTuple):
    floor: float
    applicable: bool


def ratio_floor(r: int | WalkSpec, kappa: float, eps: float | None = None, *, neg_log_eps: float | None = None) -> RatioFloor:
    """Lower bound ``-ln(eps) / (2 pi^2 (2r+1) kappa)`` on ``t(eps)/t(1-eps)``.

    Applicable only when ``eps < exp(-2 pi^2 (2r+1) kappa)``, which is when
    the floor exceeds one. Pass ``neg_log_eps`` to specify ``eps`` below the
    float range or exactly at the boundary.
    """
    if isinstance(r, WalkSpec):
        r = r.r
    if neg_log_eps is None:
        if eps is None or not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        neg_log_eps = -math.log(eps)
    scale = 2.0 * math.pi**2 * (2 * r + 1) * kappa
    return RatioFloor(neg_log_eps / scale, neg_log_eps > scale)
