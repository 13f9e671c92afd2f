"""Walk families, cutoff profiles across them, and report serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from .bounds import ratio_floor
from .exceptions import AbelmixError, CapExceededError
from .group_core import WalkSpec, make_group, make_walk
from .mixing import cutoff_ratio, peres_products, threshold
from .spectral import spectrum

__all__ = [
    "KINDS",
    "FamilyPreset",
    "FamilyRow",
    "FamilyReport",
    "pair_rule",
    "build_family",
    "default_t_cap",
    "family_profile",
    "export_report",
    "report_from_json",
    "corpus",
    "REPORT_HEADER",
]

KINDS = ("cycle_single", "cycle_pair", "cycle_sqrt", "hypercube", "custom")

REPORT_HEADER = (
    "N",
    "r",
    "lambda_m",
    "gap",
    "t_eps",
    "t_1meps",
    "ratio",
    "gap_product",
    "log_product",
    "ratio_floor",
)


def _icbrt(n: int) -> int:
    m = round(n ** (1 / 3))
    while m**3 > n:
        m -= 1
    while (m + 1) ** 3 <= n:
        m += 1
    return m


def pair_rule(name: str) -> Callable[[int], int]:
    """Second-generator rule for ``cycle_pair``.

    ``"sqrt"`` and ``"cbrt"`` give floor roots of ``n``; an integer literal
    such as ``"5"`` gives that constant.
    """
    if name == "sqrt":
        return math.isqrt
    if name == "cbrt":
        return _icbrt
    try:
        value = int(name)
    except (TypeError, ValueError):
        raise ValueError(f"unknown pair rule {name!r}; use 'sqrt', 'cbrt' or an integer") from None
    return lambda n: value


@dataclass(frozen=True)
class FamilyPreset:
    kind: str
    sizes: tuple[int, ...] = ()
    pair_rule: str | None = None
    # custom families: (moduli, generators) pairs
    walks: tuple[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; expected one of {KINDS}")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError(f"family sizes must be strictly increasing: {self.sizes}")

    @property
    def contrast_only(self) -> bool:
        """Hypercube type grows with dimension; it is only a contrast family."""
        return self.kind == "hypercube"


def build_family(preset: FamilyPreset) -> list[WalkSpec]:
    """Instantiate every walk of the preset, in size order."""
    walks = []
    if preset.kind == "custom":
        specs = [(tuple(m), tuple(map(tuple, g))) for m, g in preset.walks]
    else:
        specs = []
        for size in preset.sizes:
            if preset.kind == "hypercube":
                specs.append(((2,) * size, tuple(tuple(int(i == j) for i in range(size)) for j in range(size))))
                continue
            gens = [1]
            if preset.kind == "cycle_sqrt":
                gens.append(math.isqrt(size))
            elif preset.kind == "cycle_pair":
                gens.append(pair_rule(preset.pair_rule or "sqrt")(size))
            specs.append(((size,), tuple((g,) for g in gens)))
    for moduli, gens in specs:
        try:
            walks.append(make_walk(make_group(moduli), gens))
        except AbelmixError as exc:
            raise type(exc)(f"family {preset.kind} instance {moduli}: {exc}") from exc
    return walks


def _is_hypercube(walk: WalkSpec) -> bool:
    return set(walk.group.moduli) == {2} and walk.r == walk.group.rank


def default_t_cap(walk: WalkSpec) -> int:
    """``10 d (ln d + 3)`` steps for hypercubes, ``10 N^2`` otherwise."""
    if _is_hypercube(walk):
        d = walk.r
        return int(math.ceil(10 * d * (math.log(d) + 3)))
    return 10 * walk.group.order**2


@dataclass
class FamilyRow:
    N: int
    r: int
    lambda_m: float
    gap: float
    t_eps: int
    t_1meps: int
    ratio: float | None
    gap_product: float
    log_product: float
    ratio_floor: float | None = None


@dataclass
class FamilyReport:
    kind: str
    epsilon: float
    kappa: float | None
    contrast_only: bool
    rows: list[FamilyRow] = field(default_factory=list)
    instances: list[str] = field(default_factory=list)

    def ratios(self) -> list[float | None]:
        return [row.ratio for row in self.rows]


def family_profile(
    walks: Sequence[WalkSpec],
    eps: float,
    t_cap: int | None = None,
    kappa: float | None = None,
    kind: str = "custom",
    neg_log_eps: float | None = None,
) -> FamilyReport:
    """Thresholds, cutoff ratio and Peres products for every walk.

    ``t_cap=None`` uses :func:`default_t_cap` per instance. Rows come out
    ordered by group order.
    """
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    report = FamilyReport(kind, eps, kappa, kind == "hypercube")
    for walk in sorted(walks, key=lambda w: w.group.order):
        cap = default_t_cap(walk) if t_cap is None else t_cap
        spec = spectrum(walk)
        try:
            t_eps = threshold(walk, eps, cap, spec)
            t_1m = threshold(walk, 1.0 - eps, cap, spec)
            ratio = cutoff_ratio(walk, eps, cap, spec)
            peres = peres_products(walk, cap, spec)
        except CapExceededError as exc:
            raise CapExceededError(f"instance {walk.label()}: {exc}") from exc
        floor = None
        if kappa is not None and walk.r == 1:
            floor = ratio_floor(1, kappa, eps, neg_log_eps=neg_log_eps).floor
        report.rows.append(
            FamilyRow(
                N=walk.group.order,
                r=walk.r,
                lambda_m=spec.dominant_value,
                gap=spec.gap,
                t_eps=t_eps,
                t_1meps=t_1m,
                ratio=ratio,
                gap_product=peres.gap_product,
                log_product=peres.log_product,
                ratio_floor=floor,
            )
        )
        report.instances.append(walk.label())
    return report


def fmt_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def export_report(report: FamilyReport, fmt: str = "csv") -> str:
    """Serialize a report as CSV (fixed header) or JSON."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in report.rows:
            writer.writerow([fmt_number(getattr(row, name)) for name in REPORT_HEADER])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "kind": report.kind,
            "epsilon": report.epsilon,
            "kappa": report.kappa,
            "contrast_only": report.contrast_only,
            "instances": report.instances,
            "rows": [asdict(row) for row in report.rows],
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def report_from_json(text: str) -> FamilyReport:
    doc = json.loads(text)
    rows = [FamilyRow(**row) for row in doc["rows"]]
    return FamilyReport(doc["kind"], doc["epsilon"], doc["kappa"], doc["contrast_only"], rows, doc["instances"])


CORPUS_CYCLIC_SIZES = (4, 5, 7, 8, 12, 16, 25, 31, 64, 100, 128, 257, 512, 1000, 2048, 4096)


def corpus(max_order: int = 512) -> list[WalkSpec]:
    """Reference set of walks used by the verification harness.

    Cyclic groups get ``{1}``, ``{1, isqrt(n)}`` and
    ``{1, round(n^(1/3)), round(n^(2/3))}``; a few named walks and product
    groups are added. Repeated generators are kept as given.
    """
    walks: list[WalkSpec] = []
    for n in CORPUS_CYCLIC_SIZES:
        if n > max_order:
            continue
        g = make_group([n])
        walks.append(make_walk(g, [1]))
        walks.append(make_walk(g, [1, math.isqrt(n)]))
        walks.append(make_walk(g, [1, round(n ** (1 / 3)), round(n ** (2 / 3))]))
    named = [
        ((5,), [1, 2]),
        ((8,), [1, 3]),
        ((25,), [1, 7]),
        ((64,), [1, 5]),
        ((2, 2), [(1, 0), (0, 1)]),
        ((2, 2, 2), [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
        ((4, 6), [(1, 0), (0, 1)]),
        ((4, 6), [(1, 1), (0, 1)]),
        ((3, 5), [(1, 1)]),
        ((6, 10), [(1, 0), (0, 1), (1, 1)]),
    ]
    for moduli, gens in named:
        if math.prod(moduli) <= max_order:
            walks.append(make_walk(make_group(moduli), gens))
    return walks
