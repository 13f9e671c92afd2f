"""Command-line front end.

Usage::

    abelmix SUBCOMMAND --config run.json [--out PATH] [--format csv|json]

Machine-readable results go to ``--out`` (stdout when omitted) and a short
human-readable summary goes to stderr. Exit status is 0 on success, 1 on a
configuration or validation error, 2 when ``bounds-check`` finds a genuine
violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from typing import Callable, Sequence

from . import bounds, families, mixing, verify
from .config import RunConfig, load_config
from .exceptions import AbelmixError
from .group_core import WalkSpec, make_group, make_walk
from .montecarlo import SimConfig, empirical_check
from .spectral import spectrum

SUBCOMMANDS = ("spectrum", "mix", "thresholds", "bounds-check", "family", "simulate")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATION = 2

fmt = families.fmt_number


class _Usage(AbelmixError):
    pass


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _walk(config: RunConfig) -> WalkSpec:
    if config.walk is None:
        raise _Usage("this subcommand needs a 'walk' entry in the config")
    w = config.walk
    return make_walk(make_group(w.moduli), w.generators, require_type=w.require_type)


def _k_label(walk: WalkSpec, index: int) -> str:
    return ":".join(map(str, walk.group.from_index(index).coords))


def cmd_spectrum(config: RunConfig, out_fmt: str) -> tuple[str, str, int]:
    walk = _walk(config)
    spec = spectrum(walk)
    labels = [_k_label(walk, i) for i in range(len(spec))]
    if out_fmt == "json":
        body = _json(
            {
                "walk": walk.label(),
                "k": labels,
                "lambda": spec.values.tolist(),
                "dominant_index": list(spec.dominant_index),
                "dominant_value": spec.dominant_value,
                "gap": spec.gap,
            }
        )
    else:
        body = _csv(("k", "lambda"), list(zip(labels, spec.values.tolist())))
    summary = (
        f"{walk.label()}: N={walk.group.order} r={walk.r} "
        f"lambda_m={spec.dominant_value:.12g} at k={_k_label(walk, spec.dominant_flat)} gap={spec.gap:.12g}"
    )
    return body, summary, EXIT_OK


def cmd_mix(config: RunConfig, out_fmt: str) -> tuple[str, str, int]:
    walk = _walk(config)
    t_max = config.t_max if config.t_max is not None else 100
    curve = mixing.mixing_curve(walk, t_max, config.floor or 0.0)
    ts = list(range(len(curve)))
    if out_fmt == "json":
        body = _json({"walk": walk.label(), "t": ts, "d_l1": curve.d_values.tolist(), "d_tv": curve.tv_values.tolist(),
                      "stopped_early": curve.stopped_early})
    else:
        body = _csv(("t", "d_l1", "d_tv"), list(zip(ts, curve.d_values.tolist(), curve.tv_values.tolist())))
    summary = f"{walk.label()}: {len(curve)} values, d({ts[-1]}) = {curve.d_values[-1]:.6g}"
    if curve.stopped_early:
        summary += f" (stopped below floor {curve.floor:g})"
    return body, summary, EXIT_OK


def cmd_thresholds(config: RunConfig, out_fmt: str) -> tuple[str, str, int]:
    walk = _walk(config)
    spec = spectrum(walk)
    cap = config.t_cap if config.t_cap is not None else families.default_t_cap(walk)
    eps = config.epsilon
    levels = [eps, 1.0 - eps, 0.5]
    rows = [(d, mixing.threshold(walk, d, cap, spec)) for d in levels]
    ratio = rows[0][1] / rows[1][1] if rows[1][1] else None
    lines = [f"{walk.label()}: t({eps:.6g})={rows[0][1]} t({1 - eps:.6g})={rows[1][1]} ratio={ratio}"]
    floor = None
    kap = config.kappa if config.kappa is not None else (bounds.KAPPA_RANK1 if walk.r == 1 else None)
    if kap is not None:
        floor = bounds.ratio_floor(walk.r, kap, eps, neg_log_eps=config.epsilon_neg_log)
        lines.append(f"ratio floor {floor.floor:.6g} (kappa={kap:g}, applicable={floor.applicable})")
    if out_fmt == "json":
        doc = {"walk": walk.label(), "d": [r[0] for r in rows], "t": [r[1] for r in rows], "ratio": ratio}
        if floor is not None:
            doc["ratio_floor"] = {"floor": floor.floor, "applicable": floor.applicable, "kappa": kap}
        body = _json(doc)
    else:
        body = _csv(("d", "t"), rows)
    return body, "\n".join(lines), EXIT_OK


def cmd_bounds_check(config: RunConfig, out_fmt: str) -> tuple[str, str, int]:
    if config.walk is not None:
        walks = [_walk(config)]
    elif config.family is not None:
        walks = families.build_family(config.family)
    else:
        walks = families.corpus()
    rows = verify.run_checks(walks, config.kappa)
    bad = verify.violations(rows)
    if out_fmt == "json":
        body = _json([{"check": r.check, "instance": r.instance, "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds,
                       "informational": r.informational} for r in rows])
    else:
        body = _csv(("check", "instance", "lhs", "rhs", "holds"), [(r.check, r.instance, r.lhs, r.rhs, r.holds) for r in rows])
    tally: dict[str, list[int]] = {}
    for r in rows:
        t = tally.setdefault(r.check, [0, 0])
        t[0] += 1
        t[1] += not r.holds
    width = max(len(k) for k in tally)
    lines = [f"{len(walks)} walks, {len(rows)} checks"]
    for name, (total, failed) in tally.items():
        note = " (informational)" if name in verify.INFORMATIONAL else ""
        lines.append(f"  {name:<{width}}  {total - failed:>5}/{total:<5} hold{note}")
    for r in bad:
        lines.append(f"VIOLATION {r.check} {r.instance}: {r.lhs!r} > {r.rhs!r}")
    return body, "\n".join(lines), EXIT_VIOLATION if bad else EXIT_OK


def cmd_family(config: RunConfig, out_fmt: str) -> tuple[str, str, int]:
    if config.family is None:
        raise _Usage("the family subcommand needs a 'family' entry in the config")
    walks = families.build_family(config.family)
    report = families.family_profile(
        walks, config.epsilon, config.t_cap, config.kappa, config.family.kind, config.epsilon_neg_log
    )
    body = families.export_report(report, out_fmt)
    lines = [f"{config.family.kind}: {len(report.rows)} instances at eps={config.epsilon:.6g}"
             + (" [contrast only: type grows with dimension]" if report.contrast_only else "")]
    for name, row in zip(report.instances, report.rows):
        ratio = "undefined" if row.ratio is None else f"{row.ratio:.6g}"
        lines.append(f"  {name}: t_eps={row.t_eps} t_1meps={row.t_1meps} ratio={ratio} log_product={row.log_product:.6g}")
    return body, "\n".join(lines), EXIT_OK


def cmd_simulate(config: RunConfig, out_fmt: str) -> tuple[str, str, int]:
    walk = _walk(config)
    sim = config.simulate
    res = empirical_check(SimConfig(walk, sim.t, sim.samples, sim.seed))
    labels = [_k_label(walk, i) for i in range(walk.group.order)]
    within = [bool(abs(e - p) <= b + 1e-15) for e, p, b in zip(res.empirical, res.exact, res.band)]
    if out_fmt == "json":
        body = _json({"walk": walk.label(), "t": sim.t, "samples": sim.samples, "seed": sim.seed,
                      "x": labels, "p_exact": res.exact.tolist(), "p_empirical": res.empirical.tolist(),
                      "band": res.band.tolist(), "max_abs_dev": res.max_abs_dev, "violations": res.violations})
    else:
        body = _csv(("x", "p_exact", "p_empirical", "band", "within"),
                    list(zip(labels, res.exact.tolist(), res.empirical.tolist(), res.band.tolist(), within)))
    summary = (f"{walk.label()}: t={sim.t} S={sim.samples} seed={sim.seed} "
               f"max|dev|={res.max_abs_dev:.3g} violations={res.violations}")
    return body, summary, EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, str], tuple[str, str, int]]] = {
    "spectrum": cmd_spectrum,
    "mix": cmd_mix,
    "thresholds": cmd_thresholds,
    "bounds-check": cmd_bounds_check,
    "family": cmd_family,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelmix", description="Spectra and mixing of lazy walks on finite Abelian groups.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def run(config: RunConfig, out_fmt: str = "csv", out: str | None = None) -> int:
    """Execute ``config.subcommand``; returns the exit status."""
    try:
        body, summary, status = COMMANDS[config.subcommand](config, out_fmt)
    except (AbelmixError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    print(summary, file=sys.stderr)
    return status


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except AbelmixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(replace(config, subcommand=args.subcommand), args.format, args.out)


if __name__ == "__main__":
    sys.exit(main())
