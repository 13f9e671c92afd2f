"""Regenerate tests/fixtures/family_fixture.json by direct convolution.

Thresholds come from a forward scan of ``evolve`` (no characters, no FFT),
so the frozen values are independent of the spectral code path.

    python3 tests/oracles/pin_family_fixture.py
"""

import json
import math
from pathlib import Path

import numpy as np

from abelmix.group_core import evolve, make_group, make_walk, point_mass

EPS = 0.05
LEVELS = (EPS, 1 - EPS, 0.5)
OUT = Path(__file__).resolve().parents[1] / "fixtures" / "family_fixture.json"


def scan(walk, levels, t_cap):
    n = walk.group.order
    dist = point_mass(walk.group)
    found = {}
    t = 0
    while len(found) < len(levels):
        d = float(np.abs(dist - 1.0 / n).sum())
        for level in levels:
            if level not in found and d < level:
                found[level] = t - 1
        if t >= t_cap:
            raise RuntimeError("cap")
        dist = evolve(walk, dist, 1)
        t += 1
    return [found[level] for level in levels]


def main():
    rows = {"cycle_single": [], "hypercube": []}
    for e in range(6, 13):
        n = 2**e
        walk = make_walk(make_group([n]), [1])
        t_eps, t_1m, t_half = scan(walk, LEVELS, 10 * n * n)
        rows["cycle_single"].append({"N": n, "t_eps": t_eps, "t_1meps": t_1m, "t_half": t_half})
        print(n, t_eps, t_1m, t_half, flush=True)
    for d in range(4, 12):
        walk = make_walk(make_group([2] * d), [[int(i == j) for i in range(d)] for j in range(d)])
        t_eps, t_1m, t_half = scan(walk, LEVELS, 10 * d * (math.log(d) + 3))
        rows["hypercube"].append({"d": d, "N": 2**d, "t_eps": t_eps, "t_1meps": t_1m, "t_half": t_half})
        print(d, t_eps, t_1m, t_half, flush=True)
    OUT.write_text(json.dumps({"epsilon": EPS, **rows}, indent=2) + "\n")


if __name__ == "__main__":
    main()
