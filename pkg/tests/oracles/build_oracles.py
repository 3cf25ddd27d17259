"""Recompute every frozen oracle value and write ``frozen.json``.

Run from the repository root:  python3 tests/oracles/build_oracles.py
The result is committed; tests read it and spot-check a few entries live.
"""

import json
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from oracles.grid import (  # noqa: E402
    all_sign_families,
    canonical_family,
    dense_trees,
    key_string,
    maxmin_on_grid,
    minmax_on_grid,
    sup_norm_on_grid,
)

HERE = os.path.dirname(os.path.abspath(__file__))
FAMILY_STEPS = 1000  # 1e-3 resolution
LAMBDA_STEPS = 10000  # 1e-4 resolution


def powers(ns, points=64, top=0.9, sign=1.0):
    z = np.linspace(0.0, top, points)
    return np.array([(sign * z) ** n for n in ns])


def main():
    t0 = time.time()
    out = {}

    # small games
    out["matching_pennies_minmax"] = minmax_on_grid([[0, 1], [1, 0]], LAMBDA_STEPS)[0]
    out["matching_pennies_maxmin"] = maxmin_on_grid([[0, 1], [1, 0]], LAMBDA_STEPS)[0]
    value, lam = minmax_on_grid([[1, -1], [-1, 1]], LAMBDA_STEPS)
    out["alternating_family_minmax"] = value
    out["alternating_family_maxmin"] = maxmin_on_grid([[1, -1], [-1, 1]], LAMBDA_STEPS)[0]

    # mixture-tree enumeration
    out["dense_t05_n2_d2"] = [list(v) for v in dense_trees(0.5, 2, 2)]
    out["dense_t025_n3_d2"] = [list(v) for v in dense_trees(0.25, 3, 2)]

    # direct formula evaluations
    g = np.array([[5.0], [0.0]])
    xi = np.array([0.0, 1.0])
    f = [[min(g[z, y] + max(xi[x] - xi[z], 0.0) for z in range(2)) for y in range(1)] for x in range(2)]
    out["infconv_example_f"] = f
    out["phi_01"] = [[max(a - b, 0.0) for b in xi] for a in xi]

    # sup-norm minimization on 3-function subsamples
    sub = powers([1, 50, 100])
    out["powers_1_50_100_grid"] = sup_norm_on_grid(sub, LAMBDA_STEPS)[0]
    mixed = powers([1, 2, 3], sign=-1.0)
    best, arg = sup_norm_on_grid(mixed, LAMBDA_STEPS)
    out["neg_powers_1_2_3_grid"] = best
    out["neg_powers_1_2_3_arg"] = arg.tolist()
    out["powers_tail_z09_m50"] = float(np.max(np.abs(0.9 ** np.arange(50, 101))))

    # every {-1,0,1} 3x3 family, one grid value per permutation class
    classes = {}
    for M in all_sign_families():
        key = key_string(canonical_family(M))
        if key not in classes:
            classes[key] = minmax_on_grid(np.array(key.split(","), dtype=float).reshape(3, 3), FAMILY_STEPS)[0]
    out["family_grid_values"] = classes
    out["family_steps"] = FAMILY_STEPS

    with open(os.path.join(HERE, "frozen.json"), "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
    print(f"{len(classes)} family classes, {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
