#!/usr/bin/env python3
"""Regenerate the three reference data tables through the library API.

Equivalent to `polmax figures`: fig1.csv scans the optimal distribution at
small means, fig2.csv traces its Mandel Q parameter, and fig3.csv tabulates
the parabolas for integer means 1..9.  Written here step by step to show
the underlying calls.
"""

import csv
import math
import sys

import polmax as pm


def write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main(outdir="."):
    rows = []
    for i in range(1, 6):  # means 0.2 .. 1.0 on a D = 4 truncation
        nbar = i / 5.0
        solution = pm.solve(pm.build_problem(nbar, 4))
        rows.extend((nbar, n, f"{p:.12g}") for n, p in enumerate(solution.dist.probs))
    write_rows(f"{outdir}/fig1.csv", ("nbar", "N", "p"), rows)

    rows = []
    for i in range(1, 46):  # means 0.2 .. 9.0
        nbar = i / 5.0
        solution = pm.solve(pm.build_problem(nbar, int(math.ceil(2 * nbar)) + 4))
        rows.append((nbar, f"{pm.mandel_q(solution.dist):.12g}"))
    write_rows(f"{outdir}/fig2.csv", ("nbar", "q"), rows)

    rows = []
    for nbar in range(1, 10):  # integer means at the common D = 25 truncation
        solution = pm.solve(pm.build_problem(float(nbar), 25))
        rows.extend((float(nbar), n, f"{p:.12g}") for n, p in enumerate(solution.dist.probs))
    write_rows(f"{outdir}/fig3.csv", ("nbar", "N", "p"), rows)


if __name__ == "__main__":
    main(*sys.argv[1:2])
