#!/usr/bin/env python3
"""Finding the most polarized photon statistics at fixed mean photon number.

Solves the convex quadratic program

    minimize sum_N p_N^2/(N+1)   subject to   sum p_N = 1, sum N p_N = nbar,
                                              p_N >= 0,

whose optimum is an inverted parabola on N = 0..2*nbar, and inspects the
solver's optimality evidence.
"""

import numpy as np

import polmax as pm


def show_solution(nbar, dim):
    problem = pm.build_problem(nbar, dim)
    solution = pm.solve(problem)
    probs = solution.dist.probs
    support = np.flatnonzero(probs > 1e-10)
    print(f"mean = {nbar}, truncation D = {dim}")
    print(f"  support: N = {support.min()}..{support.max()} "
          f"({pm.support_size(solution)} nonzero components)")
    bar_scale = 40.0 / probs.max()
    for n in support:
        print(f"  p[{n:2d}] = {probs[n]:.6f} {'#' * int(round(probs[n] * bar_scale))}")
    res = solution.kkt_residuals
    print(f"  multipliers lam = ({solution.multipliers[0]:.6f}, {solution.multipliers[1]:.6f}), "
          f"{solution.iterations} active-set iterations")
    print(f"  KKT residuals: primal {res.primal_eq:.1e}, stationarity {res.stationarity:.1e}, "
          f"dual {res.dual_feasibility:.1e}, complementarity {res.complementarity:.1e}")
    degree = pm.degree_from_solution(solution).value
    closed = pm.degree_optimal_closed_form(nbar).value
    print(f"  degree from QP {degree:.12f} vs closed form {closed:.12f}")
    print()


def main():
    print("The optimum is a symmetric parabola around the mean, spanning")
    print("0..2*nbar, so its variance grows like nbar^2 -- far noisier than")
    print("any Poissonian source of the same brightness.\n")
    for nbar in (1.0, 4.0):
        show_solution(nbar, 25)

    print("Off the half-integer lattice the support clips and the parabola")
    print("becomes slightly asymmetric (here the smallest case, mean 0.2):")
    show_solution(0.2, 4)

    print("Mandel Q of the optimum grows linearly, Q = (nbar - 3)/5 on the")
    print("half-integer lattice, crossing zero (Poisson-like noise) at nbar = 3:")
    for i in range(1, 19):
        nbar = i / 2.0
        q = pm.mandel_q(pm.solve(pm.build_problem(nbar, 25)).dist)
        marker = "  <- Poissonian" if abs(q) < 1e-12 else ""
        print(f"  nbar = {nbar:3.1f}:  Q = {q:+.3f}{marker}")

    print()
    print("A highly squeezed vacuum (twin beams) is nearly optimal once the")
    print("beam is bright; both shortfalls decay like log(nbar)/nbar^2:")
    for nbar in (10.0, 100.0, 1000.0):
        twin = pm.degree_twin_beam_exact(pm.twin_beam_xi_for_mean(nbar)).value
        optimal = pm.degree_optimal_closed_form(nbar).value
        print(f"  nbar = {nbar:6.0f}:  twin {1-twin:.3e} vs optimal {1-optimal:.3e} short of 1")


if __name__ == "__main__":
    main()
