#!/usr/bin/env python3
"""How fast each state family approaches full polarization.

Tabulates the shortfall 1 - degree against the mean photon number and
estimates the power-law exponents from log-log slopes: 1/nbar for pure
n-photon states, 1/nbar^1.5 for coherent light, 1/nbar^2 for the optimum.
"""

import numpy as np

import polmax as pm


def shortfalls(ns):
    pure = np.array([1.0 - pm.degree_pure_n_photon(int(n)).value for n in ns])
    coherent = np.array([1.0 - pm.degree_coherent_closed_form(float(n)).value for n in ns])
    optimal = np.array([1.0 - pm.degree_optimal_closed_form(float(n)).value for n in ns])
    return pure, coherent, optimal


def fitted_slope(ns, values):
    return float(np.polyfit(np.log(ns), np.log(values), 1)[0])


def main():
    ns = np.arange(2.0, 21.0)
    pure, coherent, optimal = shortfalls(ns)

    print("Shortfall 1 - degree by mean photon number:")
    print(f"{'nbar':>6} {'pure':>12} {'coherent':>12} {'optimal':>12}")
    for i, n in enumerate(ns):
        print(f"{n:6.0f} {pure[i]:12.3e} {coherent[i]:12.3e} {optimal[i]:12.3e}")

    print()
    print("Least-squares log-log slopes over nbar = 2..20 (still transient,")
    print("pulled above the limiting exponents by the small-nbar end):")
    for label, values in (("pure", pure), ("coherent", coherent), ("optimal", optimal)):
        print(f"  {label:9s} {fitted_slope(ns, values):+.3f}")

    big = np.arange(100.0, 201.0)
    print()
    print("The same fit over nbar = 100..200 lands on the exponents:")
    for label, values, target in (
        ("pure", 1.0 / (big + 1.0), -1.0),
        ("coherent", np.array([1.0 - pm.degree_coherent_closed_form(n).value for n in big]), -1.5),
        ("optimal", np.array([1.0 - pm.degree_optimal_closed_form(n).value for n in big]), -2.0),
    ):
        print(f"  {label:9s} {fitted_slope(big, values):+.4f}   (limit {target})")

    print()
    print("Continuum shape of the optimal statistics: rescaled to x = N/(2 nbar),")
    print("the parabola becomes the Beta(2,2) arc 3 x (1-x) / nbar. At nbar = 50:")
    probs = pm.optimal_distribution(50.0).probs
    for n in (10, 25, 50, 75, 90):
        x = n / 100.0
        print(f"  N = {n:3d} (x = {x:.2f}):  p_N = {probs[n]:.6f}  "
              f"beta arc = {pm.beta22_density(x, 50.0):.6f}")


if __name__ == "__main__":
    main()
