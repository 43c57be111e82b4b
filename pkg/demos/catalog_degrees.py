#!/usr/bin/env python3
"""Degrees of polarization for the usual catalog of two-mode states.

Walks through each state family, computes the Hilbert-Schmidt degree both
from its photon-number distribution (series sum) and from the matching
closed form, and prints them side by side so the agreement is visible.
"""

import math

import polmax as pm


def main():
    print("Pure n-photon states: every pure state with exactly n photons has")
    print("degree n/(n+1), independent of how the photons split between modes.")
    for n in (0, 1, 5, 50):
        series = pm.hs_degree(pm.n_photon_distribution(n)).value
        closed = pm.degree_pure_n_photon(n).value
        print(f"  n = {n:3d}:  series {series:.12f}   closed {closed:.12f}")

    print()
    print("Quadrature coherent light (Poissonian photon number): the sum over")
    print("the Poisson weights collapses to a scaled modified Bessel function.")
    for nbar in (0.5, 1.0, 5.0, 10.0):
        dist = pm.poisson_distribution(nbar, pm.poisson_dim_for_tail(nbar))
        series = pm.hs_degree(dist).value
        closed = pm.degree_coherent_closed_form(nbar).value
        print(
            f"  mean = {nbar:5.1f}:  series {series:.12f}   bessel {closed:.12f}"
            f"   (truncated at D = {dist.truncation_dim}, tail < {dist.tail_bound:.1e})"
        )

    print()
    print("Thermal light (geometric distribution) and twin beams (two-mode")
    print("squeezed vacuum, photons in pairs): both sums have closed forms.")
    for nbar in (1.0, 5.0, 20.0):
        xi = pm.twin_beam_xi_for_mean(nbar)
        thermal = pm.degree_thermal_series(nbar).value
        twin = pm.degree_twin_beam_exact(xi).value
        optimal = pm.degree_optimal_closed_form(nbar).value
        print(
            f"  mean = {nbar:5.1f}:  thermal {thermal:.10f}   twin {twin:.10f}"
            f"   optimal bound {optimal:.10f}"
        )

    print()
    print("An su(2) coherent state is an n-photon state with binomial")
    print("amplitudes; its coefficients stay normalized at any sphere point:")
    coeffs = pm.su2_coherent_coefficients(20, 1.1, 2.3)
    norm = sum(abs(c) ** 2 for c in coeffs)
    print(f"  n = 20, theta = 1.1, phi = 2.3:  sum |C_k|^2 = {norm:.15f}")

    print()
    print("The unverified Bures-metric reference value for twin beams,")
    print("1 - 1/mean^2, shows the same inverse-square approach to unity:")
    for nbar in (2.0, 10.0):
        print(f"  mean = {nbar:5.1f}:  bures reference {pm.bures_degree_twin_reference(nbar):.6f}")

    print()
    nbar = 100.0
    coh = 1.0 - pm.degree_coherent_closed_form(nbar).value
    print("Shortfalls 1 - degree at mean 100, showing the hierarchy:")
    print(f"  pure      {1.0 - pm.degree_pure_n_photon(100).value:.3e}   (~ 1/mean)")
    print(f"  coherent  {coh:.3e}   (~ 1/mean^1.5; {1/(2*math.sqrt(math.pi)*1000):.3e} predicted)")
    print(f"  thermal   {1.0 - pm.degree_thermal_series(nbar).value:.3e}   (~ log(mean/2)/mean^2)")
    print(f"  optimal   {1.0 - pm.degree_optimal_closed_form(nbar).value:.3e}   (~ 3/(4 mean^2))")


if __name__ == "__main__":
    main()
