"""Zero field: the disk's Dirichlet eigenvalues are squared Bessel zeros.

With B = 0 every angular mode is a Bessel problem, so the solver can be
checked against an independent oracle before any magnetic field is switched on.
"""
import numpy as np

from maglap import FieldProfile, magnetic_spectrum, riesz_mean, zero_field_oracle

lam = 60.0
field = FieldProfile.zero()

spectrum = magnetic_spectrum(field, lam)
oracle = np.array(zero_field_oracle(1.0, lam))
print("window of angular modes:", spectrum.window)
print("eigenvalues below %g: solver %d, oracle %d" % (lam, len(spectrum.eigenvalues), len(oracle)))

for got, want in zip(spectrum.eigenvalues, oracle):
    print("  %14.10f  %14.10f  rel err %.1e" % (got, want, abs(got - want) / want))

# raw grids against the extrapolated value
mode0 = spectrum.modes[len(spectrum.modes) // 2]
print("m=0 ground state: N=%d %.10f, 2N %.10f, extrapolated %.10f, exact %.10f"
      % (mode0.grid_n, mode0.coarse[0], mode0.fine[0], mode0.eigenvalues[0], oracle[0]))

# Riesz means follow the same eigenvalues
for sigma in (0.0, 1.0, 1.5, 2.0):
    print("sigma=%.1f  solver %.8f  oracle %.8f" % (
        sigma, riesz_mean(spectrum, lam, sigma), sum((lam - v) ** sigma for v in oracle)))
