"""Riesz mean over the classical phase-space bound as lambda grows.

The ratio tends to one in the semiclassical limit; a magnetic field shifts
it but cannot push it above one for sigma >= 3/2.
"""
import numpy as np

from maglap import FieldProfile, berezin_rhs, magnetic_spectrum, riesz_mean

sigma = 1.5
lams = np.geomspace(20.0, 800.0, 6)
fields = [FieldProfile.zero(), FieldProfile.constant(4.0), FieldProfile.boundary_blowup(1.0, 0.5)]

print("%10s" % "lambda" + "".join("%16s" % f.descriptor for f in fields))
for lam in lams:
    row = [riesz_mean(magnetic_spectrum(f, lam), lam, sigma) / berezin_rhs(sigma, lam, f.r0)
           for f in fields]
    print("%10.2f" % lam + "".join("%16.5f" % v for v in row))
