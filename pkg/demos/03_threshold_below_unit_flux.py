"""Ground state against the four comparison thresholds when the flux is below one.

For F < 1 the lowest magnetic eigenvalue is bounded below by the smallest
ground state among the two auxiliary 2-D operators and l, l~.
"""
from maglap import FieldProfile
from maglap.verify import threshold_bound

print("%6s %10s %10s %10s %10s %10s %10s" % ("B0", "lambda1", "outer", "inner", "l", "ltilde",
                                               "margin"))
for B0 in (0.0, 0.5, 1.0, 1.5, 1.9, 1.99):
    rep = threshold_bound(FieldProfile.constant(B0))
    print("%6.2f %10.6f %10.6f %10.6f %10.6f %10.6f %10.2e" % (
        B0, rep.lambda1, rep.outer, rep.inner, rep.l, rep.ltilde, rep.margin))

# the inner n=0 operator is h_0 itself, so the bound is attained
