"""Margins of the moment inequality for a few fields.

The right-hand side is assembled from two auxiliary Schrodinger traces, the
traces of the one-dimensional operators l and l~, and a term proportional to
the integer part of the flux. Its sign convention for the l-trace depends on
whether the flux is an integer, so one integer-flux field is included.
"""
from maglap import FieldProfile, check_theorem

fields = [
    FieldProfile.constant(1.0),          # flux 1/2
    FieldProfile.constant(2.0),          # flux 1, integer branch
    FieldProfile.power_law(3.0, 1.0),    # flux 1, integer branch
    FieldProfile.boundary_blowup(1.0, 0.5),  # flux 4/3, B -> infinity at the wall
]
sigma = 1.5
lams = [10.0, 30.0, 100.0]

print("%-14s %6s %-15s %12s %12s %12s %10s" % (
    "field", "lambda", "branch", "lhs", "rhs", "margin", "verdict"))
for field in fields:
    for r in check_theorem(field, sigma, lams):
        print("%-14s %6g %-15s %12.4f %12.4f %12.4f %10s" % (
            r.field, r.lam, r.breakdown.branch.value, r.lhs, r.breakdown.rhs_total,
            r.margin, r.verdict.value))

# the itemized right-hand side of one point
r = check_theorem(FieldProfile.constant(2.0), 2.0, [20.0])[0]
for name, value in r.breakdown.terms().items():
    print("  %-7s %12.6f" % (name, value))
print("  berezin %11.6f  (classical bound, for comparison)" % r.breakdown.berezin_rhs)
