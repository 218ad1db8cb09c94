"""Witt vectors over F_p[t^(1/p^oo)] and arithmetic modulo z = p - [t]."""

from reified import witt
from reified.witt import PerfectElement, teichmuller

for p in (2, 3):
    N = 3
    z = witt.standard_primitive(p, N)
    t = PerfectElement.monomial(p, 1)
    print(f"p={p}: z = p - [t] has coordinates {[c.to_json() for c in z.coords]}")
    print("    primitive of degree one:", witt.check_primitive_degree_one(z).ok)
    print("    p == [t] mod z:", witt.theta_equal(witt.witt_p(p, N), teichmuller(t, N), z))

    # sums of Teichmuller lifts need not be Teichmuller lifts, but mod z the
    # p-power limit over compatible systems settles
    xs = witt.teichmuller_system(t, 3, N)
    ys = witt.teichmuller_system(t * t, 3, N)
    res = witt.tilt_add(xs, ys, z, 2)
    print("    tilt sum stability by component:", res.stable)
