"""Kobayashi distance between (1, 0) and (0, 1) in the Lempert domains.

The domains {|z| < 2, |w| < 2, |z w| < eps} pinch as eps -> 0.  A Harnack
argument forces every disc joining the two points to be long, so the lower
bound grows with log(1 / eps); a polynomial disc found by optimisation gives the
matching upper bound.  Two-disc chains can only do better than one disc.

Run with ``python3 demos/lempert_distances.py``.
"""

import math

from kobmetric.budget import DEFAULT_BUDGET
from kobmetric.chains import chain_distance_upper, lempert_lower_bound, one_disc_distance_upper
from kobmetric.domains import lempert

P, Q = (1, 0), (0, 1)


def sweep(ks=(2, 4, 6, 9, 12)):
    b = DEFAULT_BUDGET.with_(degree=20)
    print(" k   lower     one-disc upper")
    for k in ks:
        eps = 2.0**-k
        lo = lempert_lower_bound(eps)[1]
        up = one_disc_distance_upper(lempert(eps), P, Q, b).distance_upper
        print(f"{k:2d}   {lo:.6f}  {up:.6f}")
    print(f"at k = 9 the lower bound is artanh(1/2) = {math.atanh(0.5):.6f}")


def chains(eps=0.25):
    dom = lempert(eps)
    one = one_disc_distance_upper(dom, P, Q).distance_upper
    two = chain_distance_upper(dom, P, Q, 2)
    print(f"eps = {eps}: one disc {one:.6f}, two-disc chain {two.total:.6f}")


if __name__ == "__main__":
    sweep()
    chains()
