"""
Self-equivalences of a product of two spheres
=============================================

Builds the three-generator model of S^4 x S^7 (Lie degrees 3 and 6), looks at
its homology, and reads off the self-equivalence group and its homology-trivial
subgroup.
"""

from dglie import LocalRing, SplitData, sequence_report, infiniteness_check
from dglie.models import sphere_product

R = LocalRing.invert(2, 3, 5)
p = sphere_product(3, 6, R)
print(p.names, p.degrees)
print("dw =", p.differential["w"])

# [u,v] is a boundary, so the Lie homology is just u and v in low degrees
for n in (3, 6, 9, 10):
    print(f"H_{n} =", p.lie_homology(n).module.render())

# split off the top generator w and run the exact sequence
s = SplitData.natural(p)
print(sequence_report(s).render())
print(sequence_report(s, pointed=True).render())

# the same group for (3, 4): the top class [u,v] is now even
s = SplitData.natural(sphere_product(3, 4, R))
print(sequence_report(s).render())
print(sequence_report(s, pointed=True).render())

# scaling u and v opposite ways gives infinitely many non-homotopic maps
v = infiniteness_check(p)
print(v.status, "-", v.family)
for w in v.witnesses:
    print("  ", w)
