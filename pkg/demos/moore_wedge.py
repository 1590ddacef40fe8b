"""
Moore spaces and their wedges
=============================

Torsion sits in the linear part of the differential.  Localizing away from a
prime kills its torsion, and the self-equivalence group of a wedge splits into
automorphism groups of the homology groups.
"""

from dglie import LocalRing, SplitData, sequence_report
from dglie.dgl import homology_of_generators
from dglie.groups import finite_automorphism_count
from dglie.models import AbelianGroupPresentation, moore_space, moore_wedge

R = LocalRing.invert(2, 3)
G = AbelianGroupPresentation.parse

# a single Moore space M(Z/5, 5)
p = moore_space(G("Z/5"), 4, R)
print(p.names, "linear part d =", p.differential)
print("H(V, d) in degree 3:", homology_of_generators(p, 3).render())
print(sequence_report(SplitData.natural(p)).render())
print("|aut(Z/5)| by enumeration:", finite_automorphism_count([5]))

# inverting 5 makes the same space contractible
q = moore_space(G("Z/5"), 4, LocalRing.invert(5))
print("over Z[1/5]:", q.names, q.warnings)

# a wedge of two blocks
w = moore_wedge([G("Z+Z/5"), G("Z")], 4, R)
for n in sorted(set(w.degrees)):
    print(f"H(V, d) in degree {n}:", homology_of_generators(w, n).render())
top = w.degrees[-1]
print(sequence_report(SplitData(w, top, top + 1)).render())
