"""
When is the self-equivalence group infinite?
============================================

Runs the infiniteness checker over a handful of random presentations with
zero linear part, then shows two small models where other tools matter: a
kernel that only looks big, and the odd-square cycle in CP^2.
"""

import random
from pathlib import Path

from dglie import LocalRing, SplitData, load, infiniteness_check
from dglie.models import random_dims, random_small
from dglie.selfeq import effective_kernel, h4_decomposition, kernel_module

R = LocalRing.invert(2, 3, 5)
rng = random.Random(7)
for seed in range(5):
    p = random_small(seed, random_dims(rng, 4), R)
    v = infiniteness_check(p)
    print({g.name: g.degree for g in p.generators}, "->", v.status, "|", v.criterion)

data = Path(__file__).parent / "data"

# Hom counts two classes, but both are killed by self-homotopies of L(x, y)
c = load(data / "counter.dgl")
s = SplitData.natural(c)
print("Hom(V_5, H_5) =", kernel_module(s).render())
print("effective kernel =", effective_kernel(s).module.render())

# H_4 of L(a, x) with dx = [a,a] is spanned by [a,x]
d = h4_decomposition(load(data / "cp2.dgl"))
print("direct H_4 =", d.direct.render())
for name, m in d.components.items():
    print(f"  {name}: {m.render()}  (read literally: {d.literal[name].render()})")
