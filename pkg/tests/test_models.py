import random

import pytest

from dglie.dgl import homology_of_generators
from dglie.errors import DegreeWindowMismatch
from dglie.models import (AbelianGroupPresentation, bracket_square_lie, bracket_square_module,
                          moore_space, moore_wedge, random_dims, random_small, skeletal_chain,
                          sphere_product)
from dglie.ring import LocalRing, ModuleDescription

R = LocalRing.invert(2, 3)


def G(text):
    return AbelianGroupPresentation.parse(text)


class TestGroups:
    def test_parse_and_render(self):
        g = G("Z^2+Z/5+Z/4")
        assert (g.free_rank, g.torsion) == (2, (4, 5))
        assert str(g) == "Z^2+Z/4+Z/5"
        assert G("0").free_rank == 0 and not G("0").torsion

    def test_localize(self):
        assert G("Z^2+Z/5+Z/4").localize(R) == ModuleDescription(2, ((5, 1),))
        assert G("Z/6").localize(R).is_zero

    def test_bad_syntax(self):
        with pytest.raises(ValueError):
            G("Z/")


class TestSphereProduct:
    def test_shape(self):
        p = sphere_product(3, 6, R)
        assert p.names == ["u", "v", "w"] and p.degrees == [3, 6, 10]
        assert repr(p.differential["w"]) == "[u,v]"

    def test_generator_homology_differs_from_lie_homology(self):
        p = sphere_product(3, 6, R)
        assert homology_of_generators(p, 10) == ModuleDescription(1)
        assert p.lie_homology(10).module.is_zero


class TestMoore:
    def test_wedge_reproduces_groups(self):
        p = moore_wedge([G("Z+Z/5"), G("Z")], 4, R)
        assert p.window == (4, 7)
        h = {d: homology_of_generators(p, d) for d in range(1, 9)}
        assert h[4] == G("Z+Z/5").localize(R)
        assert h[6] == ModuleDescription(1)
        assert all(h[d].is_zero for d in h if d not in (4, 6))

    def test_moore_space_torsion(self):
        p = moore_space(G("Z/9"), 5, LocalRing.invert(2))
        assert homology_of_generators(p, 4) == ModuleDescription(0, ((3, 2),))

    def test_invertible_torsion_warns(self):
        p = moore_space(G("Z/2"), 4, LocalRing.invert(2))
        assert p.is_empty
        assert any("vanishes" in w for w in p.warnings)

    def test_window_too_small(self):
        with pytest.raises(DegreeWindowMismatch):
            moore_wedge([G("Z"), G("Z"), G("Z")], 4, R)


class TestSkeletalChain:
    def test_stages(self):
        c = skeletal_chain(G("Z"), 5, R, j=2)
        assert len(c) == 2
        assert [(s.n, s.q) for s in c] == [(5, 6), (10, 11)]
        assert c[-1].top == ["t1", "t2"]
        assert all(v.is_zero for v in c.vanishing.values())

    def test_intermediate_cells(self):
        c = skeletal_chain(G("Z"), 5, R, intermediate={7: 1}, j=1)
        assert [(s.n, s.q) for s in c] == [(5, 6), (7, 8), (10, 11)]
        assert c[1].top == ["c7_1"]

    def test_intermediate_out_of_range(self):
        with pytest.raises(DegreeWindowMismatch):
            skeletal_chain(G("Z"), 5, R, intermediate={6: 1})

    def test_empty(self):
        assert len(skeletal_chain(G("0"), 5, R)) == 0


class TestBracketSquare:
    @pytest.mark.parametrize("group, m, expected", [
        ("Z", 5, "R"), ("Z", 4, "0"), ("Z+Z/5", 5, "R ⊕ Z/5 ⊕ Z/5"), ("Z/5", 4, "0"),
        ("Z/5", 5, "Z/5"), ("Z^2", 4, "R"), ("Z^2", 5, "R^3"),
    ])
    def test_tensor_route_matches_lie_route(self, group, m, expected):
        a = bracket_square_module(G(group), m, R)
        assert a.render() == expected
        assert bracket_square_lie(G(group), m, R) == a


class TestRandom:
    def test_valid_and_deterministic(self):
        rng = random.Random(0)
        for seed in range(20):
            dims = random_dims(rng, 5)
            p = random_small(seed, dims, R)
            assert p.report.valid
            assert random_small(seed, dims, R).differential == p.differential
            assert all(not d for d in linear_blocks(p))


def linear_blocks(p):
    from dglie.dgl import linear_part
    lp = linear_part(p)
    return [x for d in set(p.degrees) for row in lp.matrix(d) for x in row]
