import random
from fractions import Fraction
from itertools import product

import pytest

from dglie.errors import UndeclaredGenerator
from dglie.freelie import (FreeLieAlgebra, basis, dimension, embed_tree, is_lyndon,
                           lyndon_words, normal_form, random_tree, tensor_embed, tree_degree)


def names(alg, degree):
    return [alg.format_monomial(m) for m in alg.basis(degree)]


class TestBasis:
    def test_single_odd_generator(self):
        A = FreeLieAlgebra([("u", 3)])
        assert names(A, 6) == ["[u,u]"]
        assert names(A, 9) == []
        assert names(A, 3) == ["u"]

    def test_two_degree_one_generators(self):
        A = FreeLieAlgebra([("u", 1), ("v", 1)])
        assert sorted(names(A, 2)) == ["[u,u]", "[u,v]", "[v,v]"]

    def test_dimension_examples(self):
        assert dimension([("u", 3), ("v", 6)], 10) == 0
        assert dimension([("u", 3)], 6) == 1
        assert dimension([], 4) == 0

    def test_even_generator_has_no_square(self):
        A = FreeLieAlgebra([("u", 2)])
        assert A.basis(4) == []

    def test_lyndon_words(self):
        words = list(lyndon_words(2, 4))
        assert all(is_lyndon(w) for w in words)
        # necklace count for two letters: 2, 1, 2, 3
        counts = [sum(1 for w in words if len(w) == n) for n in range(1, 5)]
        assert counts == [2, 1, 2, 3]

    def test_generators_ordered_by_degree_then_declaration(self):
        A = FreeLieAlgebra([("b", 2), ("a", 1), ("c", 1)])
        assert A.names == ["a", "c", "b"]


class TestNormalForm:
    def test_antisymmetry_sign(self):
        A = FreeLieAlgebra([("u", 3), ("v", 6)])
        assert A.normal_form(("v", "u")) == -A.normal_form(("u", "v"))

    def test_even_square_vanishes(self):
        assert not normal_form([("u", 2)], ("u", "u"))

    def test_odd_triple_vanishes(self):
        assert not normal_form([("u", 3)], ("u", ("u", "u")))

    def test_antisymmetry_fold(self):
        A = FreeLieAlgebra([("u", 3), ("v", 6)])
        x = A.normal_form([(2, ("u", "v")), (1, ("v", "u"))])
        assert x == A.normal_form(("u", "v"))

    def test_undeclared(self):
        with pytest.raises(UndeclaredGenerator):
            normal_form([("u", 1)], ("u", "w"))

    def test_graded_antisymmetry_and_jacobi(self):
        gens = [("a", 1), ("b", 2), ("c", 3)]
        A = FreeLieAlgebra(gens)
        deg = dict(gens)
        monos = [m for d in range(1, 6) for m in A.basis(d)]
        elems = [A.mono(m) for m in monos]
        degs = [A.mono_degree(m) for m in monos]
        for x, dx in zip(elems, degs):
            for y, dy in zip(elems, degs):
                if dx + dy > 10:
                    continue
                sign = -1 if dx * dy % 2 else 1
                assert not (A.bracket(x, y) + sign * A.bracket(y, x))
        small = [(x, d) for x, d in zip(elems, degs) if d <= 3]
        for (x, dx), (y, dy), (z, dz) in product(small, repeat=3):
            if dx + dy + dz > 10:
                continue
            # (-1)^{|x||z|}[x,[y,z]] + cyclic = 0
            j = ((-1) ** (dx * dz)) * A.bracket(x, A.bracket(y, z)) \
                + ((-1) ** (dy * dx)) * A.bracket(y, A.bracket(z, x)) \
                + ((-1) ** (dz * dy)) * A.bracket(z, A.bracket(x, y))
            assert not j
        assert deg  # generators used

    def test_idempotent_and_linear(self):
        rng = random.Random(3)
        gens = [("x", 1), ("y", 2)]
        A = FreeLieAlgebra(gens)
        for _ in range(50):
            t1 = random_tree(["x", "y"], rng.randint(1, 5), rng)
            t2 = random_tree(["x", "y"], rng.randint(1, 5), rng)
            n1 = A.normal_form(t1)
            assert A.normal_form(n1) == n1
            if tree_degree(t1, dict(gens)) == tree_degree(t2, dict(gens)):
                lhs = A.normal_form([(3, t1), (Fraction(-1, 2), t2)])
                assert lhs == 3 * n1 - Fraction(1, 2) * A.normal_form(t2)

    def test_rendering(self):
        A = FreeLieAlgebra([("u", 3), ("v", 6)])
        assert repr(A.normal_form(("v", "u"))) == "-[u,v]"
        assert repr(A.zero()) == "0"


class TestTensorEmbedding:
    def test_even_bracket(self):
        A = FreeLieAlgebra([("u", 2), ("v", 4)])
        assert tensor_embed(A.normal_form(("u", "v"))) == {("u", "v"): 1, ("v", "u"): -1}

    def test_odd_square(self):
        A = FreeLieAlgebra([("u", 1)])
        assert tensor_embed(A.normal_form(("u", "u"))) == {("u", "u"): 2}

    def test_zero(self):
        assert tensor_embed(FreeLieAlgebra([("u", 1)]).zero()) == {}

    def test_random_expressions_match(self):
        rng = random.Random(11)
        for _ in range(200):
            gens = [(f"g{i}", rng.randint(1, 4)) for i in range(rng.randint(1, 3))]
            A = FreeLieAlgebra(gens)
            tree = random_tree([g for g, _ in gens], rng.randint(1, 6), rng)
            want = {w: c for w, c in embed_tree(tree, dict(gens)).items() if c}
            assert tensor_embed(A.normal_form(tree)) == want

    def test_module_level_basis(self):
        assert len(basis([("u", 1), ("v", 1)], 3)) == 2
