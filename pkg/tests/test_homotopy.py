import random

import pytest

from dglie.dgl import DglMorphism, DglPresentation, scaling_morphism
from dglie.homotopy import (HomotopyWitness, boundary_witness, build_cylinder, e_theta,
                            e_theta_morphism, exp_theta_series, flow_witness, homotopic,
                            homotopic_pair, normalize_kernel_element, reflexivity_witness,
                            theta, verify_homotopy)
from dglie.models import sphere_product
from dglie.ring import LocalRing

R = LocalRing.invert(2, 3, 5)


@pytest.fixture
def sphere():
    return sphere_product(3, 6, R)


@pytest.fixture
def cp2():
    return DglPresentation(R, [("a", 1), ("x", 3)], {"x": ("a", "a")})


class TestCylinder:
    def test_generators(self, sphere):
        c = build_cylinder(sphere)
        assert len(c.presentation.generators) == 9
        assert c.presentation.degree_of(c.s_name["u"]) == 4
        assert c.presentation.degree_of(c.prime_name["w"]) == 10

    def test_empty(self):
        c = build_cylinder(DglPresentation(R, []))
        assert c.presentation.is_empty

    def test_differentials(self, sphere):
        c = build_cylinder(sphere)
        assert c.D(c.s("u")) == c.prime("u")
        assert not c.D(c.prime("u"))
        assert c.D(c.v("w")) == c.presentation.algebra.bracket(c.v("u"), c.v("v"))

    def test_fresh_names_avoid_collisions(self):
        p = DglPresentation(R, [("u", 3), ("su", 4)])
        c = build_cylinder(p)
        assert len(set(c.presentation.names)) == 6


class TestSuspension:
    def test_generators(self, sphere):
        c = build_cylinder(sphere)
        assert c.S(c.v("v")) == c.s("v")
        assert not c.S(c.s("v"))
        assert not c.S(c.prime("v"))

    def test_bracket_sign(self, sphere):
        c = build_cylinder(sphere)
        A = c.presentation.algebra
        v, w = c.v("v"), c.v("w")
        # |v| = 6 is even so no sign appears
        assert c.S(A.bracket(v, w)) == A.bracket(c.s("v"), w) + A.bracket(v, c.s("w"))
        u = c.v("u")
        assert c.S(A.bracket(u, v)) == A.bracket(c.s("u"), v) - A.bracket(u, c.s("v"))

    def test_theta_commutes_with_D(self, cp2):
        c = build_cylinder(cp2)
        A = c.presentation.algebra
        rng = random.Random(4)
        for _ in range(30):
            x = A.zero()
            deg = rng.randint(1, 8)
            for m in A.basis(deg):
                x = x + rng.randint(-2, 2) * A.mono(m)
            assert theta(c, c.D(x)) == c.D(theta(c, x))

    def test_e_theta_examples(self, sphere, cp2):
        c = build_cylinder(sphere)
        assert e_theta(c, "u") == c.v("u") + c.prime("u")
        c = build_cylinder(cp2)
        A = c.presentation.algebra
        # SD(x) = 2[sa,a], (SD)^2(x) = S(2[a',a]) = -2[a',sa], (SD)^3(x) = 0
        want = c.v("x") + c.prime("x") + 2 * A.bracket(c.s("a"), c.v("a")) \
            - A.bracket(c.prime("a"), c.s("a"))
        assert e_theta(c, "x") == want

    def test_e_theta_is_exp_theta_on_generators(self, cp2, sphere):
        # S^2 = 0 and theta(v') = 0, so exp(theta)(v) = v + v' + sum (SD)^n v / n!
        for p in (cp2, sphere):
            c = build_cylinder(p)
            for n in p.names:
                assert e_theta(c, n) == exp_theta_series(c, c.v(n))

    def test_e_theta_commutes_with_D(self, cp2):
        f = e_theta_morphism(build_cylinder(cp2))
        assert not f.chain_defect()


class TestWitnesses:
    def test_reflexivity(self, sphere):
        w = reflexivity_witness(DglMorphism.identity(sphere))
        assert verify_homotopy(w)

    def test_zero_flow_is_reflexivity(self, cp2):
        w = flow_witness(DglMorphism.identity(cp2), {})
        assert verify_homotopy(w)
        assert w.alpha_prime == w.alpha

    def test_nontrivial_flow(self):
        p = DglPresentation(R, [("a", 1), ("b", 2), ("x", 3), ("y", 4)],
                            {"x": ("a", "a"), "y": ("a", "b")})
        h = {"a": p.gen("b")}
        w = flow_witness(DglMorphism.identity(p), h)
        cert = verify_homotopy(w)
        assert cert, str(cert)
        assert w.alpha_prime != w.alpha

    def test_mutation_is_caught(self):
        p = DglPresentation(R, [("a", 1), ("b", 2), ("x", 3)], {"x": ("a", "a")})
        w = flow_witness(DglMorphism.identity(p), {"a": p.gen("b")})
        assert verify_homotopy(w)
        c = w.cylinder
        vals = dict(w.F.values)
        sa = c.s_name["a"]
        vals[sa] = -vals[sa]
        F = DglMorphism(c.presentation, p, vals, check=False)
        cert = verify_homotopy(HomotopyWitness(c, F, w.alpha, w.alpha_prime))
        assert not cert
        assert cert.generator is not None and "!=" in str(cert)

    def test_wrong_endpoint_is_caught(self, sphere):
        ident = DglMorphism.identity(sphere)
        w = reflexivity_witness(ident)
        other = scaling_morphism(sphere, {"u": 2, "v": 1, "w": 2})
        cert = verify_homotopy(HomotopyWitness(w.cylinder, w.F, w.alpha, other))
        assert not cert and "alpha'" in cert.reason

    def test_boundary_witness(self):
        p = DglPresentation(R, [("u", 3), ("v", 6), ("z", 9), ("w", 10)], {"w": ("u", "v")})
        beta = DglMorphism.identity(p)
        vals = dict(beta.values)
        vals["z"] = p.gen("z") + p.algebra.bracket(p.gen("u"), p.gen("v"))
        beta_prime = DglMorphism(p, p, vals)
        w = boundary_witness(beta, beta_prime, 9)
        assert w is not None and verify_homotopy(w)
        assert homotopic(beta, beta_prime, 9)[0] == "homotopic"

    def test_boundary_witness_rejects_non_boundary(self):
        T = DglPresentation(R, [("u", 3), ("v", 6), ("w", 6)])
        beta = DglMorphism.identity(T)
        vals = dict(beta.values)
        vals["w"] = T.gen("w") + T.gen("v")
        assert boundary_witness(beta, DglMorphism(T, T, vals), 6) is None
        assert homotopic(beta, DglMorphism(T, T, vals))[0] == "undetermined"

    def test_homotopic_equal_maps(self, sphere):
        status, w = homotopic(DglMorphism.identity(sphere), DglMorphism.identity(sphere))
        assert status == "homotopic" and verify_homotopy(w)

    def test_normalization(self):
        p = DglPresentation(R, [("a", 1), ("b", 2), ("x", 3), ("y", 4), ("z", 5)],
                            {"x": ("a", "a"), "z": ("a", "x")})
        alpha, low = homotopic_pair(p, 5, {"a": p.gen("b")})
        assert verify_homotopy(low)
        beta, G = normalize_kernel_element(alpha, low, 5)
        cert = verify_homotopy(G)
        assert cert, str(cert)
        for name in ("a", "b", "x", "y"):
            assert beta.values[name] == p.gen(name)
