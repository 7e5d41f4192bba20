"""Twisted tensor model of B_0, gated against group-algebra convolution."""

import random

import numpy as np
import pytest

from mfblocks.characters import make_char
from mfblocks.groups import h_elem, p_elem, params_make
from mfblocks.groupalg import (
    centralizes_block_H, ga_basis, ga_from_terms, ga_mul, ga_scale,
)
from mfblocks.linalg import gf_rank
from mfblocks.quiver import (
    label_make, qa_add, qa_basis, qa_isotypic, qa_mul, qa_vertex, qa_zero,
)
from mfblocks.twisted import (
    b0_iota, b0_pi, b0_pi_inv, b0_pi_product, tt_add, tt_arrow, tt_eps,
    tt_from_json, tt_from_terms, tt_is_zero, tt_mul, tt_radical_degree,
    tt_scale, tt_tilde, tt_to_json, tt_unit, tt_zero,
)
from mfblocks.twisted import _tt_ctx


class Simple:
    """Bare (phi, psi) vertex-class holder for tt_eps."""

    def __init__(self, phi, psi):
        self.phi = phi
        self.psi = psi


def random_label(P, side, rng, max_deg):
    m = [0] * (P.p - 1)
    for _ in range(max_deg):
        s = rng.randrange(1, P.p)
        if m[s - 1] < P.ell - 1:
            m[s - 1] += 1
    return label_make(P, side, rng.randrange(P.p), m)


def random_tt(P, theta, rng, nterms=1, max_deg=1):
    items = [(random_label(P, 1, rng, max_deg),
              random_label(P, 2, rng, max_deg),
              rng.randrange(1, P.ctx.order)) for _ in range(nterms)]
    return tt_from_terms(P, theta, items)


def random_qa(P, side, rng, nterms, max_deg):
    u = qa_zero(side)
    for _ in range(nterms):
        c = rng.randrange(1, P.ctx.order)
        u = qa_add(P, u, qa_basis(P, random_label(P, side, rng, max_deg), c))
    return u


def vertex_label(P, side, e):
    return label_make(P, side, e, (0,) * (P.p - 1))


def arrow_tt(P, theta, side, psi, s):
    return tt_arrow(P, theta, side, make_char(P, f"P{side}", psi),
                    make_char(P, f"P{side}", s))


def all_eps(P, theta):
    reps = sorted({min((e * u) % P.p for u in P._g0pow)
                   for e in range(1, P.p)})
    out = [tt_eps(P, theta, Simple(0, 0))]
    out += [tt_eps(P, theta, Simple(e, 0)) for e in range(1, P.p)]
    out += [tt_eps(P, theta, Simple(0, e)) for e in range(1, P.p)]
    out += [tt_eps(P, theta, Simple(a, b)) for a in reps for b in reps]
    return out


class TestContext:
    def test_commutator_table_closed_form(self):
        # theta([h_{eta,2}, h_{chi,1}]) = zeta_r^{-e f / j} for theta_j
        for (ell, p, r), j in [((2, 7, 3), 1), ((2, 7, 3), 2),
                               ((3, 5, 2), 1), ((2, 11, 5), 3)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", j)
            tctx = _tt_ctx(P, theta)
            jinv = pow(j, -1, r)
            for e in range(r):
                for f in range(r):
                    want = P.ctx.pow(P.zeta_r, (-e * f * jinv) % r)
                    assert int(tctx["c_tab"][e, f]) == want

    def test_weight_table_closed_form(self):
        # W[t,t'] = r^{-1} zeta_r^{-j t t'}, the Fourier dual of c^{-1}
        for (ell, p, r), j in [((2, 7, 3), 1), ((3, 5, 2), 1),
                               ((2, 11, 5), 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", j)
            ctx = P.ctx
            W = _tt_ctx(P, theta)["W"]
            rinv = ctx.inv(ctx.from_int(r))
            for t in range(r):
                for tq in range(r):
                    want = ctx.mul(rinv,
                                   ctx.pow(P.zeta_r, (-j * t * tq) % r))
                    assert int(W[t, tq]) == want

    def test_weight_rows_sum_to_unit_indicator(self):
        # row sums delta_{t,0} make the full vertex sum a two-sided unit
        P = params_make(2, 7, 3)
        ctx = P.ctx
        W = _tt_ctx(P, make_char(P, "Z", 1))["W"]
        for t in range(P.r):
            acc = 0
            for tq in range(P.r):
                acc = ctx.add(acc, int(W[t, tq]))
            assert acc == (ctx.one if t == 0 else 0)

    def test_theta_mismatch(self):
        P = params_make(2, 7, 3)
        t1 = tt_unit(P, make_char(P, "Z", 1))
        t2 = tt_unit(P, make_char(P, "Z", 2))
        with pytest.raises(ValueError, match="theta mismatch"):
            tt_mul(P, make_char(P, "Z", 1), t1, t2)
        with pytest.raises(ValueError, match="theta mismatch"):
            tt_add(P, t1, t2)


class TestIota:
    def test_trivial_label_lands_on_projector(self):
        # e_1 has only a trivial isotypic part, so no h-element shows up
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            e_theta = _tt_ctx(P, theta)["e_theta"]
            for side in (1, 2):
                img = b0_iota(P, theta, qa_vertex(P, side, 0))
                want = ga_mul(P, ga_from_terms(
                    P, [(p_elem(P, side, y), P.ctx.inv(P.ctx.from_int(p)))
                        for y in range(p)]), e_theta)
                assert img == want

    def test_both_routes_agree_on_sample(self):
        # b0_iota itself asserts the closed alternative formula
        rng = random.Random(11)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            for side in (1, 2):
                for _ in range(6):
                    b0_iota(P, theta, random_qa(P, side, rng, 2, 2))

    def test_homomorphism(self):
        rng = random.Random(5)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            for side in (1, 2):
                for _ in range(8):
                    a = random_qa(P, side, rng, 2, 1)
                    b = random_qa(P, side, rng, 2, 1)
                    lhs = b0_iota(P, theta, qa_mul(P, a, b))
                    rhs = ga_mul(P, b0_iota(P, theta, a),
                                 b0_iota(P, theta, b))
                    assert lhs == rhs

    def test_images_centralize_block_H(self):
        rng = random.Random(3)
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 2)
        for side in (1, 2):
            for _ in range(4):
                img = b0_iota(P, theta, random_qa(P, side, rng, 2, 2))
                assert centralizes_block_H(P, theta, img)

    def test_unfaithful_theta_rejected(self):
        P = params_make(2, 19, 9)
        with pytest.raises(ValueError, match="faithful"):
            b0_iota(P, make_char(P, "Z", 3), qa_vertex(P, 1, 0))


class TestPi:
    def test_unit(self):
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            e_theta = _tt_ctx(P, theta)["e_theta"]
            assert b0_pi(P, theta, e_theta) == tt_unit(P, theta)
            assert b0_pi_inv(P, theta, tt_unit(P, theta)) == e_theta

    def test_pi_of_iota_product_is_pure_tensor(self):
        rng = random.Random(23)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            ctx = P.ctx
            for _ in range(5):
                a = random_qa(P, 1, rng, 2, 1)
                b = random_qa(P, 2, rng, 2, 1)
                x = ga_mul(P, b0_iota(P, theta, a), b0_iota(P, theta, b))
                want = tt_from_terms(
                    P, theta,
                    [(u, v, ctx.mul(cu, cv)) for u, cu in a.terms.items()
                     for v, cv in b.terms.items()])
                assert b0_pi(P, theta, x) == want

    def test_round_trip(self):
        rng = random.Random(29)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            for _ in range(4):
                t = random_tt(P, theta, rng, nterms=2, max_deg=1)
                assert b0_pi(P, theta, b0_pi_inv(P, theta, t)) == t

    def test_rejects_non_members(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        e_theta = _tt_ctx(P, theta)["e_theta"]
        with pytest.raises(ValueError, match="block"):
            b0_pi(P, theta, ga_basis(P, h_elem(P, 1, 0, 0)))
        bad = ga_mul(P, ga_basis(P, h_elem(P, 1, 0, 0)), e_theta)
        with pytest.raises(ValueError, match="B_0"):
            b0_pi(P, theta, bad)

    def test_eps_as_group_algebra_element(self):
        # epsilon_(phi,1) = iota_1(e_phi) iota_2(e_1), via the pi routes
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        x = ga_mul(P, b0_iota(P, theta, qa_vertex(P, 1, 3)),
                   b0_iota(P, theta, qa_vertex(P, 2, 0)))
        assert b0_pi(P, theta, x) == tt_eps(P, theta, Simple(3, 0))
        assert b0_pi_inv(P, theta, tt_eps(P, theta, Simple(3, 0))) == x


class TestTTMul:
    def test_unit_law(self):
        rng = random.Random(31)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            one = tt_unit(P, theta)
            for _ in range(4):
                t = random_tt(P, theta, rng, nterms=2, max_deg=2)
                assert tt_mul(P, theta, one, t) == t
                assert tt_mul(P, theta, t, one) == t

    def test_matches_group_convolution(self):
        # the gate: label-level twisted product vs honest group product
        rng = random.Random(37)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            degs = [((0, 0), (0, 0))] * 4 + [((1, 0), (0, 0)),
                                             ((0, 0), (0, 1))]
            for d1, d2 in degs:
                t1 = tt_from_terms(
                    P, theta, [(random_label(P, 1, rng, d1[0]),
                                random_label(P, 2, rng, d1[1]),
                                rng.randrange(1, P.ctx.order))])
                t2 = tt_from_terms(
                    P, theta, [(random_label(P, 1, rng, d2[0]),
                                random_label(P, 2, rng, d2[1]),
                                rng.randrange(1, P.ctx.order))])
                gate = b0_pi_product(P, theta, b0_pi_inv(P, theta, t1),
                                     b0_pi_inv(P, theta, t2))
                assert tt_mul(P, theta, t1, t2) == gate

    def test_associative(self):
        rng = random.Random(41)
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        for _ in range(5):
            a = random_tt(P, theta, rng, nterms=2, max_deg=2)
            b = random_tt(P, theta, rng, nterms=2, max_deg=1)
            c = random_tt(P, theta, rng, nterms=2, max_deg=2)
            lhs = tt_mul(P, theta, tt_mul(P, theta, a, b), c)
            rhs = tt_mul(P, theta, a, tt_mul(P, theta, b, c))
            assert lhs == rhs

    def test_homogeneous_commutation(self):
        # iota_1(a) iota_2(b) = theta([h_eta, h_chi]) iota_2(b) iota_1(a)
        rng = random.Random(43)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            tctx = _tt_ctx(P, theta)
            for e in range(r):
                for f in range(r):
                    a = qa_isotypic(P, random_qa(P, 1, rng, 2, 1),
                                    make_char(P, "L1", e))
                    b = qa_isotypic(P, random_qa(P, 2, rng, 2, 1),
                                    make_char(P, "L2", f))
                    ia = b0_iota(P, theta, a)
                    ib = b0_iota(P, theta, b)
                    lhs = ga_mul(P, ia, ib)
                    rhs = ga_scale(P, int(tctx["c_tab"][e, f]),
                                   ga_mul(P, ib, ia))
                    assert lhs == rhs

    def test_corner_identity(self):
        # pi intertwines sandwiching by iota-pairs with the tt product;
        # run only at the small configuration, the group route is heavy
        rng = random.Random(47)
        for ell, p, r in [(3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            for _ in range(4):
                a1 = qa_isotypic(P, random_qa(P, 1, rng, 1, 1),
                                 make_char(P, "L1", rng.randrange(r)))
                b1 = qa_isotypic(P, random_qa(P, 2, rng, 1, 0),
                                 make_char(P, "L2", rng.randrange(r)))
                a2 = qa_isotypic(P, random_qa(P, 1, rng, 1, 0),
                                 make_char(P, "L1", rng.randrange(r)))
                b2 = qa_isotypic(P, random_qa(P, 2, rng, 1, 1),
                                 make_char(P, "L2", rng.randrange(r)))
                if any(not x.terms for x in (a1, b1, a2, b2)):
                    continue
                w = random_tt(P, theta, rng, nterms=1, max_deg=1)
                left = ga_mul(P, b0_iota(P, theta, a1),
                              b0_iota(P, theta, b1))
                right = ga_mul(P, b0_iota(P, theta, a2),
                               b0_iota(P, theta, b2))
                mid = ga_mul(P, ga_mul(P, left, b0_pi_inv(P, theta, w)),
                             right)
                tt = tt_mul(P, theta, tt_mul(P, theta,
                                             b0_pi(P, theta, left), w),
                            b0_pi(P, theta, right))
                assert b0_pi(P, theta, mid) == tt


class TestEps:
    def test_census(self):
        # 1 + (p-1) + (p-1) + ((p-1)/r)^2 distinct idempotents
        for (ell, p, r), count in [((2, 7, 3), 17), ((3, 5, 2), 13)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            eps = all_eps(P, theta)
            assert len(eps) == count == 2 * p - 1 + ((p - 1) // r) ** 2

    def test_case_shapes(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        one = P.ctx.one
        t = tt_eps(P, theta, Simple(0, 0))
        assert t.terms == {(vertex_label(P, 1, 0), vertex_label(P, 2, 0)):
                           one}
        t = tt_eps(P, theta, Simple(3, 0))
        assert t.terms == {(vertex_label(P, 1, 3), vertex_label(P, 2, 0)):
                           one}
        t = tt_eps(P, theta, Simple(0, 5))
        assert t.terms == {(vertex_label(P, 1, 0), vertex_label(P, 2, 5)):
                           one}
        # orbit of 1 under g0 = 2: {1, 2, 4}; of 3: {3, 5, 6}
        t = tt_eps(P, theta, Simple(1, 3))
        assert set(t.terms) == {(vertex_label(P, 1, a), vertex_label(P, 2, b))
                                for a in (1, 2, 4) for b in (3, 5, 6)}

    def test_orbit_representative_irrelevant(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        assert tt_eps(P, theta, Simple(1, 3)) == tt_eps(P, theta,
                                                        Simple(4, 6))

    def test_idempotent_orthogonal_complete(self):
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            eps = all_eps(P, theta)
            total = tt_zero(theta)
            for i, t in enumerate(eps):
                total = tt_add(P, total, t)
                for k, s in enumerate(eps):
                    prod = tt_mul(P, theta, t, s)
                    assert prod == (t if i == k else tt_zero(theta))
            assert total == tt_unit(P, theta)

    def test_invalid_label(self):
        P = params_make(2, 7, 3)
        with pytest.raises(ValueError, match="invalid"):
            tt_eps(P, make_char(P, "Z", 1), Simple(7, 0))


class TestArrow:
    def test_sandwich_identity_all_arrows(self):
        # eps_(psi,1) S_(psi,phi) eps_(psi phi,1) = S_(psi,phi)
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        for psi in range(7):
            for s in range(1, 7):
                S = arrow_tt(P, theta, 1, psi, s)
                lhs = tt_mul(P, theta, tt_eps(P, theta, Simple(psi, 0)), S)
                lhs = tt_mul(P, theta, lhs,
                             tt_eps(P, theta, Simple((psi + s) % 7, 0)))
                assert lhs == S

    def test_sandwich_identity_side_two(self):
        P = params_make(3, 5, 2)
        theta = make_char(P, "Z", 1)
        T = arrow_tt(P, theta, 2, 2, 3)
        lhs = tt_mul(P, theta, tt_eps(P, theta, Simple(0, 2)), T)
        lhs = tt_mul(P, theta, lhs, tt_eps(P, theta, Simple(0, 0)))
        assert lhs == T

    def test_degree_one(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        assert tt_radical_degree(arrow_tt(P, theta, 1, 2, 4)) == 1
        assert tt_radical_degree(arrow_tt(P, theta, 2, 0, 1)) == 1

    def test_two_arrow_product_is_label_product(self):
        # side-1 arrows multiply with no twist: the other leg is fixed
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        for psi, s1, s2 in [(0, 1, 2), (3, 2, 5), (5, 6, 4)]:
            lhs = tt_mul(P, theta, arrow_tt(P, theta, 1, psi, s1),
                         arrow_tt(P, theta, 1, (psi + s1) % 7, s2))
            m = [0] * 6
            m[s1 - 1] += 1
            m[s2 - 1] += 1
            want = tt_from_terms(
                P, theta,
                [(label_make(P, 1, psi, m), vertex_label(P, 2, 0),
                  P.ctx.one)])
            assert lhs == want

    def test_validation(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        with pytest.raises(ValueError, match="nontrivial"):
            tt_arrow(P, theta, 1, make_char(P, "P1", 2),
                     make_char(P, "P1", 0))
        with pytest.raises(ValueError, match="characters of P1"):
            tt_arrow(P, theta, 1, make_char(P, "P2", 2),
                     make_char(P, "P2", 1))


class TestTilde:
    def test_trivial_weight_is_orbit_sum(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        t = tt_tilde(P, theta, 1, make_char(P, "P1", 1),
                     make_char(P, "L1", 0))
        # orbit of 1 is {1,2,4}; each loop label pairs s with -s
        want = {}
        for s in (1, 2, 4):
            m = [0] * 6
            m[s - 1] += 1
            m[7 - s - 1] += 1
            want[(label_make(P, 1, 0, m), vertex_label(P, 2, 0))] = P.ctx.one
        assert t.terms == want

    def test_isotypic_purity(self):
        # the side-1 leg is chi-homogeneous for the weight character
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        for e in range(3):
            chi = make_char(P, "L1", e)
            t = tt_tilde(P, theta, 1, make_char(P, "P1", 3), chi)
            leg = qa_zero(1)
            for (u, v), c in t.terms.items():
                leg = qa_add(P, leg, qa_basis(P, u, c))
            assert qa_isotypic(P, leg, chi) == leg

    def test_linearly_independent_mod_cube(self):
        # r = 3: the three weights give independent degree-2 elements
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        tildes = [tt_tilde(P, theta, 1, make_char(P, "P1", 1),
                           make_char(P, "L1", e)) for e in range(3)]
        support = sorted({u for t in tildes for (u, v) in t.terms},
                         key=lambda lab: (lab.psi, lab.m))
        M = np.zeros((3, len(support)), dtype=np.int64)
        for i, t in enumerate(tildes):
            for (u, v), c in t.terms.items():
                M[i, support.index(u)] = c
        assert gf_rank(P.ctx, M) == 3

    def test_exact_commutation_scalar(self):
        # S~ T~ = theta([h_eta, h_chi]) T~ S~, exactly, not just mod J^5
        for ell, p, r in [(2, 7, 3), (2, 11, 5)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 1)
            tctx = _tt_ctx(P, theta)
            for e, f in [(0, 0), (1, 1), (1, 2), (2, 1), (r - 1, r - 1)]:
                S = tt_tilde(P, theta, 1, make_char(P, "P1", 1),
                             make_char(P, "L1", e))
                T = tt_tilde(P, theta, 2, make_char(P, "P2", 1),
                             make_char(P, "L2", f))
                lhs = tt_mul(P, theta, S, T)
                rhs = tt_scale(P, int(tctx["c_tab"][e, f]),
                               tt_mul(P, theta, T, S))
                assert lhs == rhs
                assert not tt_is_zero(lhs)

    def test_commutation_scalar_tracks_theta(self):
        # the scalar depends on theta_j through j, not just on (e, f)
        P = params_make(2, 7, 3)
        for j in (1, 2):
            theta = make_char(P, "Z", j)
            tctx = _tt_ctx(P, theta)
            e, f = 1, 2
            S = tt_tilde(P, theta, 1, make_char(P, "P1", 2),
                         make_char(P, "L1", e))
            T = tt_tilde(P, theta, 2, make_char(P, "P2", 3),
                         make_char(P, "L2", f))
            lhs = tt_mul(P, theta, S, T)
            rhs = tt_mul(P, theta, T, S)
            assert lhs == tt_scale(P, int(tctx["c_tab"][e, f]), rhs)
            jinv = pow(j, -1, 3)
            assert int(tctx["c_tab"][e, f]) == P.ctx.pow(
                P.zeta_r, (-e * f * jinv) % 3)

    def test_degenerate_at_two_torsion(self):
        # r = 2: both loop paths carry the same label, so a nontrivial
        # weight cancels the pair
        P = params_make(3, 5, 2)
        theta = make_char(P, "Z", 1)
        t = tt_tilde(P, theta, 1, make_char(P, "P1", 1),
                     make_char(P, "L1", 1))
        assert tt_is_zero(t)

    def test_validation(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        with pytest.raises(ValueError, match="nontrivial"):
            tt_tilde(P, theta, 1, make_char(P, "P1", 0),
                     make_char(P, "L1", 1))
        with pytest.raises(ValueError, match="L1"):
            tt_tilde(P, theta, 1, make_char(P, "P1", 1),
                     make_char(P, "L2", 1))


class TestRadical:
    def test_examples(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        assert tt_radical_degree(tt_eps(P, theta, Simple(2, 3))) == 0
        assert tt_radical_degree(arrow_tt(P, theta, 1, 0, 2)) == 1
        assert tt_radical_degree(
            tt_tilde(P, theta, 1, make_char(P, "P1", 1),
                     make_char(P, "L1", 1))) == 2
        with pytest.raises(ValueError, match="zero"):
            tt_radical_degree(tt_zero(theta))

    def test_length_two_loop_not_in_cube(self):
        # ell = 2: out-and-back along phi stops strictly short of J^3
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        for s in (1, 3, 5):
            loop = tt_mul(P, theta, arrow_tt(P, theta, 1, 0, s),
                          arrow_tt(P, theta, 1, s, 7 - s))
            assert tt_radical_degree(loop) == 2

    def test_superadditive(self):
        rng = random.Random(53)
        P = params_make(3, 5, 2)
        theta = make_char(P, "Z", 1)
        for _ in range(10):
            a = random_tt(P, theta, rng, nterms=2, max_deg=2)
            b = random_tt(P, theta, rng, nterms=2, max_deg=2)
            prod = tt_mul(P, theta, a, b)
            if tt_is_zero(prod):
                continue
            assert tt_radical_degree(prod) >= (tt_radical_degree(a)
                                               + tt_radical_degree(b))

    def test_closed_step_tuples(self):
        # chained arrows whose steps multiply to one: at (3,5,2) no
        # closed triple has equal steps and none reaches J^4; at
        # (2,7,3) every closed pair stops short of J^3
        P = params_make(3, 5, 2)
        theta = make_char(P, "Z", 1)
        for s1 in range(1, 5):
            for s2 in range(1, 5):
                s3 = (-s1 - s2) % 5
                if s3 == 0:
                    continue
                assert not (s1 == s2 == s3)
                t = tt_mul(P, theta, arrow_tt(P, theta, 1, 0, s1),
                           arrow_tt(P, theta, 1, s1, s2))
                t = tt_mul(P, theta, t,
                           arrow_tt(P, theta, 1, (s1 + s2) % 5, s3))
                assert not tt_is_zero(t)
                assert tt_radical_degree(t) == 3
        Q = params_make(2, 7, 3)
        theta = make_char(Q, "Z", 1)
        for s in range(1, 7):
            t = tt_mul(Q, theta, arrow_tt(Q, theta, 1, 0, s),
                       arrow_tt(Q, theta, 1, s, 7 - s))
            assert tt_radical_degree(t) == 2

    def test_equal_step_tuples_die_by_the_cap(self):
        # an open all-equal chain hits multiplicity ell and vanishes,
        # landing in every radical power
        P = params_make(3, 5, 2)
        theta = make_char(P, "Z", 1)
        for s in range(1, 5):
            t = tt_mul(P, theta, arrow_tt(P, theta, 1, 0, s),
                       arrow_tt(P, theta, 1, s, s))
            t = tt_mul(P, theta, t, arrow_tt(P, theta, 1, 2 * s % 5, s))
            assert tt_is_zero(t)


class TestSerialization:
    def test_round_trip(self):
        rng = random.Random(59)
        for ell, p, r in [(2, 7, 3), (3, 5, 2)]:
            P = params_make(ell, p, r)
            theta = make_char(P, "Z", 2)
            t = random_tt(P, theta, rng, nterms=3, max_deg=2)
            data = tt_to_json(P, t)
            assert tt_from_json(P, theta, data) == t

    def test_shape_and_order(self):
        P = params_make(2, 7, 3)
        theta = make_char(P, "Z", 1)
        t = tt_unit(P, theta)
        data = tt_to_json(P, t)
        assert len(data) == 49
        assert all(set(row) == {"u", "v", "coeff"} for row in data)
        keys = [(row["u"]["psi_exp"], row["v"]["psi_exp"]) for row in data]
        assert keys == sorted(keys)
