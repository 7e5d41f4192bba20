"""Twisted tensor model of the block corner algebra B_0.

B_0 sits inside the block kG e_theta as the centralizer of kH e_theta.
Reading coefficients off the N-part identifies B_0 with A_1 (x) A_2 as
a vector space (the map pi); the product transported through pi is a
twisted tensor product whose twisting scalars are values of theta on
commutators of the h-elements.  This module realizes both directions
of pi, the twisted multiplication on labels, and the distinguished
idempotents, arrows and degree-two loop sums used downstream.

Elements of B_0 are stored by their pi-image (a map from label pairs
to coefficients); the group-algebra form is materialized only to
cross-check the twisted product against honest group convolution.
"""

from __future__ import annotations

import numpy as np

from .characters import (
    Character, char_eval, char_idempotent, h_element, make_char,
)
from .groups import Params, group_inv, group_mul, h_elem
from .groupalg import (
    GAElem, _CHUNK, _mul_lanes, _tables, _vmul_coeffs, block_idempotent,
    centralizes_block_H, ga_add, ga_basis, ga_conjugate, ga_is_zero, ga_mul,
    ga_scale, ga_zero,
)
from .linalg import gf_apply_axis
from .quiver import (
    QuivAElem, QuivLabel, _m_unpack, label_phi, label_to_dict, label_make,
    qa_basis, qa_embed, qa_is_zero, qa_isotypic,
)


class TTElem:
    """B_0 element held by its pi-image in A_1 (x) A_2.

    terms maps (side-1 label, side-2 label) pairs to nonzero
    coefficients; zero coefficients are never stored.
    """

    __slots__ = ("theta", "terms")

    def __init__(self, theta: Character, terms: dict):
        self.theta = theta
        self.terms = terms

    def __eq__(self, other):
        if not isinstance(other, TTElem):
            return NotImplemented
        return (self.theta.group == other.theta.group
                and self.theta.e == other.theta.e
                and self.terms == other.terms)

    def __repr__(self):
        return f"TTElem(theta_exp={self.theta.e}, {len(self.terms)} terms)"


def tt_zero(theta: Character) -> TTElem:
    return TTElem(theta, {})


def tt_is_zero(t: TTElem) -> bool:
    return not t.terms


def tt_from_terms(P: Params, theta: Character, items) -> TTElem:
    terms: dict = {}
    for u, v, c in items:
        if u.side != 1:
            raise ValueError("left label must lie on side 1")
        if v.side != 2:
            raise ValueError("right label must lie on side 2")
        if c == 0:
            continue
        key = (u, v)
        s = P.ctx.add(terms.get(key, 0), c)
        if s:
            terms[key] = s
        else:
            terms.pop(key, None)
    return TTElem(theta, terms)


def tt_unit(P: Params, theta: Character) -> TTElem:
    """pi-image of e_theta: the full vertex sum on both legs."""
    zero = (0,) * (P.p - 1)
    one = P.ctx.one
    terms = {(QuivLabel(1, a, zero), QuivLabel(2, b, zero)): one
             for a in range(P.p) for b in range(P.p)}
    return TTElem(theta, terms)


def tt_add(P: Params, t: TTElem, s: TTElem) -> TTElem:
    _check_theta(t, s.theta)
    terms = dict(t.terms)
    for key, c in s.terms.items():
        v = P.ctx.add(terms.get(key, 0), c)
        if v:
            terms[key] = v
        else:
            terms.pop(key, None)
    return TTElem(t.theta, terms)


def tt_neg(P: Params, t: TTElem) -> TTElem:
    if P.ell == 2:
        return t
    return TTElem(t.theta, {k: P.ctx.neg(c) for k, c in t.terms.items()})


def tt_sub(P: Params, t: TTElem, s: TTElem) -> TTElem:
    return tt_add(P, t, tt_neg(P, s))


def tt_scale(P: Params, c: int, t: TTElem) -> TTElem:
    if c == 0:
        return tt_zero(t.theta)
    if c == 1:
        return t
    return TTElem(t.theta, {k: P.ctx.mul(c, v) for k, v in t.terms.items()})


def tt_coeff(P: Params, t: TTElem, u: QuivLabel, v: QuivLabel) -> int:
    return t.terms.get((u, v), 0)


def _check_theta(t: TTElem, theta: Character) -> None:
    if t.theta.group != theta.group or t.theta.e != theta.e:
        raise ValueError("theta mismatch")


# ---------------------------------------------------------------------------
# Shared context per (Params, theta)


def _commutator(P: Params, x, y):
    xy = group_mul(P, x, y)
    return group_mul(P, group_mul(P, group_inv(P, x), group_inv(P, y)), xy)


def _tt_ctx(P: Params, theta: Character) -> dict:
    cache_key = ("ttb0", theta.e)
    tctx = P._cache.get(cache_key)
    if tctx is not None:
        return tctx
    ctx, r = P.ctx, P.r
    e_theta = block_idempotent(P, theta)

    h1 = [h_element(P, theta, make_char(P, "L1", e), 1) for e in range(r)]
    h2 = [h_element(P, theta, make_char(P, "L2", f), 2) for f in range(r)]
    h_inv_ga = {
        1: [ga_basis(P, group_inv(P, h)) for h in h1],
        2: [ga_basis(P, group_inv(P, h)) for h in h2],
    }

    c_tab = np.zeros((r, r), dtype=np.int64)
    for e in range(r):
        for f in range(r):
            c_tab[e, f] = char_eval(P, theta, _commutator(P, h2[f], h1[e]))
    c_inv = np.array([[ctx.inv(int(c)) for c in row] for row in c_tab],
                     dtype=np.int64)

    rinv = ctx.inv(ctx.from_int(r))
    rinv2 = ctx.mul(rinv, rinv)
    W = np.zeros((r, r), dtype=np.int64)
    for t in range(r):
        for tq in range(r):
            acc = 0
            for e in range(r):
                for f in range(r):
                    z = ctx.pow(P.zeta_r, (-(e * t + f * tq)) % r)
                    acc = ctx.add(acc, ctx.mul(int(c_inv[e, f]), z))
            W[t, tq] = ctx.mul(rinv2, acc)

    theta_pow = np.array([ctx.pow(P.zeta_r, (theta.e * c) % r)
                          for c in range(r)], dtype=np.int64)

    tctx = {"e_theta": e_theta, "h1": h1, "h2": h2, "h_inv_ga": h_inv_ga,
            "c_tab": c_tab, "c_inv": c_inv, "W": W, "theta_pow": theta_pow,
            "iota": {}}
    P._cache[cache_key] = tctx
    return tctx


# ---------------------------------------------------------------------------
# The maps iota and pi


def _iota_label(P: Params, theta: Character, tctx: dict,
                label: QuivLabel) -> GAElem:
    side = label.side
    u = qa_basis(P, label)
    acc = ga_zero()
    for e in range(P.r):
        chi = make_char(P, f"L{side}", e)
        comp = qa_isotypic(P, u, chi)
        if qa_is_zero(comp):
            continue
        img = ga_mul(P, qa_embed(P, comp), tctx["h_inv_ga"][side][e])
        acc = ga_add(P, acc, ga_mul(P, img, tctx["e_theta"]))
    return acc


def _iota(P: Params, theta: Character, a: QuivAElem) -> GAElem:
    tctx = _tt_ctx(P, theta)
    cache = tctx["iota"]
    acc = ga_zero()
    for label, c in a.terms.items():
        img = cache.get(label)
        if img is None:
            img = _iota_label(P, theta, tctx, label)
            cache[label] = img
        acc = ga_add(P, acc, ga_scale(P, c, img))
    return acc


def b0_iota(P: Params, theta: Character, a: QuivAElem) -> GAElem:
    """Corner embedding of a side algebra into B_0.

    Each isotypic component rides its own h-element: the image is
    sum_chi embed(a^chi) h_chi^{-1} e_theta.  The closed alternative,
    averaging a e_1 e_theta over L_i-conjugates, is computed as well
    and the two must agree.
    """
    if qa_is_zero(a):
        return ga_zero()
    primary = _iota(P, theta, a)

    tctx = _tt_ctx(P, theta)
    side = a.side
    other = 2 if side == 1 else 1
    e_triv = char_idempotent(P, make_char(P, f"L{other}", 0))
    base = ga_mul(P, ga_mul(P, qa_embed(P, a), e_triv), tctx["e_theta"])
    alt = ga_zero()
    for t in range(P.r):
        g = h_elem(P, t, 0, 0) if side == 1 else h_elem(P, 0, t, 0)
        alt = ga_add(P, alt, ga_conjugate(P, base, g))
    assert primary == alt, "corner embedding routes disagree"
    return primary


def _theta_collapse(P: Params, tctx: dict, keys: np.ndarray,
                    coeffs: np.ndarray, planes: list) -> None:
    """Absorb the Z-part as a theta power and bin onto N-keys.

    Accumulates base-ell digit planes; reduction mod ell happens once
    at the end, so every bincount stays an exact float64 integer sum.
    """
    r3 = P.r ** 3
    n = keys // r3
    c = keys % P.r
    vals = P.ctx.vmul(coeffs, tctx["theta_pow"][c])
    size = planes[0].shape[0]
    for k in range(P.ctx.d):
        w = P.ctx.digit_plane(vals, k).astype(np.float64)
        planes[k] += np.bincount(n, weights=w, minlength=size)


def _stage_b(P: Params, theta: Character, T4: np.ndarray) -> TTElem:
    """Label coordinates of an N-coefficient tensor (Dsz, p, Dsz, p).

    Both D-legs are cut down to the rows actually present before any
    transform runs, so the P-leg rewrites cost only the support of the
    element; the S-expansions back to full D-coordinates come last.
    """
    from .quiver import _embed_tables
    tabs = _embed_tables(P)
    ctx, p, Dsz = P.ctx, P.p, P.dsz
    if not T4.any():
        return tt_zero(theta)

    rows = []
    for axis in (0, 2):
        live = np.flatnonzero(
            np.moveaxis(T4, axis, 0).reshape(Dsz, -1).any(axis=1))
        rows.append(live)
        T4 = np.take(T4, live, axis=axis)
    T4 = gf_apply_axis(ctx, tabs["Finv"], T4, 1)
    T4 = gf_apply_axis(ctx, tabs["Finv"], T4, 3)
    T4 = gf_apply_axis(ctx, tabs["Sinv"][:, rows[0]], T4, 0)
    T4 = gf_apply_axis(ctx, tabs["Sinv"][:, rows[1]], T4, 2)

    terms = {}
    for mk1, xi1, mk2, xi2 in zip(*np.nonzero(T4)):
        m1 = _m_unpack(P, int(mk1))
        m2 = _m_unpack(P, int(mk2))
        u = QuivLabel(1, (int(xi1) - label_phi(P, m1)) % p, m1)
        v = QuivLabel(2, (int(xi2) - label_phi(P, m2)) % p, m2)
        terms[(u, v)] = int(T4[mk1, xi1, mk2, xi2])
    return TTElem(theta, terms)


def b0_pi(P: Params, theta: Character, x: GAElem) -> TTElem:
    """Coefficient collapse B_0 -> A_1 (x) A_2.

    Every support element n h e_theta contributes its coefficient to
    n; a Z-component of h is first absorbed into a theta power.  The
    collapsed N-tensor is then rewritten in label coordinates one leg
    at a time.
    """
    tctx = _tt_ctx(P, theta)
    if ga_is_zero(x):
        return tt_zero(theta)
    if not centralizes_block_H(P, theta, x):
        raise ValueError(
            "x does not lie in B_0 (fails to centralize kH e_theta)")
    size = (P.dsz * P.p) ** 2
    planes = [np.zeros(size, dtype=np.float64) for _ in range(P.ctx.d)]
    _theta_collapse(P, tctx, x.keys, x.coeffs, planes)
    packed = P.ctx.pack_planes(planes)
    T4 = packed.reshape(P.dsz, P.p, P.dsz, P.p)
    return _stage_b(P, theta, T4)


def b0_pi_inv(P: Params, theta: Character, t: TTElem) -> GAElem:
    """Inverse of the collapse: sum of c iota_1(u) iota_2(v)."""
    _check_theta(t, theta)
    acc = ga_zero()
    for (u, v), c in t.terms.items():
        prod = ga_mul(P, _iota(P, theta, qa_basis(P, u)),
                      _iota(P, theta, qa_basis(P, v)))
        acc = ga_add(P, acc, ga_scale(P, c, prod))
    return acc


def b0_pi_product(P: Params, theta: Character, x: GAElem,
                  y: GAElem) -> TTElem:
    """pi(x y) for x, y in B_0, without materializing the product.

    Honest group convolution: every coefficient lane of x y is formed
    by the vectorized group product and binned straight into the
    theta-collapsed N-tensor.  This is the oracle route the twisted
    multiplication is gated against; it never touches the W-table.
    """
    if ga_is_zero(x) or ga_is_zero(y):
        return tt_zero(theta)
    tctx = _tt_ctx(P, theta)
    tabs = _tables(P)
    size = (P.dsz * P.p) ** 2
    planes = [np.zeros(size, dtype=np.float64) for _ in range(P.ctx.d)]
    ny = len(y.keys)
    rows = max(1, _CHUNK // ny)
    for i0 in range(0, len(x.keys), rows):
        gk = x.keys[i0:i0 + rows][:, None]
        gc = x.coeffs[i0:i0 + rows][:, None]
        keys = _mul_lanes(P, tabs, gk, y.keys[None, :])
        coeffs = _vmul_coeffs(P, gc, y.coeffs[None, :])
        _theta_collapse(P, tctx, keys.ravel(), coeffs.ravel(), planes)
    packed = P.ctx.pack_planes(planes)
    T4 = packed.reshape(P.dsz, P.p, P.dsz, P.p)
    return _stage_b(P, theta, T4)


# ---------------------------------------------------------------------------
# Twisted multiplication


def _label_act(P: Params, label: QuivLabel, t: int) -> QuivLabel:
    """Conjugation by the t-th generator power of L_side on one label."""
    scale = P._g0pow[(-t) % P.r]
    if scale == 1:
        return label
    p = P.p
    m = [0] * (p - 1)
    for s in range(1, p):
        m[(s * scale) % p - 1] = label.m[s - 1]
    return QuivLabel(label.side, (label.psi * scale) % p, tuple(m))


def _label_mul(P: Params, a: QuivLabel, b: QuivLabel):
    """Label product, or None when the vertex gate or cap kills it."""
    if b.psi != (a.psi + label_phi(P, a.m)) % P.p:
        return None
    m = tuple(s + t for s, t in zip(a.m, b.m))
    if any(s >= P.ell for s in m):
        return None
    return QuivLabel(a.side, a.psi, m)


def tt_mul(P: Params, theta: Character, t: TTElem, s: TTElem) -> TTElem:
    """Twisted product on pi-images.

    (a1 (x) b1)(a2 (x) b2) picks up the inverse commutator scalar on
    each (chi-part of a2, eta-part of b1); expanding both isotypic
    projections as L-averages turns the scalar sum into the cached
    W-table, leaving a closed r x r loop over conjugated labels.
    """
    _check_theta(t, theta)
    _check_theta(s, theta)
    tctx = _tt_ctx(P, theta)
    W, ctx, r = tctx["W"], P.ctx, P.r
    acted: dict = {}

    def act(label, shift):
        if shift == 0:
            return label
        res = acted.get((label, shift))
        if res is None:
            res = _label_act(P, label, shift)
            acted[(label, shift)] = res
        return res

    out: dict = {}
    for (u1, v1), c1 in t.terms.items():
        for (u2, v2), c2 in s.terms.items():
            c12 = ctx.mul(c1, c2)
            lus = [_label_mul(P, u1, act(u2, k)) for k in range(r)]
            if all(lu is None for lu in lus):
                continue
            lvs = [_label_mul(P, act(v1, k), v2) for k in range(r)]
            for k1, lu in enumerate(lus):
                if lu is None:
                    continue
                for k2, lv in enumerate(lvs):
                    if lv is None:
                        continue
                    key = (lu, lv)
                    val = ctx.add(out.get(key, 0),
                                  ctx.mul(c12, int(W[k1, k2])))
                    if val:
                        out[key] = val
                    else:
                        out.pop(key, None)
    return TTElem(theta, out)


# ---------------------------------------------------------------------------
# Distinguished elements


def _vertex_label(P: Params, side: int, e: int) -> QuivLabel:
    return QuivLabel(side, e % P.p, (0,) * (P.p - 1))


def _orbit(P: Params, e: int) -> list:
    return sorted({(e * P._g0pow[t]) % P.p for t in range(P.r)})


def tt_eps(P: Params, theta: Character, label) -> TTElem:
    """Idempotent attached to a simple label (phi, psi).

    Mixed labels keep the individual vertex on the nontrivial leg;
    when both legs are nontrivial each leg carries its full L-orbit
    vertex sum.
    """
    phi, psi = int(label.phi), int(label.psi)
    if not (0 <= phi < P.p and 0 <= psi < P.p):
        raise ValueError("invalid simple label")
    one = P.ctx.one
    if phi == 0 and psi == 0:
        pairs = [(0, 0)]
    elif psi == 0:
        pairs = [(phi, 0)]
    elif phi == 0:
        pairs = [(0, psi)]
    else:
        pairs = [(a, b) for a in _orbit(P, phi) for b in _orbit(P, psi)]
    terms = {(_vertex_label(P, 1, a), _vertex_label(P, 2, b)): one
             for a, b in pairs}
    return TTElem(theta, terms)


def tt_arrow(P: Params, theta: Character, side: int, vertex: Character,
             step: Character) -> TTElem:
    """Arrow element: one step of the side quiver, unit on the other leg."""
    if vertex.group != f"P{side}" or step.group != f"P{side}":
        raise ValueError(f"vertex and step must be characters of P{side}")
    if step.e % P.p == 0:
        raise ValueError("step must be a nontrivial character")
    m = [0] * (P.p - 1)
    m[step.e % P.p - 1] = 1
    lab = QuivLabel(side, vertex.e % P.p, tuple(m))
    unit = _vertex_label(P, 2 if side == 1 else 1, 0)
    pair = (lab, unit) if side == 1 else (unit, lab)
    return TTElem(theta, {pair: P.ctx.one})


def tt_tilde(P: Params, theta: Character, side: int, step: Character,
             weight: Character) -> TTElem:
    """Weighted orbit sum of length-two return paths at the vertex 1.

    Each L-conjugate of the path out along step and back along its
    inverse enters with the weight character evaluated against the
    conjugating generator power.
    """
    if step.group != f"P{side}":
        raise ValueError(f"step must be a character of P{side}")
    if step.e % P.p == 0:
        raise ValueError("step must be a nontrivial character")
    if weight.group != f"L{side}":
        raise ValueError(f"weight must be a character of L{side}")
    ctx, p, r = P.ctx, P.p, P.r
    unit = _vertex_label(P, 2 if side == 1 else 1, 0)
    terms: dict = {}
    for t in range(r):
        su = (step.e * P._g0pow[(-t) % r]) % p
        m = [0] * (p - 1)
        m[su - 1] += 1
        m[(p - su) - 1] += 1
        lab = QuivLabel(side, 0, tuple(m))
        pair = (lab, unit) if side == 1 else (unit, lab)
        c = ctx.pow(P.zeta_r, (-weight.e * t) % r)
        val = ctx.add(terms.get(pair, 0), c)
        if val:
            terms[pair] = val
        else:
            terms.pop(pair, None)
    return TTElem(theta, terms)


def tt_radical_degree(t: TTElem) -> int:
    """Least total arrow count over the support; J^k membership test."""
    if not t.terms:
        raise ValueError("zero element has no degree")
    return min(sum(u.m) + sum(v.m) for u, v in t.terms)


# ---------------------------------------------------------------------------
# Serialization


def tt_to_json(P: Params, t: TTElem) -> list:
    items = sorted(t.terms.items(),
                   key=lambda kv: (kv[0][0].psi, kv[0][0].m,
                                   kv[0][1].psi, kv[0][1].m))
    return [{"u": label_to_dict(u), "v": label_to_dict(v),
             "coeff": P.ctx.to_coeffs(c)} for (u, v), c in items]


def tt_from_json(P: Params, theta: Character, data: list) -> TTElem:
    items = []
    for row in data:
        u = label_make(P, row["u"]["side"], row["u"]["psi_exp"],
                       row["u"]["m"])
        v = label_make(P, row["v"]["side"], row["v"]["psi_exp"],
                       row["v"]["m"])
        items.append((u, v, P.ctx.from_coeffs(row["coeff"])))
    return tt_from_terms(P, theta, items)
