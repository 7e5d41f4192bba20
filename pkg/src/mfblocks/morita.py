"""Invariants that see through a Morita equivalence, and two that use it.

The reduced block B_0 determines and is determined by a short list of
combinatorial data: the census of simple modules, the semisimple head,
the Ext quiver, and the commutation pairing between the two loop
families.  This module extracts each of them from the twisted model,
inverts the pairing to recover theta up to inversion, and packages the
equivalence predicate together with the Frobenius-number arithmetic
that the whole construction exists to realize.  The two explicit
group-algebra isomorphisms (coordinate swap and F_p^x rescaling) close
the circle: they realize the symmetries the invariants are quotiented
by.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from sympy import isprime
from sympy.ntheory import n_order

from .characters import Character, char_eval, h_element, is_faithful, make_char
from .groups import Params, d_pack, d_unpack, group_inv, group_mul
from .groupalg import GAElem, _dedupe, ga_zero
from .linalg import gf_rank
from .quiver import label_make, qa_basis, qa_isotypic
from .twisted import (
    TTElem, tt_eps, tt_from_terms, tt_is_zero, tt_mul, tt_scale, tt_sub,
    tt_tilde,
)


def _orbit_min(P: Params, e: int) -> int:
    return min((e * u) % P.p for u in P._g0pow)


class SimpleLabel:
    """Isomorphism class of a simple module, by character exponents.

    phi indexes a character of P_1 and psi one of P_2.  When both are
    nontrivial the class only depends on the pair of orbits under the
    scaling action, and the stored representative is the entrywise
    least one; one-sided classes are not identified.
    """

    __slots__ = ("phi", "psi")

    def __init__(self, phi: int, psi: int):
        self.phi = phi
        self.psi = psi

    def __eq__(self, other):
        if not isinstance(other, SimpleLabel):
            return NotImplemented
        return self.phi == other.phi and self.psi == other.psi

    def __hash__(self):
        return hash((self.phi, self.psi))

    def __repr__(self):
        return f"SimpleLabel({self.phi}, {self.psi})"


def simple_make(P: Params, phi: int, psi: int) -> SimpleLabel:
    phi %= P.p
    psi %= P.p
    if phi and psi:
        phi, psi = _orbit_min(P, phi), _orbit_min(P, psi)
    return SimpleLabel(phi, psi)


def simple_kind(s: SimpleLabel) -> str:
    if s.phi == 0 and s.psi == 0:
        return "unit"
    if s.psi == 0:
        return "left"
    if s.phi == 0:
        return "right"
    return "pair"


def simple_str(s: SimpleLabel) -> str:
    return {"unit": "(1,1)",
            "left": f"(phi{s.phi},1)",
            "right": f"(1,psi{s.psi})",
            "pair": f"([phi{s.phi}],[psi{s.psi}])"}[simple_kind(s)]


def simple_to_dict(s: SimpleLabel) -> dict:
    return {"phi": s.phi, "psi": s.psi}


def simple_from_dict(P: Params, data: dict) -> SimpleLabel:
    return simple_make(P, data["phi"], data["psi"])


def _check_faithful(theta: Character) -> None:
    if theta.group != "Z" or not is_faithful(theta):
        raise ValueError("theta must be a faithful character of Z")


def simples(P: Params, theta: Character) -> List[Tuple[SimpleLabel, int]]:
    """All simple-module classes with their dimensions.

    One trivial class and two one-sided families of p - 1 classes, all
    of dimension r; and ((p-1)/r)^2 orbit-pair classes of dimension
    r^2.
    """
    _check_faithful(theta)
    p, r = P.p, P.r
    reps = sorted({_orbit_min(P, e) for e in range(1, p)})
    out = [(SimpleLabel(0, 0), r)]
    out += [(SimpleLabel(e, 0), r) for e in range(1, p)]
    out += [(SimpleLabel(0, e), r) for e in range(1, p)]
    out += [(SimpleLabel(a, b), r * r) for a in reps for b in reps]
    return out


def head_algebra(P: Params,
                 theta: Character) -> List[Tuple[SimpleLabel, int]]:
    """Block decomposition of the degree-0 part of the twisted model.

    The span of the p^2 vertex pairs is a subalgebra complementing the
    radical.  Each simple class contributes the two-sided ideal cut
    out by its idempotent; the returned dimensions are exact ranks.
    """
    _check_faithful(theta)
    p = P.p
    zero_m = (0,) * (p - 1)
    pairs = [(a, b) for a in range(p) for b in range(p)]
    basis = [tt_from_terms(P, theta,
                           [(label_make(P, 1, a, zero_m),
                             label_make(P, 2, b, zero_m), P.ctx.one)])
             for a, b in pairs]
    index = {(label_make(P, 1, a, zero_m), label_make(P, 2, b, zero_m)): k
             for k, (a, b) in enumerate(pairs)}

    out = []
    total = 0
    for s, _deg in simples(P, theta):
        eps = tt_eps(P, theta, s)
        rows = []
        for x in basis:
            left = tt_mul(P, theta, eps, x)
            assert left == tt_mul(P, theta, x, eps), \
                "head idempotent is not central"
            vec = np.zeros(p * p, dtype=np.int64)
            for key, c in tt_mul(P, theta, left, eps).terms.items():
                vec[index[key]] = c
            rows.append(vec)
        dim = gf_rank(P.ctx, np.array(rows, dtype=np.int64))
        out.append((s, dim))
        total += dim
    assert total == p * p, "head block dimensions do not fill the head"
    return out


def _degree_one_span(P: Params) -> List[TTElem]:
    """The 2p^2(p-1) products of one arrow with a vertex on the other
    side; they span the degree-1 layer."""
    p = P.p
    zero_m = (0,) * (p - 1)
    out = []
    for psi in range(p):
        for s in range(1, p):
            m = [0] * (p - 1)
            m[s - 1] = 1
            for xi in range(p):
                out.append((label_make(P, 1, psi, tuple(m)),
                            label_make(P, 2, xi, zero_m)))
                out.append((label_make(P, 1, xi, zero_m),
                            label_make(P, 2, psi, tuple(m))))
    return out


def ext_dim(P: Params, theta: Character, a: SimpleLabel,
            b: SimpleLabel) -> int:
    """dim of the (a, b) corner of the degree-1 layer.

    Counts arrows a -> b in the quiver: the exact rank of the sandwich
    images eps_a * w * eps_b over the explicit degree-1 spanning set.
    """
    _check_faithful(theta)
    eps_a = tt_eps(P, theta, a)
    eps_b = tt_eps(P, theta, b)
    rows = []
    columns: Dict[tuple, int] = {}
    for u, v in _degree_one_span(P):
        w = tt_from_terms(P, theta, [(u, v, P.ctx.one)])
        img = tt_mul(P, theta, eps_a, tt_mul(P, theta, w, eps_b))
        if tt_is_zero(img):
            continue
        row = {}
        for key, c in img.terms.items():
            row[columns.setdefault(key, len(columns))] = c
        rows.append(row)
    if not rows:
        return 0
    M = np.zeros((len(rows), len(columns)), dtype=np.int64)
    for i, row in enumerate(rows):
        for k, c in row.items():
            M[i, k] = c
    return gf_rank(P.ctx, M)


class PairingTable:
    """Scalar table of the loop-family commutation: (e, f) -> field
    element, e indexing characters of L_1 and f of L_2.

    A nondegenerate bicharacter of Z/r x Z/r when extracted from a
    faithful theta.
    """

    __slots__ = ("r", "entries")

    def __init__(self, r: int, entries: Dict[Tuple[int, int], int]):
        self.r = r
        self.entries = entries

    def value(self, e: int, f: int) -> int:
        return self.entries[(e % self.r, f % self.r)]

    def __eq__(self, other):
        if not isinstance(other, PairingTable):
            return NotImplemented
        return self.r == other.r and self.entries == other.entries

    def __repr__(self):
        return f"PairingTable(r={self.r})"


def pairing_to_json(table: PairingTable) -> list:
    return [{"chi": e, "eta": f, "value": int(c)}
            for (e, f), c in sorted(table.entries.items())]


def _iso_leg(P: Params, theta: Character, side: int, e: int) -> TTElem:
    """A degree-1 element with pure weight e on one side, vertex-summed
    on the other; never zero, so it extracts the scalar even where the
    loop elements collapse."""
    p = P.p
    m = [0] * (p - 1)
    m[0] = 1
    leg = qa_isotypic(P, qa_basis(P, label_make(P, side, 0, tuple(m))),
                      make_char(P, f"L{side}", e))
    zero_m = (0,) * (p - 1)
    items = []
    for lab, c in leg.terms.items():
        for xi in range(p):
            other = label_make(P, 3 - side, xi, zero_m)
            pair = (lab, other) if side == 1 else (other, lab)
            items.append((*pair, c))
    return tt_from_terms(P, theta, items)


def _extract_scalar(P: Params, theta: Character, S: TTElem,
                    T: TTElem) -> Optional[int]:
    """The unique c with S*T = c*T*S, or None when both products are 0."""
    ST = tt_mul(P, theta, S, T)
    TS = tt_mul(P, theta, T, S)
    if tt_is_zero(TS):
        if tt_is_zero(ST):
            return None
        raise ValueError("no unique commutation scalar")
    key = next(iter(TS.terms))
    c = P.ctx.mul(ST.terms.get(key, 0), P.ctx.inv(TS.terms[key]))
    if not tt_is_zero(tt_sub(P, ST, tt_scale(P, c, TS))):
        raise ValueError("no unique commutation scalar")
    return c


def commutation_pairing(P: Params, theta: Character, phi_e: int = 1,
                        zeta_e: int = 1) -> PairingTable:
    """Extract the full commutation table from products in the model.

    Primary route: the two loop families S~ and T~ built on the steps
    phi_e, zeta_e.  Where a loop element degenerates to zero (r = 2
    with a nontrivial weight makes the two summands collide), the
    scalar is read off from weight-pure degree-1 elements instead.
    Both are checked against the character-theoretic commutator value,
    which must agree entry by entry.
    """
    _check_faithful(theta)
    r = P.r
    phi = make_char(P, "P1", phi_e)
    zeta = make_char(P, "P2", zeta_e)
    h1 = [h_element(P, theta, make_char(P, "L1", e), 1) for e in range(r)]
    h2 = [h_element(P, theta, make_char(P, "L2", f), 2) for f in range(r)]

    entries: Dict[Tuple[int, int], int] = {}
    for e in range(r):
        S = tt_tilde(P, theta, 1, phi, make_char(P, "L1", e))
        for f in range(r):
            T = tt_tilde(P, theta, 2, zeta, make_char(P, "L2", f))
            c = _extract_scalar(P, theta, S, T)
            if c is None:
                c = _extract_scalar(P, theta, _iso_leg(P, theta, 1, e),
                                    _iso_leg(P, theta, 2, f))
            hi = group_inv(P, h2[f])
            comm = group_mul(P, group_mul(P, hi, group_inv(P, h1[e])),
                             group_mul(P, h2[f], h1[e]))
            assert c == char_eval(P, theta, comm), \
                "extracted scalar disagrees with the character route"
            entries[(e, f)] = c

    one = P.ctx.one
    for e in range(r):
        assert entries[(e, 0)] == one and entries[(0, e)] == one
        for f in range(r):
            for g in range(r):
                want = P.ctx.mul(entries[(e, f)], entries[(g, f)])
                assert entries[((e + g) % r, f)] == want, \
                    "pairing is not multiplicative in the first slot"
                want = P.ctx.mul(entries[(e, f)], entries[(e, g)])
                assert entries[(e, (f + g) % r)] == want, \
                    "pairing is not multiplicative in the second slot"
    return PairingTable(r, entries)


def recover_theta(table: PairingTable, P: Params) -> frozenset:
    """Invert the pairing: the exponent pair {j, r-j} with theta_j
    producing the table.  The two members are indistinguishable, the
    coordinate swap interchanges them."""
    r = table.r
    if r != P.r:
        raise ValueError("table size does not match the parameters")
    v = table.value(1, 1)
    t = next((k for k in range(r) if P.ctx.pow(P.zeta_r, k) == v), None)
    if t is None or math.gcd(t, r) != 1:
        raise ValueError("degenerate pairing table")
    j = pow((-t) % r, -1, r)
    return frozenset({j, (r - j) % r})


def morita_equivalent(P: Params, theta: Character,
                      theta2: Character) -> bool:
    """Whether the two blocks are equivalent: exponents agree up to
    sign.  The invariant route (pairing extraction and recovery) is
    exercised against this predicate in the test suite."""
    _check_faithful(theta)
    _check_faithful(theta2)
    return (theta2.e - theta.e) % P.r == 0 or \
        (theta2.e + theta.e) % P.r == 0


def mf_number(ell: int, r: int) -> int:
    """min{m >= 1 : ell^m = +-1 mod r}.

    Computed through the multiplicative order d: the minimum is d/2
    when -1 is a power of ell (necessarily the d/2-th), else d.
    """
    if not isinstance(r, int) or r <= 1:
        raise ValueError(f"r must be an integer > 1, got {r}")
    if math.gcd(ell, r) != 1:
        raise ValueError(f"ell and r must be coprime, got {ell}, {r}")
    if r == 2:
        return 1
    d = n_order(ell, r)
    if d % 2 == 0 and pow(ell, d // 2, r) == r - 1:
        return d // 2
    return d


def params_for_target(ell: int, n: int,
                      cap: int = 10 ** 8) -> Tuple[int, int]:
    """The construction recipe for a block with mf number exactly n:
    r = ell^n + 1 and the least prime p = 1 both mod ell and mod r."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not isprime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    r = ell ** n + 1
    step = math.lcm(ell, r)
    p = 1 + step
    while p <= cap:
        if isprime(p):
            assert mf_number(ell, r) == n
            return r, p
        p += step
    raise RuntimeError(f"no prime p = 1 mod lcm({ell}, {r}) below {cap}")


def swap_isomorphism(P: Params, x: GAElem) -> GAElem:
    """Linear extension of the coordinate swap of G.

    Swaps the two plain coordinates and g1 with g2, inverts gz.  An
    algebra isomorphism carrying the theta-block onto the block of the
    inverse character.
    """
    if len(x.keys) == 0:
        return ga_zero()
    r, p, dsz = P.r, P.p, P.dsz
    key, c = np.divmod(x.keys, r)
    key, b = np.divmod(key, r)
    key, a = np.divmod(key, r)
    n, x2 = np.divmod(key, p)
    n, d2 = np.divmod(n, dsz)
    d1, x1 = np.divmod(n, p)
    n2 = ((d2 * p + x2) * dsz + d1) * p + x1
    # g1 <-> g2 and gz -> gz^-1; the cocycle forces the -ab correction
    c2 = (-a * b - c) % r
    keys = ((n2 * r + b) * r + a) * r + c2
    return _dedupe(P, keys, x.coeffs.copy())


def _index_perm(P: Params, u: int) -> np.ndarray:
    """Packed-vector table for relabeling D-indices s -> s*u mod p."""
    perm = np.zeros(P.dsz, dtype=np.int64)
    for d in range(P.dsz):
        v = d_unpack(P, d)
        w = [0] * P.p
        for s in range(P.p):
            w[(s * u) % P.p] = v[s]
        perm[d] = d_pack(P, w)
    return perm


def fp_automorphism(P: Params, u1: int, u2: int, x: GAElem) -> GAElem:
    """Linear extension of the index-rescaling automorphism of G.

    Scales the support of each plain coordinate by the unit u_i (both
    the D-indices and the P-coordinate) and fixes H pointwise; fixes
    every central character idempotent of Z.
    """
    p = P.p
    u1 %= p
    u2 %= p
    if u1 == 0 or u2 == 0:
        raise ValueError("scalars must be nonzero mod p")
    if len(x.keys) == 0:
        return ga_zero()
    r, dsz = P.r, P.dsz
    perm1 = _index_perm(P, u1)
    perm2 = _index_perm(P, u2)
    key, c = np.divmod(x.keys, r)
    key, b = np.divmod(key, r)
    key, a = np.divmod(key, r)
    n, x2 = np.divmod(key, p)
    n, d2 = np.divmod(n, dsz)
    d1, x1 = np.divmod(n, p)
    n2 = ((perm1[d1] * p + (x1 * u1) % p) * dsz + perm2[d2]) * p \
        + (x2 * u2) % p
    keys = ((n2 * r + a) * r + b) * r + c
    return _dedupe(P, keys, x.coeffs.copy())
