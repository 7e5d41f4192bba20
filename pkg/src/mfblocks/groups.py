"""Normal forms and products for the block-source group family.

The group is G = ((D1 x P1) x (D2 x P2)) x H (semidirect), built from
primes ell, p and a divisor r of p - 1 coprime to ell:

  * P_i = (F_p, +),
  * D_i = (prod_{F_p} C_ell) / diagonal, stored as length-p exponent
    vectors normalized to 0 at index 0,
  * H of order r^3 with generators g1, g2 and central gz = [g1, g2],
  * L_i = <g_i> acts on D_i x P_i through the order-r subgroup of
    F_p^* generated by g0; gz acts trivially on everything.

Elements are kept in the normal form d1(v1)*x1 * d2(v2)*x2 * g1^a g2^b gz^c.
All operations use the right-action convention x^g = g^-1 x g, so
[g, h] = g^-1 h^-1 g h.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from .field import field_make, is_prime, root_of_unity


def mult_order(a: int, n: int) -> int:
    """Multiplicative order of a modulo n."""
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible modulo {n}")
    v, k = a % n, 1
    while v != 1:
        v = (v * a) % n
        k += 1
    return k


def least_primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime p."""
    if p == 2:
        return 1
    target = p - 1
    from .field import factorize

    prime_facs = sorted(factorize(target))
    for g in range(2, p):
        if all(pow(g, target // q, p) != 1 for q in prime_facs):
            return g
    raise ValueError(f"no primitive root found modulo {p}")


class Params:
    """Immutable parameter pack: primes, field, g0 and roots of unity.

    ell, p are distinct primes; r > 1 divides p - 1 and is coprime to
    ell.  The coefficient field F_{ell^d} has d = lcm(ord_p(ell),
    ord_r(ell)), which makes it a splitting field for every subgroup
    in play.  g0 generates the order-r subgroup of F_p^*.
    """

    def __init__(self, ell: int, p: int, r: int):
        if not is_prime(ell):
            raise ValueError(f"ell must be prime, got {ell}")
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if p == ell:
            raise ValueError("p must differ from ell")
        if not isinstance(r, int) or r <= 1:
            raise ValueError(f"r must be an integer > 1, got {r}")
        if (p - 1) % r != 0:
            raise ValueError(f"r must divide p - 1, got r={r}, p={p}")
        if r % ell == 0:
            raise ValueError(f"r must be coprime to ell, got r={r}, ell={ell}")

        self.ell = ell
        self.p = p
        self.r = r
        self.dsz = ell ** (p - 1)
        self.d = math.lcm(mult_order(ell, p), mult_order(ell, r))
        self.ctx = field_make(ell, self.d)
        gamma = least_primitive_root(p)
        self.g0 = pow(gamma, (p - 1) // r, p)
        self.zeta_p = root_of_unity(self.ctx, p)
        self.zeta_r = root_of_unity(self.ctx, r)
        # g0 powers indexed mod r; g0 has exact order r
        self._g0pow = [pow(self.g0, t, p) for t in range(r)]
        assert self._g0pow[1 % r] != 1 or r == 1
        assert pow(self.g0, r, p) == 1
        # lazy attachments (action tables, algebra contexts) keyed by name
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"Params(ell={self.ell}, p={self.p}, r={self.r}, d={self.d})"


@lru_cache(maxsize=None)
def params_make(ell: int, p: int, r: int) -> Params:
    return Params(ell, p, r)


class GroupElem:
    """Group element in the normal form d1(v1)*x1 * d2(v2)*x2 * g1^a g2^b gz^c.

    v1, v2 are length-p tuples of residues mod ell with entry 0 equal
    to 0; x1, x2 are residues mod p; a, b, c residues mod r.
    """

    __slots__ = ("v1", "x1", "v2", "x2", "a", "b", "c")

    def __init__(self, v1, x1, v2, x2, a, b, c):
        self.v1 = tuple(v1)
        self.x1 = x1
        self.v2 = tuple(v2)
        self.x2 = x2
        self.a = a
        self.b = b
        self.c = c

    def parts(self):
        return (self.v1, self.x1, self.v2, self.x2, self.a, self.b, self.c)

    def __eq__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        return self.parts() == other.parts()

    def __hash__(self):
        return hash(self.parts())

    def __repr__(self):
        return (f"GroupElem(v1={self.v1}, x1={self.x1}, v2={self.v2}, "
                f"x2={self.x2}, h=({self.a},{self.b},{self.c}))")


def identity(P: Params) -> GroupElem:
    z = (0,) * P.p
    return GroupElem(z, 0, z, 0, 0, 0, 0)


def _normalize(v: list, ell: int) -> tuple:
    """Shift a coset representative so that entry 0 vanishes."""
    z = v[0]
    if z:
        return tuple((t - z) % ell for t in v)
    return tuple(v)


def d_elem(P: Params, side: int, index: int, count: int = 1) -> GroupElem:
    """d_side^index raised to count, as a normalized element."""
    v = [0] * P.p
    v[index % P.p] = count % P.ell
    v = _normalize(v, P.ell)
    z = (0,) * P.p
    if side == 1:
        return GroupElem(v, 0, z, 0, 0, 0, 0)
    if side == 2:
        return GroupElem(z, 0, v, 0, 0, 0, 0)
    raise ValueError(f"side must be 1 or 2, got {side}")


def p_elem(P: Params, side: int, x: int) -> GroupElem:
    z = (0,) * P.p
    if side == 1:
        return GroupElem(z, x % P.p, z, 0, 0, 0, 0)
    if side == 2:
        return GroupElem(z, 0, z, x % P.p, 0, 0, 0)
    raise ValueError(f"side must be 1 or 2, got {side}")


def h_elem(P: Params, a: int = 0, b: int = 0, c: int = 0) -> GroupElem:
    z = (0,) * P.p
    return GroupElem(z, 0, z, 0, a % P.r, b % P.r, c % P.r)


def _scale_side(P: Params, v: Sequence[int], x: int, u: int):
    """Conjugation twist: D-indexes and the P-coordinate scale by u."""
    if u == 1:
        return tuple(v), x
    p = P.p
    w = [0] * p
    for g in range(p):
        w[(g * u) % p] = v[g]
    return tuple(w), (x * u) % p


def _side_mul(P: Params, v, x, w, y):
    """(d(v)x)(d(w)y) = (d(v + T_x w), x + y) with (T_x w)[h] = w[h+x]."""
    ell, p = P.ell, P.p
    out = [(v[h] + w[(h + x) % p]) % ell for h in range(p)]
    return _normalize(out, ell), (x + y) % p


def _side_inv(P: Params, v, x):
    ell, p = P.ell, P.p
    out = [(-v[(h - x) % p]) % ell for h in range(p)]
    return _normalize(out, ell), (-x) % p


def group_mul(P: Params, g: GroupElem, h: GroupElem) -> GroupElem:
    """Product in G.

    The H-part of g is moved past the plain part of h, twisting side i
    by g0^-a (i = 1) resp. g0^-b (i = 2); H-parts compose through the
    cocycle (a,b,c)(a',b',c') = (a+a', b+b', c+c'-a'b).
    """
    r = P.r
    s1 = P._g0pow[(-g.a) % r]
    s2 = P._g0pow[(-g.b) % r]
    w1, y1 = _scale_side(P, h.v1, h.x1, s1)
    w2, y2 = _scale_side(P, h.v2, h.x2, s2)
    v1, x1 = _side_mul(P, g.v1, g.x1, w1, y1)
    v2, x2 = _side_mul(P, g.v2, g.x2, w2, y2)
    return GroupElem(v1, x1, v2, x2,
                     (g.a + h.a) % r,
                     (g.b + h.b) % r,
                     (g.c + h.c - h.a * g.b) % r)


def group_inv(P: Params, g: GroupElem) -> GroupElem:
    """Inverse: g = n*w gives g^-1 = (n^w)^-1 * w^-1."""
    r = P.r
    s1 = P._g0pow[g.a % r]
    s2 = P._g0pow[g.b % r]
    v1, x1 = _scale_side(P, g.v1, g.x1, s1)
    v2, x2 = _scale_side(P, g.v2, g.x2, s2)
    w1, y1 = _side_inv(P, v1, x1)
    w2, y2 = _side_inv(P, v2, x2)
    return GroupElem(w1, y1, w2, y2,
                     (-g.a) % r, (-g.b) % r, (-(g.a * g.b) - g.c) % r)


def conjugate(P: Params, x: GroupElem, h: GroupElem) -> GroupElem:
    """x^h = h^-1 x h."""
    return group_mul(P, group_mul(P, group_inv(P, h), x), h)


def subgroup_elements(P: Params, tag: str) -> list:
    """Enumerate a tagged subgroup, or list generators for E.

    Valid tags: Z, L1, L2, H, P1, P2, D1, D2, E-generators.  The full
    group G is refused: its order is |D|^2-scale and enumeration is
    never needed.
    """
    if tag == "Z":
        return [h_elem(P, 0, 0, c) for c in range(P.r)]
    if tag == "L1":
        return [h_elem(P, a, 0, 0) for a in range(P.r)]
    if tag == "L2":
        return [h_elem(P, 0, b, 0) for b in range(P.r)]
    if tag == "H":
        return [h_elem(P, a, b, c)
                for a in range(P.r) for b in range(P.r) for c in range(P.r)]
    if tag == "P1":
        return [p_elem(P, 1, x) for x in range(P.p)]
    if tag == "P2":
        return [p_elem(P, 2, x) for x in range(P.p)]
    if tag in ("D1", "D2"):
        side = 1 if tag == "D1" else 2
        out = []
        z = (0,) * P.p
        for packed in range(P.dsz):
            v, t = [0], packed
            for _ in range(P.p - 1):
                v.append(t % P.ell)
                t //= P.ell
            v = tuple(v)
            if side == 1:
                out.append(GroupElem(v, 0, z, 0, 0, 0, 0))
            else:
                out.append(GroupElem(z, 0, v, 0, 0, 0, 0))
        return out
    if tag == "E-generators":
        return [p_elem(P, 1, 1), p_elem(P, 2, 1),
                h_elem(P, 1, 0, 0), h_elem(P, 0, 1, 0)]
    if tag == "G":
        raise ValueError("G is not enumerable; ask for E-generators "
                         "or a proper subgroup tag")
    raise ValueError(f"unknown subgroup tag {tag!r}")


def d_pack(P: Params, v: Sequence[int]) -> int:
    """Pack a normalized D-vector into an integer (entry 0 dropped)."""
    t = 0
    for g in range(P.p - 1, 0, -1):
        t = t * P.ell + v[g]
    return t


def d_unpack(P: Params, packed: int) -> tuple:
    v, t = [0], packed
    for _ in range(P.p - 1):
        v.append(t % P.ell)
        t //= P.ell
    return tuple(v)


def pack_key(P: Params, g: GroupElem) -> int:
    """Pack a normalized element into a single integer key.

    Layout (most significant first): d1, x1, d2, x2, a, b, c.  Fits in
    64 bits at every desk configuration.
    """
    key = d_pack(P, g.v1)
    key = key * P.p + g.x1
    key = key * P.dsz + d_pack(P, g.v2)
    key = key * P.p + g.x2
    key = key * P.r + g.a
    key = key * P.r + g.b
    key = key * P.r + g.c
    return key


def unpack_key(P: Params, key: int) -> GroupElem:
    key, c = divmod(key, P.r)
    key, b = divmod(key, P.r)
    key, a = divmod(key, P.r)
    key, x2 = divmod(key, P.p)
    key, dd2 = divmod(key, P.dsz)
    d1, x1 = divmod(key, P.p)
    return GroupElem(d_unpack(P, d1), x1, d_unpack(P, dd2), x2, a, b, c)


def elem_to_dict(g: GroupElem) -> dict:
    return {"v1": list(g.v1), "x1": g.x1, "v2": list(g.v2), "x2": g.x2,
            "h": [g.a, g.b, g.c]}


def elem_from_dict(P: Params, data: dict) -> GroupElem:
    ell, p, r = P.ell, P.p, P.r
    v1 = _normalize([t % ell for t in data["v1"]], ell)
    v2 = _normalize([t % ell for t in data["v2"]], ell)
    if len(v1) != p or len(v2) != p:
        raise ValueError(f"v-vectors must have length p = {p}")
    a, b, c = data["h"]
    return GroupElem(v1, data["x1"] % p, v2, data["x2"] % p,
                     a % r, b % r, c % r)
