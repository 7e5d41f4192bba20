"""Exact arithmetic in the finite field F_{ell^d}.

Elements are plain ints in [0, ell^d): the base-ell packed little-endian
digit vector of the polynomial representative of degree < d.  All arithmetic
is exact; the modulus and the multiplicative generator are chosen
deterministically so every downstream value is reproducible bit for bit.

The field degree d is always chosen (by callers) so that the field contains
all p-th and r-th roots of unity in play, i.e. it is a splitting field for
every group algebra this package touches.
"""

from __future__ import annotations

import numpy as np

# Vectorized multiply via exp/log tables is only enabled for fields up to
# this many elements; larger fields only ever see scalar arithmetic here.
# The build is a one-time q-step scan, well under a second at the cap.
_TABLE_LIMIT = 1 << 18


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (n stays <= 3^24 here)."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _poly_divmod(num: list[int], den: list[int], ell: int) -> tuple[list[int], list[int]]:
    """Divide digit-coefficient polynomials over F_ell (little-endian lists)."""
    num = list(num)
    dd = len(den) - 1
    inv_lead = pow(den[-1], -1, ell)
    quo = [0] * max(len(num) - dd, 0)
    for k in range(len(num) - dd - 1, -1, -1):
        c = (num[k + dd] * inv_lead) % ell
        if c:
            quo[k] = c
            for i, dc in enumerate(den):
                num[k + i] = (num[k + i] - c * dc) % ell
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quo, num


def _poly_is_irreducible(coeffs: list[int], ell: int) -> bool:
    """Trial division by every monic polynomial of degree <= d/2."""
    d = len(coeffs) - 1
    if d < 1 or coeffs[-1] != 1:
        return False
    if d == 1:
        return True
    if coeffs[0] == 0:
        return False
    for e in range(1, d // 2 + 1):
        for low in range(ell**e):
            den, v = [], low
            for _ in range(e):
                den.append(v % ell)
                v //= ell
            den.append(1)
            _, rem = _poly_divmod(coeffs, den, ell)
            if rem == [0]:
                return False
    return True


class FieldContext:
    """Immutable context for F_{ell^d}: modulus, generator, lookup tables."""

    def __init__(self, ell: int, d: int, modulus: tuple[int, ...], generator: int,
                 build_tables: bool = True):
        self.ell = ell
        self.d = d
        self.order = ell**d
        self.modulus = modulus  # length d+1, little-endian, monic
        self.generator = generator
        self.zero = 0
        self.one = 1 % self.order
        # x^k mod modulus for k in [d, 2d-2], packed, used by raw multiply
        self._red = []
        for k in range(d, 2 * d - 1):
            digits = [0] * k + [1]
            _, rem = _poly_divmod(digits, list(modulus), ell)
            rem += [0] * (d - len(rem))
            self._red.append(self._pack(rem[:d]))
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._frob_table: np.ndarray | None = None
        if build_tables and self.order <= _TABLE_LIMIT:
            self._build_tables()

    # -- packing ------------------------------------------------------------

    def _pack(self, digits: list[int]) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.ell + c
        return v

    def to_coeffs(self, x: int) -> list[int]:
        """Little-endian coefficient list of length d (the JSON form)."""
        out = []
        for _ in range(self.d):
            out.append(x % self.ell)
            x //= self.ell
        return out

    def from_coeffs(self, coeffs) -> int:
        assert len(coeffs) <= self.d
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.ell + int(c) % self.ell
        return v

    def from_int(self, n: int) -> int:
        """Embed a prime-field residue (constant polynomial)."""
        return n % self.ell

    # -- scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.ell == 2:
            return a ^ b
        v, m = 0, 1
        for _ in range(self.d):
            v += ((a % self.ell + b % self.ell) % self.ell) * m
            a //= self.ell
            b //= self.ell
            m *= self.ell
        return v

    def neg(self, a: int) -> int:
        if self.ell == 2:
            return a
        v, m = 0, 1
        for _ in range(self.d):
            v += ((-(a % self.ell)) % self.ell) * m
            a //= self.ell
            m *= self.ell
        return v

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scalar_mul(self, c: int, a: int) -> int:
        """Multiply by a prime-field scalar c (digitwise)."""
        c %= self.ell
        if self.ell == 2:
            return a if c else 0
        v, m = 0, 1
        for _ in range(self.d):
            v += ((a % self.ell) * c % self.ell) * m
            a //= self.ell
            m *= self.ell
        return v

    def _raw_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        ell = self.ell
        if ell == 2:
            acc = 0
            bb = b
            sh = 0
            while bb:
                if bb & 1:
                    acc ^= a << sh
                bb >>= 1
                sh += 1
            # reduce degree-by-degree with the packed modulus
            mod_packed = self._pack(list(self.modulus[:-1]))
            top = self.order
            deg = acc.bit_length() - 1
            while deg >= self.d:
                acc ^= (top | mod_packed) << (deg - self.d)
                deg = acc.bit_length() - 1
            return acc
        da = self.to_coeffs(a)
        db = self.to_coeffs(b)
        conv = [0] * (2 * self.d - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    conv[i + j] = (conv[i + j] + ca * cb) % ell
        v = self._pack(conv[: self.d])
        for k in range(self.d, 2 * self.d - 1):
            if conv[k]:
                v = self.add(v, self.scalar_mul(conv[k], self._red[k - self.d]))
        return v

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            q1 = self.order - 1
            return int(self._exp[(int(self._log[a]) + int(self._log[b])) % q1])
        return self._raw_mul(a, b)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        acc, base = self.one, a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_{ell^d}")
        if self._exp is not None:
            q1 = self.order - 1
            return int(self._exp[(q1 - int(self._log[a])) % q1])
        return self.pow(a, self.order - 2)

    def frobenius(self, x: int, m: int = 1) -> int:
        """x^(ell^m); m = d is the identity."""
        m %= self.d
        if m == 0:
            return x
        if self._frob_table is not None:
            y = x
            for _ in range(m):
                y = int(self._frob_table[y])
            return y
        y = x
        for _ in range(m):
            y = self.pow(y, self.ell)
        return y

    def element_order(self, a: int) -> int:
        assert a != 0
        n = self.order - 1
        for q in factorize(n):
            while n % q == 0 and self.pow(a, n // q) == self.one:
                n //= q
        return n

    # -- tables and vector kernels -------------------------------------------

    def _build_tables(self):
        q = self.order
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp[i] = v
            exp[i + q - 1] = v
            log[v] = i
            v = self._raw_mul(v, self.generator)
        assert v == 1, "generator order must be q-1"
        self._exp = exp
        self._log = log
        frob = np.zeros(q, dtype=np.int64)
        for x in range(q):
            frob[x] = self.pow(x, self.ell)
        self._frob_table = frob

    def _require_tables(self):
        if self._exp is None:
            raise ValueError(
                f"vector kernels need exp/log tables (order {self.order} too large)"
            )

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self._require_tables()
        q1 = self.order - 1
        out = self._exp[(self._log[a] + self._log[b]) % q1]
        nz = (a != 0) & (b != 0)
        return np.where(nz, out, 0)

    def vscale(self, c: int, a: np.ndarray) -> np.ndarray:
        if c == 0:
            return np.zeros_like(a)
        self._require_tables()
        q1 = self.order - 1
        out = self._exp[(int(self._log[c]) + self._log[a]) % q1]
        return np.where(a != 0, out, 0)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.ell == 2:
            return a ^ b
        out = np.zeros_like(a)
        m = 1
        aa, bb = a, b
        for _ in range(self.d):
            out += ((aa % self.ell + bb % self.ell) % self.ell) * m
            aa = aa // self.ell
            bb = bb // self.ell
            m *= self.ell
        return out

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.ell == 2:
            return a.copy()
        out = np.zeros_like(a)
        m = 1
        aa = a
        for _ in range(self.d):
            out += ((-(aa % self.ell)) % self.ell) * m
            aa = aa // self.ell
            m *= self.ell
        return out

    def vfrob(self, a: np.ndarray) -> np.ndarray:
        self._require_tables()
        return self._frob_table[a]

    def digit_plane(self, a: np.ndarray, k: int) -> np.ndarray:
        """k-th base-ell digit of every packed element."""
        if self.ell == 2:
            return (a >> k) & 1
        return (a // (self.ell**k)) % self.ell

    def pack_planes(self, planes) -> np.ndarray:
        acc = np.zeros_like(planes[0], dtype=np.int64)
        m = 1
        for pl in planes:
            acc += (pl.astype(np.int64) % self.ell) * m
            m *= self.ell
        return acc

    def __repr__(self):
        return f"FieldContext(ell={self.ell}, d={self.d}, modulus={self.modulus})"


def field_make(ell: int, d: int) -> FieldContext:
    """Deterministic F_{ell^d}: smallest irreducible modulus, then smallest
    generator (both in packed-integer order)."""
    if not is_prime(ell):
        raise ValueError(f"ell = {ell} is not prime")
    if not 1 <= d <= 24:
        raise ValueError(f"extension degree d = {d} outside [1, 24]")
    modulus = None
    for low in range(ell**d):
        digits, v = [], low
        for _ in range(d):
            digits.append(v % ell)
            v //= ell
        cand = digits + [1]
        if _poly_is_irreducible(cand, ell):
            modulus = tuple(cand)
            break
    assert modulus is not None
    ctx = FieldContext(ell, d, modulus, generator=1, build_tables=False)
    q1 = ctx.order - 1
    fac = factorize(q1) if q1 > 1 else {}
    gen = None
    for g in range(1, ctx.order):
        if all(ctx.pow(g, q1 // q) != ctx.one for q in fac) and ctx.pow(g, q1) == ctx.one:
            gen = g
            break
    assert gen is not None
    out = FieldContext(ell, d, modulus, gen)
    return out


def field_frobenius(ctx: FieldContext, x: int, m: int) -> int:
    """x^(ell^m); the scalar part of the ring automorphism sigma."""
    if not 0 <= x < ctx.order:
        raise ValueError("element out of range for this field")
    if m < 0:
        raise ValueError("m must be non-negative")
    return ctx.frobenius(x, m)


def root_of_unity(ctx: FieldContext, m: int) -> int:
    """The fixed primitive m-th root of unity: generator^((q-1)/m)."""
    if m <= 0:
        raise ValueError("m must be positive")
    q1 = ctx.order - 1
    if m == 1:
        return ctx.one
    if q1 % m != 0:
        raise ValueError(
            f"{m} does not divide {q1}: F_{{{ctx.ell}^{ctx.d}}} is not a "
            f"splitting field for C_{m}"
        )
    return ctx.pow(ctx.generator, q1 // m)
