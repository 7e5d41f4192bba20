"""Exact dense linear algebra over the packed finite-field representation.

Matrices are numpy int64 arrays of packed field elements.  Products run
as base-ell digit planes through float BLAS (entries stay far below the
exact-integer range of the float type), then reduce modulo ell and the
field modulus.  Elimination uses the context's table-backed row kernels.
"""

from __future__ import annotations

import numpy as np

from .field import FieldContext


def _red_digit_table(ctx: FieldContext) -> np.ndarray:
    """digits[k] of x^s mod modulus, for s in [0, 2d-2]; shape (2d-1, d)."""
    cached = getattr(ctx, "_red_digits", None)
    if cached is not None:
        return cached
    d = ctx.d
    table = np.zeros((2 * d - 1, d), dtype=np.int64)
    for s in range(d):
        table[s, s] = 1
    for s in range(d, 2 * d - 1):
        table[s] = ctx.to_coeffs(ctx._red[s - d])
    ctx._red_digits = table
    return table


def gf_matmul(ctx: FieldContext, A: np.ndarray, B: np.ndarray,
              dtype=np.float64) -> np.ndarray:
    """Exact product of packed matrices.

    Inner dimension times (ell-1)^2 must stay below the float type's
    exact-integer range (2^53 for float64, 2^24 for float32).
    """
    d, ell = ctx.d, ctx.ell
    assert A.shape[1] == B.shape[0]
    limit = 2 ** 53 if dtype == np.float64 else 2 ** 24
    assert A.shape[1] * (ell - 1) ** 2 < limit
    planes_a = [ctx.digit_plane(A, s).astype(dtype) for s in range(d)]
    planes_b = [ctx.digit_plane(B, t).astype(dtype) for t in range(d)]
    live_a = [s for s in range(d) if planes_a[s].any()]
    live_b = [t for t in range(d) if planes_b[t].any()]
    red = _red_digit_table(ctx)
    acc = np.zeros((d,) + (A.shape[0], B.shape[1]), dtype=np.int64)
    for s in live_a:
        for t in live_b:
            prod = (planes_a[s] @ planes_b[t]).astype(np.int64) % ell
            for k in range(d):
                dig = red[s + t, k]
                if dig:
                    acc[k] += prod * int(dig)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    m = 1
    for k in range(d):
        out += (acc[k] % ell) * m
        m *= ell
    return out


def gf_matvec(ctx: FieldContext, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    return gf_matmul(ctx, A, v.reshape(-1, 1)).ravel()


def gf_apply_axis(ctx: FieldContext, M: np.ndarray, T: np.ndarray,
                  axis: int) -> np.ndarray:
    """Contract matrix M into one axis of a packed tensor."""
    moved = np.moveaxis(T, axis, 0)
    flat = moved.reshape(moved.shape[0], -1)
    out = gf_matmul(ctx, M, flat)
    out = out.reshape((M.shape[0],) + moved.shape[1:])
    return np.moveaxis(out, 0, axis)


def gf_eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _rref(ctx: FieldContext, A: np.ndarray):
    """Reduced row echelon form (in place on a copy) and pivot columns."""
    M = A.astype(np.int64).copy()
    rows, cols = M.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(M[row:, col])[0]
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            M[[row, pr]] = M[[pr, row]]
        inv = ctx.inv(int(M[row, col]))
        M[row] = ctx.vscale(inv, M[row])
        f = M[:, col].copy()
        f[row] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            upd = ctx.vmul(ctx.vneg(f[hit])[:, None], M[row][None, :])
            M[hit] = ctx.vadd(M[hit], upd)
        pivots.append(col)
        row += 1
    return M, pivots


def gf_rank(ctx: FieldContext, A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    _, pivots = _rref(ctx, A)
    return len(pivots)


def gf_inv_matrix(ctx: FieldContext, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    assert A.shape == (n, n)
    aug = np.concatenate([A.astype(np.int64), gf_eye(n)], axis=1)
    R, pivots = _rref(ctx, aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:]


def gf_nullspace(ctx: FieldContext, A: np.ndarray) -> np.ndarray:
    """Rows form a basis of {x : A x = 0}."""
    rows, cols = A.shape
    R, pivots = _rref(ctx, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = ctx.neg(int(R[i, fc]))
    return basis


def gf_solve(ctx: FieldContext, A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One solution of A x = b; raises if inconsistent."""
    aug = np.concatenate([A.astype(np.int64), b.reshape(-1, 1)], axis=1)
    R, pivots = _rref(ctx, aug)
    if pivots and pivots[-1] == A.shape[1]:
        raise ValueError("inconsistent system")
    x = np.zeros(A.shape[1], dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, -1]
    return x
