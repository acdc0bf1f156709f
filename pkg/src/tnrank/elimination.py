"""Matrix rank and rank-revealing factorization in both scalar modes.

Exact mode works over the Gaussian rationals.  Ranks are computed by
fraction-free (Bareiss) elimination with column pivoting, which keeps all
intermediate values equal to minors of the cleared integer matrix and so
bounds coefficient growth; Python's arbitrary-precision integers make the
result exact for any input.  Float mode uses singular values with a
relative tolerance.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .scalars import GaussianRational, as_exact


class RankToleranceWarning(UserWarning):
    """Float rank decided within a factor of 8 of the tolerance threshold."""


def default_float_tol(shape) -> float:
    m, n = shape
    return max(m, n) * np.finfo(np.float64).eps * 8.0


# ---------------------------------------------------------------------------
# exact mode
# ---------------------------------------------------------------------------


def _cleared_rows(mat):
    """Scale each row by the lcm of its denominators.

    Returns (rows, is_real): rows of Python ints when every entry is real,
    otherwise rows of GaussianRational with integer components.  Row scaling
    changes neither the rank nor the reduced row echelon form.
    """
    nrows, ncols = mat.shape
    is_real = True
    entries = []
    dens = []
    for i in range(nrows):
        row = []
        den = 1
        for j in range(ncols):
            g = mat[i, j]
            if type(g) is not GaussianRational:
                g = as_exact(g)
            row.append(g)
            if g.im:
                is_real = False
            rd = g.re.denominator
            if rd != 1:
                den = den * rd // math.gcd(den, rd)
            imd = g.im.denominator
            if imd != 1:
                den = den * imd // math.gcd(den, imd)
        entries.append(row)
        dens.append(den)
    out = []
    for row, den in zip(entries, dens):
        if is_real:
            if den == 1:
                out.append([g.re.numerator for g in row])
            else:
                out.append([int(g.re * den) for g in row])
        elif den == 1:
            out.append(row)
        else:
            out.append([GaussianRational(g.re * den, g.im * den) for g in row])
    return out, is_real


def _bareiss_rank(rows, exact_div) -> int:
    """Fraction-free elimination on mutable rows; returns the rank.

    ``exact_div(x, d)`` must implement exact division in the entry domain
    (``//`` for integers, true division for Gaussian rationals; both are
    exact here because every quotient is a minor by Sylvester's identity).
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    prev = 1
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        piv = -1
        for i in range(row, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            rows[row], rows[piv] = rows[piv], rows[row]
        p = rows[row][col]
        for i in range(row + 1, nrows):
            f = rows[i][col]
            if not f:
                continue
            ri, rr = rows[i], rows[row]
            for j in range(col, ncols):
                ri[j] = exact_div(p * ri[j] - f * rr[j], prev)
        prev = p
        row += 1
    return row


def exact_rank(mat: np.ndarray) -> int:
    """Rank over the rationals of an object matrix of exact scalars."""
    if mat.ndim != 2:
        raise ValueError("exact_rank expects a 2-d array")
    if mat.size == 0:
        return 0
    rows, is_real = _cleared_rows(mat)
    if is_real:
        return _bareiss_rank(rows, lambda x, d: x // d)
    return _bareiss_rank(rows, lambda x, d: x / d)


def exact_row_reduce(mat: np.ndarray):
    """Reduced row echelon form of an exact matrix.

    Returns ``(rank, pivot_cols, rref)`` where ``rref`` is a
    ``rank x ncols`` object array of GaussianRational and the input equals
    ``mat[:, pivot_cols] @ rref`` exactly.  Pivoting scans columns left to
    right and takes the first nonzero row, so the output is deterministic.
    """
    if mat.ndim != 2:
        raise ValueError("exact_row_reduce expects a 2-d array")
    nrows, ncols = mat.shape
    rows, is_real = _cleared_rows(mat)
    if is_real:
        rows = [[GaussianRational(x) for x in row] for row in rows]

    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        piv = -1
        for i in range(row, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            rows[row], rows[piv] = rows[piv], rows[row]
        p = rows[row][col]
        for i in range(row + 1, nrows):
            f = rows[i][col]
            if not f:
                continue
            ri, rr = rows[i], rows[row]
            for j in range(col, ncols):
                ri[j] = p * ri[j] - f * rr[j]
        pivots.append(col)
        row += 1
    rank = row

    # Back-substitution: normalize pivots to one and clear entries above.
    for k in range(rank - 1, -1, -1):
        ck = pivots[k]
        p = rows[k][ck]
        rows[k] = [x / p for x in rows[k]]
        for i in range(k):
            f = rows[i][ck]
            if not f:
                continue
            ri, rk = rows[i], rows[k]
            for j in range(ck, ncols):
                ri[j] = ri[j] - f * rk[j]

    rref = np.empty((rank, ncols), dtype=object)
    for k in range(rank):
        rref[k, :] = rows[k]
    return rank, pivots, rref


def exact_rank_factor(mat: np.ndarray):
    """Exact rank factorization ``mat = C @ R``.

    ``C`` is the pivot columns of ``mat`` (m x r) and ``R`` the nonzero rows
    of its reduced row echelon form (r x n).
    """
    rank, pivots, rref = exact_row_reduce(mat)
    c = np.empty((mat.shape[0], rank), dtype=object)
    for j, p in enumerate(pivots):
        for i in range(mat.shape[0]):
            c[i, j] = as_exact(mat[i, p])
    return rank, c, rref


# ---------------------------------------------------------------------------
# float mode
# ---------------------------------------------------------------------------


def float_rank(mat: np.ndarray, tol: float | None = None) -> int:
    """Number of singular values above ``tol * sigma_1``."""
    if mat.ndim != 2:
        raise ValueError("float_rank expects a 2-d array")
    if mat.size == 0:
        return 0
    if tol is None:
        tol = default_float_tol(mat.shape)
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0.0:
        return 0
    thresh = tol * s[0]
    rank = int(np.sum(s > thresh))
    _warn_if_near_threshold(s, rank, thresh)
    return rank


def float_rank_factor(mat: np.ndarray, tol: float | None = None):
    """Rank-revealing factorization ``mat ~= C @ R`` by truncated SVD."""
    if tol is None:
        tol = default_float_tol(mat.shape)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        thresh = tol * s[0]
        rank = int(np.sum(s > thresh))
        _warn_if_near_threshold(s, rank, thresh)
    return rank, u[:, :rank] * s[:rank], vh[:rank, :]


def _warn_if_near_threshold(s, rank, thresh):
    near_keep = rank > 0 and s[rank - 1] < 8.0 * thresh
    near_drop = rank < len(s) and s[rank] > thresh / 8.0
    if near_keep or near_drop:
        gap = float(s[rank - 1] / s[rank]) if 0 < rank < len(s) and s[rank] > 0 else float("inf")
        warnings.warn(
            f"rank {rank} decided near tolerance threshold "
            f"(sigma_r/sigma_r+1 = {gap:.3g})",
            RankToleranceWarning,
            stacklevel=3,
        )


def exact_to_float(mat: np.ndarray) -> np.ndarray:
    """Explicit conversion of an exact object matrix to complex128."""
    out = np.empty(mat.shape, dtype=np.complex128)
    flat_in = mat.reshape(-1)
    flat_out = out.reshape(-1)
    for i in range(flat_in.size):
        flat_out[i] = as_exact(flat_in[i]).to_complex()
    return out
