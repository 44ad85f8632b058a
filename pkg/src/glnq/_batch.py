"""Vectorized F_q kernels over stacks of matrices (numpy int64 arrays).

Every kernel works through the field's addition/multiplication tables, so the
same code serves prime and non-prime fields.
"""

from __future__ import annotations

import numpy as np

from .gfq import FieldSpec, FqMatrix

CHUNK = 1 << 15


class Tables:
    """numpy copies of a field's operation tables."""

    _cache: dict = {}

    def __new__(cls, F: FieldSpec):
        key = (F.p, F.e)
        if key not in cls._cache:
            self = super().__new__(cls)
            self.F = F
            self.q = F.q
            self.add = np.array(F.add, dtype=np.int64)
            self.sub = np.array(F.sub, dtype=np.int64)
            self.mul = np.array(F.mul, dtype=np.int64)
            self.neg = np.array(F.neg, dtype=np.int64)
            self.inv = np.array(F.inv, dtype=np.int64)
            cls._cache[key] = self
        return cls._cache[key]


def stack(mats) -> np.ndarray:
    mats = list(mats)
    if not mats:
        return np.zeros((0, 0, 0), dtype=np.int64)
    r, c = mats[0].rows, mats[0].cols
    return np.array([m.entries for m in mats], dtype=np.int64).reshape(len(mats), r, c)


def unstack(F: FieldSpec, arr: np.ndarray) -> list[FqMatrix]:
    n, r, c = arr.shape
    return [FqMatrix(F, r, c, tuple(int(x) for x in row)) for row in arr.reshape(n, r * c)]


def matmul(A: np.ndarray, B: np.ndarray, T: Tables) -> np.ndarray:
    """Batched product with broadcasting over leading axes."""
    if T.F.e == 1:
        return np.matmul(A, B) % T.F.p
    m = A.shape[-1]
    acc = T.mul[A[..., :, 0, None], B[..., 0, None, :]]
    for k in range(1, m):
        acc = T.add[acc, T.mul[A[..., :, k, None], B[..., k, None, :]]]
    return acc


def subtract(A: np.ndarray, B: np.ndarray, T: Tables) -> np.ndarray:
    if T.F.e == 1:
        return (A - B) % T.F.p
    return T.sub[A, B]


def rank(A: np.ndarray, T: Tables) -> np.ndarray:
    """Rank of every matrix in a stack of shape (N, r, c)."""
    out = np.empty(A.shape[0], dtype=np.int64)
    for s in range(0, A.shape[0], CHUNK):
        out[s : s + CHUNK] = _rank_chunk(A[s : s + CHUNK], T)
    return out


def _rank_chunk(A: np.ndarray, T: Tables) -> np.ndarray:
    A = A.copy()
    N, r, c = A.shape
    rk = np.zeros(N, dtype=np.int64)
    rows = np.arange(r)
    for col in range(c):
        mask = (A[:, :, col] != 0) & (rows[None, :] >= rk[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        sel = np.nonzero(has)[0]
        piv = mask[sel].argmax(axis=1)
        tgt = rk[sel]
        sub = A[sel]
        prow = sub[np.arange(len(sel)), piv].copy()
        trow = sub[np.arange(len(sel)), tgt].copy()
        sub[np.arange(len(sel)), piv] = trow
        prow = T.mul[T.inv[prow[:, col]][:, None], prow]
        sub[np.arange(len(sel)), tgt] = prow
        factors = sub[:, :, col]
        elim = T.sub[sub, T.mul[factors[:, :, None], prow[:, None, :]]]
        below = rows[None, :] > tgt[:, None]
        sub = np.where(below[:, :, None], elim, sub)
        A[sel] = sub
        rk[sel] += 1
    return rk


def powers(q: int, length: int) -> np.ndarray:
    return q ** np.arange(length, dtype=np.int64)


def encode(A: np.ndarray, q: int) -> np.ndarray:
    """Integer code of each matrix: entry k of the flattened matrix has weight q**k."""
    flat = A.reshape(A.shape[0], -1)
    return flat @ powers(q, flat.shape[1])


def decode(codes: np.ndarray, n: int, q: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    digits = (codes[:, None] // powers(q, n * n)[None, :]) % q
    return digits.reshape(len(codes), n, n)


def code_fits(n: int, q: int) -> bool:
    return q ** (n * n) < 2**62
