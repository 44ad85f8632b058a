"""Exact arithmetic in Z[ζ_e] on dense coefficient vectors.

An element is an int64 array of length e holding the coefficient of ζ_e^k at
index k.  That representation is not unique; ``canonical`` maps it to a unique
normal form using the decomposition Z[ζ_e] = ⊗ Z[ζ_{p^a}] over the prime powers
of e, reducing each factor to the power basis 1, ξ, ..., ξ^{φ(p^a) - 1}.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def _factor(e: int) -> list[tuple[int, int]]:
    out, d = [], 2
    while d * d <= e:
        if e % d == 0:
            a = 0
            while e % d == 0:
                e //= d
                a += 1
            out.append((d, a))
        d += 1
    if e > 1:
        out.append((e, 1))
    return out


@lru_cache(maxsize=None)
def _layout(e: int):
    """Prime-power axes and the permutation sending exponent k to its CRT cell."""
    axes = _factor(e)
    mods = [p**a for p, a in axes]
    k = np.arange(e)
    flat = np.zeros(e, dtype=np.int64)
    for m in mods:
        flat = flat * m + (k % m)
    return axes, mods, flat


def canonical(x: np.ndarray, e: int) -> np.ndarray:
    """Normal form of elements stored along the last axis; shape (..., e) -> (..., e)."""
    x = np.asarray(x)
    dtype = object if x.dtype == object else np.int64  # object arrays hold big integers
    x = x.astype(dtype)
    axes, mods, flat = _layout(e)
    lead = x.shape[:-1]
    t = np.zeros(lead + (e,), dtype=dtype)
    t[..., flat] = x
    t = t.reshape(lead + tuple(mods))
    nlead = len(lead)
    for ax, (p, a) in enumerate(axes):
        m = p**a
        blk = m // p
        shape = t.shape
        t = np.moveaxis(t, nlead + ax, -1).copy()
        moved = t.shape
        t = t.reshape(moved[:-1] + (p, blk))
        # ξ^{r + (p-1) blk} = -Σ_{s<p-1} ξ^{r + s blk}
        top = t[..., p - 1, :]
        t[..., : p - 1, :] -= top[..., None, :]
        t[..., p - 1, :] = 0
        t = t.reshape(moved)
        t = np.moveaxis(t, -1, nlead + ax)
        assert t.shape == shape
    return t.reshape(lead + (e,))[..., flat]


def is_zero(x: np.ndarray, e: int) -> np.ndarray:
    return ~canonical(x, e).any(axis=-1)


def rational_value(x: np.ndarray, e: int):
    """The integer an element equals, or None when it is not a rational integer."""
    c = canonical(x, e)
    if c[1:].any():
        return None
    return int(c[0])


def from_sparse(terms: dict, e: int) -> np.ndarray:
    v = np.zeros(e, dtype=np.int64)
    for k, c in terms.items():
        v[k % e] += c
    return v


def conj(x: np.ndarray) -> np.ndarray:
    """Complex conjugate: ζ^k -> ζ^{-k}."""
    return np.roll(x[..., ::-1], 1, axis=-1)


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two elements (cyclic convolution), exact."""
    e = a.shape[-1]
    out = np.zeros(e, dtype=np.int64)
    for k in np.nonzero(a)[0]:
        out += a[k] * np.roll(b, k)
    return out
