"""Unnormalized Walsh-Hadamard transform and friends over F_2^n.

A value table is a 1-D array of length 2^n indexed by point code.  All
arithmetic is exact: tables are held as int64 when every intermediate value
provably fits, and as Python-int object arrays otherwise.
"""

from __future__ import annotations

import numpy as np

_INT64_HEADROOM = 1 << 62


def _table(f, growth: int = 1) -> tuple[np.ndarray, int]:
    """Validate and copy to ``(array, n)``; ``growth`` bounds |output| / max|input|."""
    arr = np.asarray(f)
    if arr.ndim != 1:
        raise ValueError("value table must be one-dimensional")
    size = arr.shape[0]
    if size == 0 or size & (size - 1):
        raise ValueError(f"table length {size} is not a power of two")
    if arr.dtype.kind not in "biuO":
        raise TypeError("value tables must hold integers")
    vals = [int(v) for v in arr.tolist()]
    peak = max(map(abs, vals))
    if peak * growth < _INT64_HEADROOM:
        return np.array(vals, dtype=np.int64), size.bit_length() - 1
    out = np.empty(size, dtype=object)
    out[:] = vals
    return out, size.bit_length() - 1


def _butterfly(a: np.ndarray, n: int) -> np.ndarray:
    h = 1
    size = a.shape[0]
    while h < size:
        v = a.reshape(size // (2 * h), 2, h)
        x = v[:, 0, :].copy()
        y = v[:, 1, :]
        v[:, 0, :] += y
        v[:, 1, :] = x - y
        h *= 2
    return a


def wht(f) -> np.ndarray:
    """f-hat(xi) = sum_x f(x) (-1)^<xi, x>, exactly.

    Applying it twice multiplies the table by 2^n.
    """
    a, n = _table(f, growth=1 << np.asarray(f).shape[-1].bit_length())
    return _butterfly(a, n)


def inverse_wht(fhat) -> np.ndarray:
    a = wht(fhat)
    n = a.shape[0].bit_length() - 1
    if a.dtype == object:
        q = [int(v) >> n for v in a]
        if any((q_ << n) != int(v) for q_, v in zip(q, a)):
            raise ValueError("table is not the transform of an integer table")
        out = np.empty(len(q), dtype=object)
        out[:] = q
        return out
    if np.any(a & ((1 << n) - 1)):
        raise ValueError("table is not the transform of an integer table")
    return a >> n


def convolve(f, g) -> np.ndarray:
    """(f * g)(x) = sum_y f(y) g(x + y), computed through the transform."""
    f_arr, g_arr = np.asarray(f), np.asarray(g)
    if f_arr.shape != g_arr.shape:
        raise ValueError(f"dimension mismatch: {f_arr.shape} vs {g_arr.shape}")
    fh = wht(f_arr)
    gh = wht(g_arr)
    prod = _product(fh, gh)
    return inverse_wht(prod)


def _product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        pa = int(np.abs(a).max())
        pb = int(np.abs(b).max())
        if pa * pb * a.shape[0] < _INT64_HEADROOM:
            return a * b
    out = np.empty(a.shape[0], dtype=object)
    out[:] = [int(x) * int(y) for x, y in zip(a, b)]
    return out


def fold(f, directions) -> np.ndarray:
    """Partial butterfly: T(x) <- T(x) + T(x + b) for each direction b in turn.

    With independent directions b_1..b_d spanning U the result at x is the
    coset sum sum_{u in U} f(x + u).
    """
    dirs = [int(b) for b in directions]
    a, n = _table(f, growth=1 << len(dirs))
    idx = np.arange(a.shape[0], dtype=np.int64)
    for b in dirs:
        if b < 0 or b >> n:
            raise ValueError(f"direction {b} is not in F_2^{n}")
        a = a + a[idx ^ b]
    return a


def spectrum_support(f) -> set[int]:
    """{xi : f-hat(xi) != 0}."""
    fh = wht(f)
    return {int(i) for i in np.flatnonzero(fh != 0)}


def indicator(n: int, points) -> np.ndarray:
    t = np.zeros(1 << n, dtype=np.int64)
    for p in points:
        t[int(p)] = 1
    return t
