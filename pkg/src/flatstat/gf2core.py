"""Bit-packed linear algebra over GF(2) and exact subspace counts.

Vectors of F_2^n are plain Python ints: coordinate x_{i+1} is bit i, so the
point (x_1, ..., x_n) has integer code sum x_i 2^(i-1).  Matrices are tuples
of such row words.  Column j of a matrix is bit j of every row; pivots are
chosen at the lowest free column, which makes the reduced row-echelon form
(and hence every subspace) canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_N = 30


def popcount(x: int) -> int:
    return x.bit_count()


def parity(x: int) -> int:
    return x.bit_count() & 1


def _check_width(x: int, n: int) -> None:
    if x < 0 or x >> n:
        raise ValueError(f"vector {x:#x} does not fit in {n} bits")


def dot(x: int, y: int, n: int | None = None) -> int:
    """Standard bilinear form <x, y> over GF(2).

    When ``n`` is given both arguments are checked to be n-bit vectors.
    """
    if n is not None:
        _check_width(x, n)
        _check_width(y, n)
    elif x < 0 or y < 0:
        raise ValueError("vectors must be non-negative integers")
    return (x & y).bit_count() & 1


@dataclass(frozen=True)
class BitMatrix:
    """Dense GF(2) matrix with rows packed into ints (bit j = column j)."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise ValueError(f"bad column count {self.ncols}")
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        for r in self.rows:
            _check_width(r, self.ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls((0,) * nrows, ncols)

    @classmethod
    def from_strings(cls, rows: list[str]) -> BitMatrix:
        """Build from strings written column 0 first, e.g. ``"110"`` = bits 0, 1."""
        ncols = len(rows[0]) if rows else 0
        words = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            words.append(sum(1 << j for j, ch in enumerate(r) if ch == "1"))
        return cls(tuple(words), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def transpose(self) -> BitMatrix:
        cols = []
        for j in range(self.ncols):
            w = 0
            for i, r in enumerate(self.rows):
                if (r >> j) & 1:
                    w |= 1 << i
            cols.append(w)
        return BitMatrix(tuple(cols), self.nrows)

    def apply(self, x: int) -> int:
        """Matrix-vector product M x; bit i of the result is <row_i, x>."""
        y = 0
        for i, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                y |= 1 << i
        return y


def _rref_rows(rows) -> tuple[list[int], list[int]]:
    rows = [r for r in rows if r]
    basis: list[int] = []
    pivots: list[int] = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if (r >> p) & 1:
                r ^= b
        if not r:
            continue
        p = (r & -r).bit_length() - 1
        for i, b in enumerate(basis):
            if (b >> p) & 1:
                basis[i] = b ^ r
        basis.append(r)
        pivots.append(p)
    order = sorted(range(len(basis)), key=pivots.__getitem__)
    return [basis[i] for i in order], [pivots[i] for i in order]


def rref(m: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    """Reduced row-echelon form with zero rows dropped.

    Returns ``(R, rank, pivots)``; row i of R has its leading (lowest) set bit
    at ``pivots[i]`` and every other row is zero in that column.
    """
    basis, pivots = _rref_rows(m.rows)
    return BitMatrix(tuple(basis), m.ncols), len(basis), pivots


def rank(m: BitMatrix) -> int:
    return len(_rref_rows(m.rows)[0])


def _kernel_words(basis: list[int], pivots: list[int], n: int) -> list[int]:
    pivset = set(pivots)
    out = []
    for f in range(n):
        if f in pivset:
            continue
        v = 1 << f
        for b, p in zip(basis, pivots):
            if (b >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


def kernel_basis(m: BitMatrix) -> list[int]:
    """Basis of {v : M v = 0}, one vector per free column."""
    basis, pivots = _rref_rows(m.rows)
    return _kernel_words(basis, pivots, m.ncols)


@dataclass(frozen=True)
class LinearSubspace:
    """A d-dimensional subspace of F_2^n held as its canonical RREF basis.

    Equality and hashing are on ``(n, basis)``, which is unique per subspace.
    Build instances with :meth:`span` unless the basis is already canonical.
    """

    n: int
    basis: tuple[int, ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, n: int, vectors) -> LinearSubspace:
        if not 0 <= n <= MAX_N:
            raise ValueError(f"n must be in [0, {MAX_N}], got {n}")
        vecs = [int(v) for v in vectors]
        for v in vecs:
            _check_width(v, n)
        basis, pivots = _rref_rows(vecs)
        return cls(n, tuple(basis), tuple(pivots))

    @classmethod
    def full(cls, n: int) -> LinearSubspace:
        return cls(n, tuple(1 << i for i in range(n)), tuple(range(n)))

    @classmethod
    def zero(cls, n: int) -> LinearSubspace:
        return cls(n, (), ())

    @property
    def d(self) -> int:
        return len(self.basis)

    @property
    def pivot_mask(self) -> int:
        m = 0
        for p in self.pivots:
            m |= 1 << p
        return m

    def reduce(self, x: int) -> int:
        """Canonical representative of x + U: the unique element with zero pivot bits."""
        for b, p in zip(self.basis, self.pivots):
            if (x >> p) & 1:
                x ^= b
        return x

    def __contains__(self, x: int) -> bool:
        return self.reduce(x) == 0

    def elements(self) -> list[int]:
        pts = [0]
        for b in self.basis:
            pts += [p ^ b for p in pts]
        return sorted(pts)

    def mask(self) -> int:
        """Indicator of the subspace as a 2^n-bit integer."""
        m = 0
        for p in self.elements():
            m |= 1 << p
        return m

    def is_canonical(self) -> bool:
        basis, pivots = _rref_rows(self.basis)
        return tuple(basis) == self.basis and tuple(pivots) == self.pivots


def orthogonal_complement(u: LinearSubspace) -> LinearSubspace:
    """U^perp = {x : <x, u> = 0 for all u in U}, in canonical form."""
    words = _kernel_words(list(u.basis), list(u.pivots), u.n)
    return LinearSubspace.span(u.n, words)


def intersection(u: LinearSubspace, w: LinearSubspace) -> LinearSubspace:
    if u.n != w.n:
        raise ValueError("ambient dimensions differ")
    return orthogonal_complement(
        LinearSubspace.span(
            u.n,
            orthogonal_complement(u).basis + orthogonal_complement(w).basis,
        )
    )


def _check_nd(n: int, d: int) -> None:
    if n < 0 or d < 0 or d > n:
        raise ValueError(f"need 0 <= d <= n, got n={n}, d={d}")


@lru_cache(maxsize=None)
def q_binomial(n: int, d: int) -> int:
    """Number of d-dimensional subspaces of F_2^n (Gaussian binomial, q = 2)."""
    _check_nd(n, d)
    num = 1
    den = 1
    for i in range(d):
        num *= (1 << (n - i)) - 1
        den *= (1 << (d - i)) - 1
    q, r = divmod(num, den)
    assert r == 0
    return q


def flat_count(n: int, d: int) -> int:
    """Number of affine d-flats in F_2^n."""
    return q_binomial(n, d) << (n - d)
