"""Intersection profiles of a point set against all d-flats or d-subcubes."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .gf2core import MAX_N, BitMatrix, LinearSubspace, flat_count, q_binomial
from .grassmann import basis_array, enumerate_flats, enumerate_subspaces

BRUTEFORCE_CAP = 2_000_000
SUBSPACE_CHUNK = 4096


@dataclass(frozen=True)
class PointSet:
    """A subset of F_2^n stored as a 2^n-bit integer (bit p set iff p is in the set)."""

    n: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise ValueError(f"n must be in [0, {MAX_N}], got {self.n}")
        if self.mask < 0 or self.mask >> (1 << self.n):
            raise ValueError(f"mask does not fit in 2^{self.n} bits")

    @classmethod
    def from_points(cls, n: int, points) -> PointSet:
        m = 0
        for p in points:
            p = int(p)
            if p < 0 or p >> n:
                raise ValueError(f"point {p} is not in F_2^{n}")
            m |= 1 << p
        return cls(n, m)

    @classmethod
    def empty(cls, n: int) -> PointSet:
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> PointSet:
        return cls(n, (1 << (1 << n)) - 1)

    @classmethod
    def from_indicator(cls, n: int, table) -> PointSet:
        bits = np.asarray(table, dtype=np.uint8)
        if bits.shape != (1 << n,):
            raise ValueError("indicator length must be 2^n")
        packed = np.packbits(bits, bitorder="little")
        return cls(n, int.from_bytes(packed.tobytes(), "little"))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, p: int) -> bool:
        return bool((self.mask >> p) & 1)

    def __iter__(self):
        return iter(self.points())

    def points(self) -> list[int]:
        out = []
        m = self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def indicator(self) -> np.ndarray:
        size = 1 << self.n
        raw = self.mask.to_bytes(max((size + 7) // 8, 1), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return bits[:size].copy()

    def complement(self) -> PointSet:
        return PointSet(self.n, self.mask ^ ((1 << (1 << self.n)) - 1))

    def translate(self, b: int) -> PointSet:
        return PointSet.from_points(self.n, (p ^ b for p in self.points()))

    def affine_image(self, m: BitMatrix, b: int = 0) -> PointSet:
        """{M x + b : x in A}; M must be square of size n."""
        if m.nrows != self.n or m.ncols != self.n:
            raise ValueError("matrix must be n x n")
        return PointSet.from_points(self.n, (m.apply(p) ^ b for p in self.points()))


@dataclass(frozen=True)
class IntersectionProfile:
    """``counts[s]`` = number of flats (or subcubes) meeting the set in exactly s points."""

    n: int
    d: int
    counts: tuple[int, ...]
    total: int
    family: str = "flats"

    def __post_init__(self):
        if len(self.counts) != (1 << self.d) + 1:
            raise ValueError("profile must have 2^d + 1 entries")
        if sum(self.counts) != self.total:
            raise ValueError("profile counts do not sum to the total")

    def fraction(self, s: int) -> Fraction:
        _check_s(self.d, s)
        return Fraction(self.counts[s], self.total)

    def fractions(self) -> list[Fraction]:
        return [Fraction(c, self.total) for c in self.counts]

    def odd_fraction(self) -> Fraction:
        return Fraction(sum(self.counts[1::2]), self.total)

    def mass(self) -> int:
        return sum(s * c for s, c in enumerate(self.counts))


def _check_d(n: int, d: int) -> None:
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got n={n}, d={d}")


def _check_s(d: int, s: int) -> None:
    if not 0 <= s <= 1 << d:
        raise ValueError(f"need 0 <= s <= 2^d = {1 << d}, got s={s}")


def default_threads() -> int:
    return os.cpu_count() or 1


def _fold_chunk(ind, n, d, start, stop):
    bases, pmasks = basis_array(enumerate_subspaces(n, d, start, stop))
    hist = np.zeros((1 << d) + 1, dtype=np.int64)
    kernels.fold_histogram(ind, bases, pmasks, hist)
    return hist


def _fold_profile(ind, n, d, subspace_chunks, threads):
    threads = threads or default_threads()
    if threads == 1 or len(subspace_chunks) == 1:
        parts = [_fold_chunk(ind, n, d, a, b) for a, b in subspace_chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _fold_chunk(ind, n, d, *c), subspace_chunks))
    total = [0] * ((1 << d) + 1)
    for h in parts:
        for s, v in enumerate(h.tolist()):
            total[s] += v
    return tuple(total)


def flat_profile(a: PointSet, d: int, threads: int | None = None) -> IntersectionProfile:
    """Exact profile of ``a`` over all d-flats.

    For each subspace U the indicator table is folded along U's basis, which
    leaves |A & (x + U)| at every canonical coset representative x.  Work is
    split into contiguous subspace chunks and merged by integer addition, so
    the result does not depend on ``threads``.  Practical limit: about
    q_binomial(n, d) * 2^n * d <= 10^10.
    """
    n = a.n
    _check_d(n, d)
    total = q_binomial(n, d)
    chunks = [(s, min(s + SUBSPACE_CHUNK, total)) for s in range(0, total, SUBSPACE_CHUNK)]
    counts = _fold_profile(a.indicator(), n, d, chunks, threads)
    return IntersectionProfile(n, d, counts, flat_count(n, d), "flats")


def flat_profile_bruteforce(a: PointSet, d: int, cap: int = BRUTEFORCE_CAP) -> IntersectionProfile:
    """Reference profile: list every flat and popcount its intersection with ``a``."""
    n = a.n
    _check_d(n, d)
    total = flat_count(n, d)
    if total > cap:
        raise ValueError(
            f"{total} flats exceeds the brute-force cap {cap}; use flat_profile"
        )
    counts = [0] * ((1 << d) + 1)
    for f in enumerate_flats(n, d):
        counts[(a.mask & f.mask()).bit_count()] += 1
    return IntersectionProfile(n, d, tuple(counts), total, "flats")


def lambda_star(a: PointSet, d: int, s: int, profile: IntersectionProfile | None = None) -> Fraction:
    """Fraction of d-flats meeting ``a`` in exactly s points."""
    _check_d(a.n, d)
    _check_s(d, s)
    profile = profile or flat_profile(a, d)
    return profile.fraction(s)


def cube_profile(a: PointSet, d: int) -> IntersectionProfile:
    """Exact profile over the C(n, d) 2^(n-d) axis-aligned d-subcubes."""
    n = a.n
    _check_d(n, d)
    subs = [
        LinearSubspace(n, tuple(1 << i for i in free), free)
        for free in combinations(range(n), d)
    ]
    bases, pmasks = basis_array(subs)
    hist = np.zeros((1 << d) + 1, dtype=np.int64)
    kernels.fold_histogram(a.indicator(), bases, pmasks, hist)
    return IntersectionProfile(
        n, d, tuple(int(v) for v in hist), comb(n, d) << (n - d), "subcubes"
    )


def odd_fraction(a: PointSet, d: int, profile: IntersectionProfile | None = None) -> Fraction:
    """Probability that a uniform d-flat meets ``a`` in an odd number of points (d < n)."""
    if not 1 <= d < a.n:
        raise ValueError(f"need 1 <= d < n, got n={a.n}, d={d}")
    profile = profile or flat_profile(a, d)
    return profile.odd_fraction()
