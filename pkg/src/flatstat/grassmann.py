"""Enumeration of Gr(n, d), Aff(n, d) and projective subspaces of PG(n, 2).

Subspaces are produced in canonical RREF form.  The order is fixed: pivot
sets in lexicographic order (``itertools.combinations``), and inside each
pivot set the free entries run as a binary counter.  Every subspace has a
stable index in that order, so a stream can be cut into contiguous chunks
``[start, stop)`` and handed to independent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from .gf2core import MAX_N, LinearSubspace, flat_count, q_binomial


def _check(n: int, d: int) -> None:
    if not (0 <= d <= n <= MAX_N):
        raise ValueError(f"need 0 <= d <= n <= {MAX_N}, got n={n}, d={d}")


def _free_slots(n: int, pivots: tuple[int, ...]) -> list[tuple[int, int]]:
    """(row, column) positions that are free in an RREF matrix with these pivots."""
    pivset = set(pivots)
    return [
        (i, c)
        for i, p in enumerate(pivots)
        for c in range(p + 1, n)
        if c not in pivset
    ]


def _subspace_from_counter(n, pivots, slots, counter) -> LinearSubspace:
    rows = [1 << p for p in pivots]
    bit = 0
    while counter:
        if counter & 1:
            i, c = slots[bit]
            rows[i] |= 1 << c
        counter >>= 1
        bit += 1
    return LinearSubspace(n, tuple(rows), pivots)


def enumerate_subspaces(
    n: int, d: int, start: int = 0, stop: int | None = None
) -> Iterator[LinearSubspace]:
    """Yield the d-subspaces of F_2^n with canonical index in [start, stop).

    The full stream has ``q_binomial(n, d)`` entries.  Full enumeration is
    meant for Grassmannians of at most ~10^8 elements.
    """
    _check(n, d)
    total = q_binomial(n, d)
    stop = total if stop is None else min(stop, total)
    if start < 0 or start > stop:
        raise ValueError(f"bad chunk [{start}, {stop})")
    offset = 0
    for pivots in combinations(range(n), d):
        slots = _free_slots(n, pivots)
        block = 1 << len(slots)
        if offset + block <= start:
            offset += block
            continue
        if offset >= stop:
            return
        lo = max(start - offset, 0)
        hi = min(stop - offset, block)
        for counter in range(lo, hi):
            yield _subspace_from_counter(n, pivots, slots, counter)
        offset += block


def subspace_chunks(n: int, d: int, chunk: int) -> list[tuple[int, int]]:
    total = q_binomial(n, d)
    return [(a, min(a + chunk, total)) for a in range(0, total, chunk)]


def basis_array(subspaces) -> tuple[np.ndarray, np.ndarray]:
    """Pack subspaces into (basis words m x d, pivot masks m) int64 arrays."""
    subs = list(subspaces)
    d = subs[0].d if subs else 0
    bases = np.zeros((len(subs), d), dtype=np.int64)
    pmasks = np.zeros(len(subs), dtype=np.int64)
    for i, u in enumerate(subs):
        bases[i, :] = u.basis
        pmasks[i] = u.pivot_mask
    return bases, pmasks


@dataclass(frozen=True)
class Flat:
    """The coset ``rep + subspace``; ``rep`` has zero bits at every pivot."""

    subspace: LinearSubspace
    rep: int

    def __post_init__(self):
        if self.rep & self.subspace.pivot_mask:
            raise ValueError("rep must vanish on the pivot columns")
        if self.rep < 0 or self.rep >> self.subspace.n:
            raise ValueError("rep out of range")

    @classmethod
    def through(cls, subspace: LinearSubspace, x: int) -> Flat:
        return cls(subspace, canonical_rep(subspace, x))

    @property
    def n(self) -> int:
        return self.subspace.n

    @property
    def d(self) -> int:
        return self.subspace.d

    def mask(self) -> int:
        m = 0
        for p in flat_points(self):
            m |= 1 << p
        return m

    def __contains__(self, x: int) -> bool:
        return self.subspace.reduce(x) == self.rep


def canonical_rep(u: LinearSubspace, x: int) -> int:
    """Representative of x + U with zeros in the pivot positions of U."""
    if x < 0 or x >> u.n:
        raise ValueError(f"point {x} is not in F_2^{u.n}")
    return u.reduce(x)


def coset_reps(u: LinearSubspace) -> list[int]:
    """All 2^(n-d) canonical representatives, increasing."""
    free = [c for c in range(u.n) if not (u.pivot_mask >> c) & 1]
    reps = []
    for counter in range(1 << len(free)):
        r = 0
        for b, c in enumerate(free):
            if (counter >> b) & 1:
                r |= 1 << c
        reps.append(r)
    return reps


def flat_points(f: Flat) -> list[int]:
    return sorted(f.rep ^ u for u in f.subspace.elements())


def enumerate_flats(n: int, d: int) -> Iterator[Flat]:
    """Every d-flat exactly once: subspaces in canonical order, then reps increasing.

    The stream is uniform over Aff(n, d) and each subspace contributes the
    same number of cosets, so a uniform draw from it is the same as drawing a
    uniform subspace and then a uniform translate.
    """
    _check(n, d)
    for u in enumerate_subspaces(n, d):
        for r in coset_reps(u):
            yield Flat(u, r)


def enumerate_projective_subspaces(
    n_proj: int, k: int, start: int = 0, stop: int | None = None
) -> Iterator[LinearSubspace]:
    """Projective k-subspaces of PG(n_proj, 2) as (k+1)-subspaces of F_2^(n_proj+1)."""
    if not 0 <= k <= n_proj:
        raise ValueError(f"need 0 <= k <= n_proj, got k={k}, n_proj={n_proj}")
    return enumerate_subspaces(n_proj + 1, k + 1, start, stop)


def flat_masks(n: int, d: int) -> list[int]:
    """Indicator words of every d-flat, in enumeration order."""
    return [f.mask() for f in enumerate_flats(n, d)]


def subcube_masks(n: int, d: int) -> list[int]:
    """Indicator words of every axis-aligned d-subcube of F_2^n."""
    _check(n, d)
    out = []
    for free in combinations(range(n), d):
        u = LinearSubspace(n, tuple(1 << i for i in free), free)
        for r in coset_reps(u):
            out.append(Flat(u, r).mask())
    return out


__all__ = [
    "Flat",
    "LinearSubspace",
    "basis_array",
    "canonical_rep",
    "coset_reps",
    "enumerate_flats",
    "enumerate_projective_subspaces",
    "enumerate_subspaces",
    "flat_count",
    "flat_masks",
    "flat_points",
    "q_binomial",
    "subcube_masks",
    "subspace_chunks",
]
