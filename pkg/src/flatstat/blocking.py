"""Blocking sets in PG(n, 2), bad hyperplane directions and coset divisibility."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .gf2core import LinearSubspace, dot, orthogonal_complement
from .grassmann import canonical_rep, coset_reps, enumerate_projective_subspaces
from .stats import PointSet
from .transform import spectrum_support, wht


@dataclass(frozen=True)
class ProjectivePointSet:
    """Points of PG(n_proj, 2), i.e. nonzero vectors of F_2^(n_proj + 1)."""

    n_proj: int
    points: frozenset[int]

    def __post_init__(self):
        pts = frozenset(int(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.n_proj < 0:
            raise ValueError("n_proj must be non-negative")
        for p in pts:
            if p <= 0 or p >> (self.n_proj + 1):
                raise ValueError(f"{p} is not a point of PG({self.n_proj}, 2)")

    @classmethod
    def from_subspace(cls, u: LinearSubspace) -> ProjectivePointSet:
        return cls(u.n - 1, frozenset(p for p in u.elements() if p))

    def __len__(self) -> int:
        return len(self.points)

    def mask(self) -> int:
        m = 0
        for p in self.points:
            m |= 1 << p
        return m


def is_blocking_set(b: ProjectivePointSet, k: int) -> tuple[bool, LinearSubspace | None]:
    """Does ``b`` meet every projective k-subspace?  On failure also return
    the first missed subspace in canonical enumeration order."""
    bm = b.mask()
    for u in enumerate_projective_subspaces(b.n_proj, k):
        if not u.mask() & bm:
            return False, u
    return True, None


def minimum_blocking_size(n_proj: int, k: int) -> tuple[int, ProjectivePointSet]:
    """Exhaustive search over subsets by increasing size (small n_proj only)."""
    points = range(1, 1 << (n_proj + 1))
    if len(points) > 15:
        raise ValueError("exhaustive blocking search is limited to n_proj <= 3")
    subspaces = [u.mask() & ~1 for u in enumerate_projective_subspaces(n_proj, k)]
    for size in range(len(points) + 1):
        for pts in combinations(points, size):
            m = 0
            for p in pts:
                m |= 1 << p
            if all(u & m for u in subspaces):
                return size, ProjectivePointSet(n_proj, frozenset(pts))
    raise AssertionError("the whole space always blocks")


def hyperplane_split(s_set: PointSet, xi: int) -> tuple[int, int]:
    """(|S & H_{xi,0}|, |S & H_{xi,1}|) for the pair of parallel hyperplanes <xi, x> = 0, 1."""
    even = sum(1 for p in s_set.points() if not dot(xi, p))
    return even, len(s_set) - even


def bad_directions(s_set: PointSet, s: int, method: str = "spectrum") -> set[int]:
    """Nonzero xi whose hyperplane pair does not split S into s + s.

    ``method="spectrum"`` reads it off the support of the transform of 1_S;
    ``method="hyperplanes"`` counts each hyperplane directly.  The two agree.
    """
    if len(s_set) != 2 * s:
        raise ValueError(
            f"|S| = {len(s_set)} != 2s = {2 * s}; directions are only "
            "defined for |S| = 2s (otherwise every direction has at most one side equal to s)"
        )
    if method == "spectrum":
        return spectrum_support(s_set.indicator()) - {0}
    if method == "hyperplanes":
        return {xi for xi in range(1, 1 << s_set.n) if hyperplane_split(s_set, xi)[0] != s}
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class DivisibilityReport:
    """Outcome of the coset-divisibility check for one (S, L) pair."""

    t: int
    vanishes: bool
    first_nonvanishing: int | None
    coset_counts: tuple[int, ...]
    equal: bool

    @property
    def holds(self) -> bool:
        """The implication "spectrum vanishes on L minus 0 => equal coset counts"."""
        return not self.vanishes or self.equal


def check_divisibility(s_set: PointSet, l_space: LinearSubspace) -> DivisibilityReport:
    """Count S on each coset of L^perp and test whether the transform of 1_S
    vanishes on L minus 0."""
    if l_space.n != s_set.n:
        raise ValueError("S and L live in different spaces")
    fh = wht(s_set.indicator())
    first = next((xi for xi in l_space.elements() if xi and fh[xi] != 0), None)
    perp = orthogonal_complement(l_space)
    counts = Counter(canonical_rep(perp, p) for p in s_set.points())
    reps = coset_reps(perp)
    coset_counts = tuple(counts.get(r, 0) for r in reps)
    t = l_space.d
    equal = all(c << t == len(s_set) for c in coset_counts)
    return DivisibilityReport(t, first is None, first, coset_counts, equal)
