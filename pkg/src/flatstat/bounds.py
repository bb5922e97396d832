"""Closed-form constants and bounds for flat statistics, as exact rationals.

Every bound is tagged with the statement it comes from so a
:class:`BoundReport` can be audited entry by entry.  The only irrational
constant, e, enters through the directed rational bounds ``E_LOWER`` and
``E_UPPER``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .gf2core import q_binomial

E_LOWER = Fraction(2718281828, 10**9)
E_UPPER = Fraction(2718281829, 10**9)
DEFAULT_TERMS = 64

TAG_HALF_LEVEL = "thm:half-level"
TAG_EVEN_UPPER = "prop:flat-even-upper"
TAG_BOOTSTRAP = "thm:bootstrap-series"
TAG_ODD = "thm:odd-half"
TAG_ODD_LEMMA = "lemma:odd-fraction"
TAG_CONSTRUCTION = "prop:preimage-construction"
TAG_ONE_POINT = "cor:one-point-lower"
TAG_TRIVIAL = "trivial"


def nu2(s: int) -> int:
    """2-adic valuation of a positive integer."""
    if s <= 0:
        raise ValueError(f"nu2 needs s >= 1, got {s}")
    return (s & -s).bit_length() - 1


def split_power_of_two(s: int) -> tuple[int, int]:
    """Return ``(j, k)`` with s = j * 2^k and j odd."""
    k = nu2(s)
    return s >> k, k


def c_d(d: int) -> Fraction:
    """Probability that d independent random nonzero vectors of F_2^d are a basis."""
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    top = (1 << d) - 1
    out = Fraction(1)
    for i in range(1, d):
        out *= 1 - Fraction((1 << i) - 1, top)
    return out


def c_dk(d: int, k: int) -> Fraction:
    """prod_{i=0}^{d-k-1} (1 - 2^(i-d)): a random (d-k) x d matrix has full rank d-k."""
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got d={d}, k={k}")
    out = Fraction(1)
    for i in range(d - k):
        out *= 1 - Fraction(1 << i, 1 << d)
    return out


def c_n_dk(n: int, d: int, k: int) -> Fraction:
    """P[rank(B|_U) = d - k] for uniform U in Gr(n, d) and a surjective B onto F_2^(d-k)."""
    if not 0 <= k <= d <= n:
        raise ValueError(f"need 0 <= k <= d <= n, got n={n}, d={d}, k={k}")
    return Fraction(q_binomial(n - d + k, k) << ((d - k) * (n - d)), q_binomial(n, d))


def upper_flat_even(d: int, k: int) -> Fraction:
    """1 - (2^(d-k) - 1)/(2^(d+1) - 1); holds for every A once n >= d + 1."""
    if not 0 <= k < d:
        raise ValueError(f"need 0 <= k < d, got d={d}, k={k}")
    return 1 - Fraction((1 << (d - k)) - 1, (1 << (d + 1)) - 1)


def bootstrap_factor(d: int, k: int, i: int) -> Fraction:
    return Fraction(1, 2) - Fraction((1 << (d - k)) - 1, (1 << (d + i + 1)) - 1)


def bootstrap_partial_sums(d: int, k: int, terms: int) -> list[Fraction]:
    """Partial sums (1/2) sum_{m<M} prod_{i<m} c_i for M = 1..terms."""
    if not 0 <= k < d:
        raise ValueError(f"need 0 <= k < d, got d={d}, k={k}")
    if terms < 1:
        raise ValueError("need at least one term")
    out = []
    acc = Fraction(0)
    prod = Fraction(1)
    for m in range(terms):
        acc += prod / 2
        out.append(acc)
        prod *= bootstrap_factor(d, k, m)
    return out


def bootstrap_upper(d: int, k: int, terms: int = DEFAULT_TERMS) -> tuple[Fraction, Fraction]:
    """Truncated bootstrap series and a certified upper bound on its full sum.

    Each factor c_i lies in (0, 1/2), so the dropped tail is at most 2^-terms.
    """
    partial = bootstrap_partial_sums(d, k, terms)[-1]
    return partial, partial + Fraction(1, 1 << terms)


def bootstrap_upper_dyadic(d: int, k: int, terms: int = DEFAULT_TERMS) -> Fraction:
    """The certified bound rounded up to a multiple of 2^-terms (short to print)."""
    partial, _ = bootstrap_upper(d, k, terms)
    return Fraction(ceil(partial * (1 << terms)) + 1, 1 << terms)


def bootstrap_asymptotic(d: int, k: int) -> Fraction:
    """Leading form 1 - (2/3)(1 - 2^-(d-k)) 2^-k of the bootstrap bound."""
    return 1 - Fraction(2, 3) * (1 - Fraction(1, 1 << (d - k))) * Fraction(1, 1 << k)


def upper_half_level(n: int, d: int) -> Fraction:
    """1 - [n-1 choose d]_2 / [n choose d]_2, attained by the parity hyperplane."""
    if not 1 < d <= n:
        raise ValueError(f"need 1 < d <= n, got n={n}, d={d}")
    if d == n:
        return Fraction(1)
    return 1 - Fraction(q_binomial(n - 1, d), q_binomial(n, d))


def half_level_limit(d: int) -> Fraction:
    if d < 2:
        raise ValueError(f"need d > 1, got {d}")
    return 1 - Fraction(1, 1 << d)


def odd_upper(n: int, d: int) -> Fraction:
    """1/2 + 1/(2(2^(n-d+1) - 1)): cap on the odd-intersection probability."""
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got n={n}, d={d}")
    return Fraction(1, 2) + Fraction(1, 2 * ((1 << (n - d + 1)) - 1))


def one_point_ratios(d: int, s: int) -> tuple[Fraction | None, Fraction | None]:
    """Caps on lambda(s)/lambda(s-1) (``down``) and lambda(s)/lambda(s+1) (``up``).

    ``down`` needs 2 <= s <= 2^d and ``up`` needs 0 <= s <= 2^d - 2; the
    missing one is None.
    """
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    full = 1 << d
    down = Fraction(s, s - 1) ** (s - 1) if 2 <= s <= full else None
    m = full - s
    up = Fraction(m, m - 1) ** (m - 1) if 0 <= s <= full - 2 else None
    if down is None and up is None:
        raise ValueError(f"no one-point ratio applies to s={s}, d={d}")
    return down, up


def corollary_lower(d: int, s_neighbor: int) -> Fraction:
    """(1 - 2^-k)/e for s_neighbor adjacent to some j 2^k with k >= 1 and 1 < j 2^k < 2^d.

    Uses the larger k of the two neighbours; e is replaced by an upper bound so
    the result stays a valid lower bound.
    """
    best = None
    for s in (s_neighbor - 1, s_neighbor + 1):
        if 1 < s < 1 << d and nu2(s) >= 1:
            k = nu2(s)
            best = k if best is None else max(best, k)
    if best is None or d < 2:
        raise ValueError(f"s={s_neighbor} has no even neighbour inside (1, 2^{d})")
    return (1 - Fraction(1, 1 << best)) / E_UPPER


def bose_burton_min(n_proj: int, k: int) -> int:
    """Smallest blocking set w.r.t. projective k-subspaces of PG(n_proj, 2)."""
    if not 0 <= k <= n_proj:
        raise ValueError(f"need 0 <= k <= n_proj, got k={k}, n_proj={n_proj}")
    return (1 << (n_proj - k + 1)) - 1


@dataclass
class BoundReport:
    """Lower and upper bounds on lambda*(d, s), or on lambda*(n, d, s) when ``n`` is set.

    Each entry is ``name -> (value, tag)``.
    """

    d: int
    s: int
    k: int | None
    j: int | None
    n: int | None = None
    lower: dict[str, tuple[Fraction, str]] = field(default_factory=dict)
    upper: dict[str, tuple[Fraction, str]] = field(default_factory=dict)
    exact: Fraction | None = None

    @property
    def best_lower(self) -> Fraction:
        return max((v for v, _ in self.lower.values()), default=Fraction(0))

    @property
    def best_upper(self) -> Fraction:
        return min((v for v, _ in self.upper.values()), default=Fraction(1))


def summary(d: int, s: int, n: int | None = None, terms: int = DEFAULT_TERMS) -> BoundReport:
    """Collect every bound whose hypotheses hold for (d, s) (and n, if given).

    Without ``n`` the report bounds the limit lambda*(d, s).  With ``n`` it
    bounds lambda*(n, d, s); limit lower bounds still apply there because the
    sequence is non-increasing in n, while the bootstrap series (a statement
    about the limit only) is left out.
    """
    if d < 1 or not 0 <= s <= 1 << d:
        raise ValueError(f"need d >= 1 and 0 <= s <= 2^d, got d={d}, s={s}")
    if n is not None and n < d:
        raise ValueError(f"need n >= d, got n={n}, d={d}")
    full = 1 << d
    if s in (0, full):
        rep = BoundReport(d, s, None, None, n, exact=Fraction(1))
        rep.lower["empty_or_full_set"] = (Fraction(1), TAG_TRIVIAL)
        rep.upper["probability"] = (Fraction(1), TAG_TRIVIAL)
        return rep
    j, k = split_power_of_two(s)
    rep = BoundReport(d, s, k, j, n)

    rep.lower["c(d,k)"] = (c_dk(d, k), TAG_CONSTRUCTION)
    if n is not None:
        rep.lower["c_n(d,k)"] = (c_n_dk(n, d, k), TAG_CONSTRUCTION)
    if s % 2 == 1 and d >= 2:
        try:
            rep.lower["one_point_neighbor"] = (corollary_lower(d, s), TAG_ONE_POINT)
        except ValueError:
            pass

    if d > 1 and s == full // 2:
        if n is None:
            rep.exact = half_level_limit(d)
            rep.lower["hyperplane_limit"] = (rep.exact, TAG_HALF_LEVEL)
            rep.upper["half_level_limit"] = (rep.exact, TAG_HALF_LEVEL)
        else:
            rep.exact = upper_half_level(n, d)
            rep.lower["hyperplane"] = (rep.exact, TAG_HALF_LEVEL)
            rep.upper["half_level"] = (rep.exact, TAG_HALF_LEVEL)

    if k < d and (n is None or n >= d + 1):
        rep.upper["flat_even_upper"] = (upper_flat_even(d, k), TAG_EVEN_UPPER)
    if n is None and 1 < s < full:
        rep.upper["bootstrap_certified"] = (bootstrap_upper_dyadic(d, k, terms), TAG_BOOTSTRAP)
    if s % 2 == 1:
        if n is None:
            rep.upper["odd_half"] = (Fraction(1, 2), TAG_ODD)
        elif d < n:
            rep.upper["odd_fraction"] = (odd_upper(n, d), TAG_ODD_LEMMA)

    if rep.best_lower > rep.best_upper:
        raise AssertionError(
            f"inconsistent bounds for d={d}, s={s}, n={n}: "
            f"{rep.best_lower} > {rep.best_upper}"
        )
    return rep
