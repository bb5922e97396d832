"""Extremal search over point sets and the claim-verification battery."""

from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path

import numpy as np

from . import bounds, kernels
from .constructions import (
    ConstructionSpec,
    hyperplane_set,
    preimage_set,
    symmetric_polynomial_set,
)
from .gf2core import BitMatrix, flat_count, q_binomial, rank
from .grassmann import enumerate_flats, flat_masks, flat_points, subcube_masks
from .stats import PointSet, cube_profile, flat_profile

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 4
LONG_EXHAUSTIVE_MAX_N = 5
ANNEAL_FLAT_CAP = 5_000_000
CHECKPOINT_VERSION = 1
SCAN_CHUNK = 1 << 14


class ResourceCapExceeded(ValueError):
    """A requested computation is beyond the supported desk-scale limits."""


@dataclass
class SearchConfig:
    n: int
    d: int
    s: int
    mode: str = "anneal"
    iterations: int = 10_000
    restarts: int = 1
    seed: int = 0
    initial: ConstructionSpec | None = None
    t0: float = 1.0
    cooling: float = 0.999

    def __post_init__(self):
        if self.mode not in ("exhaustive", "anneal"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 1 <= self.d <= self.n:
            raise ValueError(f"need 1 <= d <= n, got n={self.n}, d={self.d}")
        if not 0 <= self.s <= 1 << self.d:
            raise ValueError(f"need 0 <= s <= 2^d, got s={self.s}")
        if self.mode == "exhaustive" and self.n > LONG_EXHAUSTIVE_MAX_N:
            raise ResourceCapExceeded(
                f"exhaustive mode supports n <= {LONG_EXHAUSTIVE_MAX_N}; use anneal mode for n={self.n}"
            )
        if self.mode == "anneal" and self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.restarts < 1:
            raise ValueError("need at least one restart")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "s": self.s,
            "mode": self.mode,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "seed": self.seed,
            "initial": self.initial.to_dict() if self.initial else None,
            "t0": self.t0,
            "cooling": self.cooling,
        }


@dataclass
class SearchResult:
    value: Fraction
    count: int
    total: int
    witnesses: list[PointSet]
    visited: int
    trace: list[tuple[int, int, int]] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    exceeds_bound: Fraction | None = None
    witness_count: int | None = None


def _mask_array(masks) -> np.ndarray:
    return np.asarray(masks, dtype=np.uint64)


def _scan(start: int, stop: int, flats: np.ndarray, width: int, threads: int = 1) -> np.ndarray:
    """Profiles of every set whose mask lies in [start, stop)."""
    chunks = [(a, min(a + SCAN_CHUNK, stop)) for a in range(start, stop, SCAN_CHUNK)]

    def run(c):
        return kernels.mask_profiles(np.arange(c[0], c[1], dtype=np.uint64), flats, width)

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    if not parts:
        return np.zeros((0, width), dtype=np.int32)
    return np.concatenate(parts)


def all_profiles(n: int, d: int, family: str = "flats", threads: int = 1) -> np.ndarray:
    """Row m = profile of the set with mask m, for every subset of F_2^n (n <= 4)."""
    if n > EXHAUSTIVE_MAX_N:
        raise ResourceCapExceeded(f"full profile tables are limited to n <= {EXHAUSTIVE_MAX_N}")
    masks = flat_masks(n, d) if family == "flats" else subcube_masks(n, d)
    return _scan(0, 1 << (1 << n), _mask_array(masks), (1 << d) + 1, threads)


def _token(n: int, d: int, s: int) -> str:
    return hashlib.sha256(f"flatstat-exhaustive:{n}:{d}:{s}".encode()).hexdigest()[:16]


def exhaustive_max(
    n: int,
    d: int,
    s: int,
    allow_long: bool = False,
    checkpoint: str | Path | None = None,
    max_chunks: int | None = None,
    witness_limit: int | None = None,
    threads: int = 1,
) -> SearchResult:
    """max over all A of lambda*(n, d, s, A), with every maximizing set.

    n <= 4 scans all 2^(2^n) sets.  n = 5 needs ``allow_long``: it scans only
    sets containing 0 with |A| <= 16 (translation and complement symmetry),
    checkpoints after every chunk, and can be stopped early via
    ``max_chunks``; the result is then partial and ``visited`` says how far
    it got.  For n = 5 witnesses are recorded up to those symmetries.
    """
    cfg = SearchConfig(n, d, s, mode="exhaustive")
    total = flat_count(n, d)
    full = 1 << d
    if s in (0, full):
        witness = PointSet.empty(n) if s == 0 else PointSet.full(n)
        return SearchResult(Fraction(1), total, total, [witness], 0, config=cfg.to_dict(), witness_count=1)
    if n > EXHAUSTIVE_MAX_N and not allow_long:
        raise ResourceCapExceeded(
            f"exhaustive search beyond n={EXHAUSTIVE_MAX_N} is long-running; "
            "pass allow_long or use anneal mode"
        )
    flats = _mask_array(flat_masks(n, d))
    if n <= EXHAUSTIVE_MAX_N:
        prof = _scan(0, 1 << (1 << n), flats, full + 1, threads)
        col = prof[:, s]
        best = int(col.max())
        idx = np.flatnonzero(col == best)
        wit = [PointSet(n, int(m)) for m in idx[:witness_limit]]
        return SearchResult(
            Fraction(best, total), best, total, wit, int(prof.shape[0]),
            config=cfg.to_dict(), witness_count=int(idx.size),
        )
    return _exhaustive_long(n, d, s, flats, total, cfg, checkpoint, max_chunks, witness_limit or 256, threads)


def _exhaustive_long(n, d, s, flats, total, cfg, checkpoint, max_chunks, witness_limit, threads):
    full = 1 << d
    half = 1 << (n - 1)
    space = 1 << ((1 << n) - 1)
    state = {"next_index": 0, "best_count": -1, "witnesses": []}
    token = _token(n, d, s)
    path = Path(checkpoint) if checkpoint else None
    if path and path.exists():
        saved = json.loads(path.read_text())
        if saved.get("version") != CHECKPOINT_VERSION or saved.get("token") != token:
            raise ValueError(f"checkpoint {path} belongs to a different run")
        state = {k: saved[k] for k in state}
    chunk = SCAN_CHUNK * 16
    done = 0
    while state["next_index"] < space:
        if max_chunks is not None and done >= max_chunks:
            break
        lo = state["next_index"]
        hi = min(lo + chunk, space)
        masks = np.arange(lo, hi, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
        masks = masks[np.bitwise_count(masks) <= half]
        if masks.size:
            prof = kernels.mask_profiles(masks, flats, full + 1)
            for col, flip in ((prof[:, s], False), (prof[:, full - s], True)):
                best = int(col.max())
                if best < state["best_count"]:
                    continue
                if best > state["best_count"]:
                    state["best_count"] = best
                    state["witnesses"] = []
                for m in masks[col == best][: witness_limit]:
                    m = int(m)
                    if flip:
                        m ^= (1 << (1 << n)) - 1
                    if len(state["witnesses"]) < witness_limit:
                        state["witnesses"].append(format(m, "x"))
        state["next_index"] = hi
        done += 1
        if path:
            payload = {"version": CHECKPOINT_VERSION, "token": token, "n": n, "d": d, "s": s, **state}
            tmp = path.with_suffix(path.suffix + ".tmp")
            tmp.write_text(json.dumps(payload, sort_keys=True))
            tmp.replace(path)
    best = max(state["best_count"], 0)
    wit = [PointSet(n, int(w, 16)) for w in state["witnesses"]]
    return SearchResult(
        Fraction(best, total), best, total, wit, state["next_index"],
        config={**cfg.to_dict(), "complete": state["next_index"] >= space},
        witness_count=len(wit),
    )


def _incidence(n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """(flat points F x 2^d, point->flat incidence P x q_binomial(n, d))."""
    if flat_count(n, d) > ANNEAL_FLAT_CAP:
        raise ResourceCapExceeded(f"{flat_count(n, d)} flats is beyond the anneal cap {ANNEAL_FLAT_CAP}")
    pts = np.array([flat_points(f) for f in enumerate_flats(n, d)], dtype=np.int32)
    ids = np.repeat(np.arange(pts.shape[0], dtype=np.int32), pts.shape[1])
    order = np.argsort(pts.ravel(), kind="stable")
    inc = ids[order].reshape(1 << n, q_binomial(n, d))
    return pts, np.ascontiguousarray(inc)


def anneal_max(cfg: SearchConfig) -> SearchResult:
    """Simulated annealing over sets with single-point flips.

    The objective is the exact number of flats meeting the set in s points.
    Worse moves by a gap g are taken with probability exp(-g / T), with
    T = t0 * cooling^step.  Restart r draws everything from the r-th child
    of ``SeedSequence(seed)`` through a Philox generator, so a run is a pure
    function of the config.  Among equal objectives the smaller mask wins.
    """
    n, d, s = cfg.n, cfg.d, cfg.s
    pts, inc = _incidence(n, d)
    size = 1 << n
    total = pts.shape[0]
    temps = cfg.t0 * cfg.cooling ** np.arange(cfg.iterations, dtype=np.float64)
    best_hits, best_state, trace = -1, None, []
    for r, child in enumerate(np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)):
        rng = np.random.Generator(np.random.Philox(child))
        if cfg.initial is not None:
            state = cfg.initial.build(n).indicator().astype(np.uint8)
        else:
            state = rng.integers(0, 2, size=size, dtype=np.uint8)
        proposals = rng.integers(0, size, size=cfg.iterations, dtype=np.int32)
        uniforms = rng.random(cfg.iterations)
        counts = state[pts].sum(axis=1, dtype=np.int32)
        hits, bstate, rtrace = kernels.anneal_run(inc, state, counts, s, proposals, uniforms, temps)
        trace.extend((r, step, h) for step, h in rtrace)
        if best_state is None or hits > best_hits or (
            hits == best_hits and _mask_of(bstate) < _mask_of(best_state)
        ):
            best_hits, best_state = hits, bstate.copy()
    witness = PointSet.from_indicator(n, best_state)
    value = Fraction(best_hits, total)
    result = SearchResult(
        value, best_hits, total, [witness], cfg.iterations * cfg.restarts,
        trace=trace, config=cfg.to_dict(), witness_count=1,
    )
    upper = bounds.summary(d, s, n).best_upper
    if value > upper:
        log.error("anneal value %s exceeds the proven upper bound %s", value, upper)
        result.exceeds_bound = upper
    return result


def _mask_of(state: np.ndarray) -> int:
    return PointSet.from_indicator(int(state.shape[0]).bit_length() - 1, state).mask


def search(cfg: SearchConfig, **kw) -> SearchResult:
    if cfg.mode == "exhaustive":
        return exhaustive_max(cfg.n, cfg.d, cfg.s, **kw)
    return anneal_max(cfg)


# --------------------------------------------------------------------------
# verification battery


CLAIMS = (
    "half_level",
    "even_upper",
    "odd_bound",
    "construction",
    "complement",
    "affine",
    "cube_vs_flat",
    "sympoly_odd",
    "monotone",
    "one_point",
)


@dataclass
class ClaimResult:
    claim: str
    params: dict
    status: str
    details: dict = field(default_factory=dict)
    witness: str | None = None


@dataclass
class VerificationReport:
    n: int
    d: int
    results: list[ClaimResult] = field(default_factory=list)

    @property
    def violated(self) -> list[ClaimResult]:
        return [r for r in self.results if r.status == "violated"]

    @property
    def ok(self) -> bool:
        return not self.violated


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _random_invertible(n: int, rng: np.random.Generator) -> BitMatrix:
    while True:
        rows = tuple(int(v) for v in rng.integers(0, 1 << n, size=n))
        m = BitMatrix(rows, n)
        if rank(m) == n:
            return m


def general_linear_images(n: int) -> np.ndarray:
    """Table img[g, x] = g(x) over all invertible n x n matrices g (n <= 4)."""
    if n > 4:
        raise ResourceCapExceeded("GL(n, 2) enumeration is limited to n <= 4")
    mats = []
    for cols in product(range(1, 1 << n), repeat=n):
        if rank(BitMatrix(cols, n)) == n:
            mats.append(cols)
    cols = np.array(mats, dtype=np.int64)
    x = np.arange(1 << n)
    img = np.zeros((cols.shape[0], 1 << n), dtype=np.int64)
    for i in range(n):
        img ^= np.where((x >> i) & 1, cols[:, i : i + 1], 0)
    return img


class _Verifier:
    def __init__(self, n, d, threads, corrupt, seed=2024):
        self.n, self.d = n, d
        self.threads = threads
        self.corrupt = corrupt
        self.seed = seed
        self._tables = {}

    def table(self, n, d, family="flats"):
        key = (n, d, family)
        if key not in self._tables:
            t = all_profiles(n, d, family, self.threads)
            if self.corrupt and (n, d, family) == (self.n, self.d, "flats"):
                t = t.copy()
                t[1, :] = 0
                t[1, 1] = t[0].sum()
            self._tables[key] = t
        return self._tables[key]

    def profile(self, a, d):
        p = flat_profile(a, d, threads=self.threads)
        return self._maybe_corrupt(p)

    def cubes(self, a, d):
        return self._maybe_corrupt(cube_profile(a, d))

    def _maybe_corrupt(self, p):
        if not self.corrupt:
            return p
        counts = list(p.counts)
        src = max(range(len(counts)), key=counts.__getitem__)
        counts[src] -= 1
        counts[0 if src else 1] += 1
        return type(p)(p.n, p.d, tuple(counts), p.total, p.family)

    @property
    def exhaustive(self):
        return self.n <= EXHAUSTIVE_MAX_N

    # each claim returns a ClaimResult

    def half_level(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d, "s": 1 << (d - 1) if d > 1 else None}
        if d < 2 or not self.exhaustive:
            return ClaimResult("half_level", params, "skipped", {"reason": "needs 1 < d and n <= 4"})
        t = self.table(n, d)
        s = 1 << (d - 1)
        total = flat_count(n, d)
        bound = bounds.upper_half_level(n, d)
        col = t[:, s]
        best = Fraction(int(col.max()), total)
        hyper = hyperplane_set(n, 0).mask
        det = {
            "bound": _q(bound),
            "max": _q(best),
            "hyperplane_value": _q(Fraction(int(col[hyper]), total)),
            "maximizers": int(np.count_nonzero(col == col.max())),
        }
        if best > bound:
            return ClaimResult("half_level", params, "violated", det, format(int(col.argmax()), "x"))
        return ClaimResult("half_level", params, "verified", det)

    def even_upper(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        if not self.exhaustive or n < d + 1:
            return ClaimResult("even_upper", params, "skipped", {"reason": "needs n >= d + 1 and n <= 4"})
        t = self.table(n, d)
        total = flat_count(n, d)
        det = {}
        for s in range(2, 1 << d, 2):
            k = bounds.nu2(s)
            bound = bounds.upper_flat_even(d, k)
            col = t[:, s]
            best = Fraction(int(col.max()), total)
            det[f"s={s}"] = {"k": k, "bound": _q(bound), "max": _q(best)}
            if best > bound:
                return ClaimResult("even_upper", params, "violated", det, format(int(col.argmax()), "x"))
        return ClaimResult("even_upper", params, "verified", det)

    def odd_bound(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        if not self.exhaustive or d >= n:
            return ClaimResult("odd_bound", params, "skipped", {"reason": "needs d < n <= 4"})
        t = self.table(n, d)
        total = flat_count(n, d)
        odd = t[:, 1::2].sum(axis=1)
        best = Fraction(int(odd.max()), total)
        bound = bounds.odd_upper(n, d)
        det = {"bound": _q(bound), "max": _q(best)}
        if best > bound:
            return ClaimResult("odd_bound", params, "violated", det, format(int(odd.argmax()), "x"))
        return ClaimResult("odd_bound", params, "verified", det)

    def construction(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        det = {}
        for k in range(1, d):
            for j in (1, 3):
                if j > 1 << (d - k):
                    continue
                s = j << k
                a = preimage_set(n, d, k, j)
                got = self.profile(a, d).fraction(s)
                want = bounds.c_n_dk(n, d, k)
                det[f"k={k},j={j}"] = {"s": s, "value": _q(got), "c_n(d,k)": _q(want)}
                if got != want:
                    return ClaimResult("construction", params, "violated", det, format(a.mask, "x"))
        if not det:
            return ClaimResult("construction", params, "skipped", {"reason": "needs d >= 2"})
        return ClaimResult("construction", params, "verified", det)

    def complement(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        if self.exhaustive:
            t = self.table(n, d)
            full = (1 << (1 << n)) - 1
            comp = t[full - np.arange(t.shape[0])]
            bad = np.flatnonzero((comp != t[:, ::-1]).any(axis=1))
            det = {"sets": int(t.shape[0])}
        else:
            rng = np.random.Generator(np.random.Philox(self.seed))
            bad = []
            sets = [PointSet.from_indicator(n, rng.integers(0, 2, 1 << n)) for _ in range(8)]
            for a in sets:
                if self.profile(a.complement(), d).counts != self.profile(a, d).counts[::-1]:
                    bad.append(a.mask)
            det = {"sets": len(sets)}
        if len(bad):
            return ClaimResult("complement", params, "violated", det, format(int(bad[0]), "x"))
        return ClaimResult("complement", params, "verified", det)

    def affine(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        rng = np.random.Generator(np.random.Philox(self.seed + 1))
        trials = 12
        for _ in range(trials):
            a = PointSet.from_indicator(n, rng.integers(0, 2, 1 << n))
            m = _random_invertible(n, rng)
            b = int(rng.integers(0, 1 << n))
            img = a.affine_image(m, b)
            if self.profile(img, d) != flat_profile(a, d, threads=self.threads):
                return ClaimResult(
                    "affine", params, "violated",
                    {"matrix": [format(r, "x") for r in m.rows], "shift": b}, format(a.mask, "x"),
                )
        return ClaimResult("affine", params, "verified", {"trials": trials})

    def cube_vs_flat(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        if not self.exhaustive:
            return ClaimResult("cube_vs_flat", params, "skipped", {"reason": "needs n <= 4"})
        flats = self.table(n, d)
        cubes = self.table(n, d, "subcubes")
        ft, ct = flat_count(n, d), cubes[0].sum()
        det = {}
        for s in range((1 << d) + 1):
            fbest = Fraction(int(flats[:, s].max()), ft)
            cbest = Fraction(int(cubes[:, s].max()), int(ct))
            det[f"s={s}"] = {"flat_max": _q(fbest), "cube_max": _q(cbest)}
            if cbest < fbest:
                return ClaimResult("cube_vs_flat", params, "violated", det, format(int(flats[:, s].argmax()), "x"))
        # averaging over coordinate systems: mean_g lambda(g A) = lambda*(A)
        img = general_linear_images(n)
        cube_words = _mask_array(subcube_masks(n, d))
        rng = np.random.Generator(np.random.Philox(self.seed + 2))
        weights = np.uint64(1) << np.arange(1 << n, dtype=np.uint64)
        for _ in range(3):
            a = PointSet.from_indicator(n, rng.integers(0, 2, 1 << n))
            pts = np.array(a.points(), dtype=np.int64)
            masks = weights[img[:, pts]].sum(axis=1, dtype=np.uint64) if pts.size else np.zeros(img.shape[0], np.uint64)
            per_g = kernels.mask_profiles(masks, cube_words, (1 << d) + 1)
            mean = [Fraction(int(c), img.shape[0] * int(ct)) for c in per_g.sum(axis=0)]
            fp = self.profile(a, d).fractions()
            # some coordinate system does at least as well as the flat average
            best_coords = [Fraction(int(c), int(ct)) for c in per_g.max(axis=0)]
            if mean != fp or any(b < f for b, f in zip(best_coords, fp)):
                return ClaimResult(
                    "cube_vs_flat", params, "violated",
                    {**det, "gl_mean": [_q(x) for x in mean], "flat": [_q(x) for x in fp]},
                    format(a.mask, "x"),
                )
        det["gl_average_sets"] = 3
        return ClaimResult("cube_vs_flat", params, "verified", det)

    def sympoly_odd(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        a = symmetric_polynomial_set(n, d)
        p = self.cubes(a, d)
        even = sum(p.counts[0::2])
        det = {"subcubes": p.total, "even_intersections": even}
        if even:
            return ClaimResult("sympoly_odd", params, "violated", det, format(a.mask, "x"))
        return ClaimResult("sympoly_odd", params, "verified", det)

    def monotone(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        if not self.exhaustive or n - 1 < d:
            return ClaimResult("monotone", params, "skipped", {"reason": "needs d <= n - 1 and n <= 4"})
        cur, prev = self.table(n, d), self.table(n - 1, d)
        tc, tp = flat_count(n, d), flat_count(n - 1, d)
        det = {}
        for s in range((1 << d) + 1):
            a = Fraction(int(cur[:, s].max()), tc)
            b = Fraction(int(prev[:, s].max()), tp)
            det[f"s={s}"] = {f"n={n}": _q(a), f"n={n - 1}": _q(b)}
            if a > b:
                return ClaimResult("monotone", params, "violated", det, format(int(cur[:, s].argmax()), "x"))
        return ClaimResult("monotone", params, "verified", det)

    def one_point(self):
        n, d = self.n, self.d
        params = {"n": n, "d": d}
        if not self.exhaustive:
            return ClaimResult("one_point", params, "skipped", {"reason": "needs n <= 4"})
        t = self.table(n, d)
        best = [int(t[:, s].max()) for s in range((1 << d) + 1)]
        det = {"maxima": best}
        for s in range((1 << d) + 1):
            try:
                down, up = bounds.one_point_ratios(d, s)
            except ValueError:
                continue
            if down is not None and best[s] > down * best[s - 1]:
                return ClaimResult("one_point", params, "violated", {**det, "s": s, "direction": "down"})
            if up is not None and best[s] > up * best[s + 1]:
                return ClaimResult("one_point", params, "violated", {**det, "s": s, "direction": "up"})
        return ClaimResult("one_point", params, "verified", det)


def verify_all(
    n: int,
    d: int,
    claims=None,
    threads: int = 1,
    corrupt: bool = False,
) -> VerificationReport:
    """Run the claim battery for (n, d).

    Exhaustive claims need n <= 4 and are skipped otherwise; the
    construction, affine-invariance, complement (sampled) and
    symmetric-polynomial claims run at any supported n.  ``corrupt`` is a
    self-test hook that tampers with the computed profiles so that the
    harness must report violations.
    """
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got n={n}, d={d}")
    selected = list(CLAIMS) if not claims else list(claims)
    unknown = set(selected) - set(CLAIMS)
    if unknown:
        raise ValueError(f"unknown claims: {sorted(unknown)}")
    v = _Verifier(n, d, threads, corrupt)
    report = VerificationReport(n, d)
    for name in CLAIMS:
        if name in selected:
            report.results.append(getattr(v, name)())
    return report
