"""Explicit point sets: linear preimages, parity hyperplanes, the symmetric
polynomial set, and random one-point perturbations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .gf2core import BitMatrix, rank
from .stats import PointSet

RNG_NAME = "numpy.random.Philox"


def default_projection(n: int, rows: int) -> BitMatrix:
    """[I | 0]: the map x -> (x_1, ..., x_rows)."""
    return BitMatrix(tuple(1 << i for i in range(rows)), n)


def preimage_set(n: int, d: int, k: int, j: int, b: BitMatrix | None = None, s=None) -> PointSet:
    """A = B^{-1}(S) for a surjective B: F_2^n -> F_2^(d-k) and |S| = j.

    Every d-flat on which B has full rank d-k meets A in exactly j * 2^k
    points.  Defaults: B = projection on the first d-k coordinates and S =
    the j smallest points of F_2^(d-k).  j must be odd, except that
    j = 2^(d-k) (S = everything) is accepted and yields all of F_2^n.
    """
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got n={n}, d={d}")
    if not 0 <= k < d:
        raise ValueError(f"need 0 <= k < d, got k={k}")
    r = d - k
    if not 1 <= j <= 1 << r:
        raise ValueError(f"need 1 <= j <= 2^(d-k) = {1 << r}, got j={j}")
    if j % 2 == 0 and j != 1 << r:
        raise ValueError(f"j must be odd, got {j}")
    if b is None:
        b = default_projection(n, r)
    if b.nrows != r or b.ncols != n:
        raise ValueError(f"B must be {r} x {n}")
    if rank(b) != r:
        raise ValueError("B is not surjective")
    if s is None:
        targets = set(range(j))
    else:
        targets = {int(v) for v in s}
        if len(targets) != j or any(v < 0 or v >> r for v in targets):
            raise ValueError(f"S must be {j} distinct points of F_2^{r}")
    return PointSet.from_points(n, (x for x in range(1 << n) if b.apply(x) in targets))


def hyperplane_set(n: int, parity: int = 0) -> PointSet:
    """{x : <x, 1> = parity}, the points of even (or odd) Hamming weight."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if parity not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    return PointSet.from_points(n, (x for x in range(1 << n) if x.bit_count() % 2 == parity))


def symmetric_polynomial_set(n: int, d: int) -> PointSet:
    """Support of the degree-d elementary symmetric polynomial over GF(2).

    e_d(x) = C(|x|, d) mod 2, and by Lucas' theorem that is odd exactly when
    the bits of d are a subset of the bits of |x|.
    """
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got n={n}, d={d}")
    return PointSet.from_points(n, (x for x in range(1 << n) if x.bit_count() & d == d))


def symmetric_polynomial_value(x: int, n: int, d: int) -> int:
    """e_d(x) by summing every degree-d monomial; slow reference for the Lucas rule."""
    return sum(all((x >> i) & 1 for i in t) for t in combinations(range(n), d)) & 1


def perturb(a: PointSet, mode: str, prob, seed: int) -> PointSet:
    """Independently delete points of ``a`` (or add points outside it) with probability ``prob``.

    ``prob`` is an exact rational; each coin is a uniform integer draw below
    its denominator from a Philox stream keyed by ``seed``, in increasing
    point order.
    """
    prob = Fraction(prob)
    if not 0 <= prob <= 1:
        raise ValueError("probability must lie in [0, 1]")
    if mode not in ("delete", "add"):
        raise ValueError(f"mode must be 'delete' or 'add', got {mode!r}")
    candidates = a.points() if mode == "delete" else a.complement().points()
    rng = np.random.Generator(np.random.Philox(seed))
    draws = rng.integers(0, prob.denominator, size=len(candidates), dtype=np.int64)
    hit = {p for p, u in zip(candidates, draws.tolist()) if u < prob.numerator}
    if mode == "delete":
        return PointSet.from_points(a.n, (p for p in candidates if p not in hit))
    return PointSet(a.n, a.mask | PointSet.from_points(a.n, hit).mask)


KINDS = ("preimage", "hyperplane", "symmetric_poly", "perturbed")
_ALIASES = {"sympoly": "symmetric_poly", "perturb": "perturbed"}


@dataclass(frozen=True)
class ConstructionSpec:
    """Serializable recipe for one of the point-set constructions.

    ``perturbed`` wraps a ``base`` spec (a nested dict) together with
    ``mode``, ``prob`` (string "p/q") and ``seed``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown construction kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    def build(self, n: int | None = None) -> PointSet:
        p = dict(self.params)
        if n is not None:
            if "n" in p and int(p["n"]) != n:
                raise ValueError(f"construction has n={p['n']} but n={n} was requested")
            p["n"] = n
        if "n" not in p:
            raise ValueError("construction needs n")
        n = int(p["n"])
        if self.kind == "preimage":
            return preimage_set(n, int(p["d"]), int(p["k"]), int(p.get("j", 1)))
        if self.kind == "hyperplane":
            return hyperplane_set(n, int(p.get("parity", 0)))
        if self.kind == "symmetric_poly":
            return symmetric_polynomial_set(n, int(p["d"]))
        base = ConstructionSpec.from_dict(p["base"]).build(n)
        return perturb(base, p.get("mode", "delete"), Fraction(str(p["prob"])), int(p.get("seed", 0)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(sorted(self.params.items()))}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> ConstructionSpec:
        if "kind" not in data:
            raise ValueError("construction spec needs a 'kind'")
        params = data.get("params")
        if params is None:
            params = {k: v for k, v in data.items() if k != "kind"}
        return cls(data["kind"], dict(params))

    @classmethod
    def parse(cls, tokens: list[str] | str) -> ConstructionSpec:
        """Parse either a JSON object or ``kind key=value ...`` tokens."""
        if isinstance(tokens, str):
            tokens = tokens.split()
        text = " ".join(tokens).strip()
        if text.startswith("{"):
            return cls.from_dict(json.loads(text))
        kind, *rest = tokens
        params = {}
        for tok in rest:
            key, sep, val = tok.partition("=")
            if not sep:
                raise ValueError(f"expected key=value, got {tok!r}")
            params[key] = val if key == "prob" else int(val)
        return cls(kind, params)
