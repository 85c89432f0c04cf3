"""Seeded instance generation with known canonical form, and rank-based
congruence invariants that check a decomposition without re-running it.

The per-block corank contributions used throughout:

==================  ==================  =====================
block               corank(A + mu B)     corank(B)
==================  ==================  =====================
Kronecker(k)        1 for every mu       1
JordanInfinite(k)   0                    2
JordanFinite(l, k)  2 at mu = -l, else 0 0
==================  ==================  =====================
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import NotEnoughSamplePoints
from .exactalg import Field, Poly, Scalar, poly_gcd, poly_interpolate, roots_in_field
from .matlin import Mat, congruence, determinant, rank
from .pencil import (
    JordanFinite,
    JordanInfinite,
    Kronecker,
    Pencil,
    assemble,
    canonical_sort,
)

#: ``transform_seed`` value selecting the identity transform
IDENTITY = None


@dataclass(frozen=True)
class InstanceSpec:
    field: Field
    blocks: tuple
    transform_seed: int | None = 0
    entry_bound: int = 3

    @property
    def n(self) -> int:
        return sum(b.size for b in self.blocks)


def random_invertible(n: int, seed: int, bound: int = 3, field: Field | None = None) -> Mat:
    """Unit lower triangular x unit upper triangular x permutation (det = +-1)."""
    field = field or Field()
    rng = random.Random(seed)
    one, zero = field.one, field.zero
    L = [[one if i == j else (field.random(rng, bound) if j < i else zero) for j in range(n)]
         for i in range(n)]
    U = [[one if i == j else (field.random(rng, bound) if j > i else zero) for j in range(n)]
         for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    P = [[one if perm[i] == j else zero for j in range(n)] for i in range(n)]
    return Mat._raw(field, L, n, n) @ Mat._raw(field, U, n, n) @ Mat._raw(field, P, n, n)


def generate(spec: InstanceSpec):
    """A random congruent copy of ``assemble(spec.blocks)`` and its sorted blocks."""
    canon = assemble(spec.blocks, field=spec.field)
    if spec.transform_seed is IDENTITY:
        A, B = canon.A, canon.B
    else:
        S = random_invertible(spec.n, spec.transform_seed, spec.entry_bound, spec.field)
        A, B = congruence(S, canon.A), congruence(S, canon.B)
    return A, B, canonical_sort(spec.blocks)


def random_blocks(rng: random.Random, field: Field, max_n: int, eigenvalues=None) -> list:
    """A random block list of total size between 1 and ``max_n``."""
    if eigenvalues is None:
        if field.p is None:
            eigenvalues = [Fraction(x) for x in (-2, -1, 0, 1, 2, 3)] + [Fraction(1, 2), Fraction(-3, 2)]
        else:
            eigenvalues = list(range(field.p))
    target = rng.randint(1, max_n)
    blocks, size = [], 0
    while size < target:
        room = target - size
        kind = rng.choice(("kron", "jinf", "jordan", "jordan"))
        if kind == "kron" or room < 2:
            b = Kronecker(rng.randint(0, (room - 1) // 2))
        elif kind == "jinf":
            b = JordanInfinite(rng.randint(1, min(room // 2, 3)))
        else:
            b = JordanFinite(field.scalar(rng.choice(eigenvalues)), rng.randint(1, min(room // 2, 3)))
        blocks.append(b)
        size += b.size
    return blocks


# ---------------------------------------------------------------------------
# rank oracles
# ---------------------------------------------------------------------------


def _need_points(field: Field, count: int):
    if field.p is not None and field.p <= count:
        raise NotEnoughSamplePoints(f"need more than {count} elements, {field} has {field.p}")


def corank_at(p: Pencil, mu) -> int:
    return p.n - rank(p.combo(p.field.elem(mu)))


def generic_corank(p: Pencil) -> int:
    """n minus the maximal rank of A + mu B over mu = 0, 1, ..., n."""
    if p.n == 0:
        return 0
    _need_points(p.field, p.n + 1)
    return p.n - max(rank(p.combo(mu)) for mu in p.field.points(p.n + 1))


@dataclass(frozen=True)
class DetPencil:
    poly: Poly
    identically_zero: bool


def det_pencil(p: Pencil) -> DetPencil:
    """det(A + mu B) as a polynomial in mu, by evaluation and interpolation."""
    f = p.field
    _need_points(f, p.n + 1)
    xs = f.points(p.n + 1)
    ys = [determinant(p.combo(x)).value for x in xs]
    if not any(ys):
        # n + 1 zeros of a polynomial of degree <= n
        return DetPencil(Poly(f, []), True)
    return DetPencil(poly_interpolate([(Scalar(f, x), Scalar(f, y)) for x, y in zip(xs, ys)]), False)


def eigenvalue_points(p: Pencil, seed: int = 0) -> list:
    """Points mu where rank(A + mu B) may drop below the generic rank.

    Over a small prime field every element is returned.  Otherwise the roots
    of det(X^t (A + mu B) Y) for random n x r matrices X, Y (r the generic
    rank) are returned; every rank-drop point is among them.
    """
    f, n = p.field, p.n
    if n == 0:
        return []
    if f.p is not None and f.p <= n + 1:
        return list(range(f.p))
    r = n - generic_corank(p)
    if r == 0:
        return []
    if r == n:
        roots, _ = roots_in_field(det_pencil(p).poly)
        return [mu.value for mu, _ in roots]
    # spurious roots of one random minor combination vanish in the gcd
    rng = random.Random(seed)
    xs = f.points(r + 1)
    g = None
    found = 0
    for _ in range(20):
        X = Mat._raw(f, [[f.random(rng, 5) for _ in range(r)] for _ in range(n)], n, r)
        Y = Mat._raw(f, [[f.random(rng, 5) for _ in range(r)] for _ in range(n)], n, r)
        ys = [determinant(X.T @ p.combo(x) @ Y).value for x in xs]
        if not any(ys):
            continue
        h = poly_interpolate([(Scalar(f, x), Scalar(f, y)) for x, y in zip(xs, ys)])
        g = h if g is None else poly_gcd(g, h)
        found += 1
        if found == 3:
            break
    if g is None:
        raise NotEnoughSamplePoints("could not find a nonvanishing r x r minor combination")
    if g.degree < 1:
        return []
    roots, _ = roots_in_field(g)
    return [mu.value for mu, _ in roots]


@dataclass
class InvariantReport:
    n: int
    generic_corank: int
    corank_of_A: int
    corank_of_B: int
    det: DetPencil
    sampled: list = dc_field(default_factory=list)
    n_kronecker: int = 0
    n_jordan_infinite: int = 0
    jordan_counts: dict = dc_field(default_factory=dict)

    def to_json(self, field: Field) -> dict:
        fmt = field.fmt
        return {
            "n": self.n,
            "generic_corank": self.generic_corank,
            "corank_A": self.corank_of_A,
            "corank_B": self.corank_of_B,
            "det_pencil": {
                "identically_zero": self.det.identically_zero,
                "coefficients": [fmt(c) for c in self.det.poly.coeffs],
            },
            "sampled_coranks": [{"mu": fmt(mu), "corank": c} for mu, c in self.sampled],
            "implied_counts": {
                "kronecker": self.n_kronecker,
                "jordan_infinite": self.n_jordan_infinite,
                "jordan": [{"lambda": fmt(lam), "blocks": c} for lam, c in self.jordan_counts.items()],
            },
        }


def invariants(p: Pencil) -> InvariantReport:
    f = p.field
    gc = generic_corank(p)
    cB = p.n - rank(p.B)
    rep = InvariantReport(
        n=p.n,
        generic_corank=gc,
        corank_of_A=p.n - rank(p.A),
        corank_of_B=cB,
        det=det_pencil(p) if p.n else DetPencil(Poly(f, [1]), False),
        sampled=[(mu, corank_at(p, mu)) for mu in f.points(p.n + 1)] if p.n else [],
        n_kronecker=gc,
        n_jordan_infinite=(cB - gc) // 2,
    )
    counts = {}
    for mu in sorted(eigenvalue_points(p), key=f.sort_key):
        c = (corank_at(p, mu) - gc) // 2
        if c:
            counts[f.neg(mu)] = c
    rep.jordan_counts = dict(sorted(counts.items(), key=lambda kv: f.sort_key(kv[0])))
    return rep


# ---------------------------------------------------------------------------
# differential check of a decomposition
# ---------------------------------------------------------------------------


@dataclass
class CrossCheckReport:
    ok: bool = True
    checks: list = dc_field(default_factory=list)

    def add(self, name: str, expected, got, skipped: bool = False):
        passed = skipped or expected == got
        self.checks.append({"check": name, "expected": expected, "got": got,
                            "ok": passed, "skipped": skipped})
        self.ok = self.ok and passed

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c["ok"]]


def cross_check(p: Pencil, blocks, seed: int = 0) -> CrossCheckReport:
    """Compare rank invariants of ``p`` with those implied by ``blocks``.

    ``blocks`` may be a Decomposition or a plain block list.
    """
    blocks = list(getattr(blocks, "blocks", blocks))
    f, n = p.field, p.n
    rep = CrossCheckReport()
    if n == 0:
        return rep
    nk = sum(isinstance(b, Kronecker) for b in blocks)
    ninf = sum(isinstance(b, JordanInfinite) for b in blocks)
    per_lam = Counter(f.elem(b.lam) for b in blocks if isinstance(b, JordanFinite))

    small = f.p is not None and f.p <= n + 1
    if small:
        rep.add("generic_corank", nk, None, skipped=True)
    else:
        rep.add("generic_corank", nk, generic_corank(p))
    rep.add("corank_B", nk + 2 * ninf, n - rank(p.B))

    points = {f.neg(lam) for lam in per_lam}
    points.update(eigenvalue_points(p, seed))
    for mu in sorted(points, key=f.sort_key):
        rep.add(f"corank_at({f.fmt(mu)})", nk + 2 * per_lam.get(f.neg(mu), 0), corank_at(p, mu))

    if not small:
        rng = random.Random(seed)
        tried = 0
        while tried < 3:
            mu = f.elem(rng.randint(-1000, 1000)) if f.p is None else rng.randrange(f.p)
            if mu in points:
                continue
            points.add(mu)
            tried += 1
            rep.add(f"corank_at({f.fmt(mu)})", nk, corank_at(p, mu))
    return rep
