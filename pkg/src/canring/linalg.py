"""Degreewise exact linear algebra over the rationals.

Everything here works on one weighted-degree slice at a time: the slice is a
finite-dimensional vector space with the monomials of that degree as basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from ._qq import QQ, ZERO, to_fraction
from .groebner import groebner
from .order import grevlex
from .poly import InhomogeneousError, Poly, RingSpec, weighted_degree

try:
    from gmpy2 import mpz as _int
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _int = int

__all__ = [
    "GradedDims",
    "EngineDisagreement",
    "TwistError",
    "TwistedPresentation",
    "monomials_of_degree",
    "IntEchelon",
    "SpanSolver",
    "rank_of_polys",
    "quotient_dims",
    "cokernel_dims",
    "minimal_generators",
    "minimal_generator_degrees",
    "hilbert_match",
    "plurigenus",
    "solve_in_span",
    "rank_condition_lift",
    "RankConditionError",
]


class EngineDisagreement(RuntimeError):
    """The standard-monomial count and the rank count gave different answers."""


class TwistError(ValueError):
    pass


class RankConditionError(ValueError):
    pass


@dataclass
class GradedDims:
    """Dimensions per degree, with the per-engine values kept for reports."""

    dims: dict
    engines: dict = field(default_factory=dict)

    def __getitem__(self, d):
        return self.dims[d]

    def __eq__(self, other):
        if isinstance(other, GradedDims):
            return self.dims == other.dims
        if isinstance(other, dict):
            return self.dims == other
        return NotImplemented

    def as_list(self, degrees=None):
        degrees = sorted(self.dims) if degrees is None else degrees
        return [self.dims[d] for d in degrees]

    def to_json(self):
        out = {"dims": {str(d): v for d, v in sorted(self.dims.items())}}
        if self.engines:
            out["engines"] = {
                name: {str(d): v for d, v in sorted(vals.items())} for name, vals in self.engines.items()
            }
        return out


def plurigenus(m: int, chi: int = 5, k2: int = 7) -> int:
    return chi + k2 * m * (m - 1) // 2


@lru_cache(maxsize=None)
def _monos(weights: tuple, d: int) -> tuple:
    if d < 0:
        return ()
    if not weights:
        return ((),) if d == 0 else ()
    w, rest = weights[0], weights[1:]
    out = []
    for e in range(d // w, -1, -1):
        for tail in _monos(rest, d - e * w):
            out.append((e,) + tail)
    return tuple(out)


def monomials_of_degree(ring: RingSpec, d: int) -> list:
    """All exponent vectors of weighted degree ``d``, in ascending default order."""
    if ring.has_parameters():
        raise ValueError("degree slices are infinite when weight-0 parameters are present")
    return sorted(_monos(tuple(ring.weights), d), key=ring.default_key)


def _to_int_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        den = math.lcm(den, int(to_fraction(v).denominator))
    out = {}
    for c, v in row.items():
        fv = to_fraction(v)
        out[c] = _int(fv.numerator * (den // fv.denominator))
    return out


def _content(row: dict):
    g = 0
    for v in row.values():
        g = math.gcd(g, int(v))
        if g == 1:
            return 1
    return g


class IntEchelon:
    """Fraction-free incremental row echelon form (integer rows, content removed).

    Columns are integers; the pivot of a row is its smallest column.
    """

    def __init__(self):
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: dict) -> dict:
        row = dict(row)
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            a, b = piv[c], row[c]
            g = math.gcd(int(a), int(b))
            fa, fb = a // g, b // g
            new = {k: v * fa for k, v in row.items()}
            for k, v in piv.items():
                nv = new.get(k, 0) - fb * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            if new:
                cg = _content(new)
                if cg != 1:
                    new = {k: v // cg for k, v in new.items()}
            row = new
        return row

    def add(self, row: dict) -> bool:
        """Insert a row (rational or integer entries); True if the rank grew."""
        row = _to_int_row({k: v for k, v in row.items() if v})
        red = self._reduce(row)
        if not red:
            return False
        self.pivots[min(red)] = red
        return True

    def contains(self, row: dict) -> bool:
        row = _to_int_row({k: v for k, v in row.items() if v})
        return not self._reduce(row)


class SpanSolver:
    """Incremental echelon over QQ that tracks how each pivot row was combined.

    Vectors are added in order; a vector dependent on earlier ones is dropped,
    so solutions only use the earliest independent vectors and give every
    dropped (free) unknown the value 0.
    """

    def __init__(self):
        self.pivots: dict = {}  # col -> (row, combination)
        self.count = 0

    def _reduce(self, row: dict, comb: dict):
        row, comb = dict(row), dict(comb)
        while row:
            c = min(row)
            hit = self.pivots.get(c)
            if hit is None:
                return row, comb
            prow, pcomb = hit
            f = row[c] / prow[c]
            for k, v in prow.items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            for k, v in pcomb.items():
                nv = comb.get(k, ZERO) - f * v
                if nv:
                    comb[k] = nv
                else:
                    comb.pop(k, None)
        return row, comb

    def add(self, row: dict) -> bool:
        idx = self.count
        self.count += 1
        red, comb = self._reduce(row, {idx: QQ(1)})
        if not red:
            return False
        self.pivots[min(red)] = (red, comb)
        return True

    def solve(self, target: dict):
        """Coefficients x with sum x_i * vector_i == target, or None."""
        red, comb = self._reduce(target, {})
        if red:
            return None
        return {k: -v for k, v in comb.items() if v}


def _check_homog(polys):
    degs = []
    for p in polys:
        if not p.terms:
            degs.append(None)
            continue
        degs.append(weighted_degree(p))
    return degs


def _column_map(ring: RingSpec, d: int) -> dict:
    return {m: i for i, m in enumerate(monomials_of_degree(ring, d))}


def _slice_rows(gens, degs, ring, d):
    """Rows g*m for every generator g of degree <= d and monomial m of complementary degree."""
    for g, e in zip(gens, degs):
        if e is None or e > d:
            continue
        for m in monomials_of_degree(ring, d - e):
            yield g.mul_monomial(m)


def rank_of_polys(polys: Sequence[Poly], cols: dict | None = None) -> int:
    ech = IntEchelon()
    cols = {} if cols is None else cols
    for p in polys:
        row = {}
        for m, c in p.terms.items():
            j = cols.setdefault(m, len(cols))
            row[j] = c
        ech.add(row)
    return ech.rank


def quotient_dims(I: Sequence[Poly], ring: RingSpec, max_degree: int, min_degree: int = 1, engine: str = "both") -> GradedDims:
    """Hilbert function of ring/I in degrees min_degree..max_degree.

    ``engine`` is ``"gb"`` (standard monomials of a grevlex basis), ``"rank"``
    (rank of the degree slice of I) or ``"both"`` (cross-checked; raises
    EngineDisagreement on a mismatch).
    """
    I = [p for p in I if p.terms]
    for p in I:
        if p.ring != ring:
            raise ValueError("generator ring differs")
    degs = _check_homog(I)
    results = {}
    if engine in ("gb", "both"):
        gb_dims = {}
        if I:
            G = groebner(I, grevlex(ring), max_degree=max_degree)
        for d in range(min_degree, max_degree + 1):
            mons = monomials_of_degree(ring, d)
            gb_dims[d] = sum(1 for m in mons if G.is_standard(m)) if I else len(mons)
        results["standard_monomials"] = gb_dims
    if engine in ("rank", "both"):
        rk_dims = {}
        for d in range(min_degree, max_degree + 1):
            cols = _column_map(ring, d)
            r = rank_of_polys(list(_slice_rows(I, degs, ring, d)), cols)
            rk_dims[d] = len(cols) - r
        results["slice_rank"] = rk_dims
    if not results:
        raise ValueError(f"unknown engine {engine!r}")
    vals = list(results.values())
    if any(v != vals[0] for v in vals[1:]):
        raise EngineDisagreement(f"engines disagree: {results}")
    return GradedDims(dict(vals[0]), results)


@dataclass
class TwistedPresentation:
    """A matrix map from free modules, given by generator degrees.

    ``target_degrees[i]`` is the degree of the i-th target basis vector and
    ``source_degrees[j]`` the degree of the j-th source basis vector, so entry
    (i, j) must be homogeneous of degree source_degrees[j] - target_degrees[i].
    A twist A(-a) corresponds to generator degree a.
    """

    matrix: object  # PolyMatrix
    source_degrees: list
    target_degrees: list

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if len(self.target_degrees) != rows or len(self.source_degrees) != cols:
            raise TwistError("twist lists do not match the matrix shape")
        for i in range(rows):
            for j in range(cols):
                e = self.matrix[i, j]
                if not e.terms:
                    continue
                want = self.source_degrees[j] - self.target_degrees[i]
                try:
                    got = weighted_degree(e)
                except InhomogeneousError as exc:
                    raise TwistError(f"entry ({i},{j}) is inhomogeneous: {exc.degrees}") from exc
                if got != want:
                    raise TwistError(f"entry ({i},{j}) has degree {got}, twists require {want}")

    def transpose(self, shift: int = 0) -> "TwistedPresentation":
        """Transposed map; generator degrees negate (then shift by ``shift``)."""
        return TwistedPresentation(
            self.matrix.transpose(),
            [shift - d for d in self.target_degrees],
            [shift - d for d in self.source_degrees],
        )

    def to_json(self):
        return {
            "matrix": self.matrix.to_json(),
            "source_degrees": list(self.source_degrees),
            "target_degrees": list(self.target_degrees),
        }


def cokernel_dims(p: TwistedPresentation, max_degree: int, min_degree: int = 0) -> GradedDims:
    """Dimension of the cokernel per degree: target slice minus rank of the image."""
    ring = p.matrix.ring
    rows, cols = p.matrix.shape
    out = {}
    for d in range(min_degree, max_degree + 1):
        col_index = {}
        offset = 0
        for i in range(rows):
            for m in monomials_of_degree(ring, d - p.target_degrees[i]):
                col_index[(i, m)] = offset
                offset += 1
        ech = IntEchelon()
        for j in range(cols):
            for m in monomials_of_degree(ring, d - p.source_degrees[j]):
                row = {}
                for i in range(rows):
                    e = p.matrix[i, j]
                    if not e.terms:
                        continue
                    for mon, c in e.mul_monomial(m).terms.items():
                        row[col_index[(i, mon)]] = c
                if row:
                    ech.add(row)
        out[d] = offset - ech.rank
    return GradedDims(out, {"slice_rank": dict(out)})


def minimal_generators(I: Sequence[Poly]) -> list:
    """Indices of a minimal generating subset, chosen greedily by ascending degree.

    Within a degree the generators are taken in input order; a generator is
    kept iff it is not in the span of the degree slice of the ideal generated
    by the generators kept so far.
    """
    degs = _check_homog(I)
    order = sorted((d, i) for i, d in enumerate(degs) if d is not None)
    kept: list = []
    if not order:
        return kept
    ring = I[order[0][1]].ring
    by_degree: dict = {}
    for d, i in order:
        by_degree.setdefault(d, []).append(i)
    for d in sorted(by_degree):
        cols = _column_map(ring, d)
        ech = IntEchelon()
        for p in _slice_rows([I[k] for k in kept], [degs[k] for k in kept], ring, d):
            ech.add({cols[m]: c for m, c in p.terms.items()})
        for i in by_degree[d]:
            if ech.add({cols[m]: c for m, c in I[i].terms.items()}):
                kept.append(i)
    return kept


def minimal_generator_degrees(I: Sequence[Poly]) -> list:
    degs = _check_homog(I)
    return sorted(degs[i] for i in minimal_generators(I))


def hilbert_match(dims, candidate: Callable[[int], int] | Sequence = plurigenus, degrees=None) -> bool:
    """True iff dims agree with ``candidate`` on every tested degree.

    ``candidate`` is a callable m -> value, or a sequence of polynomial
    coefficients (constant term first) evaluated exactly at m.
    """
    table = dims.dims if isinstance(dims, GradedDims) else dict(dims)
    if not callable(candidate):
        coeffs = [Fraction(c) for c in candidate]
        cand = lambda m: sum(c * m**i for i, c in enumerate(coeffs))  # noqa: E731
    else:
        cand = candidate
    degrees = sorted(table) if degrees is None else degrees
    return all(d in table and table[d] == cand(d) for d in degrees)


def solve_in_span(target: Poly, spanning: Sequence[Poly], degree_of_unknown: Sequence[int]):
    """Homogeneous polynomials lam_k with target == sum lam_k * spanning_k.

    ``degree_of_unknown[k]`` is the weighted degree of lam_k (negative means
    lam_k = 0).  Unknown coefficients are ordered by spanning index, then by
    ascending monomial, and free unknowns are set to zero.  Returns None if the
    system is inconsistent.
    """
    ring = target.ring
    solver = SpanSolver()
    labels = []
    cols: dict = {}

    def vec(p):
        row = {}
        for m, c in p.terms.items():
            j = cols.setdefault(m, len(cols))
            row[j] = c
        return row

    for k, (s, e) in enumerate(zip(spanning, degree_of_unknown)):
        if e < 0 or not s.terms:
            continue
        for m in monomials_of_degree(ring, e):
            labels.append((k, m))
            solver.add(vec(s.mul_monomial(m)))
    sol = solver.solve(vec(target))
    if sol is None:
        return None
    lam = [dict() for _ in spanning]
    for idx, c in sol.items():
        k, m = labels[idx]
        lam[k][m] = c
    return [Poly(ring, terms) for terms in lam]


def rank_condition_lift(alpha, row: int = 0) -> dict:
    """Express every cofactor outside ``row`` through the cofactors in ``row``.

    With beta the matrix of cofactors (beta[i][j] is the signed minor deleting
    row i and column j), solves beta[j][h] = sum_k lam_k * beta[row][k]
    (homogeneous lam) for each j != row.  The entries beta[row][k] are, up to
    sign, the maximal minors of alpha with ``row`` deleted, so solvability of
    all these systems is exactly the rank condition.  Returns
    ``{(j, h): [lam_0, lam_1, ...]}``; raises RankConditionError otherwise.
    """
    from .matrix import adjugate  # local import; matrix imports linalg helpers

    beta = adjugate(alpha).transpose()
    n = alpha.shape[0]
    base = [beta[row, k] for k in range(n)]
    base_deg = [weighted_degree(b) if b.terms else None for b in base]
    out = {}
    for j in range(n):
        if j == row:
            continue
        for h in range(n):
            target = beta[j, h]
            if not target.terms:
                out[(j, h)] = [Poly(alpha.ring, {}) for _ in range(n)]
                continue
            td = weighted_degree(target)
            unk = [td - bd if bd is not None else -1 for bd in base_deg]
            lam = solve_in_span(target, base, unk)
            if lam is None:
                raise RankConditionError(
                    f"cofactor ({j},{h}) is not in the ideal of the cofactors of row {row}"
                )
            out[(j, h)] = lam
    return out
