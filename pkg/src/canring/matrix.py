"""Polynomial matrices: determinants, minors, adjugates, Pfaffians and the
three presentation formats (rolling factors, A*M*A^T, extrasymmetric)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .poly import Poly, RingMismatchError, RingSpec

__all__ = [
    "PolyMatrix",
    "ShapeError",
    "SkewError",
    "ExtrasymError",
    "RollError",
    "ExtraSymDecomposition",
    "determinant",
    "minors",
    "adjugate",
    "pfaffian",
    "sub_pfaffians",
    "is_extrasymmetric",
    "reassemble",
    "roll",
    "amta_product",
]


class ShapeError(ValueError):
    pass


class SkewError(ValueError):
    pass


class ExtrasymError(ValueError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class RollError(ValueError):
    pass


class PolyMatrix:
    """Rectangular matrix of polynomials over one ring (immutable)."""

    __slots__ = ("ring", "rows", "skew")

    def __init__(self, ring: RingSpec, rows: Sequence[Sequence], skew: bool = False):
        self.ring = ring
        conv = []
        for r in rows:
            row = []
            for e in r:
                if isinstance(e, str):
                    e = ring.parse(e)
                elif not isinstance(e, Poly):
                    e = ring.const(e)
                elif e.ring != ring:
                    raise RingMismatchError("matrix entry from another ring")
                row.append(e)
            conv.append(tuple(row))
        if conv and any(len(r) != len(conv[0]) for r in conv):
            raise ShapeError("ragged rows")
        self.rows = tuple(conv)
        self.skew = skew
        if skew and not self.is_skew():
            raise SkewError("matrix flagged skew is not skew-symmetric")

    @classmethod
    def skew_from_upper(cls, ring: RingSpec, n: int, upper: dict) -> "PolyMatrix":
        """Skew matrix from ``{(i, j): entry}`` with 0-based i < j; missing entries are 0."""
        z = ring.zero
        m = [[z] * n for _ in range(n)]
        for (i, j), e in upper.items():
            if not i < j:
                raise ShapeError("upper entries need i < j")
            if isinstance(e, str):
                e = ring.parse(e)
            elif not isinstance(e, Poly):
                e = ring.const(e)
            m[i][j] = e
            m[j][i] = -e
        return cls(ring, m, skew=True)

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"PolyMatrix({[[str(e) for e in r] for r in self.rows]})"

    def is_skew(self) -> bool:
        n, m = self.shape
        if n != m:
            return False
        for i in range(n):
            if self.rows[i][i].terms:
                return False
            for j in range(i + 1, n):
                if self.rows[j][i] != -self.rows[i][j]:
                    return False
        return True

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i + 1, n))

    def transpose(self) -> "PolyMatrix":
        n, m = self.shape
        return PolyMatrix(self.ring, [[self.rows[i][j] for i in range(n)] for j in range(m)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        skew = self.skew and list(rows) == list(cols)
        return PolyMatrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows], skew=skew)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[fn(e) for e in r] for r in self.rows], skew=False)

    def subs(self, mapping) -> "PolyMatrix":
        out = self.map(lambda e: e.subs(mapping))
        return PolyMatrix(self.ring, out.rows, skew=self.skew and out.is_skew())

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in sum")
        return PolyMatrix(
            self.ring,
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            skew=self.skew and other.skew,
        )

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.ring.zero
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = z
                for t in range(k):
                    a, b = self.rows[i][t], other.rows[t][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def to_json(self):
        return {"rows": [[str(e) for e in r] for r in self.rows], "skew": self.skew}

    @classmethod
    def from_json(cls, ring: RingSpec, d) -> "PolyMatrix":
        return cls(ring, [[ring.parse(e) for e in r] for r in d["rows"]], skew=d.get("skew", False))


def _det_rows(m: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> Poly:
    """Determinant of the submatrix on ``rows`` x ``cols`` by Laplace expansion with memoization."""
    k = len(rows)
    memo: dict = {}

    def rec(r: int, mask: int) -> Poly:
        # expand row rows[r] over the columns still available in ``mask``
        if r == k:
            return m.ring.one
        hit = memo.get((r, mask))
        if hit is not None:
            return hit
        acc = m.ring.zero
        sign_pos = 0
        for ci, c in enumerate(cols):
            if not mask & (1 << ci):
                continue
            e = m.rows[rows[r]][c]
            if e.terms:
                sub = rec(r + 1, mask & ~(1 << ci))
                if sub.terms:
                    term = e * sub
                    acc = acc - term if sign_pos % 2 else acc + term
            sign_pos += 1
        memo[(r, mask)] = acc
        return acc

    return rec(0, (1 << k) - 1)


def determinant(m: PolyMatrix) -> Poly:
    n, c = m.shape
    if n != c:
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return m.ring.one
    return _det_rows(m, range(n), range(n))


def minors(m: PolyMatrix, k: int) -> list:
    """All k x k minors, rows-subset major, both in lexicographic subset order."""
    n, c = m.shape
    if not 1 <= k <= min(n, c):
        raise ShapeError(f"no {k}x{k} minors in a {n}x{c} matrix")
    return [
        _det_rows(m, rs, cs) for rs in combinations(range(n), k) for cs in combinations(range(c), k)
    ]


def adjugate(m: PolyMatrix) -> PolyMatrix:
    """Classical adjoint: adj[i][j] = (-1)^(i+j) * minor with row j and column i removed."""
    n, c = m.shape
    if n != c:
        raise ShapeError("adjugate of a non-square matrix")
    if n == 1:
        return PolyMatrix(m.ring, [[m.ring.one]])
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rs = [r for r in range(n) if r != j]
            cs = [x for x in range(n) if x != i]
            d = _det_rows(m, rs, cs)
            out[i][j] = -d if (i + j) % 2 else d
    return PolyMatrix(m.ring, out)


def _require_skew(m: PolyMatrix):
    n, c = m.shape
    if n != c or not m.is_skew():
        raise SkewError("Pfaffian needs a skew-symmetric matrix")


def _pf_indices(m: PolyMatrix, idx: tuple, memo: dict) -> Poly:
    if not idx:
        return m.ring.one
    hit = memo.get(idx)
    if hit is not None:
        return hit
    i0 = idx[0]
    acc = m.ring.zero
    for p in range(1, len(idx)):
        e = m.rows[i0][idx[p]]
        if not e.terms:
            continue
        rest = idx[1:p] + idx[p + 1 :]
        sub = _pf_indices(m, rest, memo)
        if sub.terms:
            term = e * sub
            acc = acc + term if p % 2 else acc - term
    memo[idx] = acc
    return acc


def pfaffian(m: PolyMatrix) -> Poly:
    """Pfaffian by first-row expansion; pf([[0, a], [-a, 0]]) = a."""
    _require_skew(m)
    n = m.shape[0]
    if n % 2:
        raise ShapeError("Pfaffian of an odd-sized matrix")
    return _pf_indices(m, tuple(range(n)), {})


def sub_pfaffians(m: PolyMatrix, k: int) -> list:
    """``[(subset, pfaffian)]`` for every k-subset of indices in lexicographic order."""
    _require_skew(m)
    n = m.shape[0]
    if k % 2 or not 0 < k <= n:
        raise ShapeError(f"need an even k in 2..{n}, got {k}")
    memo: dict = {}
    return [(s, _pf_indices(m, s, memo)) for s in combinations(range(n), k)]


@dataclass(frozen=True)
class ExtraSymDecomposition:
    """Entries a..i of the upper-left block plus the scale factors p and q.

    Layout (1-based):
        (1,2)=a (1,3)=b (1,4)=c (1,5)=d (1,6)=e
        (2,3)=f (2,4)=g (2,5)=h (2,6)=d
        (3,4)=i (3,5)=p*g (3,6)=p*c
        (4,5)=q*f (4,6)=q*b
        (5,6)=p*q*a
    """

    a: Poly
    b: Poly
    c: Poly
    d: Poly
    e: Poly
    f: Poly
    g: Poly
    h: Poly
    i: Poly
    p: Poly
    q: Poly

    def to_json(self):
        return {k: str(getattr(self, k)) for k in "abcdefghipq"}


def reassemble(x: ExtraSymDecomposition) -> PolyMatrix:
    ring = x.a.ring
    upper = {
        (0, 1): x.a, (0, 2): x.b, (0, 3): x.c, (0, 4): x.d, (0, 5): x.e,
        (1, 2): x.f, (1, 3): x.g, (1, 4): x.h, (1, 5): x.d,
        (2, 3): x.i, (2, 4): x.p * x.g, (2, 5): x.p * x.c,
        (3, 4): x.q * x.f, (3, 5): x.q * x.b,
        (4, 5): x.p * x.q * x.a,
    }
    return PolyMatrix.skew_from_upper(ring, 6, upper)


def _solve_factor(pairs, fallback_pairs=()):
    """Find p with value == p*base for each (value, base, position); None if unconstrained."""
    p = None
    for value, base, pos in pairs:
        if base.terms:
            cand = value.exact_divide(base)
            if cand is None:
                raise ExtrasymError(f"entry {pos} is not a multiple of its partner", pos)
            if p is None:
                p = cand
            elif cand != p:
                raise ExtrasymError(f"entry {pos} gives an inconsistent factor", pos)
        elif value.terms:
            raise ExtrasymError(f"entry {pos} must vanish since its partner is 0", pos)
    return p


def is_extrasymmetric(m: PolyMatrix) -> ExtraSymDecomposition:
    """Decompose a 6x6 skew matrix, or raise ExtrasymError naming the failing entry."""
    _require_skew(m)
    if m.shape != (6, 6):
        raise ShapeError("extrasymmetric format is defined for 6x6 matrices")
    E = lambda i, j: m[i - 1, j - 1]  # noqa: E731 - 1-based accessor
    a, b, c, d, e = E(1, 2), E(1, 3), E(1, 4), E(1, 5), E(1, 6)
    f, g, h, i = E(2, 3), E(2, 4), E(2, 5), E(3, 4)
    if E(2, 6) != d:
        raise ExtrasymError("entry (2,6) differs from (1,5)", (2, 6))
    p = _solve_factor([(E(3, 5), g, (3, 5)), (E(3, 6), c, (3, 6))])
    q = _solve_factor([(E(4, 5), f, (4, 5)), (E(4, 6), b, (4, 6))])
    e56 = E(5, 6)
    zero = m.ring.zero
    if p is None and q is None:
        if e56.terms:
            raise ExtrasymError("entry (5,6) nonzero while p and q are unconstrained", (5, 6))
        p = q = zero
    elif p is None:
        p = zero
        if e56.terms:
            base = q * a
            cand = e56.exact_divide(base) if base.terms else None
            if cand is None:
                raise ExtrasymError("entry (5,6) is not p*q*a", (5, 6))
            p = cand
    elif q is None:
        q = zero
        if e56.terms:
            base = p * a
            cand = e56.exact_divide(base) if base.terms else None
            if cand is None:
                raise ExtrasymError("entry (5,6) is not p*q*a", (5, 6))
            q = cand
    if p * q * a != e56:
        raise ExtrasymError("entry (5,6) differs from p*q*a", (5, 6))
    return ExtraSymDecomposition(a, b, c, d, e, f, g, h, i, p, q)


def roll(relation: Poly, A: PolyMatrix, coefficients: Sequence[Poly]) -> Poly:
    """Swap the first row of A for the second in relation = sum c_i * A[0][i]."""
    if A.shape[0] != 2 or len(coefficients) != A.shape[1]:
        raise ShapeError("roll needs a 2-row matrix and one coefficient per column")
    ring = A.ring
    top = ring.zero
    bottom = ring.zero
    for j, cj in enumerate(coefficients):
        top = top + cj * A[0, j]
        bottom = bottom + cj * A[1, j]
    if top != relation:
        raise RollError("coefficients do not reproduce the relation on the first row")
    return bottom


def amta_product(A: PolyMatrix, M: PolyMatrix) -> PolyMatrix:
    """A * M * transpose(A) for a symmetric M."""
    if not M.is_symmetric():
        raise ShapeError("M must be symmetric")
    return A @ M @ A.transpose()
