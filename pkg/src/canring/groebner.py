"""Reduced Groebner bases and the ideal operations built on them.

Buchberger's algorithm with the normal selection strategy and the
Gebauer-Moeller installation of the coprime and chain criteria.  For
homogeneous input a ``max_degree`` truncation is exact: the result agrees with
the full reduced basis in every degree up to the bound.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from ._qq import ZERO
from .order import MonomialOrder, block, grevlex
from .poly import Poly, RingMismatchError, RingSpec

__all__ = [
    "ReducedGB",
    "groebner",
    "normal_form",
    "divide",
    "ideal_equal",
    "ideal_contains",
    "eliminate",
    "divide_by_variable",
    "OrderMismatchError",
]


class OrderMismatchError(ValueError):
    pass


def _mask(m) -> int:
    k = 0
    for i, e in enumerate(m):
        if e:
            k |= 1 << i
    return k


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _coprime(a, b) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Elt:
    __slots__ = ("terms", "lm", "mask", "deg")

    def __init__(self, terms, lm, deg):
        self.terms = terms
        self.lm = lm
        self.mask = _mask(lm)
        self.deg = deg


def _leading(terms, key):
    lm = max(terms, key=key)
    return lm, terms[lm]


def _make_monic(terms, key):
    lm, lc = _leading(terms, key)
    if lc != 1:
        inv = 1 / lc
        terms = {m: c * inv for m, c in terms.items()}
    return terms, lm


def _reduce(terms, basis, key, tail=True, quotients=None):
    """Full normal form of ``terms`` (a dict) w.r.t. the monic elements ``basis``.

    When ``quotients`` is a list aligned with ``basis`` the cofactors are
    accumulated into it (dicts monomial -> coefficient).
    """
    p = dict(terms)
    heap = [(-key(m), m) for m in p]
    heapq.heapify(heap)
    rem = {}
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        _, m = pop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        mm = _mask(m)
        red = None
        for idx, g in enumerate(basis):
            if g.mask & ~mm == 0 and _divides(g.lm, m):
                red = idx
                break
        if red is None:
            rem[m] = c
            if not tail:
                for mon, cc in p.items():
                    rem[mon] = cc
                return rem
            continue
        g = basis[red]
        q = tuple([a - b for a, b in zip(m, g.lm)])
        if quotients is not None:
            qd = quotients[red]
            qd[q] = qd.get(q, ZERO) + c
        for gm, gc in g.terms.items():
            if gm == g.lm:
                continue
            nm = tuple([a + b for a, b in zip(gm, q)])
            v = p.get(nm)
            if v is None:
                p[nm] = -c * gc
                push(heap, (-key(nm), nm))
            else:
                v = v - c * gc
                if v:
                    p[nm] = v
                else:
                    del p[nm]
    return rem


class ReducedGB:
    """A reduced Groebner basis (monic, inter-reduced) for a fixed order.

    ``max_degree`` is ``None`` for a complete basis, otherwise the weighted
    degree through which the (homogeneous) basis is known to be complete.
    """

    def __init__(self, generators: Sequence[Poly], order: MonomialOrder, max_degree=None, stats=None):
        self.generators = list(generators)
        self.order = order
        self.ring = order.ring
        self.max_degree = max_degree
        self.stats = stats or {}
        key = order.key
        self._elts = []
        for g in self.generators:
            lm, _ = _leading(g.terms, key)
            self._elts.append(_Elt(g.terms, lm, self.ring.mon_degree(lm)))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def leading_monomials(self):
        return [e.lm for e in self._elts]

    def _check(self, f: Poly):
        if f.ring != self.ring:
            raise RingMismatchError("polynomial and basis live in different rings")
        if self.max_degree is not None and f.terms:
            top = max(f.degrees())
            if top > self.max_degree:
                raise ValueError(
                    f"basis truncated at degree {self.max_degree}; cannot reduce degree {top}"
                )

    def reduce(self, f: Poly) -> Poly:
        self._check(f)
        if not f.terms:
            return f
        return Poly(self.ring, _reduce(f.terms, self._elts, self.order.key), _clean=True)

    def contains(self, f: Poly) -> bool:
        return not self.reduce(f).terms

    def is_standard(self, mon) -> bool:
        mm = _mask(mon)
        return not any(e.mask & ~mm == 0 and _divides(e.lm, mon) for e in self._elts)

    def to_json(self) -> dict:
        return {
            "order": self.order.to_json(),
            "max_degree": self.max_degree,
            "generators": [str(g) for g in self.generators],
        }


def groebner(gens: Iterable[Poly], order: MonomialOrder | None = None, max_degree=None) -> ReducedGB:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``max_degree`` truncates the computation (homogeneous input only): pairs
    whose lcm exceeds the bound are never formed, and the returned basis is
    exact in degrees ``<= max_degree``.
    """
    gens = [g for g in gens if g.terms]
    if order is None:
        if not gens:
            raise ValueError("need an order or at least one generator")
        order = grevlex(gens[0].ring)
    ring = order.ring
    for g in gens:
        if g.ring != ring:
            raise OrderMismatchError("generator ring differs from the order's ring")
    if max_degree is not None and not all(g.is_homogeneous() for g in gens):
        raise ValueError("degree truncation requires homogeneous generators")
    key = order.key
    deg = ring.mon_degree

    elts: list[_Elt] = []
    active: list[int] = []
    pairs: set = set()
    heap: list = []
    stats = {"pairs_reduced": 0, "zero_reductions": 0, "criteria_skips": 0}

    def push_pair(i, j):
        if i > j:
            i, j = j, i
        pairs.add((i, j))
        l = _lcm(elts[i].lm, elts[j].lm)
        heapq.heappush(heap, (deg(l), key(l), i, j))

    def update(h: int):
        nonlocal active
        lh = elts[h].lm
        cands = list(active)
        lcms = {g: _lcm(lh, elts[g].lm) for g in cands}
        kept = []
        for pos, g1 in enumerate(cands):
            l1 = lcms[g1]
            if _coprime(lh, elts[g1].lm):
                kept.append(g1)
                continue
            redundant = False
            for g2 in cands[pos + 1 :]:
                if _divides(lcms[g2], l1):
                    redundant = True
                    break
            if not redundant:
                for g2 in kept:
                    if _divides(lcms[g2], l1):
                        redundant = True
                        break
            if not redundant:
                kept.append(g1)
            else:
                stats["criteria_skips"] += 1
        new_pairs = [g for g in kept if not _coprime(lh, elts[g].lm)]
        stats["criteria_skips"] += len(kept) - len(new_pairs)
        for (i, j) in list(pairs):
            lij = _lcm(elts[i].lm, elts[j].lm)
            if (
                _divides(lh, lij)
                and _lcm(elts[i].lm, lh) != lij
                and _lcm(lh, elts[j].lm) != lij
            ):
                pairs.discard((i, j))
                stats["criteria_skips"] += 1
        for g in new_pairs:
            push_pair(g, h)
        active = [g for g in active if not _divides(lh, elts[g].lm)] + [h]

    def add(terms):
        terms, lm = _make_monic(terms, key)
        elts.append(_Elt(terms, lm, deg(lm)))
        update(len(elts) - 1)

    # inputs in ascending leading-monomial order so the result is deterministic
    staged = []
    for g in gens:
        lm, _ = _leading(g.terms, key)
        staged.append((deg(lm), key(lm), g))
    staged.sort(key=lambda t: (t[0], t[1]))
    for d, _, g in staged:
        if max_degree is not None and d > max_degree:
            continue
        r = _reduce(g.terms, [elts[i] for i in active], key)
        if r:
            add(r)

    while heap:
        d, _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        if max_degree is not None and d > max_degree:
            pairs.discard((i, j))
            continue
        pairs.discard((i, j))
        a, b = elts[i], elts[j]
        l = _lcm(a.lm, b.lm)
        qa = tuple([x - y for x, y in zip(l, a.lm)])
        qb = tuple([x - y for x, y in zip(l, b.lm)])
        s = {}
        for m, c in a.terms.items():
            s[tuple([x + y for x, y in zip(m, qa)])] = c
        for m, c in b.terms.items():
            mm = tuple([x + y for x, y in zip(m, qb)])
            v = s.get(mm, ZERO) - c
            if v:
                s[mm] = v
            else:
                s.pop(mm, None)
        stats["pairs_reduced"] += 1
        if not s:
            stats["zero_reductions"] += 1
            continue
        r = _reduce(s, [elts[k] for k in active], key)
        if not r:
            stats["zero_reductions"] += 1
            continue
        add(r)

    # inter-reduce the (already LM-minimal) active set
    basis = [elts[i] for i in active]
    basis.sort(key=lambda e: key(e.lm))
    out = []
    for idx, e in enumerate(basis):
        others = basis[:idx] + basis[idx + 1 :]
        tail = {m: c for m, c in e.terms.items() if m != e.lm}
        red = _reduce(tail, others, key) if tail else {}
        red[e.lm] = e.terms[e.lm]
        out.append(Poly(ring, red, _clean=True))
    stats["size"] = len(out)
    return ReducedGB(out, order, max_degree, stats)


def _as_gb(G, f_ring=None, needed_degree=None) -> ReducedGB:
    if isinstance(G, ReducedGB):
        return G
    G = list(G)
    ring = G[0].ring if G else f_ring
    order = grevlex(ring)
    md = None
    if needed_degree is not None and all(g.is_homogeneous() for g in G):
        md = needed_degree
    return groebner(G, order, max_degree=md)


def normal_form(f: Poly, G) -> Poly:
    """Remainder of ``f`` modulo ``G`` (a ReducedGB, or generators whose GB is computed)."""
    if isinstance(G, ReducedGB):
        return G.reduce(f)
    need = max(f.degrees()) if f.terms and f.is_homogeneous() else None
    return _as_gb(G, f.ring, need).reduce(f)


def divide(f: Poly, divisors: Sequence[Poly], order: MonomialOrder | None = None):
    """Multivariate division with cofactor tracking.

    Returns ``(quotients, remainder)`` with ``f == sum(q*g) + remainder``.
    Divisors need not be monic or a Groebner basis.
    """
    ring = f.ring
    order = order or grevlex(ring)
    key = order.key
    elts, scales = [], []
    for g in divisors:
        if g.ring != ring:
            raise RingMismatchError("divisor ring differs")
        if not g.terms:
            raise ZeroDivisionError("zero divisor")
        terms, lm = _make_monic(g.terms, key)
        elts.append(_Elt(terms, lm, ring.mon_degree(lm)))
        scales.append(g.terms[lm])
    qs = [dict() for _ in elts]
    rem = _reduce(f.terms, elts, key, quotients=qs)
    quotients = []
    for q, c in zip(qs, scales):
        quotients.append(Poly(ring, {m: v / c for m, v in q.items() if v}, _clean=True))
    return quotients, Poly(ring, rem, _clean=True)


def _max_deg(polys):
    return max((max(p.degrees()) for p in polys if p.terms), default=0)


def _homog(polys):
    return all(p.is_homogeneous() for p in polys)


def ideal_contains(gens: Sequence[Poly], polys: Sequence[Poly], order=None) -> bool:
    """True iff every polynomial in ``polys`` lies in the ideal of ``gens``."""
    polys = [p for p in polys if p.terms]
    if not polys:
        return True
    gens = [g for g in gens if g.terms]
    if not gens:
        return False
    ring = gens[0].ring
    order = order or grevlex(ring)
    md = _max_deg(polys) if (_homog(gens) and _homog(polys)) else None
    G = groebner(gens, order, max_degree=md)
    return all(G.contains(p) for p in polys)


def ideal_equal(I: Sequence[Poly], J: Sequence[Poly], order=None) -> bool:
    """Mutual containment test through reduced Groebner bases."""
    I = [p for p in I if p.terms]
    J = [p for p in J if p.terms]
    if not I or not J:
        return not I and not J
    if I[0].ring != J[0].ring:
        raise RingMismatchError("ideals live in different rings")
    return ideal_contains(J, I, order) and ideal_contains(I, J, order)


def eliminate(I: Sequence[Poly], names: Iterable[str], max_degree=None, return_gb=False):
    """Generators of ``I`` intersected with the subring free of ``names``.

    Uses a block order with the eliminated variables in the first block and
    keeps the basis elements not involving them.
    """
    I = [p for p in I if p.terms]
    names = tuple(names)
    if not I:
        return ([], None) if return_gb else []
    ring = I[0].ring
    idx = [ring.index(n) for n in names]
    G = groebner(I, block(ring, names), max_degree=max_degree)
    out = [g for g in G if all(all(m[i] == 0 for i in idx) for m in g.terms)]
    return (out, G) if return_gb else out


def divide_by_variable(gens: Sequence[Poly], name: str) -> list:
    """Divide each polynomial by the largest power of ``name`` dividing it."""
    out = []
    for g in gens:
        if not g.terms:
            out.append(g)
            continue
        i = g.ring.index(name)
        k = min(m[i] for m in g.terms)
        if k == 0:
            out.append(g)
        else:
            out.append(
                Poly(g.ring, {m[:i] + (m[i] - k,) + m[i + 1 :]: c for m, c in g.terms.items()}, _clean=True)
            )
    return out
