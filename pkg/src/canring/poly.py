"""Exact weighted-graded multivariate polynomials over the rationals.

A :class:`RingSpec` fixes the variable names and their weights; a :class:`Poly`
is an immutable map from exponent tuples to nonzero rationals.  Weight-0
variables are allowed only when declared as parameters (the deformation
parameter ``t`` is the only one used in practice).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ._qq import QQ, ZERO, format_q, qq

__all__ = [
    "RingSpec",
    "Poly",
    "ParseError",
    "RingMismatchError",
    "InhomogeneousError",
    "ZeroPolynomialError",
    "parse_poly",
    "weighted_degree",
]


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class RingMismatchError(ValueError):
    pass


class ZeroPolynomialError(ValueError):
    pass


class InhomogeneousError(ValueError):
    def __init__(self, degrees):
        self.degrees = tuple(sorted(degrees))
        super().__init__(f"inhomogeneous polynomial, degrees present: {list(self.degrees)}")


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class RingSpec:
    """Variables, their weights, and the names of weight-0 parameters."""

    variables: tuple
    weights: tuple
    parameters: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "parameters", frozenset(self.parameters))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be unique")
        if len(self.weights) != len(self.variables):
            raise ValueError("one weight per variable")
        for name, w in zip(self.variables, self.weights):
            if not _NAME.match(name):
                raise ValueError(f"bad variable name {name!r}")
            if w < 0:
                raise ValueError(f"negative weight for {name}")
            if w == 0 and name not in self.parameters:
                raise ValueError(f"weight 0 is reserved for parameters, got {name}")
        unknown = self.parameters - set(self.variables)
        if unknown:
            raise ValueError(f"parameters not among variables: {sorted(unknown)}")

    @classmethod
    def make(cls, spec: Mapping[str, int] | Sequence, parameters: Iterable[str] = ()):
        """Build from ``{"y0": 1, ...}`` or a list of ``(name, weight)`` pairs."""
        items = list(spec.items()) if isinstance(spec, Mapping) else list(spec)
        return cls(tuple(n for n, _ in items), tuple(w for _, w in items), frozenset(parameters))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    @property
    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {n: i for i, n in enumerate(self.variables)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def has_parameters(self) -> bool:
        return any(w == 0 for w in self.weights)

    def mon_degree(self, mon: tuple) -> int:
        return sum(e * w for e, w in zip(mon, self.weights))

    def one_mon(self) -> tuple:
        return (0,) * self.nvars

    # convenience constructors
    def var(self, name: str) -> "Poly":
        i = self.index(name)
        mon = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Poly(self, {mon: QQ(1)})

    def gens(self):
        return tuple(self.var(n) for n in self.variables)

    def const(self, c) -> "Poly":
        c = qq(c)
        return Poly(self, {self.one_mon(): c} if c else {})

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def default_key(self, mon: tuple):
        """Sort key of the default weighted degree-reverse-lexicographic order."""
        return (self.mon_degree(mon), sum(mon), tuple(-e for e in reversed(mon)))

    def subring(self, names: Iterable[str]) -> "RingSpec":
        keep = set(names)
        names = [n for n in self.variables if n in keep]
        return RingSpec(
            tuple(names),
            tuple(self.weights[self.index(n)] for n in names),
            frozenset(n for n in names if n in self.parameters),
        )

    def without(self, names: Iterable[str]) -> "RingSpec":
        drop = set(names)
        return self.subring(n for n in self.variables if n not in drop)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "weights": list(self.weights),
            "parameters": sorted(self.parameters),
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "RingSpec":
        return cls(tuple(d["variables"]), tuple(d["weights"]), frozenset(d.get("parameters", ())))


def _mon_str(ring: RingSpec, mon: tuple) -> str:
    parts = []
    for name, e in zip(ring.variables, mon):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


class Poly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero rationals."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping | None = None, _clean: bool = False):
        self.ring = ring
        if terms is None:
            terms = {}
        if _clean:
            self.terms = terms
        else:
            n = ring.nvars
            clean = {}
            for mon, c in terms.items():
                mon = tuple(mon)
                if len(mon) != n or any(e < 0 for e in mon):
                    raise ValueError(f"bad exponent vector {mon} for ring of {n} variables")
                c = qq(c)
                if c:
                    clean[mon] = clean.get(mon, ZERO) + c
                    if not clean[mon]:
                        del clean[mon]
            self.terms = clean
        self._hash = None

    # -- basic protocol -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return self.to_string()

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError("polynomials live in different rings")
            return other
        return self.ring.const(other)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m)
            if v is None:
                res[m] = c
            else:
                v = v + c
                if v:
                    res[m] = v
                else:
                    del res[m]
        return Poly(self.ring, res, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = qq(other)
            if not c:
                return self.ring.zero
            return Poly(self.ring, {m: v * c for m, v in self.terms.items()}, _clean=True)
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        res: dict = {}
        get = res.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple([x + y for x, y in zip(ma, mb)])
                v = get(m)
                if v is None:
                    res[m] = ca * cb
                else:
                    res[m] = v + ca * cb
        return Poly(self.ring, {m: c for m, c in res.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        return self * c

    def mul_monomial(self, mon: tuple, c=1) -> "Poly":
        c = qq(c)
        return Poly(
            self.ring,
            {tuple([x + y for x, y in zip(m, mon)]): v * c for m, v in self.terms.items()},
            _clean=True,
        )

    # -- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.one_mon() in self.terms)

    def constant_term(self):
        return self.terms.get(self.ring.one_mon(), ZERO)

    def degrees(self) -> list:
        return sorted({self.ring.mon_degree(m) for m in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            for name, e in zip(self.ring.variables, m):
                if e:
                    used.add(name)
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def coefficient(self, name: str, k: int) -> "Poly":
        """Coefficient of ``name**k`` (as a polynomial not involving ``name``)."""
        i = self.ring.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i] == k:
                out[m[:i] + (0,) + m[i + 1 :]] = c
        return Poly(self.ring, out, _clean=True)

    def coeff_of_monomial(self, mon: tuple):
        return self.terms.get(tuple(mon), ZERO)

    def homogeneous_part(self, d: int) -> "Poly":
        deg = self.ring.mon_degree
        return Poly(self.ring, {m: c for m, c in self.terms.items() if deg(m) == d}, _clean=True)

    def truncate_total(self, max_total: int) -> "Poly":
        return Poly(self.ring, {m: c for m, c in self.terms.items() if sum(m) <= max_total}, _clean=True)

    def order_total(self) -> int:
        """Lowest total (unweighted) degree of a term; -1 for the zero polynomial."""
        return min((sum(m) for m in self.terms), default=-1)

    def sorted_terms(self, key=None):
        key = key or self.ring.default_key
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]), reverse=True)

    def leading_term(self, key=None):
        if not self.terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        key = key or self.ring.default_key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monic(self, key=None) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading_term(key)
        return self * (1 / c)

    def content_free(self) -> "Poly":
        """Integer-coefficient rescaling with positive leading coefficient (reports only)."""
        if not self.terms:
            return self
        from math import gcd

        den = 1
        for c in self.terms.values():
            d = int(c.denominator)
            den = den * d // gcd(den, d)
        nums = [int(c.numerator) * (den // int(c.denominator)) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        scale = QQ(den, g)
        out = self * scale
        if out.leading_term()[1] < 0:
            out = -out
        return out

    # -- substitution / ring changes -----------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "Poly":
        """Substitute polynomials or numbers for variables (all at once)."""
        ring = self.ring
        idx = {}
        for name, val in mapping.items():
            i = ring.index(name)
            if not isinstance(val, Poly):
                val = ring.const(val)
            elif val.ring != ring:
                val = val.to_ring(ring)
            idx[i] = val
        if not idx:
            return self
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            p = powers.get(key)
            if p is None:
                p = idx[i] ** e
                powers[key] = p
            return p

        result = ring.zero
        acc: dict = {}
        for m, c in self.terms.items():
            base = tuple(0 if i in idx else e for i, e in enumerate(m))
            term = Poly(ring, {base: c}, _clean=True)
            for i in idx:
                if m[i]:
                    term = term * power(i, m[i])
            for mm, cc in term.terms.items():
                v = acc.get(mm, ZERO) + cc
                if v:
                    acc[mm] = v
                else:
                    acc.pop(mm, None)
        result = Poly(ring, acc, _clean=True)
        return result

    def to_ring(self, ring: RingSpec) -> "Poly":
        """Re-express in another ring by variable name; unused variables may be absent."""
        if ring == self.ring:
            return self
        src = self.ring.variables
        pos = []
        for i, name in enumerate(src):
            j = ring._index.get(name)
            pos.append(j)
        out = {}
        n = ring.nvars
        for m, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    j = pos[i]
                    if j is None:
                        raise RingMismatchError(f"variable {src[i]} missing from target ring")
                    e[j] = k
            out[tuple(e)] = c
        return Poly(ring, out, _clean=True)

    def rename(self, ring: RingSpec, names: Mapping[str, str]) -> "Poly":
        """Map variables by ``names`` (old -> new) into ``ring``."""
        out = {}
        n = ring.nvars
        tgt = [ring.index(names.get(v, v)) if (names.get(v, v) in ring._index) else None for v in self.ring.variables]
        for m, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    if tgt[i] is None:
                        raise RingMismatchError(f"variable {self.ring.variables[i]} has no image")
                    e[tgt[i]] += k
            e = tuple(e)
            out[e] = out.get(e, ZERO) + c
        return Poly(ring, out)

    def diff(self, name: str) -> "Poly":
        i = self.ring.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                out[m[:i] + (m[i] - 1,) + m[i + 1 :]] = c * m[i]
        return Poly(self.ring, out, _clean=True)

    def exact_divide(self, other: "Poly") -> "Poly | None":
        """Quotient if ``other`` divides ``self`` exactly, else ``None``."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        key = self.ring.default_key
        lm, lc = other.leading_term(key)
        rem = dict(self.terms)
        quot = {}
        while rem:
            m = max(rem, key=key)
            c = rem[m]
            if any(a < b for a, b in zip(m, lm)):
                return None
            q = tuple(a - b for a, b in zip(m, lm))
            f = c / lc
            quot[q] = f
            for om, oc in other.terms.items():
                mm = tuple(a + b for a, b in zip(om, q))
                v = rem.get(mm, ZERO) - f * oc
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return Poly(self.ring, quot, _clean=True)

    # -- printing -------------------------------------------------------
    def to_string(self, key=None) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms(key)):
            neg = c < 0
            a = -c if neg else c
            ms = _mon_str(self.ring, m)
            if not ms:
                body = format_q(a)
            elif a == 1:
                body = ms
            else:
                body = f"{format_q(a)}*{ms}"
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)


def weighted_degree(f: Poly) -> int:
    """Weighted degree of a homogeneous polynomial (parameters count 0)."""
    if not f.terms:
        raise ZeroPolynomialError("degree of the zero polynomial is undefined")
    degs = f.degrees()
    if len(degs) != 1:
        raise InhomogeneousError(degs)
    return degs[0]


# ---------------------------------------------------------------------------
# parser
#   expr   := ['+'|'-'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := rational | var | var '^' nat | '(' expr ')' ['^' nat]
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    def __init__(self, text: str, ring: RingSpec):
        self.text = text
        self.ring = ring
        self.tokens = []
        pos = 0
        n = len(text)
        while pos < n:
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self):
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def error(self, msg):
        raise ParseError(msg, self.text, self.pos())

    def take_op(self, op):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Poly:
        if not self.tokens:
            self.error("empty expression")
        p = self.expr()
        if self.peek() is not None:
            tok = self.peek()
            if tok[1] == ")":
                self.error("unbalanced parentheses")
            self.error(f"unexpected token {tok[1]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.take_op("-"):
            sign = -1
        else:
            self.take_op("+")
        acc = self.term() * sign
        while True:
            if self.take_op("+"):
                acc = acc + self.term()
            elif self.take_op("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while self.take_op("*"):
            acc = acc * self.factor()
        return acc

    def nat(self) -> int:
        tok = self.peek()
        if tok is None or tok[0] != "int":
            self.error("expected a natural number")
        self.i += 1
        return int(tok[1])

    def factor(self) -> Poly:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        kind, val, at = tok
        if kind == "int":
            self.i += 1
            num = int(val)
            if self.take_op("/"):
                nxt = self.peek()
                if nxt is None or nxt[0] != "int":
                    self.error("malformed rational")
                den = int(nxt[1])
                self.i += 1
                if den == 0:
                    raise ParseError("malformed rational (zero denominator)", self.text, nxt[2])
                return self.ring.const(QQ(num, den))
            return self.ring.const(num)
        if kind == "name":
            if val not in self.ring._index:
                raise ParseError(f"unknown variable {val!r}", self.text, at)
            self.i += 1
            v = self.ring.var(val)
            if self.take_op("^"):
                return v ** self.nat()
            return v
        if kind == "op" and val == "(":
            self.i += 1
            inner = self.expr()
            if not self.take_op(")"):
                self.error("unbalanced parentheses")
            if self.take_op("^"):
                return inner ** self.nat()
            return inner
        if kind == "op" and val == ")":
            self.error("unbalanced parentheses")
        self.error(f"unexpected token {val!r}")


def parse_poly(text: str, ring: RingSpec) -> Poly:
    """Parse the polynomial grammar documented in the README."""
    return _Parser(text, ring).parse()
