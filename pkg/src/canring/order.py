"""Monomial orders as packed integer sort keys (bigger key = bigger monomial)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .poly import RingSpec

__all__ = ["MonomialOrder", "grevlex", "lex", "block"]

_BITS = 24
_BIAS = 1 << (_BITS - 1)


def _pack(comps) -> int:
    k = 0
    for c in comps:
        k = (k << _BITS) | c
    return k


@dataclass(frozen=True)
class MonomialOrder:
    """``kind`` is ``"grevlex"`` (weighted), ``"lex"`` or ``"block"``.

    Weighted grevlex compares weighted degree, then plain degree, then reverse
    lexicographically; the plain-degree tier keeps it a well-order when
    weight-0 parameters are present.  A block order compares the block
    variables first (weighted grevlex on the block) and so eliminates them.
    """

    kind: str
    ring: RingSpec
    block: tuple = ()
    sequence: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        object.__setattr__(self, "block", tuple(self.block))
        object.__setattr__(self, "sequence", tuple(self.sequence))
        for name in self.block + self.sequence:
            self.ring.index(name)
        if self.kind == "block" and not self.block:
            raise ValueError("block order needs a non-empty block")
        if self.kind == "lex":
            seq = self.sequence or self.ring.variables
            if sorted(seq) != sorted(self.ring.variables):
                raise ValueError("lex sequence must be a permutation of the ring variables")
            perm = tuple(self.ring.index(n) for n in seq)
            object.__setattr__(self, "_perm", perm)
        if self.kind == "block":
            inb = [self.ring.index(n) for n in self.ring.variables if n in self.block]
            outb = [self.ring.index(n) for n in self.ring.variables if n not in self.block]
            object.__setattr__(self, "_parts", (tuple(inb), tuple(outb)))

    def _grevlex_comps(self, mon, idx):
        w = self.ring.weights
        wd = sum(mon[i] * w[i] for i in idx)
        d = sum(mon[i] for i in idx)
        return [wd, d] + [_BIAS - mon[i] for i in reversed(idx)]

    def key(self, mon: tuple) -> int:
        k = self._cache.get(mon)
        if k is not None:
            return k
        if self.kind == "grevlex":
            k = _pack(self._grevlex_comps(mon, range(len(mon))))
        elif self.kind == "lex":
            k = _pack([mon[i] for i in self._perm])
        else:
            inb, outb = self._parts
            k = _pack(self._grevlex_comps(mon, inb) + self._grevlex_comps(mon, outb))
        self._cache[mon] = k
        return k

    __call__ = key

    def eliminates(self, names) -> bool:
        if self.kind == "block":
            return set(names) <= set(self.block)
        if self.kind == "lex":
            seq = self.sequence or self.ring.variables
            return set(seq[: len(set(names))]) == set(names)
        return False

    def with_ring(self, ring: RingSpec) -> "MonomialOrder":
        return MonomialOrder(self.kind, ring, self.block, self.sequence)

    def to_json(self) -> dict:
        d = {"kind": self.kind, "variables": list(self.ring.variables)}
        if self.block:
            d["block"] = list(self.block)
        if self.sequence:
            d["sequence"] = list(self.sequence)
        return d

    def __str__(self):
        if self.kind == "block":
            return f"block({','.join(self.block)}) > grevlex"
        if self.kind == "lex" and self.sequence:
            return f"lex({','.join(self.sequence)})"
        return f"{self.kind}"


def grevlex(ring: RingSpec) -> MonomialOrder:
    return MonomialOrder("grevlex", ring)


def lex(ring: RingSpec, sequence=()) -> MonomialOrder:
    return MonomialOrder("lex", ring, sequence=tuple(sequence))


def block(ring: RingSpec, names) -> MonomialOrder:
    return MonomialOrder("block", ring, block=tuple(names))
