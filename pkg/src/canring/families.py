"""Builders and verifiers for the K^2=7, p_g=4 surface families.

Coefficient data lives on x0..x3 (the coordinates of P^3); ring relations live
on y0..y3 (weight 1), w0, w1 (weight 2), u (weight 3), with the deformation
parameter t of weight 0 where needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ._qq import QQ, format_q, qq, to_fraction
from .groebner import (
    divide,
    divide_by_variable,
    eliminate,
    groebner,
    ideal_contains,
    ideal_equal,
    normal_form,
)
from .linalg import (
    TwistedPresentation,
    _monos,
    minimal_generator_degrees,
    minimal_generators,
    solve_in_span,
    rank_condition_lift,
)
from .matrix import (
    PolyMatrix,
    adjugate,
    determinant,
    is_extrasymmetric,
    minors,
    reassemble,
    roll,
    sub_pfaffians,
)
from .order import MonomialOrder, block, grevlex, lex
from .poly import Poly, RingSpec, weighted_degree

# -- rings ---------------------------------------------------------------
X = RingSpec.make([("x0", 1), ("x1", 1), ("x2", 1), ("x3", 1)])
Y = RingSpec.make([("y0", 1), ("y1", 1), ("y2", 1), ("y3", 1)])
R = RingSpec.make(list(zip(Y.variables, Y.weights)) + [("w0", 2), ("w1", 2), ("u", 3)])
B = R.without(["u"])
RT = RingSpec.make(list(zip(R.variables, R.weights)) + [("t", 0)], parameters=["t"])
BT = RT.without(["u"])
# opaque ring: the quadrics and the cubic of the extrasymmetric matrix are fresh variables
OPQ = RingSpec.make(
    [("y1", 1), ("y2", 1), ("y3", 1), ("w0", 2), ("w1", 2), ("u", 3),
     ("Q", 2), ("Q1", 2), ("Q3", 2), ("c", 3)]
)
OPQT = RingSpec.make(list(zip(OPQ.variables, OPQ.weights)) + [("t", 0)], parameters=["t"])

X_TO_Y = {f"x{i}": f"y{i}" for i in range(4)}

ROLLING_DEGREES = [3, 3, 3, 4, 4, 4, 4, 5, 6]
BPF_MIN_DEGREES = [3, 3, 4, 4, 4]
EXPECTED_DIMS = {1: 4, 2: 12, 3: 26, 4: 47, 5: 75, 6: 110}
G_FORBIDDEN = ["x0^3", "x0^2*x1", "x0^2*x2", "x0*x1^2"]
B_FORBIDDEN = ["x0^4", "x0^3*x1", "x0^3*x3"]


class GenericityError(RuntimeError):
    pass


def _mons_str(names, degree):
    ring = RingSpec.make([(n, 1) for n in names])
    mons = sorted(_monos((1,) * len(names), degree), reverse=True)
    return [str(Poly(ring, {m: 1})) for m in mons]


# documented monomial orders of the coefficient lists (lex-descending)
Q1_MONOMIALS = ["x0^2", "x0*x1", "x1^2"]
Q2_MONOMIALS = ["x0^2", "x0*x1", "x1^2"]
Q3_MONOMIALS = ["x0^2", "x0*x1", "x0*x3", "x1^2", "x1*x3", "x3^2"]
C_MONOMIALS = [m.replace("y", "x") for m in _mons_str(["y0", "y1", "y2", "y3"], 3)]

_SCALARS = ["q01", "q02", "q11", "q12", "q22", "k", "l1", "l2", "q0_11", "q0_12", "q0_22"]
_LISTS = {"Q1": Q1_MONOMIALS, "Q2": Q2_MONOMIALS, "Q3": Q3_MONOMIALS, "C": C_MONOMIALS}


def compose(p: Poly, target: RingSpec, images: Mapping[str, Poly]) -> Poly:
    """Substitute polynomials of ``target`` for the variables of ``p``'s ring."""
    src = p.ring
    imgs = []
    for name in src.variables:
        img = images.get(name)
        if img is None:
            img = target.var(name) if name in target._index else None
        elif not isinstance(img, Poly):
            img = target.const(img)
        imgs.append(img)
    cache: dict = {}
    acc = target.zero
    for m, c in p.terms.items():
        term = target.const(c)
        for i, e in enumerate(m):
            if not e:
                continue
            if imgs[i] is None:
                raise ValueError(f"no image for {src.variables[i]}")
            pw = cache.get((i, e))
            if pw is None:
                pw = imgs[i] ** e
                cache[(i, e)] = pw
            term = term * pw
        acc = acc + term
    return acc


def y_of(p: Poly, ring: RingSpec = R) -> Poly:
    """Rename x_i -> y_i into ``ring``."""
    return p.rename(ring, X_TO_Y)


def _lin_combo(ring, coeffs, monomials):
    acc = ring.zero
    for c, m in zip(coeffs, monomials):
        if c:
            acc = acc + ring.parse(m) * c
    return acc


# -- coefficient data ----------------------------------------------------
@dataclass
class FamilyData:
    """Coefficients of the base-point family; see the *_MONOMIALS lists for list layouts.

    ``G_extra`` / ``B_extra`` are additive perturbations of G and B (monomial
    string -> coefficient) used to build negative controls of the sextic.
    """

    q01: object
    q02: object
    q11: object
    q12: object
    q22: object
    k: object
    l1: object
    l2: object
    q0_11: object
    q0_12: object
    q0_22: object
    Q1: list
    Q2: list
    Q3: list
    C: list
    G_extra: dict = field(default_factory=dict)
    B_extra: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        for name in _SCALARS:
            setattr(self, name, qq(getattr(self, name)))
        for name, mons in _LISTS.items():
            vals = [qq(v) for v in getattr(self, name)]
            if len(vals) != len(mons):
                raise ValueError(f"{name} needs {len(mons)} coefficients, got {len(vals)}")
            setattr(self, name, vals)
        self.G_extra = {m: qq(v) for m, v in self.G_extra.items()}
        self.B_extra = {m: qq(v) for m, v in self.B_extra.items()}
        self._cache = {}

    # polynomials on x0..x3
    def _x(self, name):
        hit = self._cache.get(name)
        if hit is not None:
            return hit
        P = X.parse
        if name == "Q":
            v = P("x0^2") + _lin_combo(
                X, [self.q01, self.q02, self.q11, self.q12, self.q22],
                ["x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"],
            )
        elif name == "Q0":
            v = _lin_combo(X, [self.q0_11, self.q0_12, self.q0_22], ["x1^2", "x1*x2", "x2^2"])
        elif name == "l":
            v = _lin_combo(X, [self.l1, self.l2], ["x1", "x2"])
        elif name in _LISTS:
            v = _lin_combo(X, getattr(self, name), _LISTS[name])
        elif name == "G":
            v = P("x1^3") * self.k + P("x2") * self._x("Q0") + P("x0*x2") * self._x("l")
            for m, c in self.G_extra.items():
                v = v + P(m) * c
        elif name == "B":
            v = (
                P("x2") * self._x("C")
                + P("x3^2") * self._x("Q3")
                + P("x3*x1") * self._x("Q2")
                + P("x1^2") * self._x("Q1")
            )
            for m, c in self.B_extra.items():
                v = v + P(m) * c
        else:
            raise KeyError(name)
        self._cache[name] = v
        return v

    @property
    def Qx(self):
        return self._x("Q")

    def x(self, name: str) -> Poly:
        return self._x(name)

    def to_json(self) -> dict:
        out = {name: format_q(getattr(self, name)) for name in _SCALARS}
        for name in _LISTS:
            out[name] = [format_q(v) for v in getattr(self, name)]
        if self.G_extra:
            out["G_extra"] = {m: format_q(v) for m, v in self.G_extra.items()}
        if self.B_extra:
            out["B_extra"] = {m: format_q(v) for m, v in self.B_extra.items()}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, d: Mapping, rng: random.Random | None = None) -> "FamilyData":
        """Build from a flat map; ``"random"`` (or a missing key) draws from ``rng``."""
        rng = rng or random.Random(d.get("seed", 0))
        kw = {}
        for name in _SCALARS:
            v = d.get(name, "random")
            kw[name] = _rand_q(rng) if v == "random" else v
        for name, mons in _LISTS.items():
            v = d.get(name, "random")
            if v == "random":
                v = ["random"] * len(mons)
            kw[name] = [_rand_q(rng) if c == "random" else c for c in v]
        kw["G_extra"] = dict(d.get("G_extra", {}))
        kw["B_extra"] = dict(d.get("B_extra", {}))
        kw["seed"] = d.get("seed")
        return cls(**kw)


def _rand_q(rng: random.Random):
    return QQ(rng.randint(-5, 5), rng.randint(1, 5))


def _draw(rng: random.Random, seed, overrides=None) -> FamilyData:
    d = dict(overrides or {})
    d["seed"] = seed
    return FamilyData.from_json(d, rng)


def sextic_equation(data: FamilyData) -> Poly:
    """F6 = -x2^2 Q^2 + x3 Q G + x3^2 B."""
    Q, G, Bx = data.x("Q"), data.x("G"), data.x("B")
    x2, x3 = X.var("x2"), X.var("x3")
    return -(x2**2) * Q**2 + x3 * Q * G + x3**2 * Bx


def has_coordinate_factor(F: Poly) -> list:
    """Coordinate hyperplanes x_i dividing F."""
    return [n for n in F.ring.variables if all(m[F.ring.index(n)] > 0 for m in F.terms)]


def is_generic(data: FamilyData) -> tuple:
    """(ok, reason) for the sampling genericity conditions."""
    F = sextic_equation(data)
    fac = has_coordinate_factor(F)
    if fac:
        return False, f"F6 divisible by {fac}"
    degs = minimal_generator_degrees(build_rolling(data).ideal)
    if degs != ROLLING_DEGREES:
        return False, f"minimal generator degrees {degs}"
    return True, "ok"


def sample_family_data(seed: int, overrides: Mapping | None = None, max_tries: int = 100) -> FamilyData:
    """Seeded random family data, resampled until the genericity checks pass."""
    rng = random.Random(seed)
    reasons = []
    for _ in range(max_tries):
        data = _draw(rng, seed, overrides)
        ok, why = is_generic(data)
        if ok:
            return data
        reasons.append(why)
    raise GenericityError(f"seed {seed}: no generic data after {max_tries} draws ({reasons[-1]})")


# -- rolling factors format ----------------------------------------------
@dataclass
class RollingFormat:
    A: PolyMatrix
    minors: list
    f7: Poly
    f8: Poly
    f9: Poly
    coeffs7: list
    coeffs8: list

    @property
    def ideal(self) -> list:
        return list(self.minors) + [self.f7, self.f8, self.f9]


def rolling_matrix(data: FamilyData) -> PolyMatrix:
    v = R.var
    return PolyMatrix(R, [[v("y1"), v("y2"), v("y3"), v("w1")], [v("w0"), v("w1"), y_of(data.x("Q")), v("u")]])


def _pieces(data: FamilyData) -> dict:
    v = R.var
    w0, w1, y1, y2 = v("w0"), v("w1"), v("y1"), v("y2")
    return {
        "Q": y_of(data.x("Q")),
        "Q0": y_of(data.x("Q0")),
        "l": y_of(data.x("l")),
        "Q0w": compose(data.x("Q0"), R, {"x1": w0, "x2": w1}),
        "lw": compose(data.x("l"), R, {"x1": w0, "x2": w1}),
        "Q1": y_of(data.x("Q1")),
        "Q2": y_of(data.x("Q2")),
        "Q3": y_of(data.x("Q3")),
        "C": y_of(data.x("C")),
    }


def displayed_relations(data: FamilyData) -> tuple:
    """f7, f8, f9 in closed form (f9 differs from the second roll of f7 by minors)."""
    p = _pieces(data)
    v = R.var
    y0, y1, y2, y3, w0, w1, u = (v(n) for n in R.variables)
    k = data.k
    f7 = (
        -(w1**2) + w0 * y1**2 * k + w1 * p["Q0"] + w1 * y0 * p["l"] + y2 * p["C"]
        + y3**2 * p["Q3"] + y1 * y3 * p["Q2"] + y1**2 * p["Q1"]
    )
    f8 = (
        -(w1 * u) + w0**2 * y1 * k + u * p["Q0"] + u * y0 * p["l"] + w1 * p["C"]
        + y3 * p["Q"] * p["Q3"] + w0 * y3 * p["Q2"] + y1 * w0 * p["Q1"]
    )
    f9 = (
        -(u**2) + w0**3 * k + w1 * p["Q0w"] + u * y0 * p["lw"] + u * p["C"]
        + p["Q"] ** 2 * p["Q3"] + w0 * p["Q"] * p["Q2"] + w0**2 * p["Q1"]
    )
    return f7, f8, f9


def build_rolling(data: FamilyData) -> RollingFormat:
    """Minors of A plus f7 and its rolls; f8 is rolled exactly, f9 is the displayed one."""
    A = rolling_matrix(data)
    p = _pieces(data)
    v = R.var
    y0, y1, y2, y3, w0, w1, u = (v(n) for n in R.variables)
    k = data.k
    f7, f8_disp, f9_disp = displayed_relations(data)
    c7 = [w0 * y1 * k + y1 * p["Q1"] + y3 * p["Q2"], p["C"], y3 * p["Q3"], -w1 + p["Q0"] + y0 * p["l"]]
    f8 = roll(f7, A, c7)
    q = data
    c8 = [
        w0**2 * k + w0 * p["Q1"] + u * (y1 * q.q0_11 + y2 * q.q0_12) + u * y0 * q.l1,
        u * y2 * q.q0_22 + u * y0 * q.l2,
        w0 * p["Q2"] + p["Q"] * p["Q3"],
        p["C"] - u,
    ]
    return RollingFormat(A, minors(A, 2), f7, f8, f9_disp, c7, c8)


def rolled_f9(rf: RollingFormat) -> Poly:
    return roll(rf.f8, rf.A, rf.coeffs8)


# -- A M A^T format ------------------------------------------------------
@dataclass
class CubicSplit:
    """C = l'Q + y0(Q'11 y1^2 + Q'12 y1 y2 + Q'22 y2^2) + y0 y3 l'' + s y1^3 + y2 Q'' + y3 Q'''."""

    lp: Poly
    Qp11: object
    Qp12: object
    Qp22: object
    lpp: Poly
    s: object
    Qpp: Poly
    Qppp: Poly


def split_cubic(data: FamilyData) -> CubicSplit:
    p = _pieces(data)
    order = lex(R, ("y0", "y1", "y2", "y3", "w0", "w1", "u"))
    (lp,), rem = divide(p["C"], [p["Q"]], order)
    i0, i1, i2, i3 = (R.index(n) for n in ("y0", "y1", "y2", "y3"))
    Qp = {"y1^2": QQ(0), "y1*y2": QQ(0), "y2^2": QQ(0)}
    lpp, Qpp, Qppp = {}, {}, {}
    s = QQ(0)
    for m, c in rem.terms.items():
        if m[i0] >= 2:
            raise ValueError("remainder of C by Q still has y0^2")
        if m[i0] == 1:
            if m[i3] == 0:
                key = str(Poly(R, {m[:i0] + (0,) + m[i0 + 1 :]: 1}))
                Qp[key] = c
            else:
                lpp[m[:i0] + (0,) + m[i0 + 1 : i3] + (m[i3] - 1,) + m[i3 + 1 :]] = c
        elif m[i3] > 0:
            Qppp[m[:i3] + (m[i3] - 1,) + m[i3 + 1 :]] = c
        elif m[i2] > 0:
            Qpp[m[:i2] + (m[i2] - 1,) + m[i2 + 1 :]] = c
        else:
            s = c
    return CubicSplit(lp, Qp["y1^2"], Qp["y1*y2"], Qp["y2^2"], Poly(R, lpp), s, Poly(R, Qpp), Poly(R, Qppp))


def reassemble_cubic(cs: CubicSplit, Qy: Poly) -> Poly:
    P = R.parse
    return (
        cs.lp * Qy
        + P("y0") * (P("y1^2") * cs.Qp11 + P("y1*y2") * cs.Qp12 + P("y2^2") * cs.Qp22)
        + P("y0*y3") * cs.lpp
        + P("y1^3") * cs.s
        + P("y2") * cs.Qpp
        + P("y3") * cs.Qppp
    )


def build_amta(data: FamilyData) -> tuple:
    """(A, M) with A*M*A^T = [[f7, f8], [f8, f9]] modulo the minors of A."""
    A = rolling_matrix(data)
    p = _pieces(data)
    cs = split_cubic(data)
    v = R.var
    y0, y1, y2, y3, w0, w1 = (v(n) for n in ("y0", "y1", "y2", "y3", "w0", "w1"))
    h = Fraction(1, 2)
    m11 = w0 * data.k + p["Q1"] + w1 * data.q0_11
    m12 = (w1 * data.q0_12 + y0 * (y1 * cs.Qp11 + y2 * cs.Qp12) + y1**2 * cs.s) * h
    m13 = p["Q2"] * h
    m14 = y0 * data.l1 * h
    m22 = w1 * data.q0_22 + y0 * y2 * cs.Qp22 + cs.Qpp
    m23 = (y0 * cs.lpp + cs.Qppp) * h
    m24 = y0 * data.l2 * h
    m33 = p["Q3"]
    m34 = cs.lp * h
    m44 = R.const(-1)
    M = PolyMatrix(
        R,
        [
            [m11, m12, m13, m14],
            [m12, m22, m23, m24],
            [m13, m23, m33, m34],
            [m14, m24, m34, m44],
        ],
    )
    return A, M


def amta_ideal(A: PolyMatrix, M: PolyMatrix) -> list:
    from .matrix import amta_product

    prod = amta_product(A, M)
    return minors(A, 2) + [prod[0, 0], prod[0, 1], prod[1, 1]]


# -- extrasymmetric format -------------------------------------------------
@dataclass
class ExtrasymData:
    Q: Poly
    Qbar1: Poly
    Qbar3: Poly
    Cbar: Poly
    s: object
    lbar1: Poly
    lbar2: Poly

    def to_json(self):
        return {
            "Q": str(self.Q), "Qbar1": str(self.Qbar1), "Qbar3": str(self.Qbar3),
            "Cbar": str(self.Cbar), "s": format_q(self.s),
            "lbar1": str(self.lbar1), "lbar2": str(self.lbar2),
        }


def derive_extrasym(data: FamilyData) -> ExtrasymData:
    p = _pieces(data)
    v = R.var
    y0, y1, y2, y3, w0, w1 = (v(n) for n in ("y0", "y1", "y2", "y3", "w0", "w1"))
    Qy = p["Q"]
    lead = Qy.coeff_of_monomial(R.parse("y0^2").leading_term()[0])
    if not lead:
        raise ValueError("the y0^2 coefficient of Q must be nonzero")
    s = p["Q2"].coeff_of_monomial(R.parse("y0^2").leading_term()[0]) / lead
    rest = p["Q2"] - Qy * s
    # split rest = y1*lbar1(y0,y1) + y2*lbar2(y0,y1,y2); the y1*y2 term goes to lbar2
    l1t, l2t = {}, {}
    i1, i2 = R.index("y1"), R.index("y2")
    for m, c in rest.terms.items():
        if m[i2] > 0:
            l2t[m[:i2] + (m[i2] - 1,) + m[i2 + 1 :]] = c
        elif m[i1] > 0:
            l1t[m[:i1] + (m[i1] - 1,) + m[i1 + 1 :]] = c
        else:
            raise ValueError("Q2 - sQ has a term divisible by neither y1 nor y2")
    lbar1, lbar2 = Poly(R, l1t), Poly(R, l2t)
    Cbar = (
        w0 * y2 * data.q0_12 + w1 * y2 * data.q0_22 + y0 * p["lw"] + p["C"] + y1 * y3 * lbar2
    )
    Qbar1 = w0 * data.k + w1 * data.q0_11 + p["Q1"] + y3 * lbar1
    Qbar3 = -p["Q3"] - w0 * s
    return ExtrasymData(Qy, Qbar1, Qbar3, Cbar, s, lbar1, lbar2)


def _p_upper(Q, Qb1, Qb3, Cb, v):
    return {
        (0, 2): v("w0"), (0, 3): Q, (0, 4): v("w1"), (0, 5): v("u"),
        (1, 2): v("y1"), (1, 3): v("y3"), (1, 4): v("y2"), (1, 5): v("w1"),
        (2, 3): -v("u") + Cb, (2, 4): v("y3") * Qb3, (2, 5): Q * Qb3,
        (3, 4): v("y1") * Qb1, (3, 5): v("w0") * Qb1,
    }


def build_extrasym(x: ExtrasymData) -> PolyMatrix:
    ring = x.Q.ring
    return PolyMatrix.skew_from_upper(ring, 6, _p_upper(x.Q, x.Qbar1, x.Qbar3, x.Cbar, ring.var))


def opaque_extrasym(ring: RingSpec = OPQ) -> ExtrasymData:
    """Extrasymmetric data with Q, Qbar1, Qbar3, Cbar as fresh variables."""
    v = ring.var
    return ExtrasymData(v("Q"), v("Q1"), v("Q3"), v("c"), QQ(0), ring.zero, ring.zero)


def deform(P: PolyMatrix, t) -> PolyMatrix:
    """P_t: a -> a + t in the extrasymmetric decomposition (slot (1,2) and p*q*a)."""
    ring = t.ring if isinstance(t, Poly) else P.ring
    if ring != P.ring:
        P = PolyMatrix(ring, [[e.to_ring(ring) for e in r] for r in P.rows], skew=True)
    dec = is_extrasymmetric(P)
    tv = t if isinstance(t, Poly) else ring.const(t)
    dec2 = type(dec)(**{**dec.__dict__, "a": dec.a + tv})
    return reassemble(dec2)


def qt_matrix(x: ExtrasymData, t, ring: RingSpec | None = None) -> PolyMatrix:
    """The 5x5 skew matrix whose Pfaffians give the u-free ideal for t != 0.

    ``t`` is a number (result over the base ring of ``x``) or a polynomial
    (symbolic; ``x`` is moved into t's ring).  The lone ``c`` of the (4,5)
    entry is read as Cbar.
    """
    if isinstance(t, Poly):
        ring = t.ring
        tv = t
    else:
        src = x.Q.ring
        ring = ring or (src.without(["u"]) if "u" in src._index else src)
        tv = ring.const(t)
    conv = lambda p: p.to_ring(ring)  # noqa: E731
    Q, Qb1, Qb3, Cb = conv(x.Q), conv(x.Qbar1), conv(x.Qbar3), conv(x.Cbar)
    v = ring.var
    t2, t3 = tv * tv, tv * tv * tv
    upper = {
        (0, 1): v("y1"), (0, 2): -v("y3"), (0, 3): -t2 * v("w0"), (0, 4): -tv * Q,
        (1, 2): v("y2"), (1, 3): t3 * Qb3, (1, 4): tv * v("w1"),
        (2, 3): t2 * v("w1"), (2, 4): t2 * Qb1,
        (3, 4): -t3 * Cb - t2 * v("y1") * Q + t2 * v("y3") * v("w0"),
    }
    return PolyMatrix.skew_from_upper(ring, 5, upper)


QT_SOURCE_DEGREES = [5, 5, 5, 6, 6]
QT_TARGET_DEGREES = [4, 4, 4, 3, 3]


def qt_presentation(x: ExtrasymData, t) -> TwistedPresentation:
    return TwistedPresentation(qt_matrix(x, t), QT_SOURCE_DEGREES, QT_TARGET_DEGREES)


# -- Pfaffian selection ----------------------------------------------------
@dataclass
class PfaffianSelection:
    subsets: list          # the 9 chosen row subsets (1-based tuples in reports)
    chosen: list           # their Pfaffians
    all_pfaffians: list    # (subset, poly) for all 15
    cofactors: dict        # subset -> list of cofactors on the chosen ones
    ok: bool
    reason: str = ""

    def to_json(self):
        return {
            "ok": self.ok,
            "reason": self.reason,
            "subsets": [[i + 1 for i in s] for s in self.subsets],
            "degrees": [weighted_degree(p) for p in self.chosen] if self.ok else None,
        }


def select_generating_pfaffians(P: PolyMatrix, want: int = 9) -> PfaffianSelection:
    """Greedy ascending-degree choice of sub-Pfaffians generating all 15.

    A Pfaffian is kept iff it is not in the degree slice of the ideal of the
    Pfaffians kept so far.  The certificate is a set of cofactors expressing
    each of the 15 through the chosen ones, checked by re-expansion, plus a
    Groebner-basis reduction of all 15 to zero.
    """
    allpf = sub_pfaffians(P, 4)
    nonzero = [(s, p) for s, p in allpf if p.terms]
    keep_idx = minimal_generators([p for _, p in nonzero])
    subsets = [nonzero[i][0] for i in keep_idx]
    chosen = [nonzero[i][1] for i in keep_idx]
    if len(chosen) != want:
        return PfaffianSelection(subsets, chosen, allpf, {}, False, f"{len(chosen)} minimal generators, expected {want}")
    degs = [weighted_degree(p) for p in chosen]
    cof = {}
    for s, p in allpf:
        if not p.terms:
            cof[s] = [P.ring.zero] * want
            continue
        d = weighted_degree(p)
        lam = solve_in_span(p, chosen, [d - e for e in degs])
        if lam is None:
            return PfaffianSelection(subsets, chosen, allpf, cof, False, f"no cofactors for subset {s}")
        back = P.ring.zero
        for l_, g in zip(lam, chosen):
            back = back + l_ * g
        if back != p:
            return PfaffianSelection(subsets, chosen, allpf, cof, False, f"re-expansion failed for {s}")
        cof[s] = lam
    top = max(weighted_degree(p) for _, p in nonzero)
    G = groebner(chosen, grevlex(P.ring), max_degree=top)
    if any(G.reduce(p).terms for _, p in allpf):
        return PfaffianSelection(subsets, chosen, allpf, cof, False, "Groebner reduction left a remainder")
    return PfaffianSelection(subsets, chosen, allpf, cof, True)


# -- deformation ---------------------------------------------------------
def find_pivot(Pt: PolyMatrix, tv: Poly):
    """(subset, pfaffian) of the degree-3 sub-Pfaffian whose u-coefficient is +-t."""
    for s, p in sub_pfaffians(Pt, 4):
        if not p.terms or weighted_degree(p) != 3:
            continue
        cu = p.coefficient("u", 1)
        if cu == tv or cu == -tv:
            return s, p
    raise ValueError("no degree-3 Pfaffian is linear in u with coefficient t")


def shortcut_eliminate(Pt_sym: PolyMatrix, subsets: Sequence) -> tuple:
    """Scale the chosen Pfaffians of the symbolic P_t by t^2, reduce by the pivot, divide by t.

    The pivot is reduced with a block order on u, so t*u is its leading term
    and every remainder is u-free.  Returns (pivot subset, generators).
    """
    ring = Pt_sym.ring
    t = ring.var("t")
    piv_s, piv = find_pivot(Pt_sym, t)
    order = block(ring, ["u"])
    lm, _ = piv.leading_term(order.key)
    if lm != (t * ring.var("u")).leading_term()[0]:
        raise ValueError("t*u is not the leading term of the pivot")
    table = dict(sub_pfaffians(Pt_sym, 4))
    out = []
    for s in subsets:
        _, r = divide(table[tuple(s)] * (t * t), [piv], order)
        if r.degree_in("u") > 0:
            raise ValueError(f"remainder of subset {s} still involves u")
        out.append(r)
    out = [g for g in divide_by_variable(out, "t") if g.terms]
    return piv_s, out


def specialize(polys: Sequence[Poly], t_value, target: RingSpec) -> list:
    res = []
    for p in polys:
        q = p.subs({"t": t_value}) if "t" in p.ring._index else p
        q = q.to_ring(target)
        if q.terms:
            res.append(q)
    return res


def qt_pfaffians(x: ExtrasymData, t, base: RingSpec) -> list:
    """4x4 Pfaffians of Q_t at a rational t, divided by the t-power they carry symbolically."""
    sym_ring = RingSpec.make(list(zip(base.variables, base.weights)) + [("t", 0)], parameters=["t"])
    xs = ExtrasymData(*(p.to_ring(sym_ring) if isinstance(p, Poly) else p for p in x.__dict__.values()))
    Qt = qt_matrix(xs, sym_ring.var("t"))
    pf = divide_by_variable([p for _, p in sub_pfaffians(Qt, 4)], "t")
    return specialize(pf, t, base)


def verify_deformation(x: ExtrasymData, t_value, subsets=None, baseline=None, max_degree: int = 6) -> dict:
    """Checks (a) elimination, (b) shortcut, (c) Hilbert function for one t.

    ``x`` lives in R (expanded) or OPQ (opaque; (c) is skipped there).
    Returns a dict of check name -> (status, data).
    """
    from .linalg import quotient_dims

    base_ring = x.Q.ring
    t_value = qq(t_value)
    u_free = base_ring.without(["u"])
    sym_ring = RingSpec.make(list(zip(base_ring.variables, base_ring.weights)) + [("t", 0)], parameters=["t"])
    P = build_extrasym(x)
    out = {}
    Pt = deform(P, t_value)
    It = [p for _, p in sub_pfaffians(Pt, 4) if p.terms]
    if subsets is None:
        subsets = select_generating_pfaffians(P).subsets
    dims_ok = None
    if base_ring == R:
        dims = quotient_dims(It, R, max_degree)
        data = {"dims": dims.as_list()}
        if baseline is not None:
            dims_ok = dims.as_list() == list(baseline)
            data["baseline"] = list(baseline)
        out["hilbert"] = (dims_ok if dims_ok is not None else True, data)
    if not t_value:
        out["elimination"] = (None, {"reason": "t = 0"})
        out["shortcut"] = (None, {"reason": "t = 0"})
        return out
    Jt = qt_pfaffians(x, t_value, u_free)
    elim = [g.to_ring(u_free) for g in eliminate(It, ["u"], max_degree=7)]
    ok_a = ideal_equal(elim, Jt)
    out["elimination"] = (ok_a, {"generators": len(elim), "qt_pfaffian_degrees": sorted(weighted_degree(p) for p in Jt)})
    Pts = deform(P, sym_ring.var("t"))
    piv_s, sc = shortcut_eliminate(Pts, subsets)
    sc_spec = specialize(sc, t_value, u_free)
    ok_b = ideal_equal(sc_spec, Jt) and ideal_equal(sc_spec, elim)
    out["shortcut"] = (ok_b, {"pivot": [i + 1 for i in piv_s], "generators": len(sc_spec)})
    return out


# -- degeneration ----------------------------------------------------------
def adjoint_quadric(relations: Sequence[Poly]) -> Poly:
    """Determinant of the w-coefficient matrix of two relations affine-linear in w0, w1."""
    if len(relations) != 2:
        raise ValueError("need exactly two relations")
    rows = []
    for r in relations:
        if r.degree_in("w0") > 1 or r.degree_in("w1") > 1 or r.coefficient("w0", 1).degree_in("w1") > 0:
            raise ValueError(f"relation is not affine-linear in w0, w1: {r}")
        rows.append([r.coefficient("w0", 1), r.coefficient("w1", 1)])
    return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]


def degree3_relations(x: ExtrasymData) -> list:
    """The two weighted-degree-3 Pfaffians of Q_t with symbolic t, t-powers divided out."""
    xs = ExtrasymData(*(p.to_ring(BT) if isinstance(p, Poly) else p for p in x.__dict__.values()))
    Qt = qt_matrix(xs, BT.var("t"))
    pf = divide_by_variable([p for _, p in sub_pfaffians(Qt, 4)], "t")
    return [p for p in pf if p.terms and weighted_degree(p) == 3]


def degeneration_report(x: ExtrasymData) -> dict:
    rels = degree3_relations(x)
    det = adjoint_quadric(rels)
    at0 = det.subs({"t": 0}).to_ring(Y)
    y2y3 = Y.parse("y2*y3")
    ratio = None
    if at0.terms:
        ratio = at0.exact_divide(y2y3)
    limit_ok = ratio is not None and ratio.is_constant() and bool(ratio.constant_term())
    free_y0 = det.degree_in("y0") == 0
    return {
        "determinant": str(det),
        "limit": str(at0),
        "limit_multiple_of_y2y3": limit_ok,
        "limit_scalar": format_q(ratio.constant_term()) if limit_ok else None,
        "independent_of_y0": free_y0,
    }


def septic_limit(x: ExtrasymData, data: FamilyData) -> dict:
    """Slow path: eliminate w0, w1 from J_t (symbolic t), take the degree-7 part, t -> 0."""
    xs = ExtrasymData(*(p.to_ring(BT) if isinstance(p, Poly) else p for p in x.__dict__.values()))
    Qt = qt_matrix(xs, BT.var("t"))
    Jt = divide_by_variable([p for _, p in sub_pfaffians(Qt, 4) if p.terms], "t")
    elim = eliminate(Jt, ["w0", "w1"], max_degree=7)
    septics = [g for g in elim if weighted_degree(g) == 7]
    target = y_of(X.var("x2") * sextic_equation(data), Y)
    found = None
    for g in divide_by_variable(septics, "t"):
        lim = g.subs({"t": 0}).to_ring(Y)
        if not lim.terms:
            continue
        q = lim.exact_divide(target)
        if q is not None and q.is_constant():
            found = format_q(q.constant_term())
            break
    return {"septic_count": len(septics), "matches_x2_F6": found is not None, "scalar": found}


# -- sextic and tacnode ------------------------------------------------------
def rtilde_presentation(data: FamilyData) -> TwistedPresentation:
    """alpha = [[QG + gamma B, Q q], [Q, gamma]] with q = x2^2, gamma = x3."""
    Q, G, Bx = data.x("Q"), data.x("G"), data.x("B")
    x2, x3 = X.var("x2"), X.var("x3")
    alpha = PolyMatrix(X, [[Q * G + x3 * Bx, Q * x2**2], [Q, x3]])
    return TwistedPresentation(alpha, [5, 4], [0, 3])


def forbidden_monomials(data: FamilyData) -> dict:
    """Forbidden monomials actually present in G and B."""
    out = {}
    for name, forb in (("G", G_FORBIDDEN), ("B", B_FORBIDDEN)):
        poly = data.x(name)
        bad = [m for m in forb if poly.coeff_of_monomial(X.parse(m).leading_term()[0])]
        out[name] = bad
    return out


_CHART = RingSpec.make([("x1", 1), ("x2", 1), ("x3", 1)])


def _order(p: Poly):
    return p.order_total() if p.terms else None


def tacnode_check(F: Poly, iterations: int = 6, truncation: int = 5) -> dict:
    """Local test at (1,0,0,0) in the chart x0 = 1.

    Passes iff F and its gradient vanish there, the quadratic part is a
    nonzero multiple of x2^2, and after eliminating x2 along dF/dx2 = 0 the
    branch curve has order >= 4 (a tacnode-like contact rather than a cusp).
    """
    f = compose(F, _CHART, {"x0": 1})
    val = f.constant_term()
    grad = [f.diff(n).constant_term() for n in _CHART.variables]
    quad = f.homogeneous_part(2) if f.terms else f
    x2sq = _CHART.parse("x2^2")
    ratio = quad.exact_divide(x2sq) if quad.terms else None
    quad_ok = ratio is not None and ratio.is_constant() and bool(ratio.constant_term())
    branch_order = None
    if quad_ok:
        c = ratio.constant_term()
        fx2 = f.diff("x2")
        x2 = _CHART.var("x2")
        # dF/dx2 = 2c*x2 + h(x1, x2, x3) with ord h >= 2; iterate x2 = -h / (2c)
        phi = _CHART.zero
        for _ in range(iterations):
            h = (fx2 - x2 * (2 * c)).subs({"x2": phi}).truncate_total(truncation)
            phi = (h * (-1 / (2 * c))).truncate_total(truncation)
        g = f.subs({"x2": phi}).truncate_total(truncation)
        branch_order = _order(g) if g.terms else truncation + 1
    ok = (not val) and not any(grad) and quad_ok and branch_order is not None and branch_order >= 4
    return {
        "ok": ok,
        "value": format_q(val),
        "gradient": [format_q(v) for v in grad],
        "quadratic_part": str(quad),
        "quadratic_is_x2_squared": quad_ok,
        "branch_order": branch_order,
    }


# -- base-point-free case -------------------------------------------------
def random_quadrics(seed: int, count: int = 4, ring: RingSpec = Y) -> list:
    rng = random.Random(seed)
    mons = sorted(_monos(tuple(ring.weights), 2), key=ring.default_key)
    return [Poly(ring, {m: _rand_q(rng) for m in mons}) for _ in range(count)]


def bpf_alpha(d: Sequence[Poly]) -> PolyMatrix:
    d1, d2, d3, d4 = d
    ring = d1.ring
    y0, y1, y2, y3 = (ring.var(n) for n in ("y0", "y1", "y2", "y3"))
    lin = d1 * y0 + d2 * y1 + d3 * y2
    a00 = d1 * d2 * y0 + (d3 * d4 + d2 * d2) * y1 + (d2 * d3 + d1 * d4) * y2
    return PolyMatrix(ring, [[a00, d4 * y1, lin], [d4 * y1, y0, y2], [lin, y2, y1]])


def bpf_ideal(alpha: PolyMatrix, target: RingSpec = B) -> tuple:
    """(linear relations, quadratic relations, lift) for the base-point-free ring."""
    v = [target.one, target.var("w0"), target.var("w1")]
    lin = []
    for i in range(3):
        acc = target.zero
        for j in range(3):
            acc = acc + alpha[i, j].to_ring(target) * v[j]
        lin.append(acc)
    lift = rank_condition_lift(alpha, row=0)
    quad = []
    for (j, h) in ((1, 1), (1, 2), (2, 2)):
        lam = lift[(j, h)]
        acc = v[j] * v[h]
        for k in range(3):
            acc = acc - lam[k].to_ring(target) * v[k]
        quad.append(acc)
    return lin, quad, lift


def rank_condition_holds(alpha: PolyMatrix, row: int = 0) -> bool:
    """Ideal of all (n-1)x(n-1) minors equals that of the minors with ``row`` deleted."""
    n = alpha.shape[0]
    rest = alpha.submatrix([i for i in range(n) if i != row], list(range(n)))
    all_m = [m for m in minors(alpha, n - 1) if m.terms]
    sub_m = [m for m in minors(rest, n - 1) if m.terms]
    return ideal_equal(all_m, sub_m)
