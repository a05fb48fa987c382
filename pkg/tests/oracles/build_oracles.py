"""Regenerate frozen.json with sympy as an independent engine.

Run from the repository root:  python tests/oracles/build_oracles.py
The package is used only to build the input polynomials; every number stored
here comes from sympy (Groebner bases, determinants, exact matrix ranks).
"""

import json
import os
import random
from fractions import Fraction

import sympy as sp

from canring import families as fam
from canring.linalg import monomials_of_degree
from canring.matrix import sub_pfaffians

HERE = os.path.dirname(os.path.abspath(__file__))


def to_sympy(p, syms):
    expr = 0
    for m, c in p.terms.items():
        term = sp.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(syms, m):
            term *= s**e
        expr += term
    return sp.expand(expr)


def slice_rank_dims(gens, ring, max_degree):
    """dim (ring/I)_d by sympy rank of the matrix of all g*m in degree d."""
    syms = sp.symbols(ring.variables)
    degs = [fam.weighted_degree(g) for g in gens]
    out = {}
    for d in range(1, max_degree + 1):
        cols = {m: i for i, m in enumerate(monomials_of_degree(ring, d))}
        rows = []
        for g, e in zip(gens, degs):
            if e > d:
                continue
            for m in monomials_of_degree(ring, d - e):
                row = [0] * len(cols)
                for mm, c in g.mul_monomial(m).terms.items():
                    row[cols[mm]] = sp.Rational(int(c.numerator), int(c.denominator))
                rows.append(row)
        r = sp.Matrix(rows).rank() if rows else 0
        out[d] = len(cols) - r
    return out


def minimal_degrees(gens, ring):
    """Greedy degreewise rank test using sympy ranks."""
    degs = sorted(set(fam.weighted_degree(g) for g in gens))
    byd = {d: [g for g in gens if fam.weighted_degree(g) == d] for d in degs}
    kept = []
    result = []
    for d in degs:
        cols = {m: i for i, m in enumerate(monomials_of_degree(ring, d))}

        def vec(p):
            row = [0] * len(cols)
            for mm, c in p.terms.items():
                row[cols[mm]] = sp.Rational(int(c.numerator), int(c.denominator))
            return row

        rows = []
        for g in kept:
            e = fam.weighted_degree(g)
            for m in monomials_of_degree(ring, d - e):
                rows.append(vec(g.mul_monomial(m)))
        rank = sp.Matrix(rows).rank() if rows else 0
        for g in byd[d]:
            trial = sp.Matrix(rows + [vec(g)]).rank()
            if trial > rank:
                rows.append(vec(g))
                rank = trial
                kept.append(g)
                result.append(d)
    return sorted(result)


def main():
    out = {}
    y0, y1, u = sp.symbols("y0 y1 u")
    gb = sp.groebner([y0**2, y0 * y1 - y1**2], y0, y1, order="lex")
    out["lex_gb_example"] = sorted(str(g) for g in gb.exprs)
    gb2 = sp.groebner([u - y0**3, u**2 - y1], u, y0, y1, order="lex")
    out["elimination_example"] = sorted(str(g) for g in gb2.exprs if not g.has(u))

    m4 = sp.Matrix([[0, 1, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]])
    out["skew4_det"] = int(m4.det())

    rng = random.Random(20011)
    skews = []
    for n in (2, 4, 6):
        up = {(i, j): Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for i in range(n) for j in range(i + 1, n)}
        M = sp.zeros(n, n)
        for (i, j), v in up.items():
            M[i, j] = sp.Rational(v.numerator, v.denominator)
            M[j, i] = -M[i, j]
        skews.append({"n": n, "upper": {f"{i},{j}": str(v) for (i, j), v in up.items()}, "det": str(M.det())})
    out["skew_dets"] = skews

    data = fam.sample_family_data(1)
    out["seed1_family"] = data.to_json()
    rf = fam.build_rolling(data)
    out["seed1_rolling_dims"] = slice_rank_dims(rf.ideal, fam.R, 6)
    P = fam.build_extrasym(fam.derive_extrasym(data))
    pf = [p for _, p in sub_pfaffians(P, 4) if p.terms]
    out["seed1_pfaffian_min_degrees"] = minimal_degrees(pf, fam.R)

    alpha = fam.bpf_alpha(fam.random_quadrics(1))
    lin, quad, _ = fam.bpf_ideal(alpha)
    out["seed1_bpf_dims"] = slice_rank_dims(lin + quad, fam.B, 6)
    out["seed1_bpf_min_degrees"] = minimal_degrees(lin + quad, fam.B)

    xs = sp.symbols("x0 x1 x2 x3")
    F = to_sympy(fam.sextic_equation(data), xs)
    Fc = sp.expand(F.subs(xs[0], 1))
    quad2 = sum(t for t in Fc.as_ordered_terms() if sp.Poly(t, *xs[1:]).total_degree() == 2)
    out["seed1_sextic_quadratic_part"] = str(sp.expand(quad2))

    with open(os.path.join(HERE, "frozen.json"), "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
