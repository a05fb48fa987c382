import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from canring import PolyMatrix, RingSpec, TwistedPresentation, cokernel_dims, quotient_dims
from canring import families as fam
from canring.linalg import (
    EngineDisagreement,
    RankConditionError,
    TwistError,
    hilbert_match,
    minimal_generator_degrees,
    minimal_generators,
    monomials_of_degree,
    plurigenus,
    rank_condition_lift,
    solve_in_span,
)
from canring.poly import InhomogeneousError

from conftest import family

Y = fam.Y


def test_free_ring_dims():
    dims = quotient_dims([], Y, 4)
    assert dims.as_list() == [4, 10, 20, 35]
    assert set(dims.engines) == {"standard_monomials", "slice_rank"}


def test_rejects_inhomogeneous():
    with pytest.raises(InhomogeneousError):
        quotient_dims([Y.parse("y0 + y1^2")], Y, 3)


def test_monomials_count_weighted():
    assert len(monomials_of_degree(fam.R, 3)) == 20 + 4 * 2 + 1


def test_plurigenus_values():
    assert [plurigenus(m) for m in range(2, 7)] == [12, 26, 47, 75, 110]


def test_hilbert_match_examples():
    assert hilbert_match({2: 12, 3: 26, 4: 47})
    assert not hilbert_match({2: 12, 3: 25})
    # coefficient form of 5 + 7m(m-1)/2
    assert hilbert_match({2: 12, 3: 26}, [5, Fraction(-7, 2), Fraction(7, 2)])
    assert not hilbert_match({2: 12}, degrees=[2, 3])


def test_cokernel_zero_matrix():
    zero = PolyMatrix(Y, [[Y.zero]])
    dims = cokernel_dims(TwistedPresentation(zero, [2], [0]), 3)
    assert dims.as_list() == [1, 4, 10, 20]


def test_cokernel_single_entry():
    # A / (y0) has the dims of a polynomial ring in three variables
    p = TwistedPresentation(PolyMatrix(Y, [[Y.parse("y0")]]), [1], [0])
    assert cokernel_dims(p, 3).as_list() == [1, 3, 6, 10]


def test_twist_violation():
    with pytest.raises(TwistError):
        TwistedPresentation(PolyMatrix(Y, [[Y.parse("y0^2")]]), [1], [0])


def test_rtilde_and_dual_dims():
    pres = fam.rtilde_presentation(family(1))
    cok = cokernel_dims(pres, 6, 2)
    assert [cok[m] for m in range(2, 7)] == [10, 21, 38, 61, 90]
    dual = pres.transpose(shift=4)
    assert (dual.source_degrees, dual.target_degrees) == ([4, 1], [-1, 0])
    assert cokernel_dims(dual, 1, 1)[1] == 13


def test_minimal_generators_trivial():
    I = [Y.parse("y0"), Y.parse("y0^2")]
    assert minimal_generators(I) == [0]
    assert minimal_generator_degrees(I) == [1]


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_minimal_degrees_invariant(seed):
    rng = random.Random(seed)
    base = [Y.parse("y0^2 - y1*y2"), Y.parse("y1^2"), Y.parse("y0*y3")]
    extra = base[0] * Y.parse("y2") + base[1] * Y.parse("y3")
    I = base + [extra]
    want = minimal_generator_degrees(I)
    J = [g * Fraction(rng.randint(1, 9), rng.randint(1, 9)) for g in I]
    rng.shuffle(J)
    assert minimal_generator_degrees(J) == want == [2, 2, 2]


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_dual_engines_agree(seed):
    rng = random.Random(seed)
    gens = []
    for _ in range(rng.randint(1, 3)):
        ms = monomials_of_degree(Y, 2)
        gens.append(sum((Y.parse(str(rng.randint(-3, 3))) * Y.parse("*".join(
            f"{v}^{e}" for v, e in zip(Y.variables, m) if e) or "1") for m in rng.sample(ms, 3)), Y.zero))
    gens = [g for g in gens if g.terms]
    # raises EngineDisagreement if the two counts ever differ
    dims = quotient_dims(gens, Y, 4, engine="both")
    assert dims.engines["standard_monomials"] == dims.engines["slice_rank"]


def test_engine_disagreement_is_an_error_type():
    assert issubclass(EngineDisagreement, RuntimeError)


def test_solve_in_span_roundtrip():
    target = Y.parse("y0^3 + 2*y1*y2^2")
    spanning = [Y.parse("y0"), Y.parse("y2")]
    lam = solve_in_span(target, spanning, [2, 2])
    assert lam[0] * spanning[0] + lam[1] * spanning[1] == target
    assert solve_in_span(Y.parse("y3"), spanning, [0, 0]) is None


def _diag(entries):
    n = len(entries)
    return PolyMatrix(Y, [[entries[i] if i == j else Y.zero for j in range(n)] for i in range(n)])


def test_lift_diag_positive():
    # diag(f, 1, 1): the cofactors of row 0 contain 1, so every cofactor lifts
    f = Y.parse("y0^2 - y3^2")
    alpha = _diag([f, Y.one, Y.one])
    lift = rank_condition_lift(alpha, 0)
    assert fam.rank_condition_holds(alpha)
    assert lift[(1, 1)][0] == f


def test_lift_diag_distinct_violates_rank_condition():
    alpha = _diag([Y.parse("y0"), Y.parse("y1"), Y.parse("y2")])
    assert not fam.rank_condition_holds(alpha)
    with pytest.raises(RankConditionError):
        rank_condition_lift(alpha, 0)


def _check_lift(alpha, lift, row=0):
    from canring import adjugate

    beta = adjugate(alpha).transpose()
    n = alpha.shape[0]
    for (j, h), lam in lift.items():
        assert j != row
        acc = sum((lam[k] * beta[row, k] for k in range(n)), alpha.ring.zero)
        assert acc == beta[j, h]


def test_lift_rtilde_alpha():
    alpha = fam.rtilde_presentation(family(1)).matrix
    assert fam.rank_condition_holds(alpha)
    _check_lift(alpha, rank_condition_lift(alpha, 0))


@pytest.mark.parametrize("seed", [1, 2])
def test_lift_bpf_alpha(seed):
    alpha = fam.bpf_alpha(fam.random_quadrics(seed))
    _check_lift(alpha, rank_condition_lift(alpha, 0))


def test_remark_bookkeeping():
    data = family(1)
    qd = quotient_dims(fam.build_rolling(data).ideal, fam.R, 6)
    cok = cokernel_dims(fam.rtilde_presentation(data), 6, 2)
    assert [qd[m] - cok[m] for m in range(2, 7)] == [2, 5, 9, 14, 20]
