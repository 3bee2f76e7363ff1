import random
from fractions import Fraction

import pytest

from gl2tv.field import gens
from gl2tv.padic import Mat2, enumerate_k_mod, in_gamma0
from gl2tv.principal_series import EvalContext, eval_tensor, restrict_to_little_f
from gl2tv import verifier as V
from gl2tv.verifier import FormulaVariant


def test_lemma2_indicator_examples(ctx2):
    ident, w = Mat2.identity(2), ctx2.w
    assert V.lemma2_indicator(ident, w) == 1
    assert V.lemma2_indicator(ident, ident) == 0
    assert V.lemma2_indicator(w, w) == 0
    with pytest.raises(ValueError, match="not in K"):
        V.lemma2_indicator(Mat2.of(2, 2, 0, 0, 1), ident)


@pytest.mark.parametrize("p", [2, 3])
def test_lemma2_orbit_oracle(p):
    assert all(r.passed for r in V.lemma2_reports(EvalContext(p)))


def test_build_formula_shape(ctx2):
    X, Y, S = gens(2)
    A = V.coefficient_A(2)
    f1 = V.build_formula(FormulaVariant.FORMULA_1, ctx2)
    assert len(f1) == 2 * 2 + 4
    assert len(V.build_formula(FormulaVariant.FORMULA_1, EvalContext(3))) == 10
    coeff, g = f1.terms[1]
    assert g == Mat2.identity(2) and coeff == A * X / S
    f2 = V.build_formula(FormulaVariant.FORMULA_2, ctx2)
    block = [c for c, g in f2 if g.a == Fraction(1, 2) or g == Mat2.of(2, 0, Fraction(1, 2), 1, 0)]
    assert len(block) == 3
    assert all(c == -A / (1 + Y * Y) * (Y / S) for c in block)


def test_build_formula_conductor(ctx2):
    with pytest.raises(ValueError, match="formula only established for conductor one"):
        V.build_formula(FormulaVariant.FORMULA_1, EvalContext(2, n=2))


def test_F_constants_examples(ctx2, ctx3):
    X, _, S = gens(2)
    ident, w = Mat2.identity(2), ctx2.w
    f1 = V.build_F1(ctx2)
    assert eval_tensor(f1, ident, ident, ctx2) == (S / X) * (1 + X * X)
    assert eval_tensor(f1, w, ident, ctx2) == V.F1_constant(2)
    rng = random.Random(0)
    ks = enumerate_k_mod(3, 2)
    f2 = V.build_F2(ctx3)
    for _ in range(20):
        assert eval_tensor(f2, rng.choice(ks), rng.choice(ks), ctx3) == V.F2_constant(3)


def test_gamma_table_cases(ctx2):
    X, Y, S = gens(2)
    const = V.F1_constant(2)
    elem = V.build_F1(ctx2).left_translate(ctx2.gamma_inv)
    ident, w = Mat2.identity(2), ctx2.w
    assert eval_tensor(elem, w, w, ctx2) == const * (X / S) * (Y / S)
    assert eval_tensor(elem, ident, ident, ctx2) == const * (S / X) * (S / Y)
    assert eval_tensor(elem, w, ident, ctx2) == const * (X / S) * (S / Y)
    reports = V.check_gamma_translate_table(ctx2)
    assert len({r.label for r in reports}) == 4 and all(r.passed for r in reports)


def test_proof_table_examples(ctx2):
    X, _, S = gens(2)
    reports = {r.label: r for r in V.check_proof_tables(ctx2)}
    r = reports["table1/hecke tau, c*tau+d unit/val c=0"]
    assert r.passed and r.expected == (X / S, 1)
    r = reports["table1/(0 1; p 0)/val c>=1"]
    assert r.passed and r.expected == (S / X, 1)
    r = reports["table2/lower tau0!=0, d*tau0+c in pO/val c=0,val d>=1/empty"]
    assert r.passed and r.computed == 0


def test_lemma3_p2(ctx2):
    for variant in FormulaVariant:
        result = V.verify_lemma3(variant, ctx2)
        assert result.cells == 96 * 96
        assert result.passed


def test_corrupted_A_fails(ctx2):
    elem = V.build_formula(FormulaVariant.FORMULA_1, ctx2)
    corrupted = elem.with_coefficients([2 * c if i < 2 else c for i, c in enumerate(elem.coefficients)])
    # A enters every coefficient; doubling only the first two breaks the sum
    assert not V.verify_lemma3(FormulaVariant.FORMULA_1, ctx2, element=corrupted).passed
    assert not V.verify_lemma3(FormulaVariant.FORMULA_1, ctx2, element=elem.scaled(2)).passed


def test_failures_are_reported_as_data(ctx2):
    elem = V.build_F1(ctx2)
    result = V.verify_lemma3(FormulaVariant.FORMULA_1, ctx2, element=elem)
    assert not result.passed
    d = result.failures[0].to_dict()
    assert set(d) == {"label", "k", "k_prime", "expected", "computed", "pass", "count"}


def test_simple_case(ctx2):
    assert V.verify_simple_case(ctx2)


def test_little_f_examples(ctx2):
    X, Y, _ = gens(2)
    for variant in FormulaVariant:
        elem = V.build_formula(variant, ctx2)
        assert restrict_to_little_f(elem, Mat2.identity(2), ctx2) == 1
        assert restrict_to_little_f(elem, Mat2.of(2, 2, 0, 0, 1), ctx2) == X / Y
        assert restrict_to_little_f(elem, ctx2.w, ctx2) == 0
        assert restrict_to_little_f(elem, Mat2.of(2, 1, 0, 1, 1), ctx2) == 0


def test_torus_oracle_on_explicit_coset():
    g = Mat2.of(2, 1, 0, 1, 1)
    assert V._torus_gamma0_oracle(g, 1) == (False, 0)
    assert V._torus_gamma0_oracle(Mat2.of(3, 3, 1, 0, 1), 1) == (False, 0)
    assert V._torus_gamma0_oracle(Mat2.of(3, 3, 3, 0, 1), 1) == (True, 1)


def test_shifted_residues_give_same_identity():
    ctx = EvalContext(3, taus=(1, 2, 3))
    for variant in FormulaVariant:
        assert V.verify_lemma3(variant, ctx).passed


def test_check_parameters():
    V.check_parameters(1, 1, 3, 2)
    with pytest.raises(ValueError, match="principality"):
        V.check_parameters(1, V.QuadraticNumber(0, 1, 2), 1, 2)
    with pytest.raises(ValueError, match="nonzero"):
        V.check_parameters(2, 1, 0, 2)


def test_parallel_profiles_match(ctx2):
    elem = V.build_formula(FormulaVariant.FORMULA_2, ctx2)
    ks = enumerate_k_mod(2, 2)
    serial = V.precompute_profiles(elem.translates, ks, ctx2)
    parallel = V.precompute_profiles(elem.translates, ks, ctx2, workers=2)
    assert serial == parallel


def test_cell_count():
    assert V.cell_count(2, 2) == 9216
    assert V.cell_count(3, 2) == 3888 ** 2
