import itertools

import numpy as np
import pytest

from src.algebra.axioms import boolean_axiom_suite
from src.algebra.encoding import (
    ComplexPoint,
    apply_inverse_relaxation,
    enc_and,
    enc_and_n,
    enc_ior,
    enc_not,
    enc_or,
    enc_or_n,
    encode,
    evaluate,
)
from src.core.errors import AlreadyRelaxed, DimensionMismatch
from src.data.dimacs import CnfFormula
from src.relax.identity import eval_relaxed, relax


def _pm1(n):
    return itertools.product((1, -1), repeat=n)


def test_connective_truth_table():
    assert enc_or(1, -1) == enc_or(-1, 1) == 1
    assert enc_or(-1, -1) == -1
    assert enc_and(1, 1) == 1
    assert enc_and(1, -1) == enc_and(-1, -1) == -1
    assert enc_not(-1) == 1


def test_ior_is_consistency():
    for vals in _pm1(3):
        for signs in _pm1(3):
            expected = 1 if len({e * x for x, e in zip(vals, signs)}) == 1 else -1
            assert enc_ior(vals, signs) == expected


def test_boolean_axiom_suite_passes():
    report = boolean_axiom_suite()
    assert report.passed, report.failures
    assert report.checks["absorption_or"]
    assert report.checks["square_is_one"]


def test_prefactor_exponents(example11, example5):
    assert encode(relax(example11)).prefactor_exponent == 6 * 2 - 1
    assert encode(relax(example5)).prefactor_exponent == 7
    three = CnfFormula.from_int_clauses(3, [[1, 2, 3], [1, -2, 3], [1, 2, -3]])
    assert encode(relax(three)).prefactor_exponent == 6 * 3 - 1


def test_example3_ior_factor(example1):
    af = encode(relax(example1))
    x_factor = af.ior_factors[0]
    assert x_factor.variables == (1, 4, 7)
    assert x_factor.signs == (1, 1, 1)
    y_factor = af.ior_factors[1]
    assert y_factor.signs == (1, -1, 1)
    assert af.factor_count == 3 + 3


def test_encoding_matches_relaxed_truth_on_boolean_points(example1, example5, example11):
    for cnf in (example1, example5, example11):
        rf = relax(cnf)
        af = encode(rf)
        for point in _pm1(rf.num_new_variables):
            assert evaluate(af, point) == pytest.approx(eval_relaxed(rf, point), abs=1e-12)


def test_single_clause_reproduces_clause_truth_table():
    af = encode(relax(CnfFormula.from_int_clauses(3, [[1, 2, 3]])))
    for point in _pm1(3):
        expected = -1 if all(x == -1 for x in point) else 1
        assert evaluate(af, point).real == pytest.approx(expected)


def test_example5_points(example5):
    af = encode(relax(example5))
    assert evaluate(af, (1, 1, 1, 1)) == pytest.approx(-1)  # X-group inconsistent
    assert evaluate(af, (1, 1, -1, 1)) == pytest.approx(1)
    assert evaluate(af, (-1, -1, 1, 1)) == pytest.approx(-1)


def test_product_form_equals_connective_composition(example1):
    # folded prefactor agrees with the nested n-ary AND/OR/IOR form at complex points
    rf = relax(example1)
    af = encode(rf)
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = np.exp(1j * rng.uniform(0, 2 * np.pi, rf.num_new_variables))
        parts = [enc_or_n([x[v - 1] for v in clause]) for clause in rf.clauses]
        parts += [enc_ior([x[v - 1] for v in g.variables], g.signs) for g in rf.ior_groups]
        assert evaluate(af, x) == pytest.approx(complex(enc_and_n(parts)), rel=1e-10, abs=1e-10)


def test_inverse_relaxation_flags_and_values(example11):
    af = encode(relax(example11))
    assert not af.inverse_relaxed
    inv = apply_inverse_relaxation(af)
    assert inv.inverse_relaxed
    assert inv.clause_factors == af.clause_factors
    assert inv.prefactor_exponent == af.prefactor_exponent
    for point in _pm1(6):
        assert evaluate(inv, point) == pytest.approx(evaluate(af, point), abs=1e-12)
    with pytest.raises(AlreadyRelaxed):
        apply_inverse_relaxation(inv)


def test_all_ones_point(example11, unsat2):
    # x = (1,..,1) lifts the all-true assignment only when no literal is negated
    pure = CnfFormula.from_int_clauses(3, [[1, 2, 3], [1, 2, 3]])
    for cnf, expected in ((pure, 1), (example11, -1), (unsat2, -1)):
        inv = apply_inverse_relaxation(encode(relax(cnf)))
        assert evaluate(inv, np.ones(inv.num_variables)) == pytest.approx(expected)


def test_magnitude_bound_at_unit_points(example1):
    af = apply_inverse_relaxation(encode(relax(example1)))
    rng = np.random.default_rng(3)
    for _ in range(200):
        x = np.exp(1j * rng.uniform(0, 2 * np.pi, af.num_variables))
        assert abs(evaluate(af, x)) <= af.magnitude_bound


def test_evaluate_dimension_and_unit_checks(example5):
    af = encode(relax(example5))
    with pytest.raises(DimensionMismatch):
        evaluate(af, (1, 1, 1))
    with pytest.raises(ValueError):
        ComplexPoint([0.5, 1, 1, 1])
