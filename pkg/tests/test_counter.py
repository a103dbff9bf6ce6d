import numpy as np
import pytest

from packages.oracle_toolkit import count_by_enumeration
from src.algebra.encoding import apply_inverse_relaxation, encode
from src.core.errors import BudgetExceeded, IntegerizationUnsafe, ResidualTooLarge, TooLarge
from src.counter.lattice import _block_total, count, lattice_count, roots_of_unity_sum_check
from src.counter.summation import ComplexAccumulator, NeumaierSum
from src.data.dimacs import CnfFormula, load_dimacs
from src.relax.identity import relax
from src.spectrum.frequencies import FrequencyScheme, assign_frequencies

EXP1 = FrequencyScheme(name="exp1", axes=4, u_mode="n2")
TWOVAR = FrequencyScheme(name="twovar", axes=2, u_mode="n2")
ONEVAR = FrequencyScheme(name="onevar", axes=1, u_mode="n2")
TERNARY = FrequencyScheme(name="ternary", kind="ternary", axes=1)


@pytest.mark.parametrize("l", range(2, 51))
def test_roots_of_unity_sums(l):
    assert abs(roots_of_unity_sum_check(0, l) - l) < 1e-12
    assert abs(roots_of_unity_sum_check(l, l) - l) < 1e-12
    for t in range(1, l):
        assert abs(roots_of_unity_sum_check(t, l)) < 1e-12
        assert abs(roots_of_unity_sum_check(-t, l)) < 1e-12


def test_example11_with_multiplier_20(example11):
    res = count(example11, EXP1, multiplier=20, threads=4)
    assert res.lattice_size == 85
    assert res.axes == 4
    assert res.num_points == 85**4
    assert res.constant_term == pytest.approx(-0.8125, abs=1e-9)
    assert res.count == 6
    assert res.satisfiable
    assert res.diagnostics["integer_frequencies"][0] == [-13, 16, 13, -16]
    assert res.diagnostics["prefactor_exponent"] == 11


def test_example5_default_multiplier(example5):
    res = count(example5, EXP1)
    assert res.diagnostics["multiplier"] == 7
    assert res.lattice_size <= 30
    assert res.count == 2
    assert res.constant_term == pytest.approx(-0.75, abs=1e-9)


def test_single_clause():
    cnf = CnfFormula.from_int_clauses(3, [[1, 2, 3]])
    assert count(cnf, EXP1).count == 7
    assert count(cnf, TERNARY).count == 7


def test_unsatisfiable_instances(unsat2, instance_path):
    res = count(unsat2, TERNARY)
    assert res.count == 0
    assert not res.satisfiable
    assert res.constant_term == pytest.approx(-1.0, abs=1e-9)
    repeated = load_dimacs(instance_path("repeated_unsat.cnf"))
    assert count(repeated, TERNARY).count == 0


def test_free_variables_scale_lattice_count():
    cnf = CnfFormula.from_int_clauses(5, [[1, 2, 3]])
    res = count(cnf, TERNARY)
    assert res.occurring_count == 7
    assert res.free_variables == 2
    assert res.count == 28


def test_lattice_matches_enumeration_on_corpus(corpus):
    for cnf in corpus:
        res = count(cnf, TERNARY)
        assert res.count == count_by_enumeration(cnf).count, cnf.as_int_clauses()
        assert res.imaginary_residual < 1e-6
        assert res.lattice_residual < 1e-6


def test_small_modulus_aliases():
    cnf = CnfFormula.from_int_clauses(3, [[1, 2, 3], [1, 2, 3]])
    with pytest.raises(ResidualTooLarge) as info:
        count(cnf, TERNARY, modulus=1, force=True)
    assert info.value.result.occurring_count == 64


def test_budget_exceeded(example11, example5, monkeypatch):
    with pytest.raises(BudgetExceeded):
        count(example11, EXP1, multiplier=20, max_points=1000)
    monkeypatch.setenv("SATSUM_MAX_LATTICE_POINTS", "10")
    with pytest.raises(BudgetExceeded):
        count(example11, TERNARY)
    assert count(example5, TERNARY, force=True).count == 2


def test_thread_count_does_not_change_result(example5):
    one = count(example5, EXP1, threads=1)
    many = count(example5, EXP1, threads=3)
    assert one.raw_sum == many.raw_sum
    assert one.count == many.count


def test_lattice_count_needs_inverse_relaxation(example5):
    rf = relax(example5)
    fa, _ = assign_frequencies(rf.num_new_variables, TERNARY)
    with pytest.raises(ValueError):
        lattice_count(encode(rf), fa)
    res = lattice_count(apply_inverse_relaxation(encode(rf)), fa)
    assert res.count == 2


def test_timing_is_optional(example5):
    assert count(example5, TERNARY).wall_time_seconds is None
    assert count(example5, TERNARY, include_timing=True).wall_time_seconds >= 0


def test_compensated_sums():
    acc = NeumaierSum()
    for x in (1e16, 1.0, -1e16):
        acc.add(x)
    assert acc.value == 1.0
    cacc = ComplexAccumulator()
    for z in np.array([1e16 + 1j, 1.0 - 1e16j, -1e16 + 1e16j]):
        cacc.add(complex(z))
    assert cacc.value == complex(1.0, 1.0)
    assert _block_total(np.array([1e16 + 0j, 1.0 + 1e16j, -1e16 - 1e16j])) == complex(1.0, 0.0)


def test_modulus_within_frequency_bound_is_scanned(example5):
    # z = 1, 3, 9, 27 and 27 - 9 + 3 - 1 = 20
    with pytest.raises(IntegerizationUnsafe) as info:
        count(example5, TERNARY, modulus=20)
    assert info.value.signs is not None


def test_small_moduli_never_give_a_wrong_count(example5):
    refused = 0
    for l in range(2, 42):
        try:
            res = count(example5, TERNARY, modulus=l)
        except IntegerizationUnsafe:
            refused += 1
            continue
        assert res.count == 2, l
    assert refused > 0


def test_modulus_bound(example5):
    # 2 + 40 is the default choice and needs no scan; 1 + 3 + 9 + 27 = 40 aliases
    assert count(example5, TERNARY, modulus=42).count == 2
    with pytest.raises(IntegerizationUnsafe):
        count(example5, TERNARY, modulus=40)


def test_onevar_and_twovar_match_enumeration_on_corpus(corpus):
    for cnf in corpus:
        n = relax(cnf).num_new_variables
        expected = count_by_enumeration(cnf).count
        if n <= 9:
            res = count(cnf, ONEVAR)
            assert res.count == expected, ("onevar", cnf.as_int_clauses())
            assert res.imaginary_residual < 1e-6 and res.lattice_residual < 1e-6
        if n <= 6:
            assert count(cnf, TWOVAR).count == expected, ("twovar", cnf.as_int_clauses())


def test_multiplier_override_above_enumeration_limit(caplog):
    cnf = CnfFormula.from_int_clauses(3, [[1, 2, 3]])
    with caplog.at_level("WARNING"):
        res = count(cnf, ONEVAR, multiplier=1000, limit=2)
    assert res.count == 7
    assert res.diagnostics["min_max_frequency"] is None
    assert res.diagnostics["argmin_signs"] is None
    messages = [r.getMessage() for r in caplog.records if r.levelname == "WARNING"]
    assert any("m.m.f not computed" in m for m in messages)
    assert any("integerization safety not checked" in m for m in messages)


def test_large_n_needs_multiplier():
    fa, report = assign_frequencies(18, ONEVAR, multiplier=1000)
    assert report.min_max_frequency is None
    assert fa.modulus == 2 + int(np.abs(fa.integer_matrix()).sum())
    with pytest.raises(TooLarge):
        assign_frequencies(18, ONEVAR)
