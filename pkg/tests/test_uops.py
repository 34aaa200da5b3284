"""Operator machinery: ladder, decomposition, modular equation, ledger."""

import math
import random
from fractions import Fraction

import pytest

from qcongruence.genfun import BudgetError, partition_coefficients
from qcongruence.series import QSeries, SeriesError
from qcongruence.uops import (
    DecompositionError,
    Ladder,
    SeriesPowers,
    TPolynomial,
    decompose_in_t,
    hauptmodul_t,
    ladder_step_check,
    ladder_term,
    ledger_contains,
    ledger_exponent,
    ledger_rejection_reason,
    progression_offset,
    random_ledger_member,
    reference_modx_comparison,
    u5_plain,
    u5_weighted,
    valuation_pattern_check,
    vspace_stability_check,
    weight_series,
)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def test_u5_plain_monomials():
    assert u5_plain(QSeries.from_terms({5: 1, 6: 1}, 8)) == QSeries.monomial(1, 2)


def test_u5_plain_on_t():
    # oracle: the t expansion itself; a(5n) picks every fifth coefficient
    t = hauptmodul_t(30)
    image = u5_plain(t)
    assert image.coefficient(1) == t.coefficient(5) == 315
    assert image.coefficient(2) == t.coefficient(10) == 34390
    # cross-check through the ladder: 5 * image opens with p(24)
    assert 5 * image.coefficient(1) == partition_coefficients(24)[24] == 1575


def test_u5_commutation_identity():
    # U5(f(5 tau) g(tau)) = f(tau) U5(g(tau)) on randomized series
    rng = random.Random(11)
    for _ in range(8):
        f = QSeries([rng.randint(-9, 9) for _ in range(25)], offset=0)
        g = QSeries([rng.randint(-9, 9) for _ in range(125)], offset=0)
        lhs = u5_plain(f.substitute_power(5) * g)
        rhs = f * u5_plain(g)
        assert lhs.agrees_with(rhs, through=20)


def test_u5_weighted_basics():
    weight = weight_series(60)
    assert u5_weighted(QSeries.zero(60), weight).is_zero()
    # weighted image of 1 is the progression extraction of the weight,
    # whose opening lists p(4), p(9), p(14) below the q^25 factor
    image = u5_weighted(QSeries.one(60), weight)
    assert image == weight.extract_progression(5, 0)
    assert [image.coefficient(n) for n in range(1, 4)] == [5, 30, 135]


def test_parity_alternation_reaches_l3(partition_table):
    l1 = ladder_term(1, 625)
    l3 = ladder_term(3, 25)
    assert u5_weighted(u5_plain(l1)).agrees_with(l3, through=25)


# ---------------------------------------------------------------------------
# ladder
# ---------------------------------------------------------------------------

def test_progression_offsets():
    assert [progression_offset(a) for a in (1, 2, 3)] == [4, 24, 99]
    # brute-force cross-check of the lifting construction
    for alpha in range(1, 7):
        modulus = 5 ** alpha
        brute = next(x for x in range(1, modulus + 1) if 24 * x % modulus == 1)
        assert progression_offset(alpha) == brute


def test_ladder_first_term_is_5t():
    assert ladder_term(1, 500).agrees_with(hauptmodul_t(500).scale(5), through=500)


def test_ladder_step_checks(partition_table):
    for alpha in (1, 2):
        report = ladder_step_check(alpha, 100)
        assert report.passed, report
    # adversarial control: dropping the weight must break the even step
    broken = u5_plain(ladder_term(2, 500))
    direct = ladder_term(3, 100)
    from qcongruence.series import first_difference
    assert first_difference(broken, direct, through=100) is not None


def test_ladder_valuations(partition_table):
    for alpha in (1, 2, 3):
        assert ladder_term(alpha, 60).series_valuation(5) >= alpha


def test_ladder_budget_guard():
    with pytest.raises(BudgetError):
        ladder_term(6, 1000, budget=10_000)
    ladder = Ladder(budget=10_000)
    with pytest.raises(BudgetError):
        ladder.term(6, 1000)
    assert ladder.offset(2) == 24


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

def test_decompose_examples():
    t = hauptmodul_t(80)
    assert decompose_in_t(t.scale(5)) == TPolynomial({1: 5})
    powers = SeriesPowers(t)
    combo = powers[2] + powers[1].scale(3)
    assert decompose_in_t(combo.truncate(80), powers) == TPolynomial({2: 1, 1: 3})


def test_decompose_l2_divisible_by_25(partition_table):
    poly = decompose_in_t(ladder_term(2, 120), max_degree=30)
    assert poly.is_integral()
    assert all(int(c) % 25 == 0 for _, c in poly.items())


def test_decompose_rejects_non_polynomials():
    with pytest.raises(DecompositionError, match="not a polynomial"):
        decompose_in_t(QSeries.one(40).shift(1), max_degree=5)
    with pytest.raises(DecompositionError):
        decompose_in_t(QSeries.one(40))  # nonzero at q^0


def test_decompose_is_left_inverse_of_evaluation():
    rng = random.Random(3)
    powers = SeriesPowers(hauptmodul_t(150))
    for _ in range(12):
        table = {
            m: rng.randint(-99, 99)
            for m in range(1, rng.randint(2, 12))
            if rng.random() < 0.7
        }
        poly = TPolynomial(table or {1: 1})
        series = poly.evaluate(powers)
        assert decompose_in_t(series, powers, max_degree=20) == poly


def test_tpolynomial_arithmetic():
    a = TPolynomial({1: 2, 3: 1})
    b = TPolynomial({1: Fraction(1, 2)})
    assert (a * b).coefficient(2) == 1
    assert (a + b).coefficient(1) == Fraction(5, 2)
    assert not (a - a)
    assert a.scale(0) == TPolynomial({})
    assert not b.is_integral() and a.is_integral()


# ---------------------------------------------------------------------------
# modular equation
# ---------------------------------------------------------------------------

def test_recovered_low_rows_match_reference(modular_equation):
    comparison = reference_modx_comparison(modular_equation)
    for j in (0, 2, 3):
        assert comparison[j]["matches"], comparison[j]
    assert modular_equation.a[0] == TPolynomial({1: -1})
    assert modular_equation.a[2] == TPolynomial(
        {3: -(5 ** 6), 2: -6 * 5 ** 4, 1: -63 * 5}
    )
    assert modular_equation.a[3] == TPolynomial(
        {4: -(5 ** 9), 3: -6 * 5 ** 7, 2: -63 * 5 ** 4, 1: -52 * 5 ** 2}
    )


def test_recovered_truth_for_inconsistent_rows(modular_equation):
    # the transcribed a_1 and a_4 rows are internally inconsistent; the
    # exact solve determines the actual coefficients
    assert modular_equation.a[1] == TPolynomial({2: -(5 ** 3), 1: -6 * 5})
    assert modular_equation.a[4] == TPolynomial({
        5: -(5 ** 12), 4: -6 * 5 ** 10, 3: -63 * 5 ** 7,
        2: -52 * 5 ** 5, 1: -63 * 5 ** 2,
    })
    comparison = reference_modx_comparison(modular_equation)
    assert not comparison[1]["matches"]
    assert not comparison[4]["matches"]


def test_equation_annihilates_at_both_depths(modular_equation):
    for trunc in (200, 500):
        assert modular_equation.annihilates(trunc)


def test_solve_window_margin_is_enforced():
    from qcongruence.uops import recover_modular_equation
    with pytest.raises(SeriesError):
        recover_modular_equation(200, 60)


# ---------------------------------------------------------------------------
# power table and ledger
# ---------------------------------------------------------------------------

def test_power_table_recurrence_agrees_with_direct(power_tables):
    # building the table runs the recurrence-versus-direct comparison for
    # every m >= 6; reaching here means m = 6..15 agreed for both parities
    for parity in (0, 1):
        table = power_tables[parity]
        assert len(table) == 15
        # observed degree law: the weighted image runs one degree higher
        assert table[0].degree() == (6 if parity == 0 else 5)
        assert table[14].degree() == (76 if parity == 0 else 75)


def test_u5_of_t_decomposition(power_tables):
    expected = TPolynomial({
        1: 63 * 5, 2: 52 * 5 ** 4, 3: 63 * 5 ** 6, 4: 6 * 5 ** 9, 5: 5 ** 11,
    })
    assert power_tables[1][0] == expected


def test_support_bounds(power_tables):
    for parity in (0, 1):
        for m, poly in enumerate(power_tables[parity], start=1):
            low = math.ceil((m + 1) / 5) if parity == 0 else math.ceil(m / 5)
            assert all(r >= low for r, _ in poly.items()), (parity, m)


def test_valuation_patterns(power_tables):
    for parity in (0, 1):
        report = valuation_pattern_check(parity, 15)
        assert report.passed
        assert not report.support_violations


def test_pattern_examples(power_tables):
    # the t^1 coefficient of either parity image of t is divisible by 5
    for parity in (0, 1):
        c = power_tables[parity][0].coefficient(1)
        assert int(c) % 5 == 0
    assert ledger_exponent(0, 1) == 2
    assert ledger_exponent(1, 1) == 2


def test_ledger_membership():
    assert ledger_contains(0, TPolynomial({1: 25}))
    # bare t is excluded from the parity-1 space: its exponent there is 2
    assert not ledger_contains(1, TPolynomial({1: 1}))
    assert "valuation 0" in ledger_rejection_reason(1, TPolynomial({1: 1}))
    assert ledger_contains(0, TPolynomial({})) and ledger_contains(1, TPolynomial({}))
    assert not ledger_contains(0, TPolynomial({0: 5, 1: 25}))


def test_vspace_stability(power_tables):
    sample = TPolynomial({1: 25})
    report = vspace_stability_check(0, sample, power_tables[0])
    assert report.passed
    rng = random.Random(99)
    for parity in (0, 1):
        for _ in range(20):
            member = random_ledger_member(parity, rng, max_degree=15)
            rep = vspace_stability_check(parity, member, power_tables[parity])
            assert rep.passed, rep


def test_vspace_precondition_reported_distinctly(power_tables):
    report = vspace_stability_check(1, TPolynomial({1: 1}), power_tables[1])
    assert not report.precondition_ok
    assert report.image_in_target is None
