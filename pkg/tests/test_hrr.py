"""Dedekind sums, the Rademacher evaluation, and the eta transformation."""

import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from qcongruence.hrr import (
    ETA_TRANSFORM_PANEL,
    PrecisionPolicy,
    check_eta_transformation,
    dedekind_reciprocity_residual,
    dedekind_sum,
    eta_numeric,
    hrr_p,
)
from qcongruence.series import SeriesError


def test_dedekind_values():
    assert dedekind_sum(1, 2) == 0
    assert dedekind_sum(1, 3) == Fraction(1, 18)
    assert dedekind_sum(0, 1) == 0
    # negative and reduced arguments agree since the sawtooth is periodic
    assert dedekind_sum(-1, 3) == dedekind_sum(2, 3)


def test_dedekind_validation():
    with pytest.raises(SeriesError):
        dedekind_sum(2, 4)
    with pytest.raises(SeriesError):
        dedekind_sum(1, 0)


def test_dedekind_reciprocity_random_pairs():
    rng = random.Random(505)
    count = 0
    while count < 200:
        h = rng.randint(1, 500)
        k = rng.randint(1, 500)
        g = math.gcd(h, k)
        h, k = h // g, k // g
        assert dedekind_reciprocity_residual(h, k) == 0
        count += 1


class TestRademacher:
    def test_small_values(self):
        assert hrr_p(5).rounded == 7
        assert hrr_p(20).rounded == 627
        assert hrr_p(100).rounded == 190569292

    def test_panel_matches_recurrence(self, partition_table):
        for n in list(range(1, 31)) + [100, 500]:
            ev = hrr_p(n)
            assert ev.rounded == partition_table[n]
            assert ev.residual < 1e-3

    def test_monotone_stability(self, partition_table):
        # more terms or more precision never change an accepted value
        base = hrr_p(60)
        deeper = hrr_p(60, PrecisionPolicy(min_terms=160))
        wider = hrr_p(60, PrecisionPolicy(min_bits=320))
        assert base.rounded == deeper.rounded == wider.rounded == partition_table[60]

    def test_rejects_n_zero(self):
        with pytest.raises(SeriesError):
            hrr_p(0)


def test_eta_numeric_at_i_is_real_positive():
    value = eta_numeric(1j, 160)
    assert abs(mp.im(value)) < mp.mpf(2) ** -150
    assert mp.re(value) > 0


def test_eta_doubling_consistency():
    # two independent evaluations of the same quantity
    lhs = eta_numeric(2j, 160)
    rhs = eta_numeric(mp.mpc(0, 2), 160)
    assert abs(lhs - rhs) / abs(lhs) < mp.mpf(2) ** -150


def test_eta_tail_refinement_is_monotone():
    coarse = eta_numeric(0.3 + 0.9j, 64)
    fine = eta_numeric(0.3 + 0.9j, 192)
    assert abs(coarse - fine) / abs(fine) < mp.mpf(2) ** -60


class TestEtaTransformation:
    def test_translation(self):
        report = check_eta_transformation((1, 1, 0, 1), 0.2 + 1.1j, 128)
        assert report.relative_error < 1e-20

    def test_inversion_at_i(self):
        report = check_eta_transformation((0, -1, 1, 0), 1j, 128)
        assert report.relative_error < 1e-20

    def test_identity_matrix_rejected_outside_cases(self):
        # c = 0 with d = 1 and b = 0 is the identity: exact equality
        report = check_eta_transformation((1, 0, 0, 1), 0.5 + 0.8j, 128)
        assert report.relative_error < 1e-30

    def test_panel(self):
        for gamma in ETA_TRANSFORM_PANEL:
            report = check_eta_transformation(gamma, 0.1 + 0.8j, 128)
            assert report.relative_error < 1e-20, gamma

    def test_unsupported_normalizations_rejected(self):
        with pytest.raises(SeriesError):
            check_eta_transformation((1, 0, -1, 1), 0.5j, 64)  # c < 0
        with pytest.raises(SeriesError):
            check_eta_transformation((-1, 0, 0, -1), 0.5j, 64)  # c = 0, d = -1
        with pytest.raises(SeriesError):
            check_eta_transformation((2, 1, 1, 2), 0.5j, 64)  # det != 1

    def test_lower_half_plane_rejected(self):
        with pytest.raises(SeriesError):
            eta_numeric(-1j, 64)
