"""The U5 operator pair, the ladder of modified partition generating
functions, decomposition into polynomials in the level-5 Hauptmodul t,
recovery of the degree-5 modular equation, and the 5-adic valuation
ledger that drives the ladder induction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .genfun import BudgetError, EtaQuotient, euler_product, partition_coefficients
from .series import QSeries, QSeriesRat, SeriesError, first_difference

__all__ = [
    "TPolynomial",
    "SeriesPowers",
    "DecompositionError",
    "ModularEquation",
    "Ladder",
    "LadderStepReport",
    "hauptmodul_t",
    "weight_series",
    "u5_plain",
    "u5_weighted",
    "u5_parity",
    "progression_offset",
    "ladder_prefactor",
    "ladder_term",
    "ladder_step_check",
    "decompose_in_t",
    "recover_modular_equation",
    "reference_modx_comparison",
    "REFERENCE_MODX",
    "u5_power_table",
    "valuation_pattern_check",
    "ledger_exponent",
    "ledger_contains",
    "ledger_rejection_reason",
    "vspace_stability_check",
    "random_ledger_member",
    "DEFAULT_COEFFICIENT_BUDGET",
]

DEFAULT_COEFFICIENT_BUDGET = 5_000_000

PRIME = 5


class DecompositionError(SeriesError):
    """A series failed to decompose as a polynomial in the generator."""


# ---------------------------------------------------------------------------
# Reference functions on Gamma_0(5)
# ---------------------------------------------------------------------------

_T_QUOTIENT = EtaQuotient(((5, 6), (1, -6)))      # t = q prod((1-q^{5m})/(1-q^m))^6
_A_QUOTIENT = EtaQuotient(((25, 1), (1, -1)))     # q prod (1-q^{25m})/(1-q^m)


@lru_cache(maxsize=16)
def hauptmodul_t(trunc):
    """The Hauptmodul t = eta(5 tau)^6 / eta(tau)^6 as a q-series."""
    return _T_QUOTIENT.expand(trunc)


@lru_cache(maxsize=16)
def weight_series(trunc):
    """The weight eta(25 tau)/eta(tau) inserted by the even-step operator."""
    return _A_QUOTIENT.expand(trunc)


def u5_plain(series):
    """U5 on q-expansions: sum a(n) q^n  ->  sum a(5n) q^n."""
    return series.extract_progression(5, 0)


def u5_weighted(series, weight=None):
    """U5 applied after multiplication by the eta(25t)/eta(t) weight."""
    if weight is None:
        weight = weight_series(series.trunc)
    if weight.trunc < series.trunc - series.offset:
        raise SeriesError(
            f"weight series truncated at q^{weight.trunc} is too short for "
            f"an operand window of length {series.trunc - series.offset}"
        )
    return u5_plain(weight * series)


def u5_parity(parity, series, weight=None):
    """The alternating operator: parity 1 is plain U5, parity 0 carries
    the weight.  Step alpha of the ladder uses parity (alpha mod 2)."""
    if parity not in (0, 1):
        raise SeriesError(f"parity must be 0 or 1, got {parity}")
    if parity == 1:
        return u5_plain(series)
    return u5_weighted(series, weight)


# ---------------------------------------------------------------------------
# The ladder
# ---------------------------------------------------------------------------

def progression_offset(alpha):
    """Minimal positive solution of 24 x == 1 (mod 5^alpha), found by
    lifting the solution mod 5 through successive powers."""
    if alpha < 1:
        raise SeriesError(f"ladder index must be >= 1, got {alpha}")
    x = 4  # 24*4 == 96 == 1 (mod 5)
    modulus = 5
    for _ in range(alpha - 1):
        residual = (1 - 24 * x) // modulus
        k = (residual * 4) % 5  # 24^{-1} == 4 (mod 5)
        x += modulus * k
        modulus *= 5
    return x


def ladder_prefactor(alpha, trunc):
    """Eta-product prefactor of the ladder: prod(1 - q^{5m}) at odd
    indices, prod(1 - q^m) at even indices."""
    if alpha % 2:
        return euler_product(-(-trunc // 5)).substitute_power(5).truncate(trunc)
    return euler_product(trunc)


def ladder_term(alpha, trunc, budget=DEFAULT_COEFFICIENT_BUDGET):
    """The alpha-th ladder entry, built directly from partition numbers:

        prefactor(alpha) * sum_n p(5^alpha n + offset(alpha)) q^{n+1}

    Independent of the U operators, so it can serve as their oracle.
    """
    if trunc < 2:
        raise SeriesError(f"ladder truncation must be >= 2, got {trunc}")
    lam = progression_offset(alpha)
    step = 5 ** alpha
    top = step * (trunc - 2) + lam
    if budget is not None and top > budget:
        raise BudgetError(
            f"ladder term alpha={alpha} at truncation {trunc} needs partition "
            f"numbers through {top}, over the budget of {budget}"
        )
    p = partition_coefficients(top)
    tail = QSeries([p[step * n + lam] for n in range(trunc - 1)], 1, trunc)
    return ladder_prefactor(alpha, trunc) * tail


@dataclass
class LadderStepReport:
    alpha: int
    trunc: int
    passed: bool
    first_mismatch: int | None

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "trunc": self.trunc,
            "passed": self.passed,
            "first_mismatch": self.first_mismatch,
        }


def ladder_step_check(alpha, trunc, budget=DEFAULT_COEFFICIENT_BUDGET):
    """Verify that the parity-(alpha mod 2) operator carries ladder entry
    alpha to entry alpha+1, both sides built independently."""
    operated = u5_parity(alpha % 2, ladder_term(alpha, 5 * trunc, budget))
    direct = ladder_term(alpha + 1, trunc, budget)
    mismatch = first_difference(operated, direct, through=trunc)
    return LadderStepReport(alpha, trunc, mismatch is None, mismatch)


class Ladder:
    """Cache-owning view of the ladder for one verification run."""

    prime = PRIME

    def __init__(self, budget=DEFAULT_COEFFICIENT_BUDGET):
        self.budget = budget
        self._terms = {}

    def offset(self, alpha):
        return progression_offset(alpha)

    def term(self, alpha, trunc):
        key = (alpha, trunc)
        if key not in self._terms:
            self._terms[key] = ladder_term(alpha, trunc, self.budget)
        return self._terms[key]

    def step_check(self, alpha, trunc):
        return ladder_step_check(alpha, trunc, self.budget)


# ---------------------------------------------------------------------------
# Polynomials in t and greedy decomposition
# ---------------------------------------------------------------------------

class TPolynomial:
    """A polynomial in a named generator series with exact rational
    coefficients, kept as a sparse exponent -> coefficient map."""

    __slots__ = ("coeffs", "generator")

    def __init__(self, coeffs=None, generator="t5"):
        table = {}
        if coeffs:
            for m, c in coeffs.items():
                c = Fraction(c)
                if c:
                    if m < 0:
                        raise SeriesError(f"negative generator power {m}")
                    table[int(m)] = c
        self.coeffs = table
        self.generator = generator

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self):
        return max(self.coeffs) if self.coeffs else None

    def items(self):
        return sorted(self.coeffs.items())

    def coefficient(self, m):
        return self.coeffs.get(m, Fraction(0))

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs.values())

    def __eq__(self, other):
        if not isinstance(other, TPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs and self.generator == other.generator

    __hash__ = None

    def _check_generator(self, other):
        if self.generator != other.generator:
            raise SeriesError(
                f"mixed generators {self.generator!r} and {other.generator!r}"
            )

    def __add__(self, other):
        self._check_generator(other)
        table = dict(self.coeffs)
        for m, c in other.coeffs.items():
            table[m] = table.get(m, Fraction(0)) + c
        return TPolynomial(table, self.generator)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return TPolynomial({m: c * v for m, v in self.coeffs.items()}, self.generator)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_generator(other)
        table = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                key = m1 + m2
                table[key] = table.get(key, Fraction(0)) + c1 * c2
        return TPolynomial(table, self.generator)

    __rmul__ = __mul__

    def evaluate(self, powers):
        """Substitute the generator series (via its power cache).  Returns
        an integer series when every coefficient is integral."""
        trunc = powers.base.trunc
        acc = QSeriesRat.zero(trunc)
        for m, c in self.coeffs.items():
            acc = acc + powers[m].to_rational().scale(c)
        if self.is_integral():
            return acc.to_integer()
        return acc

    def __repr__(self):
        if not self.coeffs:
            return f"TPolynomial(0; {self.generator})"
        body = " + ".join(f"{c}*{self.generator}^{m}" for m, c in self.items())
        return f"TPolynomial({body})"


class SeriesPowers:
    """Lazily extended nonnegative powers of a fixed base series."""

    def __init__(self, base):
        self.base = base
        self._powers = [type(base).one(base.trunc - base.offset), base]

    def __getitem__(self, m):
        if m < 0:
            raise SeriesError(f"negative power {m}")
        while len(self._powers) <= m:
            self._powers.append(self._powers[-1] * self.base)
        return self._powers[m]


def decompose_in_t(series, powers=None, max_degree=None, generator="t5"):
    """Write a series vanishing at q^0 as a polynomial in t by greedy
    leading-order elimination.

    t is monic at the cusp (t = q + ...), so the lowest surviving exponent
    determines one polynomial coefficient exactly at every step.  The
    residual must vanish identically on the remaining window; otherwise
    the series is not a polynomial in t at this truncation.
    """
    if powers is None:
        powers = SeriesPowers(hauptmodul_t(series.trunc))
    if powers.base.trunc < series.trunc:
        raise SeriesError(
            f"generator window q^{powers.base.trunc} is too short for a "
            f"series defined to q^{series.trunc}"
        )
    if max_degree is None:
        max_degree = max(1, series.trunc - 10)
    table = {}
    residual = series
    while True:
        order = residual.effective_order()
        if order is None:
            break
        if order <= 0:
            raise DecompositionError(
                f"series does not vanish at q^0 (first term at q^{order})"
            )
        if order > max_degree:
            raise DecompositionError(
                f"not a polynomial in {generator} at this truncation: residual "
                f"persists at q^{order} past degree cap {max_degree}"
            )
        c = residual.coefficient(order)
        table[order] = c
        residual = residual - powers[order].truncate(residual.trunc).scale(c)
    return TPolynomial(table, generator)


# ---------------------------------------------------------------------------
# The modular equation
# ---------------------------------------------------------------------------

@dataclass
class ModularEquation:
    """t(tau)^5 + sum_j a_j(t(5 tau)) t(tau)^j == 0 with polynomial a_j."""

    a: tuple

    def residual(self, trunc):
        t = hauptmodul_t(trunc)
        t5 = hauptmodul_t(-(-trunc // 5)).substitute_power(5).truncate(trunc)
        powers_t = SeriesPowers(t)
        powers_t5 = SeriesPowers(t5)
        acc = powers_t[5].to_rational()
        for j, poly in enumerate(self.a):
            acc = acc + poly.evaluate(powers_t5).to_rational() * powers_t[j].to_rational()
        return acc

    def annihilates(self, trunc):
        return self.residual(trunc).is_zero()

    def to_dict(self):
        return {
            "degree": 5,
            "a": [
                {
                    str(m): (int(c) if c.denominator == 1 else str(c))
                    for m, c in poly.items()
                }
                for poly in self.a
            ],
        }


def _solve_exact(rows, rhs):
    """Gaussian elimination over the rationals for an overdetermined but
    consistent system.  Raises if the system is singular or inconsistent."""
    n_rows = len(rows)
    n_cols = len(rows[0])
    aug = [
        [Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)
    ]
    pivot_rows = []
    r = 0
    for col in range(n_cols):
        pivot = None
        for i in range(r, n_rows):
            if aug[i][col]:
                pivot = i
                break
        if pivot is None:
            raise SeriesError(
                "linear system is singular: truncation too small to determine "
                "all unknowns"
            )
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(n_rows):
            if i != r and aug[i][col]:
                factor = aug[i][col]
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[r])]
        pivot_rows.append(col)
        r += 1
    for i in range(r, n_rows):
        if aug[i][n_cols]:
            raise SeriesError(
                "linear system is inconsistent: truncation too small"
            )
    solution = [Fraction(0)] * n_cols
    for i, col in enumerate(pivot_rows):
        solution[col] = aug[i][n_cols]
    return solution


# The degree-5 relation as commonly transcribed.  The a_4 and a_1 rows are
# internally inconsistent in circulation (duplicate powers of t in a_4, a
# degree-pattern break in a_1), so the exact linear solve below is
# authoritative; this table exists only for the comparison report.
# Duplicate printed powers are summed to give each row a well-defined value.
REFERENCE_MODX = {
    4: {
        5: -(5 ** 12 + 63 * 5 ** 2),
        4: -(6 * 5 ** 10 + 52 * 5 ** 5),
        3: -63 * 5 ** 7,
    },
    3: {4: -(5 ** 9), 3: -6 * 5 ** 7, 2: -63 * 5 ** 4, 1: -52 * 5 ** 2},
    2: {3: -(5 ** 6), 2: -6 * 5 ** 4, 1: -63 * 5},
    1: {3: -(5 ** 3), 1: -6 * 5},
    0: {1: -1},
}

_MODX_MAX_DEG = 5


@lru_cache(maxsize=4)
def recover_modular_equation(trunc=500, solve_window=100):
    """Recover the coefficient polynomials a_j by undetermined coefficients
    over the rationals, then verify the relation to the full truncation.

    The linear system uses `solve_window` coefficient equations for the 30
    unknowns (a margin of at least 50 extra equations is enforced) and the
    recovered relation must annihilate t exactly to `trunc`.
    """
    n_unknowns = 5 * (_MODX_MAX_DEG + 1)
    if solve_window < n_unknowns + 50:
        raise SeriesError(
            f"solve window {solve_window} leaves fewer than 50 spare "
            f"equations for {n_unknowns} unknowns"
        )
    t = hauptmodul_t(solve_window)
    t5 = hauptmodul_t(-(-solve_window // 5)).substitute_power(5).truncate(solve_window)
    powers_t = SeriesPowers(t)
    powers_t5 = SeriesPowers(t5)
    basis = []
    for j in range(5):
        for m in range(_MODX_MAX_DEG + 1):
            basis.append(powers_t5[m] * powers_t[j])
    target = powers_t[5]
    rows = []
    rhs = []
    for n in range(solve_window):
        rows.append([b.coefficient(n) if n < b.trunc else 0 for b in basis])
        rhs.append(-target.coefficient(n))
    solution = _solve_exact(rows, rhs)
    polys = []
    for j in range(5):
        chunk = solution[j * (_MODX_MAX_DEG + 1):(j + 1) * (_MODX_MAX_DEG + 1)]
        for c in chunk:
            if c.denominator != 1:
                raise SeriesError(
                    f"recovered coefficient {c} is not an integer; "
                    f"truncation too small"
                )
        polys.append(TPolynomial({m: c for m, c in enumerate(chunk)}))
    equation = ModularEquation(tuple(polys))
    if not equation.annihilates(trunc):
        raise SeriesError(
            f"recovered relation fails to annihilate t to q^{trunc}"
        )
    return equation


def reference_modx_comparison(equation):
    """Per-row comparison of the recovered a_j against the transcribed
    reference table.  Returns {j: {"matches": bool, "diffs": {m: (recovered,
    reference)}}}."""
    outcome = {}
    for j in range(5):
        recovered = equation.a[j]
        reference = REFERENCE_MODX.get(j, {})
        diffs = {}
        for m in sorted(set(recovered.coeffs) | set(reference)):
            got = recovered.coefficient(m)
            want = Fraction(reference.get(m, 0))
            if got != want:
                diffs[m] = (got, want)
        outcome[j] = {"matches": not diffs, "diffs": diffs}
    return outcome


# ---------------------------------------------------------------------------
# The U5 power table and the valuation ledger
# ---------------------------------------------------------------------------

def _table_truncation(m_max):
    # direct decomposition shows deg U5(t^m) = 5m; leave a verification
    # margin of at least 40 exponents past the largest degree
    return 5 * (5 * m_max + 40)


@lru_cache(maxsize=8)
def u5_power_table(parity, m_max, trunc=None):
    """U5-images of t^m decomposed in t, for m = 1..m_max.

    Entries for m <= 5 come from direct series decomposition; entries for
    m >= 6 are generated by the modular-equation recurrence and compared
    against a direct decomposition, so the two computation paths check
    each other.
    """
    if m_max < 1:
        raise SeriesError(f"m_max must be >= 1, got {m_max}")
    if trunc is None:
        trunc = _table_truncation(m_max)
    t = hauptmodul_t(trunc)
    weight = weight_series(trunc)
    powers_t = SeriesPowers(t)
    inner = -(-trunc // 5)
    powers_small = SeriesPowers(hauptmodul_t(inner))
    equation = recover_modular_equation() if m_max > 5 else None
    table = []
    for m in range(1, m_max + 1):
        image = u5_parity(parity, powers_t[m], weight)
        if image.trunc > inner:
            image = image.truncate(inner)
        direct = decompose_in_t(image, powers_small, max_degree=5 * m + 5)
        if m >= 6:
            recurred = TPolynomial()
            for j in range(5):
                recurred = recurred - equation.a[j] * table[m + j - 5 - 1]
            if recurred != direct:
                raise SeriesError(
                    f"modular-equation recurrence disagrees with the direct "
                    f"decomposition of the parity-{parity} image of t^{m}"
                )
        table.append(direct)
    return table


def _padic_valuation(value, p=PRIME):
    value = int(value)
    if value == 0:
        return None
    v = 0
    while value % p == 0:
        value //= p
        v += 1
    return v


@dataclass
class PatternCell:
    m: int
    r: int
    required: int
    observed: int | None  # None marks an exact zero coefficient
    passed: bool

    def to_dict(self):
        return {
            "m": self.m,
            "r": self.r,
            "required": self.required,
            "observed": self.observed,
            "passed": self.passed,
        }


@dataclass
class PatternReport:
    parity: int
    m_max: int
    cells: list
    support_violations: list

    @property
    def passed(self):
        return not self.support_violations and all(c.passed for c in self.cells)

    def to_dict(self):
        return {
            "parity": self.parity,
            "m_max": self.m_max,
            "passed": self.passed,
            "support_violations": self.support_violations,
            "cells": [c.to_dict() for c in self.cells],
        }


def valuation_pattern_check(parity, m_max, trunc=None):
    """Check the 5-adic divisibility pattern of the U5 power table.

    For parity 0 the t^r coefficient of the image of t^m must be divisible
    by 5^floor((5r-m-2)/2) and the support must start at ceil((m+1)/5);
    for parity 1 the exponent is floor((5r-m-1)/2) with support from
    ceil(m/5).
    """
    table = u5_power_table(parity, m_max, trunc)
    cells = []
    support_violations = []
    for m in range(1, m_max + 1):
        poly = table[m - 1]
        low = -(-(m + 1) // 5) if parity == 0 else -(-m // 5)
        for r, c in poly.items():
            if r < low:
                support_violations.append({"m": m, "r": r, "minimum": low})
            shift = 2 if parity == 0 else 1
            required = max(0, (5 * r - m - shift) // 2)
            if c.denominator != 1:
                cells.append(PatternCell(m, r, required, None, False))
                continue
            observed = _padic_valuation(int(c))
            passed = observed is None or observed >= required
            cells.append(PatternCell(m, r, required, observed, passed))
    return PatternReport(parity, m_max, cells, support_violations)


def ledger_exponent(parity, m):
    """Minimum 5-adic valuation the ledger demands of a t^m coefficient:
    floor((5m - parity)/2)."""
    return (5 * m - parity) // 2


def ledger_rejection_reason(parity, poly):
    """None if the polynomial belongs to the parity ledger space, else a
    human-readable reason."""
    if poly.coefficient(0):
        return "constant term must vanish"
    for m, c in poly.items():
        if c.denominator != 1:
            return f"coefficient of t^{m} is not an integer"
        required = ledger_exponent(parity, m)
        observed = _padic_valuation(int(c))
        if observed is not None and observed < required:
            return (
                f"coefficient of t^{m} has 5-adic valuation {observed}, "
                f"ledger requires {required}"
            )
    return None


def ledger_contains(parity, poly):
    return ledger_rejection_reason(parity, poly) is None


@dataclass
class StabilityReport:
    parity: int
    sample_degree: int | None
    precondition_ok: bool
    precondition_reason: str | None
    image_in_target: bool | None
    image_reason: str | None

    @property
    def passed(self):
        return self.precondition_ok and bool(self.image_in_target)

    def to_dict(self):
        return {
            "parity": self.parity,
            "sample_degree": self.sample_degree,
            "precondition_ok": self.precondition_ok,
            "precondition_reason": self.precondition_reason,
            "image_in_target": self.image_in_target,
            "image_reason": self.image_reason,
        }


def vspace_stability_check(parity, sample, table=None):
    """Apply the parity operator to a ledger member (by linearity through
    the power table), divide by 5, and test membership in the opposite
    ledger space."""
    reason = ledger_rejection_reason(parity, sample)
    degree = sample.degree()
    if reason is not None:
        return StabilityReport(parity, degree, False, reason, None, None)
    if degree is None:
        return StabilityReport(parity, None, True, None, True, None)
    if table is None:
        table = u5_power_table(parity, degree)
    if len(table) < degree:
        raise SeriesError(
            f"power table covers m <= {len(table)}, sample has degree {degree}"
        )
    image = TPolynomial()
    for m, c in sample.items():
        image = image + table[m - 1].scale(c)
    fifth = image.scale(Fraction(1, 5))
    image_reason = ledger_rejection_reason(1 - parity, fifth)
    return StabilityReport(
        parity, degree, True, None, image_reason is None, image_reason
    )


def random_ledger_member(parity, rng, max_degree=15, coefficient_bound=9):
    """A random element of the parity ledger space: each t^m coefficient is
    a random multiple of 5^{ledger exponent}."""
    table = {}
    for m in range(1, max_degree + 1):
        s = rng.randint(-coefficient_bound, coefficient_bound)
        if s:
            table[m] = s * 5 ** ledger_exponent(parity, m)
    if not table:
        table[1] = 5 ** ledger_exponent(parity, 1)
    return TPolynomial(table)
