"""Declarative congruence-family verification, q-series identity checks,
and the mod-5 eigenfunction detector on the level-20 setting.

Families are verified directly on coefficient data: each record names a
coefficient source from the catalog, an arithmetic-progression condition,
and the divisibility exponent asserted at each depth.  Reports carry
re-checkable witnesses and the minimum observed p-adic valuation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .genfun import EtaQuotient, euler_product, expand_named, partition_coefficients
from .series import QSeries, SeriesError, first_difference

__all__ = [
    "CongruenceFamily",
    "AlphaCell",
    "FamilyReport",
    "IdentityReport",
    "EigenSetup",
    "EigenReport",
    "family_catalog",
    "get_family",
    "verify_family",
    "recheck_witness",
    "verify_identity",
    "eigen_setup",
    "eigen_check",
    "composite_fixes_mod5",
    "DEFAULT_SAMPLES",
    "DEFAULT_BUDGET",
    "IDENTITY_NAMES",
]

DEFAULT_SAMPLES = 25
DEFAULT_BUDGET = 5_000_000


def _identity(alpha):
    return alpha


def _half_plus_one(alpha):
    return alpha // 2 + 1


@dataclass(frozen=True)
class CongruenceFamily:
    """One infinite congruence family, as checkable data.

    The condition reads: if multiplier * n == residue (mod
    prime^cond_exponent(alpha)), then the source coefficient at n is
    divisible by prime^exponent(alpha).  ``min_index`` excludes leading
    indices the statement does not cover.
    """

    name: str
    source: str
    multiplier: int
    residue: int
    prime: int
    exponent: Callable[[int], int]
    cond_exponent: Callable[[int], int] = _identity
    min_index: int = 0
    default_alpha_max: int = 2
    description: str = ""

    def __post_init__(self):
        if math.gcd(self.multiplier, self.prime) != 1:
            raise SeriesError(
                f"family {self.name}: multiplier {self.multiplier} shares a "
                f"factor with the prime {self.prime}"
            )

    def modulus(self, alpha):
        return self.prime ** self.exponent(alpha)

    def indices(self, alpha, samples):
        """First `samples` indices satisfying the progression condition."""
        m = self.prime ** self.cond_exponent(alpha)
        inverse = pow(self.multiplier, -1, m)
        n0 = (self.residue * inverse) % m
        while n0 < self.min_index:
            n0 += m
        return [n0 + k * m for k in range(samples)]


_FAMILIES = [
    CongruenceFamily(
        "ram5", "partition", 24, 1, 5, _identity,
        default_alpha_max=4,
        description="p(n) divisible by 5^a when 24n == 1 (mod 5^a)",
    ),
    CongruenceFamily(
        "ram7", "partition", 24, 1, 7, _half_plus_one,
        default_alpha_max=3,
        description="p(n) divisible by 7^(floor(a/2)+1) when 24n == 1 (mod 7^a)",
    ),
    CongruenceFamily(
        "ram11", "partition", 24, 1, 11, _identity,
        default_alpha_max=2,
        description="p(n) divisible by 11^a when 24n == 1 (mod 11^a)",
    ),
    CongruenceFamily(
        "tang", "colored(2)", 12, 1, 5, _half_plus_one,
        default_alpha_max=3,
        description="2-colored p_{-2}(n) divisible by 5^(floor(a/2)+1) when "
                    "12n == 1 (mod 5^a)",
    ),
    CongruenceFamily(
        "chern-hirschhorn", "distinct", 24, -1, 5, _identity,
        cond_exponent=lambda alpha: 2 * alpha + 1,
        default_alpha_max=2,
        description="distinct-parts p_D(n) divisible by 5^a when "
                    "24n == -1 (mod 5^(2a+1))",
    ),
    CongruenceFamily(
        "wang-yang", "wangyang", 12, 1, 5, _identity,
        default_alpha_max=3,
        description="Eisenstein-quotient coefficients divisible by 5^a when "
                    "12n == 1 (mod 5^a)",
    ),
    CongruenceFamily(
        "andrews-paule", "elongated(2)", 8, 1, 3,
        lambda alpha: 2 * (alpha // 2) + 1,
        default_alpha_max=4,
        description="2-elongated d_2(n) divisible by 3^(2*floor(a/2)+1) when "
                    "8n == 1 (mod 3^a)",
    ),
    CongruenceFamily(
        "andrews-sellers", "frobenius2", 12, 1, 5, _identity,
        default_alpha_max=3,
        description="2-colored Frobenius cphi_2(n) divisible by 5^a when "
                    "12n == 1 (mod 5^a)",
    ),
    CongruenceFamily(
        "j-mod2", "jinvariant", 1, 0, 2, lambda alpha: 3 * alpha + 8,
        min_index=1, default_alpha_max=1,
        description="j-invariant c(n) divisible by 2^(3a+8) when n == 0 (mod 2^a)",
    ),
    CongruenceFamily(
        "j-mod3", "jinvariant", 1, 0, 3, lambda alpha: 2 * alpha + 3,
        min_index=1, default_alpha_max=1,
        description="j-invariant c(n) divisible by 3^(2a+3) when n == 0 (mod 3^a)",
    ),
    CongruenceFamily(
        "j-mod5", "jinvariant", 1, 0, 5, lambda alpha: alpha + 1,
        min_index=1, default_alpha_max=2,
        description="j-invariant c(n) divisible by 5^(a+1) when n == 0 (mod 5^a)",
    ),
    CongruenceFamily(
        "j-mod7", "jinvariant", 1, 0, 7, _identity,
        min_index=1, default_alpha_max=2,
        description="j-invariant c(n) divisible by 7^a when n == 0 (mod 7^a)",
    ),
    CongruenceFamily(
        "j-mod11", "jinvariant", 1, 0, 11, _identity,
        min_index=1, default_alpha_max=2,
        description="j-invariant c(n) divisible by 11^a when n == 0 (mod 11^a)",
    ),
]


def family_catalog():
    """The built-in family records; plain data, re-checkable one by one."""
    return list(_FAMILIES)


def get_family(name):
    for fam in _FAMILIES:
        if fam.name == name:
            return fam
    valid = ", ".join(f.name for f in _FAMILIES)
    raise SeriesError(f"unknown family {name!r}; valid families: {valid}")


# ---------------------------------------------------------------------------
# Family verification
# ---------------------------------------------------------------------------

@dataclass
class AlphaCell:
    alpha: int
    modulus: int
    checked: int
    passed: bool | None          # None: skipped for budget
    witness: dict | None
    min_valuation: int | None    # None: every checked coefficient was zero

    def to_record(self, family):
        return {
            "family": family,
            "alpha": self.alpha,
            "modulus": self.modulus,
            "checked": self.checked,
            "passed": self.passed,
            "witness": self.witness,
            "min_valuation": self.min_valuation,
        }


@dataclass
class FamilyReport:
    family: str
    cells: list
    partial: bool = False

    @property
    def passed(self):
        return not self.partial and all(c.passed for c in self.cells)

    def to_records(self):
        return [c.to_record(self.family) for c in self.cells]

    def to_text_lines(self):
        lines = []
        for c in self.cells:
            status = "skipped-budget" if c.passed is None else (
                "pass" if c.passed else "FAIL"
            )
            witness = (
                f"n={c.witness['n']} residue={c.witness['residue']}"
                if c.witness else "-"
            )
            val = "inf" if c.min_valuation is None else c.min_valuation
            lines.append(
                f"{self.family}\t{c.alpha}\t{c.modulus}\t{c.checked}\t"
                f"{status}\t{val}\t{witness}"
            )
        return lines


def _padic_valuation(value, p):
    if value == 0:
        return None
    v = 0
    while value % p == 0:
        value //= p
        v += 1
    return v


def verify_family(
    family,
    alpha_max=None,
    samples_per_alpha=DEFAULT_SAMPLES,
    n_budget=DEFAULT_BUDGET,
    series=None,
):
    """Check the family cell by cell: for each depth alpha, the first
    `samples_per_alpha` indices on the progression must carry coefficients
    divisible by the asserted prime power.

    A cell whose required coefficient range exceeds the budget is recorded
    as skipped and the report is marked partial -- never silently shrunk.
    ``series`` overrides the coefficient source (testing hook).
    """
    if isinstance(family, str):
        family = get_family(family)
    if alpha_max is None:
        alpha_max = family.default_alpha_max
    if alpha_max < 1 or samples_per_alpha < 1:
        raise SeriesError("alpha_max and samples_per_alpha must be >= 1")
    per_alpha = {
        alpha: family.indices(alpha, samples_per_alpha)
        for alpha in range(1, alpha_max + 1)
    }
    feasible = {
        alpha: idx for alpha, idx in per_alpha.items() if idx[-1] <= n_budget
    }
    if series is None and feasible:
        need = max(idx[-1] for idx in feasible.values()) + 1
        series = expand_named(family.source, need)
    cells = []
    partial = False
    for alpha in range(1, alpha_max + 1):
        modulus = family.modulus(alpha)
        if alpha not in feasible:
            partial = True
            cells.append(AlphaCell(alpha, modulus, 0, None, None, None))
            continue
        indices = feasible[alpha]
        witness = None
        passed = True
        min_val = None
        have_val = False
        for n in indices:
            value = series.coefficient(n)
            if value % modulus:
                passed = False
                witness = {"n": n, "residue": value % modulus}
                break
            v = _padic_valuation(value, family.prime)
            if v is not None:
                min_val = v if not have_val else min(min_val, v)
                have_val = True
        checked = len(indices) if passed else indices.index(witness["n"]) + 1
        cells.append(AlphaCell(
            alpha, modulus, checked, passed, witness,
            min_val if have_val else None,
        ))
    return FamilyReport(family.name, cells, partial)


def recheck_witness(family, cell):
    """Re-evaluate a recorded witness in isolation: recompute the single
    coefficient from a fresh expansion and reduce.  True when the stored
    verdict is reproduced."""
    if isinstance(family, str):
        family = get_family(family)
    if cell.witness is None:
        return cell.passed is not False
    n = cell.witness["n"]
    value = expand_named(family.source, n + 1).coefficient(n)
    residue = value % cell.modulus
    return residue == cell.witness["residue"] and residue != 0


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------

IDENTITY_NAMES = ("rkor", "rkor_normalized", "pn116")

_DEFAULT_IDENTITY_TRUNC = {"rkor": 500, "rkor_normalized": 500, "pn116": 200}


@dataclass
class IdentityReport:
    name: str
    trunc: int
    passed: bool
    first_mismatch: int | None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "trunc": self.trunc,
            "passed": self.passed,
            "first_mismatch": self.first_mismatch,
            "details": self.details,
        }


def _euler_scaled(scale, trunc):
    return euler_product(-(-trunc // scale)).substitute_power(scale).truncate(trunc)


def _identity_rkor(trunc):
    n_top = 5 * (trunc - 1) + 4
    p = partition_coefficients(n_top)
    lhs = QSeries([p[5 * n + 4] for n in range(trunc)], 0, trunc)
    rhs = (_euler_scaled(5, trunc) ** 5 * (euler_product(trunc) ** 6).invert()).scale(5)
    mismatch = first_difference(lhs, rhs, through=trunc)
    details = {"opening": [lhs.coefficient(i) for i in range(3)]}
    return IdentityReport("rkor", trunc, mismatch is None, mismatch, details)


def _identity_rkor_normalized(trunc):
    n_top = 5 * (trunc - 2) + 4
    p = partition_coefficients(n_top)
    tail = QSeries([p[5 * n + 4] for n in range(trunc - 1)], 1, trunc)
    lhs = _euler_scaled(5, trunc) * tail
    rhs = EtaQuotient(((5, 6), (1, -6))).expand(trunc).scale(5)
    mismatch = first_difference(lhs, rhs, through=trunc)
    return IdentityReport("rkor_normalized", trunc, mismatch is None, mismatch, {})


# Eta-quotient data for the level-11/22 identity.  The three products carry
# whole q-powers (prefactors 48/24, 72/24 and 120/24), and the identity is
# compared after clearing the single denominator 2.
_F2 = EtaQuotient(((11, 3), (22, 1), (1, -1), (2, -3)))
_F3 = EtaQuotient(((11, 1), (22, 3), (1, -3), (2, -1)))
_Z11 = EtaQuotient(((11, 12), (1, -12)))


def _identity_pn116(trunc):
    inner = 2 * trunc
    f2 = _F2.expand(inner)
    f3 = _F3.expand(inner)
    z = _Z11.expand(trunc)
    u2_f2sq = (f2 * f2).extract_progression(2, 0).truncate(trunc)
    u2_f3 = f3.extract_progression(2, 0).truncate(trunc)
    u2_f2 = f2.extract_progression(2, 0).truncate(trunc)
    f2_t = f2.truncate(trunc)
    f3_t = f3.truncate(trunc)

    n_top = 11 * (trunc - 2) + 6
    p = partition_coefficients(n_top)
    tail = QSeries([p[11 * n + 6] for n in range(trunc - 1)], 1, trunc)
    lhs = _euler_scaled(11, trunc) * tail

    # both sides doubled to keep the arithmetic integral
    rhs2 = (
        ((f3_t * f3_t).scale(2) + u2_f2sq).scale(11 ** 3)
        + (f2_t - u2_f3.scale(4)).scale(7 * 11)
        - (f3_t - u2_f2).scale(2 * 11)
        + z.scale(2 * 11 ** 4)
    )
    mismatch = first_difference(lhs.scale(2), rhs2, through=trunc)

    y_numerator = u2_f3.scale(4) - f2_t
    y_integral = all(c % 11 == 0 for c in y_numerator.coeffs)
    details = {"y_integral": y_integral}
    return IdentityReport("pn116", trunc, mismatch is None and y_integral,
                          mismatch, details)


def verify_identity(name, trunc=None):
    """Build both sides of a named identity independently and compare
    coefficientwise to the given order."""
    if name not in IDENTITY_NAMES:
        raise SeriesError(
            f"unknown identity {name!r}; valid: {', '.join(IDENTITY_NAMES)}"
        )
    if trunc is None:
        trunc = _DEFAULT_IDENTITY_TRUNC[name]
    if name == "rkor":
        return _identity_rkor(trunc)
    if name == "rkor_normalized":
        return _identity_rkor_normalized(trunc)
    return _identity_pn116(trunc)


# ---------------------------------------------------------------------------
# The level-20 eigenfunction
# ---------------------------------------------------------------------------

_X20 = EtaQuotient(((2, 1), (10, 3), (1, -3), (5, -1)))
_Y20 = EtaQuotient(((2, 2), (4, 1), (5, 1), (20, 3), (1, -5), (10, -2)))

# Weight inserted by the even-step operator.  As a q-series this is
# q^2 * CPhi_2(q) / CPhi_2(q^25): the level-20 counterpart of the ladder
# weight q * P(q)/P(q^25) = eta(25t)/eta(t).  The naive series quotient
# CPhi_2(q)/CPhi_2(q^5), read off a flat transcription, demonstrably fails
# to produce the eigenfunction; eigen_check records that computation.
_EIGEN_WEIGHT = EtaQuotient(
    ((2, 5), (25, 4), (100, 2), (1, -4), (4, -2), (50, -5))
)


@dataclass
class EigenSetup:
    """The level-20 reference functions at a fixed truncation, together
    with the weight quotient the even-step operator inserts."""

    x: QSeries
    y: QSeries
    t: QSeries
    weight: QSeries
    trunc: int

    def u_plain(self, series):
        return series.extract_progression(5, 0)

    def u_weighted(self, series):
        return (self.weight.truncate(series.trunc) * series).extract_progression(5, 0)

    def composite(self, series):
        """The two-layer operator: weighted after plain."""
        return self.u_weighted(self.u_plain(series))


def eigen_setup(out_trunc=100):
    """Build x, y, t = y + 4xy and the weight quotient at a truncation deep
    enough for two U5 layers above `out_trunc`."""
    trunc = 25 * out_trunc + 30
    x = _X20.expand(trunc)
    y = _Y20.expand(trunc)
    t = y + (x * y).scale(4)
    weight = _EIGEN_WEIGHT.expand(trunc)
    return EigenSetup(x, y, t, weight, trunc)


def naive_weight_quotient(trunc):
    """The flat series quotient CPhi_2(q)/CPhi_2(q^5), kept available so
    the detector can demonstrate that it does not fix t mod 5."""
    cphi = expand_named("frobenius2", trunc)
    cphi5 = expand_named("frobenius2", -(-trunc // 5)).substitute_power(5)
    return cphi.divide_exact(cphi5.truncate(trunc))


def composite_fixes_mod5(setup, series, through):
    """Whether the composite operator fixes the series mod 5 through the
    requested depth; returns (fixed, first_mismatch)."""
    image = setup.composite(series)
    mismatch = first_difference(
        image.reduce_mod(5), series.reduce_mod(5), through=through
    )
    return mismatch is None, mismatch


@dataclass
class EigenReport:
    trunc: int
    opening_ok: bool
    opening: list
    nonzero_mod5: bool
    fixed_mod5: bool
    first_mismatch: int | None
    naive_weight_fixes: bool | None = None

    @property
    def passed(self):
        return self.opening_ok and self.nonzero_mod5 and self.fixed_mod5

    def to_dict(self):
        return {
            "trunc": self.trunc,
            "opening_ok": self.opening_ok,
            "opening": self.opening,
            "nonzero_mod5": self.nonzero_mod5,
            "fixed_mod5": self.fixed_mod5,
            "first_mismatch": self.first_mismatch,
            "naive_weight_fixes": self.naive_weight_fixes,
        }


_EIGEN_OPENING = {2: 1, 3: 9, 4: 50, 5: 219}


def eigen_check(setup=None, out_trunc=100, check_naive_weight=True):
    """Verify that t = y + 4xy opens q^2 + 9q^3 + 50q^4 + 219q^5, is not
    zero mod 5, and is fixed mod 5 by the composite operator.  The
    detector takes nothing on faith: every claim is recomputed here,
    including the negative result for the flat weight quotient."""
    if setup is None:
        setup = eigen_setup(out_trunc)
    if setup.trunc < 25 * out_trunc:
        raise SeriesError(
            f"setup truncation {setup.trunc} too shallow for two operator "
            f"layers above q^{out_trunc}"
        )
    opening = [setup.t.coefficient(n) for n in range(2, 6)]
    opening_ok = all(
        setup.t.coefficient(n) == c for n, c in _EIGEN_OPENING.items()
    )
    nonzero = not setup.t.reduce_mod(5).is_zero()
    fixed, mismatch = composite_fixes_mod5(setup, setup.t, out_trunc)
    naive_fixes = None
    if check_naive_weight:
        depth = min(40, out_trunc)
        naive = EigenSetup(
            setup.x, setup.y, setup.t, naive_weight_quotient(setup.trunc),
            setup.trunc,
        )
        naive_fixes, _ = composite_fixes_mod5(naive, setup.t, depth)
    return EigenReport(
        setup.trunc, opening_ok, opening, nonzero, fixed, mismatch, naive_fixes
    )
