"""Construction of the named generating functions.

Everything here is built from three primitives: the Euler product
prod(1 - q^m) in its sparse pentagonal-number form, eta-quotient products
assembled from scaled Euler products, and divisor-sum Eisenstein series.
A brute-force partition enumerator doubles as the independent oracle for
the catalog.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from functools import lru_cache

from .series import QSeries, SeriesError

__all__ = [
    "EtaQuotient",
    "BudgetError",
    "euler_product",
    "euler_product_direct",
    "partition_coefficients",
    "partition_series",
    "expand_eta_quotient",
    "euler_power_product",
    "eisenstein",
    "expand_named",
    "catalog_names",
    "brute_force_count",
]

BRUTE_FORCE_LIMIT = 80


class BudgetError(RuntimeError):
    """A computation would exceed the configured coefficient budget."""


# ---------------------------------------------------------------------------
# Euler product and the partition numbers
# ---------------------------------------------------------------------------

def euler_product(trunc):
    """prod_{m>=1} (1 - q^m) to the given order, via the pentagonal-number
    expansion: sum_k (-1)^k q^{k(3k-1)/2} over all integers k.

    The classical sparse form is used for speed; the tests anchor it to
    the literal product, so the pentagonal identity is verified rather
    than assumed.
    """
    if trunc < 1:
        raise SeriesError(f"truncation must be >= 1, got {trunc}")
    coeffs = [0] * trunc
    coeffs[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 >= trunc:
            break
        sign = -1 if k % 2 else 1
        coeffs[g1] = sign
        g2 = g1 + k
        if g2 < trunc:
            coeffs[g2] = sign
        k += 1
    return QSeries(coeffs, 0, trunc)


def euler_product_direct(trunc):
    """prod (1 - q^m) by literal factor-by-factor multiplication.

    Quadratic and deliberately naive: this is the oracle for
    :func:`euler_product`.
    """
    result = QSeries.one(trunc)
    for m in range(1, trunc):
        factor = QSeries.from_terms({0: 1, m: -1}, trunc)
        result = result * factor
    return result


_partition_cache = [1]
_partition_lock = threading.Lock()


def partition_coefficients(n_max, budget=None):
    """p(0), ..., p(n_max) by the pentagonal-number recurrence, with an
    incrementally extended shared cache."""
    if n_max < 0:
        raise SeriesError(f"partition index must be >= 0, got {n_max}")
    if budget is not None and n_max > budget:
        raise BudgetError(
            f"partition coefficients through {n_max} exceed budget {budget}"
        )
    with _partition_lock:
        cache = _partition_cache
        for n in range(len(cache), n_max + 1):
            total = 0
            k = 1
            while True:
                g1 = n - k * (3 * k - 1) // 2
                if g1 < 0:
                    break
                s = cache[g1]
                g2 = g1 - k
                if g2 >= 0:
                    s += cache[g2]
                if k % 2:
                    total += s
                else:
                    total -= s
                k += 1
            cache.append(total)
        return cache[: n_max + 1]


def partition_series(trunc, budget=None):
    """The generating function sum p(n) q^n to the given order."""
    return QSeries(partition_coefficients(trunc - 1, budget), 0, trunc)


# ---------------------------------------------------------------------------
# Eta quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EtaQuotient:
    """A finite product of scaled eta factors.

    ``factors`` lists (scale, exponent) pairs for eta(scale * tau)^exponent.
    ``prefactor24`` is the numerator of the leading q-power in 24ths; it is
    recomputed from the factors and must match when supplied explicitly.
    Expansion into an integer q-series is permitted only when the total
    q-power is a whole number.
    """

    factors: tuple
    prefactor24: int = field(default=None)

    def __post_init__(self):
        factors = tuple((int(s), int(e)) for s, e in self.factors)
        for s, _ in factors:
            if s < 1:
                raise SeriesError(f"eta factor scale must be >= 1, got {s}")
        object.__setattr__(self, "factors", factors)
        computed = sum(s * e for s, e in factors)
        if self.prefactor24 is None:
            object.__setattr__(self, "prefactor24", computed)
        elif self.prefactor24 != computed:
            raise SeriesError(
                f"stored prefactor {self.prefactor24}/24 does not match the "
                f"factors (recomputed {computed}/24)"
            )

    def is_integral(self, qshift=0):
        return (24 * qshift + self.prefactor24) % 24 == 0

    def expand(self, trunc, qshift=0):
        return expand_eta_quotient(self, trunc, qshift)


def euler_power_product(powers, trunc):
    """prod_s prod_m (1 - q^{s m})^{powers[s]} to the given order.

    Positive powers are multiplied in via the sparse pentagonal series;
    negative powers are divided out one at a time (exact over the
    integers because every factor has unit leading coefficient).
    """
    result = QSeries.one(trunc)
    items = sorted(powers.items())
    for scale, exponent in items:
        if exponent <= 0:
            continue
        base = euler_product(-(-trunc // scale)).substitute_power(scale).truncate(trunc)
        result = result * base ** exponent
    for scale, exponent in items:
        if exponent >= 0:
            continue
        base = euler_product(-(-trunc // scale)).substitute_power(scale).truncate(trunc)
        for _ in range(-exponent):
            result = result.divide_exact(base)
    return result


def expand_eta_quotient(quotient, trunc, qshift=0):
    """Integer q-expansion q^{qshift + prefactor24/24} * prod factors.

    The fractional eta prefactors must cancel to a whole power of q;
    otherwise the quotient has no integer series and the call fails.
    """
    if not quotient.is_integral(qshift):
        raise SeriesError(
            f"fractional q-power does not cancel: prefactor "
            f"{24 * qshift + quotient.prefactor24}/24"
        )
    shift = qshift + quotient.prefactor24 // 24
    powers = {}
    for s, e in quotient.factors:
        powers[s] = powers.get(s, 0) + e
    product = euler_power_product(powers, trunc - shift)
    return product.shift(shift)


# ---------------------------------------------------------------------------
# Eisenstein series
# ---------------------------------------------------------------------------

def _divisor_power_sums(trunc, power):
    sums = [0] * trunc
    for d in range(1, trunc):
        dp = d ** power
        for m in range(d, trunc, d):
            sums[m] += dp
    return sums


def eisenstein(kind, trunc):
    """Normalized Eisenstein series by divisor sums.

    E2 = 1 - 24 sum sigma_1(n) q^n, E4 = 1 + 240 sum sigma_3(n) q^n.
    """
    if trunc < 1:
        raise SeriesError(f"truncation must be >= 1, got {trunc}")
    if kind == "E2":
        sums = _divisor_power_sums(trunc, 1)
        coeffs = [-24 * s for s in sums]
    elif kind == "E4":
        sums = _divisor_power_sums(trunc, 3)
        coeffs = [240 * s for s in sums]
    else:
        raise SeriesError(f"unknown Eisenstein kind {kind!r} (expected E2 or E4)")
    coeffs[0] = 1
    return QSeries(coeffs, 0, trunc)


# ---------------------------------------------------------------------------
# The catalog
# ---------------------------------------------------------------------------

_PARAM_NAME = re.compile(r"^(colored|elongated)\((\d+)\)$")


def _build_partition(trunc):
    return partition_series(trunc)


def _build_colored(k, trunc):
    if k == 1:
        return partition_series(trunc)
    return euler_power_product({1: -k}, trunc)


def _build_distinct(trunc):
    return euler_power_product({2: 1, 1: -1}, trunc)


def _build_elongated(k, trunc):
    return euler_power_product({2: k, 1: -(3 * k + 1)}, trunc)


def _build_frobenius2(trunc):
    return euler_power_product({2: 5, 1: -4, 4: -2}, trunc)


def _build_wangyang(trunc):
    e2 = eisenstein("E2", trunc)
    e2_double = eisenstein("E2", -(-trunc // 2)).substitute_power(2).truncate(trunc)
    numerator = e2_double.scale(2) - e2
    return numerator.divide_exact(
        euler_product(-(-trunc // 2)).substitute_power(2).truncate(trunc)
    )


def _build_jinvariant(trunc):
    inner = trunc + 1
    e4 = eisenstein("E4", inner)
    discriminant = (euler_product(inner) ** 24).shift(1)
    return (e4 ** 3).divide_exact(discriminant).truncate(trunc)


def _build_mock_omega(trunc):
    # q*omega(q): term n opens at exponent 2n^2 + 2n + 1, so later terms
    # fall entirely past the window -- an exact cutoff, not an approximation
    total = QSeries.zero(trunc)
    denominator = QSeries.one(trunc)
    n = 0
    while True:
        opening = 2 * n * n + 2 * n + 1
        if opening >= trunc:
            break
        odd_factor = QSeries.from_terms({0: 1, 2 * n + 1: -1}, trunc)
        denominator = denominator * odd_factor * odd_factor
        term = QSeries.one(trunc - opening).divide_exact(
            denominator.truncate(trunc - opening)
        )
        total = total + term.shift(opening)
        n += 1
    return total


def catalog_names():
    return [
        "partition",
        "colored(k)",
        "distinct",
        "elongated(k)",
        "frobenius2",
        "wangyang",
        "jinvariant",
        "mock_omega",
    ]


@lru_cache(maxsize=64)
def _expand_cached(name, trunc):
    if name == "partition":
        return _build_partition(trunc)
    if name == "distinct":
        return _build_distinct(trunc)
    if name == "frobenius2":
        return _build_frobenius2(trunc)
    if name == "wangyang":
        return _build_wangyang(trunc)
    if name == "jinvariant":
        return _build_jinvariant(trunc)
    if name == "mock_omega":
        return _build_mock_omega(trunc)
    match = _PARAM_NAME.match(name)
    if match:
        kind, k = match.group(1), int(match.group(2))
        if kind == "colored":
            return _build_colored(k, trunc)
        return _build_elongated(k, trunc)
    raise SeriesError(
        f"unknown series name {name!r}; valid names: {', '.join(catalog_names())}"
    )


def expand_named(name, trunc):
    """Expand a catalog entry to the given order.

    Results are cached and immutable, so repeated requests are cheap and
    safe to share across threads.
    """
    if trunc < 1:
        raise SeriesError(f"truncation must be >= 1, got {trunc}")
    return _expand_cached(name, trunc)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def _partitions(n, max_part):
    if n == 0:
        yield ()
        return
    for part in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def _pred_all(parts):
    return True


def _pred_distinct(parts):
    return len(set(parts)) == len(parts)


def _pred_omega(parts):
    # all odd parts less than twice the smallest part
    smallest = parts[-1]
    return all(p < 2 * smallest for p in parts if p % 2)


_PREDICATES = {"all": _pred_all, "distinct": _pred_distinct, "omega": _pred_omega}


def brute_force_count(n, predicate="all"):
    """Count partitions of n satisfying the predicate by explicit
    enumeration.  This is the independent oracle for the catalog, so it
    deliberately shares nothing with the generating-function machinery.
    """
    if n < 0:
        return 0
    if n > BRUTE_FORCE_LIMIT:
        raise SeriesError(
            f"brute-force enumeration is guarded at n <= {BRUTE_FORCE_LIMIT}"
        )
    if predicate not in _PREDICATES:
        raise SeriesError(
            f"unknown predicate {predicate!r}; expected one of {sorted(_PREDICATES)}"
        )
    if n == 0:
        return 1
    check = _PREDICATES[predicate]
    return sum(1 for parts in _partitions(n, n) if check(parts))
