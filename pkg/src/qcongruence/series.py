"""Exact truncated power series in q over arbitrary-precision integers.

A :class:`QSeries` stores a dense coefficient window ``[offset, trunc)``.
Coefficients below ``offset`` are exactly zero, coefficients at ``trunc``
and above are unknown.  Every operation is exact and tracks the tightest
sound truncation of its result; nothing in this module ever rounds.

:class:`QSeriesRat` is the same machine over exact rationals.  It exists
for linear solves and polynomial decompositions; the generating-function
catalog stays integral.
"""
from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "QSeries",
    "QSeriesRat",
    "SeriesError",
    "TruncationError",
    "NotInvertibleError",
    "first_difference",
]


class SeriesError(ValueError):
    """Base class for kernel arithmetic errors."""


class TruncationError(SeriesError):
    """A comparison or operation needed coefficients past the known window."""


class NotInvertibleError(SeriesError):
    """The leading coefficient is not a unit in the coefficient ring."""


def _as_int(value):
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        raise SeriesError(f"non-integer coefficient {value} in integer series")
    raise SeriesError(f"unsupported coefficient type {type(value).__name__!r}")


def _as_fraction(value):
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise SeriesError(f"unsupported coefficient type {type(value).__name__!r}")


# ---------------------------------------------------------------------------
# Convolution cores.  Schoolbook is the baseline; a Kronecker-substitution
# path (pack coefficients into one big integer, multiply once, unpack) is
# used for large dense integer operands.  Both are bit-exact; the packed
# path is cross-checked against schoolbook in the property tests.
# ---------------------------------------------------------------------------

_KRON_MIN_LEN = 128
_KRON_MIN_NNZ = 48
_KRON_MAX_BYTES = 4 << 20


def _nnz(coeffs):
    n = 0
    for c in coeffs:
        if c:
            n += 1
    return n


def _conv_schoolbook(ca, cb, n_out):
    if _nnz(ca) > _nnz(cb):
        ca, cb = cb, ca
    out = [0] * n_out
    for i, ci in enumerate(ca):
        if not ci or i >= n_out:
            continue
        lim = n_out - i
        row = cb if len(cb) <= lim else cb[:lim]
        k = i
        if ci == 1:
            for bj in row:
                out[k] += bj
                k += 1
        elif ci == -1:
            for bj in row:
                out[k] -= bj
                k += 1
        else:
            for bj in row:
                out[k] += ci * bj
                k += 1
    return out


def _pack(coeffs, width):
    buf = bytearray(width * len(coeffs))
    for i, c in enumerate(coeffs):
        if c:
            buf[i * width:(i + 1) * width] = c.to_bytes(width, "little")
    return int.from_bytes(bytes(buf), "little")


def _unpack(value, width, count):
    nbytes = max(width * count, (value.bit_length() + 7) // 8)
    raw = value.to_bytes(nbytes, "little")
    return [
        int.from_bytes(raw[i * width:(i + 1) * width], "little")
        for i in range(count)
    ]


def _conv_kronecker(ca, cb, n_out):
    ma = max((abs(c) for c in ca), default=0)
    mb = max((abs(c) for c in cb), default=0)
    if ma == 0 or mb == 0:
        return [0] * n_out
    bound = 2 * ma * mb * min(len(ca), len(cb)) + 1
    width = (bound.bit_length() + 7) // 8 + 1
    if width * max(len(ca), len(cb)) > _KRON_MAX_BYTES:
        return _conv_schoolbook(ca, cb, n_out)
    apos = [c if c > 0 else 0 for c in ca]
    aneg = [-c if c < 0 else 0 for c in ca]
    bpos = [c if c > 0 else 0 for c in cb]
    bneg = [-c if c < 0 else 0 for c in cb]
    ap, an = _pack(apos, width), _pack(aneg, width)
    bp, bn = _pack(bpos, width), _pack(bneg, width)
    plus = ap * bp + an * bn
    minus = ap * bn + an * bp
    pos = _unpack(plus, width, n_out)
    neg = _unpack(minus, width, n_out)
    return [p - n for p, n in zip(pos, neg)]


def _conv(ca, cb, n_out, integral):
    if (
        integral
        and n_out >= _KRON_MIN_LEN
        and min(_nnz(ca), _nnz(cb)) >= _KRON_MIN_NNZ
    ):
        return _conv_kronecker(ca, cb, n_out)
    return _conv_schoolbook(ca, cb, n_out)


def _invert_unit_recurrence(u, length, lead):
    """Reciprocal of 1 + u[1]q + ... (lead divided out) via the standard
    back-substitution, skipping zero terms of u.  O(length * nnz(u))."""
    nz = [(j, u[j]) for j in range(1, min(len(u), length)) if u[j]]
    one = u[0] // u[0] if isinstance(u[0], int) else Fraction(1)
    v = [0] * length
    v[0] = one / lead if isinstance(lead, Fraction) else lead  # int lead is +-1
    for n in range(1, length):
        s = 0
        for j, uj in nz:
            if j > n:
                break
            if uj == 1:
                s += v[n - j]
            elif uj == -1:
                s -= v[n - j]
            else:
                s += uj * v[n - j]
        if isinstance(lead, Fraction):
            v[n] = -s / lead
        else:
            v[n] = -s if lead == 1 else s
    return v


def _invert_unit_newton(u, length):
    """Reciprocal of a unit series with u[0] == 1 by Newton doubling.
    Each step costs two truncated multiplications."""
    v = [1]
    cur = 1
    while cur < length:
        nxt = min(2 * cur, length)
        w = _conv(u[:nxt], v, nxt, True)
        w[0] = 2 - w[0]
        for i in range(1, nxt):
            w[i] = -w[i]
        v = _conv(v, w, nxt, True)
        cur = nxt
    return v


class QSeries:
    """Truncated formal power series with exact big-integer coefficients.

    Immutable by convention: no method mutates ``coeffs`` after
    construction, so values are safe to share across threads.
    """

    __slots__ = ("offset", "coeffs", "trunc")

    _coerce = staticmethod(_as_int)
    _integral = True

    def __init__(self, coeffs, offset=0, trunc=None):
        coerce = self._coerce
        coeffs = [coerce(c) for c in coeffs]
        if trunc is None:
            trunc = offset + len(coeffs)
        if trunc > offset + len(coeffs):
            # an explicit wider window asserts the remaining coefficients
            # are known to vanish
            coeffs = coeffs + [coerce(0)] * (trunc - offset - len(coeffs))
        if trunc != offset + len(coeffs):
            raise SeriesError(
                f"window mismatch: {len(coeffs)} coefficients from {offset} "
                f"cannot reach truncation {trunc}"
            )
        # leading stored zeros carry no information; drop them
        lead = 0
        while lead < len(coeffs) - 1 and coeffs[lead] == 0:
            lead += 1
        if lead:
            coeffs = coeffs[lead:]
            offset += lead
        if trunc <= offset:
            raise SeriesError(f"empty window: trunc {trunc} <= offset {offset}")
        self.coeffs = coeffs
        self.offset = offset
        self.trunc = trunc

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, trunc=1):
        return cls([0], trunc - 1, trunc)

    @classmethod
    def one(cls, trunc=1):
        return cls([1] + [0] * (trunc - 1), 0, trunc)

    @classmethod
    def monomial(cls, n, trunc=None, coefficient=1):
        if trunc is None:
            trunc = n + 1
        if trunc <= n:
            raise SeriesError(f"truncation {trunc} does not include q^{n}")
        return cls([coefficient] + [0] * (trunc - n - 1), n, trunc)

    @classmethod
    def from_terms(cls, terms, trunc):
        if terms:
            offset = min(terms)
        else:
            offset = trunc - 1
        coeffs = [0] * (trunc - offset)
        for n, c in terms.items():
            if n >= trunc:
                raise SeriesError(f"term q^{n} at or past truncation {trunc}")
            coeffs[n - offset] = c
        return cls(coeffs, offset, trunc)

    # -- inspection --------------------------------------------------------

    def coefficient(self, n):
        """Exact coefficient of q^n; defined for every n < trunc."""
        if n >= self.trunc:
            raise SeriesError(
                f"coefficient of q^{n} requested, but the series is only "
                f"defined for exponents < {self.trunc}"
            )
        if n < self.offset:
            return 0
        return self.coeffs[n - self.offset]

    def effective_order(self):
        """Smallest exponent with a nonzero coefficient, or None if the
        series is zero on its whole window."""
        for i, c in enumerate(self.coeffs):
            if c:
                return self.offset + i
        return None

    def is_zero(self):
        return self.effective_order() is None

    def terms(self):
        return [
            (self.offset + i, c) for i, c in enumerate(self.coeffs) if c
        ]

    def nnz(self):
        return _nnz(self.coeffs)

    def truncate(self, trunc):
        """Shrink the known window.  Raising the truncation would claim
        unknown coefficients and is refused."""
        if trunc > self.trunc:
            raise TruncationError(
                f"cannot extend truncation {self.trunc} to {trunc}"
            )
        if trunc <= self.offset:
            return type(self).zero(trunc)
        return type(self)(self.coeffs[: trunc - self.offset], self.offset, trunc)

    def to_rational(self):
        return QSeriesRat(self.coeffs, self.offset, self.trunc)

    def to_integer(self):
        return QSeries(self.coeffs, self.offset, self.trunc)

    def is_integral(self):
        return all(
            isinstance(c, int) or c.denominator == 1 for c in self.coeffs
        )

    # -- comparison --------------------------------------------------------

    def agrees_with(self, other, through=None):
        """Coefficientwise agreement on the common window.

        ``through``: required comparison depth (exclusive); if the common
        truncation falls short the comparison is an error, never a pass.
        """
        other = self._promote(other)
        t = min(self.trunc, other.trunc)
        if through is not None and t < through:
            raise TruncationError(
                f"comparison through q^{through} requested but operands are "
                f"only defined below q^{t}"
            )
        lo = min(self.offset, other.offset)
        for n in range(lo, t):
            if self.coefficient(n) != other.coefficient(n):
                return False
        return True

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, QSeries):
            other = self._promote(other)
        else:
            return NotImplemented
        t = min(self.trunc, other.trunc)
        orders = [s.effective_order() for s in (self, other)]
        for o in orders:
            # a nonzero series whose content lies past the window would make
            # the comparison vacuous; refuse rather than silently pass
            if o is not None and o >= t:
                raise TruncationError(
                    f"common truncation q^{t} sees no nonzero coefficient of "
                    f"one operand (first at q^{o})"
                )
        return self.agrees_with(other)

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def _promote(self, other):
        if isinstance(other, QSeries):
            if isinstance(other, QSeriesRat) and not isinstance(self, QSeriesRat):
                return other
            if isinstance(self, QSeriesRat) and not isinstance(other, QSeriesRat):
                return other.to_rational()
            return other
        if isinstance(other, (int, Fraction)):
            cls = type(self)
            if isinstance(other, Fraction) and other.denominator != 1:
                cls = QSeriesRat
            return cls([other] + [0] * (self.trunc - self.offset - 1),
                       0, self.trunc - self.offset)
        raise SeriesError(f"cannot combine series with {type(other).__name__!r}")

    def _wrap(self, other, coeffs, offset, trunc):
        cls = QSeriesRat if isinstance(self, QSeriesRat) or isinstance(other, QSeriesRat) else QSeries
        return cls(coeffs, offset, trunc)

    def __add__(self, other):
        other = self._promote(other)
        trunc = min(self.trunc, other.trunc)
        offset = min(self.offset, other.offset)
        if trunc <= offset:
            return self._wrap(other, [0], trunc - 1, trunc)
        out = [0] * (trunc - offset)
        for src in (self, other):
            lo = max(src.offset, offset)
            hi = min(src.trunc, trunc)
            for n in range(lo, hi):
                out[n - offset] += src.coeffs[n - src.offset]
        return self._wrap(other, out, offset, trunc)

    def __neg__(self):
        return type(self)([-c for c in self.coeffs], self.offset, self.trunc)

    def __sub__(self, other):
        other = self._promote(other)
        return self + (-other)

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        """Multiply by an exact scalar; a non-integer Fraction promotes an
        integer series to its rational counterpart."""
        cls = type(self)
        if isinstance(c, Fraction) and c.denominator != 1 and not isinstance(self, QSeriesRat):
            cls = QSeriesRat
        return cls([c * x for x in self.coeffs], self.offset, self.trunc)

    def shift(self, k):
        """Multiply by q^k (k may be negative)."""
        return type(self)(self.coeffs, self.offset + k, self.trunc + k)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._promote(other)
        offset = self.offset + other.offset
        trunc = min(self.trunc + other.offset, other.trunc + self.offset)
        n_out = trunc - offset
        integral = not (isinstance(self, QSeriesRat) or isinstance(other, QSeriesRat))
        out = _conv(self.coeffs, other.coeffs, n_out, integral)
        return self._wrap(other, out, offset, trunc)

    __rmul__ = __mul__

    def _unit_lead(self):
        order = self.effective_order()
        if order is None:
            raise NotInvertibleError("the zero series is not invertible")
        lead = self.coeffs[order - self.offset]
        if self._integral and lead not in (1, -1):
            raise NotInvertibleError(
                f"leading coefficient {lead} is not invertible over the "
                f"integers (must be +1 or -1)"
            )
        return order, lead

    def invert(self):
        """Multiplicative inverse: mul(a, a.invert()) is the unit monomial
        to truncation.  Over the integers the leading coefficient must be
        a unit."""
        order, lead = self._unit_lead()
        length = self.trunc - order
        u = self.coeffs[order - self.offset:]
        # Newton doubling beats the O(length * nnz) recurrence only for
        # genuinely dense inputs where the packed multiplications apply
        if (
            self._integral
            and length >= 256
            and _nnz(u) >= max(64, length // 8)
        ):
            if lead == 1:
                v = _invert_unit_newton(u, length)
            else:
                v = _invert_unit_newton([-c for c in u], length)
                v = [-c for c in v]
        else:
            v = _invert_unit_recurrence(u, length, lead if self._integral else Fraction(lead))
        return type(self)(v, -order, self.trunc - 2 * order)

    def divide_exact(self, other):
        """Exact quotient self / other.  Over the integers ``other`` must
        have unit leading coefficient, which makes the division exact."""
        other = self._promote(other)
        if isinstance(other, QSeriesRat) and not isinstance(self, QSeriesRat):
            return self.to_rational().divide_exact(other)
        order, lead = other._unit_lead()
        b = other.coeffs[order - other.offset:]
        offset = self.offset - order
        trunc = min(self.trunc - order, other.trunc - 2 * order + self.offset)
        n_out = trunc - offset
        if n_out <= 0:
            return self._wrap(other, [0], trunc - 1, trunc)
        if other._integral and n_out >= 256 and _nnz(b) >= max(64, n_out // 8):
            return self * other.invert()
        nz = [(j, b[j]) for j in range(1, min(len(b), n_out)) if b[j]]
        a = self.coeffs
        out = [0] * n_out
        rational = isinstance(self, QSeriesRat) or isinstance(other, QSeriesRat)
        for n in range(n_out):
            s = a[n] if n < len(a) else 0
            for j, bj in nz:
                if j > n:
                    break
                if bj == 1:
                    s -= out[n - j]
                elif bj == -1:
                    s += out[n - j]
                else:
                    s -= bj * out[n - j]
            if rational:
                out[n] = Fraction(s) / lead
            else:
                out[n] = s if lead == 1 else -s
        return self._wrap(other, out, offset, trunc)

    def __pow__(self, k):
        if not isinstance(k, int):
            raise SeriesError("series exponent must be an integer")
        if k < 0:
            return self.invert() ** (-k)
        result = type(self).one(self.trunc - self.offset)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def pow(self, k):
        return self ** k

    # -- reindexing --------------------------------------------------------

    def substitute_power(self, k):
        """q -> q^k.  Exponents scale by k; the window scales to k*trunc."""
        if k < 1:
            raise SeriesError(f"substitution power must be >= 1, got {k}")
        if k == 1:
            return self
        offset = k * self.offset
        trunc = k * self.trunc
        out = [0] * (trunc - offset)
        for i, c in enumerate(self.coeffs):
            if c:
                out[k * i] = c
        return type(self)(out, offset, trunc)

    def extract_progression(self, m, r):
        """Sum of a(mn + r) q^n over all defined indices."""
        if m < 1 or not 0 <= r < m:
            raise SeriesError(f"invalid progression ({m}, {r})")
        trunc = -(-(self.trunc - r) // m)
        start = -(-(self.offset - r) // m)
        if start >= trunc:
            return type(self).zero(trunc)
        coeffs = [
            self.coeffs[m * n + r - self.offset] for n in range(start, trunc)
        ]
        return type(self)(coeffs, start, trunc)

    # -- modular views -----------------------------------------------------

    def reduce_mod(self, modulus):
        """Coefficients reduced to canonical representatives in [0, modulus)."""
        if modulus < 2:
            raise SeriesError(f"modulus must be >= 2, got {modulus}")
        if not self._integral:
            raise SeriesError("modular reduction is defined on integer series")
        return type(self)([c % modulus for c in self.coeffs], self.offset, self.trunc)

    def series_valuation(self, p):
        """Minimum p-adic valuation over the stored coefficients, or
        math.inf when every stored coefficient vanishes.

        This is a truncation-relative lower-bound witness for the
        underlying series, not a statement about coefficients past the
        window.
        """
        if p < 2:
            raise SeriesError(f"valuation prime must be >= 2, got {p}")
        if not self._integral:
            raise SeriesError("series valuation is defined on integer series")
        best = math.inf
        for c in self.coeffs:
            if not c:
                continue
            v = 0
            while c % p == 0:
                c //= p
                v += 1
                if v >= best:
                    break
            if v < best:
                best = v
                if best == 0:
                    return 0
        return best

    # -- display -----------------------------------------------------------

    def __repr__(self):
        parts = []
        shown = 0
        for n, c in self.terms():
            if shown == 6:
                parts.append("...")
                break
            if n == 0:
                parts.append(f"{c}")
            elif n == 1:
                parts.append(f"{c}*q")
            else:
                parts.append(f"{c}*q^{n}")
            shown += 1
        body = " + ".join(parts) if parts else "0"
        return f"{type(self).__name__}({body} + O(q^{self.trunc}))"


class QSeriesRat(QSeries):
    """Truncated power series with exact rational coefficients."""

    __slots__ = ()

    _coerce = staticmethod(_as_fraction)
    _integral = False

    def to_integer(self):
        if not self.is_integral():
            raise SeriesError("series has non-integer coefficients")
        return QSeries([int(c) for c in self.coeffs], self.offset, self.trunc)


def first_difference(a, b, through=None):
    """Smallest exponent below the common truncation where the two series
    disagree, or None if they agree everywhere on the common window."""
    t = min(a.trunc, b.trunc)
    if through is not None:
        if t < through:
            raise TruncationError(
                f"difference scan through q^{through} needs window q^{t}"
            )
        t = through
    lo = min(a.offset, b.offset)
    for n in range(lo, t):
        if a.coefficient(n) != b.coefficient(n):
            return n
    return None
