"""Truncated Laurent series in a single variable with explicit truncation tracking.

A :class:`LaurentSeries` stores coefficients for every exponent from
``lowest`` up to ``order`` (the truncation order).  Exponents above ``order``
are *unknown*, never silently zero: each value represents

    sum_{k=lowest}^{order} c_k x^k  +  O(x^{order+1}).

Arithmetic propagates the truncation order conservatively.  For a product the
unknown tails contribute starting at ``val(a) + order(b) + 1`` and
``val(b) + order(a) + 1`` (``val`` = exponent of the first nonzero
coefficient), so the product is known exactly below the smaller of the two.
Reciprocals, derivatives and compositions follow the same book-keeping, and
requesting a coefficient beyond the provable order raises
:class:`~ahflow.errors.TruncationError`.

Coefficients are either exact (`fractions.Fraction`, bit-reproducible) or
64-bit floats; the two kinds never mix implicitly.  Exact series back all
identity verification in :mod:`ahflow.geometry` and :mod:`ahflow.flow`; the
float kind exists for numeric evaluation near the boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import (
    NonInvertibleSeriesError,
    SeriesKindError,
    SubstitutionError,
    TruncationError,
)

Scalar = Union[int, float, Fraction]


def _is_exact_scalar(c: Scalar) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


class LaurentSeries:
    """Immutable truncated Laurent series.

    Use :func:`from_terms`, :func:`x_series`, :func:`const_series` or the
    arithmetic operators to build instances.  ``coeffs[i]`` is the coefficient
    of ``x**(lowest + i)`` and always spans exactly ``lowest .. order``.
    """

    __slots__ = ("lowest", "coeffs", "order", "exact")

    def __init__(self, lowest: int, coeffs: Sequence[Scalar], order: int, exact: bool | None = None):
        coeffs = list(coeffs)
        if len(coeffs) != order - lowest + 1:
            raise ValueError(
                f"coefficient span {len(coeffs)} does not match exponents {lowest}..{order}"
            )
        if exact is None:
            exact = all(_is_exact_scalar(c) for c in coeffs)
        if exact:
            coeffs = [Fraction(c) for c in coeffs]
        else:
            coeffs = [float(c) for c in coeffs]
        # canonical form: drop leading zeros (they are zero by definition below
        # the lowest stored exponent anyway); an all-zero series keeps a single
        # zero coefficient at the truncation order.
        zero = Fraction(0) if exact else 0.0
        while len(coeffs) > 1 and coeffs[0] == zero:
            coeffs.pop(0)
            lowest += 1
        object.__setattr__(self, "lowest", lowest)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("LaurentSeries is immutable")

    # ------------------------------------------------------------------
    # accessors

    @property
    def zero_scalar(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def valuation(self) -> int | None:
        """Exponent of the first nonzero coefficient, or None if zero so far."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return self.lowest + i
        return None

    def _val_bound(self) -> int:
        # a lower bound on the true valuation, used by truncation book-keeping
        v = self.valuation()
        return self.order + 1 if v is None else v

    def coefficient(self, k: int) -> Scalar:
        if k > self.order:
            raise TruncationError(
                f"coefficient of x^{k} is beyond the truncation order {self.order}"
            )
        if k < self.lowest:
            return self.zero_scalar
        return self.coeffs[k - self.lowest]

    def known_exponents(self) -> range:
        return range(self.lowest, self.order + 1)

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.order:
            raise TruncationError(f"cannot extend truncation {self.order} to {order}")
        if order < self.lowest:
            return LaurentSeries(order, [self.zero_scalar], order, self.exact)
        return LaurentSeries(self.lowest, self.coeffs[: order - self.lowest + 1], order, self.exact)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by x**k (exactly)."""
        return LaurentSeries(self.lowest + k, self.coeffs, self.order + k, self.exact)

    def map_coeffs(self, fn: Callable[[Scalar], Scalar], exact: bool) -> "LaurentSeries":
        return LaurentSeries(self.lowest, [fn(c) for c in self.coeffs], self.order, exact)

    def to_float(self) -> "LaurentSeries":
        if not self.exact:
            return self
        return self.map_coeffs(float, exact=False)

    # ------------------------------------------------------------------
    # comparison / display

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.exact == other.exact
            and self.order == other.order
            and self.lowest == other.lowest
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.lowest, self.coeffs, self.order, self.exact))

    def matches(self, other: "LaurentSeries", through: int | None = None) -> bool:
        """Coefficient-wise equality on the jointly known exponent range."""
        top = min(self.order, other.order)
        if through is not None:
            top = min(top, through)
        lo = min(self.lowest, other.lowest)
        return all(self.coefficient(k) == other.coefficient(k) for k in range(lo, top + 1))

    def __repr__(self) -> str:
        parts = []
        for k in self.known_exponents():
            c = self.coefficient(k)
            if c == 0:
                continue
            if k == 0:
                parts.append(f"{c}")
            elif k == 1:
                parts.append(f"{c}*x")
            else:
                parts.append(f"{c}*x^{k}")
        body = " + ".join(parts) if parts else "0"
        return f"<{body} + O(x^{self.order + 1})>"

    # ------------------------------------------------------------------
    # arithmetic

    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            if other.exact != self.exact:
                raise SeriesKindError(
                    "mixed exact/float series; promote explicitly with .to_float()"
                )
            return other
        if _is_exact_scalar(other):
            if not self.exact:
                raise SeriesKindError("exact scalar combined with float series")
            return const_series(Fraction(other), max(self.order, 0), exact=True)
        if isinstance(other, float):
            if self.exact:
                raise SeriesKindError("float scalar combined with exact series")
            return const_series(other, max(self.order, 0), exact=False)
        return NotImplemented

    def __add__(self, other) -> "LaurentSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        lo = min(self.lowest, other.lowest)
        if lo > order:
            lo = order
        coeffs = []
        for k in range(lo, order + 1):
            a = self.coefficient(k) if k >= self.lowest else self.zero_scalar
            b = other.coefficient(k) if k >= other.lowest else other.zero_scalar
            coeffs.append(a + b)
        return LaurentSeries(lo, coeffs, order, self.exact)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.lowest, [-c for c in self.coeffs], self.order, self.exact)

    def __sub__(self, other) -> "LaurentSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentSeries":
        return (-self) + other

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries) and (
            _is_exact_scalar(other) or isinstance(other, float)
        ):
            # scalar multiple: exactness of the truncation order is preserved
            if _is_exact_scalar(other) != self.exact and other != 0:
                raise SeriesKindError("scalar kind does not match series kind")
            c = Fraction(other) if self.exact else float(other)
            return LaurentSeries(self.lowest, [c * a for a in self.coeffs], self.order, self.exact)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self._val_bound() + other.order, other._val_bound() + self.order)
        lo = self.lowest + other.lowest
        if lo > order:
            return LaurentSeries(order, [self.zero_scalar], order, self.exact)
        zero = self.zero_scalar
        out = [zero] * (order - lo + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            ka = self.lowest + i
            if ka + other.lowest > order:
                break
            for j, b in enumerate(other.coeffs):
                k = ka + other.lowest + j
                if k > order:
                    break
                if b == 0:
                    continue
                out[k - lo] += a * b
        return LaurentSeries(lo, out, order, self.exact)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentSeries":
        if not isinstance(k, int):
            raise TypeError("series powers must be integers")
        if k < 0:
            return self.reciprocal() ** (-k)
        if k == 0:
            return const_series(1 if self.exact else 1.0, self.order, exact=self.exact)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def reciprocal(self) -> "LaurentSeries":
        """Multiplicative inverse to the provable order.

        Requires a nonzero leading coefficient; the pole order negates and the
        relative accuracy (number of known terms past the leading one) is kept.
        """
        v = self.valuation()
        if v is None:
            raise NonInvertibleSeriesError("non-invertible series: all known coefficients vanish")
        rel = self.order - v  # relative order of the unit factor
        u = [self.coefficient(v + i) for i in range(rel + 1)]
        inv0 = Fraction(1, 1) / u[0] if self.exact else 1.0 / u[0]
        out = [inv0]
        for k in range(1, rel + 1):
            acc = self.zero_scalar
            for j in range(1, k + 1):
                acc += u[j] * out[k - j]
            out.append(-inv0 * acc)
        return LaurentSeries(-v, out, rel - v, self.exact)

    def __truediv__(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return self * other.reciprocal()
        if _is_exact_scalar(other):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, float):
            return self * (1.0 / other)
        return NotImplemented

    def derivative(self) -> "LaurentSeries":
        """Term-by-term d/dx; the truncation order drops by one."""
        coeffs = []
        for i, c in enumerate(self.coeffs):
            k = self.lowest + i
            coeffs.append(k * c if self.exact else float(k) * c)
        return LaurentSeries(self.lowest - 1, coeffs, self.order - 1, self.exact)

    def antiderivative(self, constant: Scalar = 0) -> "LaurentSeries":
        """Term-by-term integral; raises if a 1/x term (log) is present."""
        order = self.order + 1
        terms: dict[int, Scalar] = {}
        for i, c in enumerate(self.coeffs):
            k = self.lowest + i
            if k == -1:
                if c != 0:
                    raise ValueError("antiderivative of a 1/x term is not a Laurent series")
                continue
            terms[k + 1] = c / (k + 1) if self.exact else c / float(k + 1)
        if constant != 0:
            c0 = Fraction(constant) if self.exact else float(constant)
            terms[0] = terms.get(0, self.zero_scalar) + c0
        lo = min(terms) if terms else order
        zero = self.zero_scalar
        return LaurentSeries(lo, [terms.get(k, zero) for k in range(lo, order + 1)], order, self.exact)

    def substitute(self, inner: "LaurentSeries") -> "LaurentSeries":
        """Composition self(inner(x)) for a near-identity inner series.

        ``inner`` must have valuation 1 with unit leading coefficient (a
        change of defining function x = x'(1 + ...)).  The unknown tail of
        ``self`` then contributes at O(x^{order+1}), so the result is capped
        at ``self.order`` in addition to the per-term book-keeping.
        """
        if inner.exact != self.exact:
            raise SeriesKindError("composition with mismatched scalar kinds")
        one = Fraction(1) if self.exact else 1.0
        if inner.valuation() != 1 or inner.coefficient(1) != one:
            raise SubstitutionError(
                "inner series must be x + O(x^2) with unit leading coefficient"
            )
        cap = self.order
        acc = None
        # nonnegative exponents by ascending powers; negative via reciprocal
        pos_pow = {0: const_series(one, inner.order, exact=self.exact), 1: inner}
        inv = None

        def power(k: int) -> LaurentSeries:
            nonlocal inv
            if k >= 0:
                if k not in pos_pow:
                    pos_pow[k] = power(k - 1) * inner
                return pos_pow[k]
            if inv is None:
                inv = inner.reciprocal()
            if k == -1:
                return inv
            return power(k + 1) * inv

        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            term = power(self.lowest + i) * c
            acc = term if acc is None else acc + term
        if acc is None:
            return LaurentSeries(cap, [self.zero_scalar], cap, self.exact)
        return acc.truncate(min(acc.order, cap))

    def compositional_inverse(self) -> "LaurentSeries":
        """Inverse under composition, for a near-identity series.

        Solves s(u(x)) = x by fixed-point iteration u <- x / m(u) with
        s = x * m(x); each round doubles the matched order.
        """
        one = Fraction(1) if self.exact else 1.0
        if self.valuation() != 1 or self.coefficient(1) != one:
            raise SubstitutionError("compositional inverse needs x + O(x^2) with unit leading term")
        m = self.shift(-1)  # unit constant term
        x = x_series(self.order, exact=self.exact)
        u = x
        # the iteration gains one matched order per round (error picks up a
        # factor of x), so run it out to the truncation order
        rounds = self.order + 2
        for _ in range(rounds):
            u_next = (x * m.substitute(u).reciprocal()).truncate(min(self.order, x.order))
            if u_next == u:
                break
            u = u_next
        return u

    # ------------------------------------------------------------------
    # numeric evaluation

    def __call__(self, x0: float) -> float:
        """Evaluate the known part at a point (float arithmetic)."""
        acc = 0.0
        for k in reversed(range(self.lowest, self.order + 1)):
            acc = acc * x0 + float(self.coefficient(k))
        return acc * x0 ** self.lowest


# ----------------------------------------------------------------------
# constructors and standard expansions


def const_series(c: Scalar, order: int, exact: bool | None = None) -> LaurentSeries:
    if exact is None:
        exact = _is_exact_scalar(c)
    if order < 0:
        raise ValueError("constant series needs truncation order >= 0")
    zero = Fraction(0) if exact else 0.0
    return LaurentSeries(0, [c] + [zero] * order, order, exact)


def x_series(order: int, exact: bool = True) -> LaurentSeries:
    """The coordinate x, known through the given order."""
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return LaurentSeries(1, [one] + [zero] * (order - 1), order, exact)


def monomial(k: int, c: Scalar, order: int, exact: bool | None = None) -> LaurentSeries:
    if exact is None:
        exact = _is_exact_scalar(c)
    zero = Fraction(0) if exact else 0.0
    if order < k:
        raise ValueError("monomial beyond requested truncation order")
    return LaurentSeries(k, [c] + [zero] * (order - k), order, exact)


def from_terms(terms: dict[int, Scalar], order: int, exact: bool = True) -> LaurentSeries:
    if not terms:
        zero = Fraction(0) if exact else 0.0
        return LaurentSeries(order, [zero], order, exact)
    lo = min(terms)
    if max(terms) > order:
        raise ValueError("term beyond truncation order")
    zero = Fraction(0) if exact else 0.0
    coeffs = [terms.get(k, zero) for k in range(lo, order + 1)]
    return LaurentSeries(lo, coeffs, order, exact)


def sinh_series(order: int, exact: bool = True) -> LaurentSeries:
    terms: dict[int, Scalar] = {}
    k = 1
    while k <= order:
        terms[k] = Fraction(1, math.factorial(k)) if exact else 1.0 / math.factorial(k)
        k += 2
    return from_terms(terms, order, exact)


def cosh_series(order: int, exact: bool = True) -> LaurentSeries:
    terms: dict[int, Scalar] = {}
    k = 0
    while k <= order:
        terms[k] = Fraction(1, math.factorial(k)) if exact else 1.0 / math.factorial(k)
        k += 2
    return from_terms(terms, order, exact)


def csch2_series(order: int, exact: bool = True) -> LaurentSeries:
    """1/sinh(x)^2 as a Laurent series (pole of order two)."""
    s = sinh_series(order + 3, exact=exact)
    return (s * s).reciprocal().truncate(order)


def exp_of(t: LaurentSeries) -> LaurentSeries:
    """exp of a series with positive valuation (finite sum to the truncation)."""
    v = t._val_bound()
    if v < 1:
        raise SubstitutionError("exp_of needs a series vanishing at 0")
    one = Fraction(1) if t.exact else 1.0
    acc = const_series(one, t.order, exact=t.exact)
    term = const_series(one, t.order, exact=t.exact)
    jmax = t.order // max(v, 1) + 1
    for j in range(1, jmax + 1):
        term = term * t
        fct = Fraction(1, math.factorial(j)) if t.exact else 1.0 / math.factorial(j)
        acc = acc + term * fct
    return acc


def binomial_series(alpha: Fraction, t: LaurentSeries) -> LaurentSeries:
    """(1 + t)^alpha for a series t with positive valuation and rational alpha."""
    v = t._val_bound()
    if v < 1:
        raise SubstitutionError("binomial_series needs a series vanishing at 0")
    alpha = Fraction(alpha)
    one = Fraction(1) if t.exact else 1.0
    acc = const_series(one, t.order, exact=t.exact)
    term = const_series(one, t.order, exact=t.exact)
    coeff = Fraction(1)
    jmax = t.order // max(v, 1) + 1
    for j in range(1, jmax + 1):
        coeff = coeff * (alpha - (j - 1)) / j
        term = term * t
        c = coeff if t.exact else float(coeff)
        acc = acc + term * c
    return acc


# module-level operation aliases matching the published interface

def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    return a * b


def series_reciprocal(a: LaurentSeries) -> LaurentSeries:
    return a.reciprocal()


def series_derivative(a: LaurentSeries) -> LaurentSeries:
    return a.derivative()


def series_substitute(a: LaurentSeries, sub: LaurentSeries) -> LaurentSeries:
    return a.substitute(sub)
