"""Special functions backing the closed-form outage expressions.

The exponential integral Ei and the (upper) incomplete gamma function are
implemented here with explicit series / continued-fraction branch selection;
``erf`` and the complete gamma function are thin wrappers over the C library
via :mod:`math`.  Everything is pure, scalar, and reentrant.

Branch map
----------
Ei(x):
    0 < x <= 40      power series  gamma_E + ln x + sum x^n/(n n!)
    x  > 40          asymptotic    (e^x/x) sum k!/x^k, truncated at the
                     smallest term (relative error < 1e-16 for x > 40)
    -1 <= x < 0      power series (alternating; no harmful cancellation here)
    x  < -1          continued fraction for E1(-x) (modified Lentz)

Incomplete gamma:
    x < a + 1        lower series for P(a, x)
    x >= a + 1       continued fraction for Q(a, x)

The switch at x = a + 1 and the positive-Ei switch at 40 follow standard
numerical practice; the negative-Ei series is restricted to |x| <= 1 because
the alternating sum loses roughly ``0.43*|x|`` decimal digits to cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EULER_GAMMA = 0.5772156649015328606

_TINY = 1e-300


@dataclass(frozen=True)
class Tolerance:
    """Iteration control for the series / continued-fraction evaluations."""

    abs_tol: float = 0.0
    rel_tol: float = 1e-15
    max_terms: int = 500

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_TOLERANCE = Tolerance()


def _ei_series(x: float, tol: Tolerance) -> float:
    total = EULER_GAMMA + math.log(abs(x))
    term = 1.0
    for n in range(1, tol.max_terms + 1):
        term *= x / n
        add = term / n
        total += add
        if abs(add) <= tol.rel_tol * abs(total) + tol.abs_tol:
            return total
    raise ArithmeticError(f"Ei series did not converge at x={x}")


def _ei_asymptotic_scaled(x: float, tol: Tolerance) -> float:
    # e^{-x} Ei(x) ~ (1/x) sum_k k!/x^k; truncate at the smallest term.
    total = 1.0
    term = 1.0
    for k in range(1, tol.max_terms + 1):
        nxt = term * k / x
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) <= tol.rel_tol * abs(total):
            break
    return total / x


def _e1_continued_fraction(y: float, tol: Tolerance) -> float:
    # E1(y) for y > 0 via the Lentz continued fraction; returns E1(y).
    b = y + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, tol.max_terms + 1):
        a = -i * i
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= tol.rel_tol:
            return h * math.exp(-y)
    raise ArithmeticError(f"E1 continued fraction did not converge at y={y}")


def exp_integral_ei(x: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Cauchy principal value of Ei(x) = int_{-inf}^x e^t/t dt, x != 0."""
    x = float(x)
    if x == 0.0:
        raise ValueError("Ei(x) has a logarithmic singularity at x = 0")
    if x > 40.0:
        if x > 709.0:
            return math.inf
        return math.exp(x) * _ei_asymptotic_scaled(x, tol)
    if x > 0.0 or x >= -1.0:
        return _ei_series(x, tol)
    return -_e1_continued_fraction(-x, tol)


def exp_integral_ei_scaled(x: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """e^{-x} Ei(x) for x > 0; stays finite where Ei itself overflows."""
    x = float(x)
    if x <= 0.0:
        raise ValueError("scaled Ei is defined here for x > 0 only")
    if x > 40.0:
        return _ei_asymptotic_scaled(x, tol)
    return math.exp(-x) * _ei_series(x, tol)


def erf(x: float) -> float:
    """Error function (odd, bounded in (-1, 1))."""
    return math.erf(float(x))


def gamma_fn(a: float) -> float:
    """Complete gamma function for a > 0."""
    if a <= 0:
        raise ValueError(f"gamma_fn requires a > 0, got {a}")
    return math.gamma(a)


def _lower_regularized_series(a: float, x: float, tol: Tolerance) -> float:
    # P(a, x) by the standard lower series, valid and fast for x < a + 1.
    if x == 0.0:
        return 0.0
    total = 1.0 / a
    term = total
    for n in range(1, tol.max_terms + 1):
        term *= x / (a + n)
        total += term
        if abs(term) <= tol.rel_tol * abs(total):
            break
    else:
        raise ArithmeticError(f"incomplete-gamma series stalled at a={a}, x={x}")
    return total * math.exp(a * math.log(x) - x - math.lgamma(a))


def _upper_regularized_cf(a: float, x: float, tol: Tolerance) -> float:
    # Q(a, x) by the Lentz continued fraction, valid for x >= a + 1.
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, tol.max_terms + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= tol.rel_tol:
            break
    else:
        raise ArithmeticError(f"incomplete-gamma CF stalled at a={a}, x={x}")
    return h * math.exp(a * math.log(x) - x - math.lgamma(a))


def gamma_lower_regularized(a: float, x: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """P(a, x) = gamma(a, x)/Gamma(a), the regularized lower incomplete gamma."""
    if a <= 0:
        raise ValueError(f"requires a > 0, got {a}")
    if x < 0:
        raise ValueError(f"requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _lower_regularized_series(a, x, tol)
    return 1.0 - _upper_regularized_cf(a, x, tol)


def gamma_upper(a: float, x: float, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Upper incomplete gamma Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt."""
    if a <= 0:
        raise ValueError(f"gamma_upper requires a > 0, got {a}")
    if x < 0:
        raise ValueError(f"gamma_upper requires x >= 0, got {x}")
    if x == 0.0:
        return math.gamma(a)
    if x < a + 1.0:
        return (1.0 - _lower_regularized_series(a, x, tol)) * math.gamma(a)
    return _upper_regularized_cf(a, x, tol) * math.gamma(a)
