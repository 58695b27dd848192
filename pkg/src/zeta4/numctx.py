"""Precision contexts, exact rationals and Bernoulli numbers.

Every numeric routine in the package takes a :class:`PrecisionContext`.  The
context owns a private ``mpmath`` context, so precision is never read from
or written to mpmath's global state and contexts can be shared freely
between threads.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import mpmath

from .errors import UsageError

# Semantic aliases used in annotations across the package.
HPReal = mpmath.mpf
ExactRational = Fraction
ExactInteger = int

MIN_DIGITS = 10
MAX_DIGITS = 10000
MIN_GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionContext:
    digits: int
    guard_digits: int
    mp: mpmath.ctx_mp.MPContext = field(repr=False, compare=False)
    pi: HPReal = field(repr=False, compare=False)
    ln2: HPReal = field(repr=False, compare=False)

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard_digits

    @property
    def prec(self) -> int:
        """Working precision in bits."""
        return self.mp.prec

    @property
    def eps(self) -> HPReal:
        """One unit in the last working decimal digit."""
        return self.mp.mpf(10) ** (-self.working_digits)

    def mpf(self, x) -> HPReal:
        """Convert ints, strings, floats, Fractions or mpfs to a working-precision real."""
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def tolerance(self, slack_digits: int) -> HPReal:
        """``10**-(digits - slack_digits)``."""
        return self.mp.mpf(10) ** (slack_digits - self.digits)

    def nstr(self, x, digits: int | None = None) -> str:
        return self.mp.nstr(x, digits or self.digits)


def default_guard_digits(digits: int) -> int:
    return max(MIN_GUARD_DIGITS, digits // 10)


@lru_cache(maxsize=64)
def make_context(digits: int, guard_digits: int | None = None) -> PrecisionContext:
    """Build an immutable precision context for ``digits`` decimal digits.

    ``guard_digits`` defaults to ``max(10, digits // 10)``.  Contexts are
    cached, so equal requests return the same object.
    """
    if isinstance(digits, bool) or not isinstance(digits, int):
        raise UsageError(f"digits must be an integer, got {digits!r}")
    if not MIN_DIGITS <= digits <= MAX_DIGITS:
        raise UsageError(f"digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {digits}")
    if guard_digits is None:
        guard_digits = default_guard_digits(digits)
    if guard_digits < MIN_GUARD_DIGITS:
        raise UsageError(f"guard_digits must be >= {MIN_GUARD_DIGITS}, got {guard_digits}")
    mp = mpmath.MPContext()
    mp.dps = digits + guard_digits
    return PrecisionContext(digits, guard_digits, mp, +mp.pi, mp.ln2 * 1)


# -- Bernoulli numbers --------------------------------------------------------

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_number(n: int) -> Fraction:
    """Exact ``B_n`` with the convention ``B_1 = -1/2``.

    Uses the recurrence ``sum_{k=0}^{n} C(n+1, k) B_k = 0``.  Computing
    ``B_n`` caches every ``B_k`` with ``k <= n``.
    """
    if n < 0:
        raise UsageError(f"Bernoulli index must be non-negative, got {n}")
    cache = _bernoulli_cache
    if n < len(cache):
        return cache[n]
    with _bernoulli_lock:
        # cache only ever grows; readers outside the lock see a consistent prefix
        for m in range(len(cache), n + 1):
            if m > 1 and m % 2 == 1:
                cache.append(Fraction(0))
                continue
            acc = sum(comb(m + 1, k) * cache[k] for k in range(m) if cache[k])
            cache.append(-acc / (m + 1))
    return cache[n]


def bernoulli_polynomial(n: int, t, ctx: PrecisionContext) -> HPReal:
    """``B_n(t) = sum_k C(n, k) B_k t^(n-k)`` evaluated by Horner's rule."""
    if n < 0:
        raise UsageError(f"polynomial degree must be non-negative, got {n}")
    t = ctx.mpf(t)
    acc = ctx.mp.zero
    for k in range(n + 1):
        acc = acc * t + ctx.mpf(comb(n, k) * bernoulli_number(k))
    return acc


def bernoulli_polynomial_periodic(n: int, x, ctx: PrecisionContext) -> HPReal:
    """Periodic Bernoulli polynomial ``B_n(x - floor(x))``."""
    if n < 1:
        raise UsageError(f"periodic Bernoulli polynomial needs n >= 1, got {n}")
    x = ctx.mpf(x)
    if not ctx.mp.isfinite(x):
        raise UsageError("x must be finite")
    return bernoulli_polynomial(n, x - ctx.mp.floor(x), ctx)


def fraction_from_mpf(x) -> Fraction:
    """Exact binary value of an mpf as a Fraction."""
    if not mpmath.isfinite(x):
        raise UsageError(f"cannot convert non-finite value {x!r} to a fraction")
    sign, man, exp, _ = x._mpf_
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def format_rational(q: Fraction) -> str:
    """Render as ``num/den``, or a bare integer when ``den == 1``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
