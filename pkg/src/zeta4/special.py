"""Zeta, eta and polylogarithm values, and polylog identities as residuals.

Only integer polylog orders and real arguments are supported.  Odd zeta
values come from Euler-Maclaurin summation so no Gamma function machinery
is needed anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import NamedTuple

from .errors import AccuracyError, DivergenceError, UsageError
from .numctx import HPReal, PrecisionContext, bernoulli_number
from .quadrature import QuadConfig, integrate_finite, integrate_half_line

# Euler-Maclaurin split points beyond this are refused.
EM_MAX_SPLIT = 2_000_000
EM_MAX_ORDER = 60


class ZetaMethod(str, enum.Enum):
    BERNOULLI_CLOSED_FORM = "bernoulli"
    EULER_MACLAURIN = "euler-maclaurin"
    MELLIN_QUADRATURE = "mellin"


@dataclass(frozen=True)
class ZetaValue:
    argument: object
    value: HPReal
    method: ZetaMethod
    # exact rational r with value = r * pi**argument; closed-form method only
    pi_coefficient: Fraction | None = None


class PiMultiple(NamedTuple):
    coefficient: Fraction
    power: int
    value: HPReal


def _require_int(name, v, lo):
    if isinstance(v, bool) or not isinstance(v, int):
        raise UsageError(f"{name} must be an integer, got {v!r}")
    if v < lo:
        raise UsageError(f"{name} must be >= {lo}, got {v}")


# -- zeta ----------------------------------------------------------------------


def zeta_even_coefficient(two_k: int) -> Fraction:
    """Exact ``r`` with ``zeta(2k) = r * pi**(2k)``."""
    _require_int("argument", two_k, 2)
    if two_k % 2 or two_k > 200:
        raise UsageError(f"zeta_even needs an even argument in [2, 200], got {two_k}")
    b = abs(bernoulli_number(two_k))
    return b * 2 ** two_k / (2 * factorial(two_k))


def zeta_even(two_k: int, ctx: PrecisionContext) -> PiMultiple:
    """``zeta(2k) = |B_2k| (2 pi)^2k / (2 (2k)!)`` as an exact multiple of ``pi**2k``."""
    r = zeta_even_coefficient(two_k)
    return PiMultiple(r, two_k, ctx.mpf(r) * ctx.pi ** two_k)


def _em_remainder_bound(s, n: int, N: int, ctx) -> HPReal:
    # |B_n({x})| <= |B_n| for even n, then integrate x^(-s-n) from N
    rising = ctx.mp.rf(s, n)
    return rising / factorial(n) * ctx.mpf(abs(bernoulli_number(n))) * ctx.mpf(N) ** (1 - s - n) / (s + n - 1)


def _power_sum(s, N: int, ctx) -> HPReal:
    """``sum_{j=1}^{N-1} j**-s``."""
    mp = ctx.mp
    if isinstance(s, int):
        # fixed-point integer summation, one unit of error per term at most
        bits = ctx.prec + N.bit_length() + 8
        one = 1 << bits
        total = sum(one // j ** s for j in range(1, N))
        return mp.ldexp(mp.mpf(total), -bits)
    return mp.fsum(mp.mpf(j) ** -s for j in range(1, N))


def zeta_euler_maclaurin(
    s, n: int, N: int, ctx: PrecisionContext, *, extend: bool = True, target: HPReal | None = None
) -> HPReal:
    """Riemann zeta for real ``s > 1`` by Euler-Maclaurin summation.

    Sums ``j**-s`` directly for ``j < N`` and applies the Euler-Maclaurin
    correction terms of even order up to ``n`` at ``N``.  The remainder
    integral is bounded, not integrated, using ``|B_n({x})| <= |B_n|``.

    If the bound exceeds ``target`` (default ``10**-digits / 100``) the split
    point is moved out until it does (``extend=True``), or
    :class:`AccuracyError` is raised (``extend=False``).
    """
    _require_int("n", n, 2)
    _require_int("N", N, 1)
    if n % 2 or n > EM_MAX_ORDER:
        raise UsageError(f"n must be even and <= {EM_MAX_ORDER}, got {n}")
    if not isinstance(s, int):
        s = ctx.mpf(s)
    if not s > 1:
        raise UsageError(f"zeta_euler_maclaurin needs s > 1, got {s}")
    mp = ctx.mp
    if target is None:
        target = ctx.tolerance(-2)
    bound = _em_remainder_bound(s, n, N, ctx)
    if bound > target:
        if not extend:
            raise AccuracyError(
                f"remainder bound {mp.nstr(bound, 3)} exceeds {mp.nstr(target, 3)} "
                f"for n={n}, N={N}; use a larger N"
            )
        N = _extend_split(s, n, N, target, ctx)

    Nm = ctx.mpf(N)
    total = _power_sum(s, N, ctx)
    total += Nm ** (1 - s) / (s - 1) + Nm ** (-s) / 2
    rising = mp.one  # s (s+1) ... (s+k-2)
    for k in range(2, n + 1):
        rising *= s + k - 2
        if k % 2:
            continue
        total += ctx.mpf(bernoulli_number(k)) / factorial(k) * rising * Nm ** (1 - s - k)
    return total


def _extend_split(s, n, N, target, ctx) -> int:
    bound = _em_remainder_bound(s, n, N, ctx)
    ratio = bound / target
    N = max(N, int(ctx.mp.ceil(N * ratio ** (1 / (s + n - 1)))))
    while _em_remainder_bound(s, n, N, ctx) > target:
        N += max(1, N // 100)
    if N > EM_MAX_SPLIT:
        raise AccuracyError(
            f"Euler-Maclaurin order n={n} would need split point N={N} "
            f"(> {EM_MAX_SPLIT}); use a larger n"
        )
    return N


def euler_maclaurin_parameters(s, ctx: PrecisionContext, n: int = EM_MAX_ORDER, target=None) -> tuple[int, int]:
    """Smallest split point meeting ``target`` at order ``n``."""
    s = s if isinstance(s, int) else ctx.mpf(s)
    if target is None:
        target = ctx.tolerance(-2)
    return n, _extend_split(s, n, 2, target, ctx)


@lru_cache(maxsize=512)
def _zeta_int_cached(s: int, ctx: PrecisionContext) -> HPReal:
    if s % 2 == 0:
        return zeta_even(s, ctx).value
    # full working precision: odd zeta values feed other series
    target = ctx.eps / 100
    n, N = euler_maclaurin_parameters(s, ctx, target=target)
    return zeta_euler_maclaurin(s, n, N, ctx, extend=False, target=target)


def zeta_int(s: int, ctx: PrecisionContext) -> HPReal:
    """``zeta(s)`` for integer ``s >= 2``; closed form when even."""
    _require_int("s", s, 2)
    return _zeta_int_cached(s, ctx)


def zeta_mellin(s: int, ctx: PrecisionContext, cfg: QuadConfig | None = None) -> HPReal:
    """``zeta(s) = 1/(s-1)! * int_0^inf t^(s-1)/(e^t - 1) dt`` for integer ``s >= 2``."""
    _require_int("s", s, 2)
    mp = ctx.mp

    def f(t):
        if t > 1:
            return t ** (s - 1) * mp.exp(-t) / -mp.expm1(-t)
        return t ** (s - 1) / mp.expm1(t)

    return integrate_half_line(f, cfg, ctx).value / factorial(s - 1)


def zeta(s, method, ctx: PrecisionContext, cfg: QuadConfig | None = None) -> ZetaValue:
    """Evaluate zeta(s) by the named method and record the provenance."""
    method = ZetaMethod(method)
    if method is ZetaMethod.BERNOULLI_CLOSED_FORM:
        if not isinstance(s, int) or s % 2:
            raise UsageError(f"the Bernoulli closed form needs an even integer, got {s!r}")
        pm = zeta_even(s, ctx)
        return ZetaValue(s, pm.value, method, pm.coefficient)
    if method is ZetaMethod.MELLIN_QUADRATURE:
        if not isinstance(s, int):
            raise UsageError(f"the Mellin route is limited to integer s, got {s!r}")
        return ZetaValue(s, zeta_mellin(s, ctx, cfg), method)
    n, N = euler_maclaurin_parameters(s, ctx)
    return ZetaValue(s, zeta_euler_maclaurin(s, n, N, ctx), method)


def eta(n: int, ctx: PrecisionContext) -> HPReal:
    """Dirichlet eta, ``(1 - 2**(1-n)) * zeta(n)``."""
    _require_int("n", n, 2)
    return (1 - ctx.mp.ldexp(ctx.mp.one, 1 - n)) * zeta_int(n, ctx)


def eta_zeta_ratio(n: int) -> Fraction:
    """Exact ``eta(n) / zeta(n)``."""
    return 1 - Fraction(1, 2 ** (n - 1))


# -- polylogarithm -------------------------------------------------------------


def _zeta_at(m: int, ctx) -> HPReal:
    """zeta at any integer except 1, negative ones via Bernoulli numbers."""
    if m >= 2:
        return zeta_int(m, ctx)
    if m == 0:
        return ctx.mpf(Fraction(-1, 2))
    return ctx.mpf(-bernoulli_number(1 - m) / (1 - m))


def _polylog_series(s: int, z: HPReal, ctx) -> HPReal:
    mp = ctx.mp
    az = abs(z)
    tiny = ctx.eps / 1000
    total = mp.zero
    power = mp.one
    k = 0
    while True:
        k += 1
        power *= z
        total += power / mp.mpf(k) ** s
        # tail bound |z|^(k+1) / ((k+1)^s (1-|z|))
        if abs(power) * az / (mp.mpf(k + 1) ** s * (1 - az)) < tiny:
            return total


def _polylog_log_series(s: int, z: HPReal, ctx) -> HPReal:
    """Expansion in ``mu = log z``; converges fast for ``1/2 < z < 1``."""
    mp = ctx.mp
    mu = mp.log(z)
    tiny = ctx.eps / 1000
    two_pi = 2 * ctx.pi
    harmonic = sum(Fraction(1, j) for j in range(1, s))
    total = mu ** (s - 1) / factorial(s - 1) * (ctx.mpf(harmonic) - mp.log(-mu))
    term_power = mp.one  # mu^k / k!
    k = 0
    while True:
        if k:
            term_power *= mu / k
        if k != s - 1:
            total += _zeta_at(s - k, ctx) * term_power
        # |zeta(s-k)| / k! <= 2 / (2 pi)^(k-s+1) once k > s
        if k > s and 2 * abs(mu) ** k / two_pi ** (k - s + 1) < tiny:
            return total
        k += 1


def polylog(s: int, z, ctx: PrecisionContext) -> HPReal:
    """``Li_s(z) = sum_{k>=1} z^k / k^s`` for integer ``s >= 1`` and ``-1 <= z <= 1``."""
    _require_int("s", s, 1)
    mp = ctx.mp
    z = ctx.mpf(z)
    if not -1 <= z <= 1:
        raise UsageError(f"polylog argument must lie in [-1, 1], got {z}")
    if z == 0:
        return mp.zero
    if s == 1:
        if z == 1:
            raise DivergenceError("Li_1(1) diverges")
        return -mp.log1p(-z)
    if z == 1:
        return zeta_int(s, ctx)
    if z == -1:
        return -eta(s, ctx)
    if z > 0.5:
        return _polylog_log_series(s, z, ctx)
    return _polylog_series(s, z, ctx)


def polylog_negative_integral(s: int, y, ctx: PrecisionContext, cfg: QuadConfig | None = None) -> HPReal:
    """``Li_s(-y)`` for any ``y > 0`` from the Fermi-Dirac integral

    ``Li_s(-y) = -y/(s-1)! * int_0^inf t^(s-1) / (e^t + y) dt``.
    """
    _require_int("s", s, 1)
    mp = ctx.mp
    y = ctx.mpf(y)
    if cfg is None:
        cfg = QuadConfig(target_abs_err=ctx.tolerance(-3))

    def f(t):
        e = mp.exp(-t)
        return t ** (s - 1) * e / (1 + y * e)

    return -y * integrate_half_line(f, cfg, ctx).value / factorial(s - 1)


def _inversion_log_terms(n: int, log_x: HPReal, ctx) -> HPReal:
    """``-log^n(x)/n! + 2 sum_r log^(n-2r)(x)/(n-2r)! Li_2r(-1)``."""
    acc = -log_x ** n / factorial(n)
    for r in range(1, n // 2 + 1):
        acc += 2 * log_x ** (n - 2 * r) / factorial(n - 2 * r) * -eta(2 * r, ctx)
    return acc


def polylog_negative(s: int, y, ctx: PrecisionContext) -> HPReal:
    """``Li_s(-y)`` for ``y >= 0``; the inversion formula handles ``y > 1``."""
    y = ctx.mpf(y)
    if y < 0:
        raise UsageError(f"polylog_negative needs y >= 0, got {y}")
    if y <= 1:
        return polylog(s, -y, ctx)
    mirrored = polylog(s, -1 / y, ctx)
    return _inversion_log_terms(s, ctx.mp.log(y), ctx) - (-1) ** s * mirrored


def polylog_inversion_residual(n: int, x, ctx: PrecisionContext) -> HPReal:
    """Residual of the inversion formula linking ``Li_n(-x)`` and ``Li_n(-1/x)``.

    Whichever of the two arguments lies below -1 is evaluated from its
    Fermi-Dirac integral, independently of the formula under test.
    """
    _require_int("n", n, 2)
    x = ctx.mpf(x)
    if not x > 0:
        raise UsageError(f"inversion residual needs x > 0, got {x}")

    def li_neg(y):
        return polylog(n, -y, ctx) if y <= 1 else polylog_negative_integral(n, y, ctx)

    lhs = li_neg(x) + (-1) ** n * li_neg(1 / x)
    return abs(lhs - _inversion_log_terms(n, ctx.mp.log(x), ctx))


# -- Lewin identities for Li_4 -------------------------------------------------


def _unit_arg(x, ctx) -> HPReal:
    x = ctx.mpf(x)
    if not 0 < x < 1:
        raise UsageError(f"x must lie in (0, 1), got {x}")
    return x


def _integral_to_x(f, x, ctx, cfg):
    """``int_0^x f(t, 1-t, log(1-t)) dt`` with all three accurate near either end."""
    mp = ctx.mp
    one_minus_x = 1 - x

    def g(_, t, dr):
        if t < 0.5:
            return f(t, 1 - t, mp.log1p(-t))
        u = one_minus_x + dr
        return f(t, u, mp.log(u))

    return integrate_finite(g, 0, x, cfg, ctx, endpoint_distances=True).value


def li4_lewin_residual(x, ctx: PrecisionContext, cfg: QuadConfig | None = None) -> HPReal:
    """Residual of ``Li4 = ln x Li3 - ln^2 x Li2 / 2 - (1/2) int_0^x ln^2 t ln(1-t)/t dt``."""
    x = _unit_arg(x, ctx)
    mp = ctx.mp
    lx = mp.log(x)
    integral = _integral_to_x(lambda t, u, log_u: mp.log(t) ** 2 * log_u / t, x, ctx, cfg)
    return abs(
        polylog(4, x, ctx) - lx * polylog(3, x, ctx) + lx ** 2 * polylog(2, x, ctx) / 2 + integral / 2
    )


def li4_lewin2_residual(x, ctx: PrecisionContext, cfg: QuadConfig | None = None) -> HPReal:
    """Residual of the once-more integrated-by-parts form with ``int_0^x ln^3 t/(1-t) dt``."""
    x = _unit_arg(x, ctx)
    mp = ctx.mp
    lx = mp.log(x)
    integral = _integral_to_x(lambda t, u, log_u: mp.log(t) ** 3 / u, x, ctx, cfg)
    return abs(
        polylog(4, x, ctx)
        - lx * polylog(3, x, ctx)
        + lx ** 2 * polylog(2, x, ctx) / 2
        + lx ** 3 * mp.log1p(-x) / 6
        + integral / 6
    )


def landen_rhs(x, ctx: PrecisionContext, *, printed: bool = False) -> HPReal:
    """Closed form of ``int_0^x ln^2 t ln(1-t)/(1-t) dt`` in Li_4, Li_3, Li_2 and logs.

    With ``printed=True`` the ``2 zeta(3) ln x`` term is dropped, which is the
    commonly reproduced misprint of this identity.
    """
    x = _unit_arg(x, ctx)
    mp = ctx.mp
    y = 1 - x
    lx, ly = mp.log(x), mp.log1p(-x)
    z3 = zeta_int(3, ctx)
    li4_neg = polylog_negative(4, x / y, ctx)
    rhs = -2 * (li4_neg + polylog(4, x, ctx) - polylog(4, y, ctx) + zeta_int(4, ctx))
    rhs += 2 * (ly * polylog(3, x, ctx) - lx * polylog(3, y, ctx))
    rhs += 2 * lx * ly * polylog(2, y, ctx) - zeta_int(2, ctx) * ly ** 2
    rhs += ly ** 2 * (6 * lx ** 2 + 4 * lx * ly - ly ** 2) / 12
    rhs += -2 * z3 * ly
    if not printed:
        rhs += 2 * z3 * lx
    return rhs


def li4_landen_residual(x, ctx: PrecisionContext, cfg: QuadConfig | None = None, *, printed: bool = False) -> HPReal:
    """Quadrature of ``int_0^x ln^2 t ln(1-t)/(1-t) dt`` against :func:`landen_rhs`."""
    x = _unit_arg(x, ctx)
    mp = ctx.mp
    integral = _integral_to_x(lambda t, u, log_u: mp.log(t) ** 2 * log_u / u, x, ctx, cfg)
    return abs(integral - landen_rhs(x, ctx, printed=printed))
