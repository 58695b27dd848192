"""Catalog of integral identities for zeta(4) and relatives, and their verification.

Each catalog row pairs an integral, evaluated by one of the
double-exponential engines, with a closed form ``rational * pi^k`` or
``rational * zeta(m)``.  ``verify`` evaluates both sides and records the
residual against a tolerance of ``10**-(digits - 8)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable

from .discovery import MomentForm, moment_integrand
from .errors import ConvergenceError, IntegrandError, UsageError
from .numctx import HPReal, PrecisionContext, format_rational
from .quadrature import QuadConfig, QuadResult, integrate_finite, integrate_half_line, integrate_real_line
from .special import zeta_int

TOLERANCE_SLACK = 8

FINITE = "finite"
HALF_LINE = "half_line"
REAL_LINE = "real_line"


@dataclass(frozen=True)
class ClosedFormConstant:
    """``coefficient * pi**order`` or ``coefficient * zeta(order)``."""

    coefficient: Fraction
    constant: str  # "pi" | "zeta"
    order: int

    def value(self, ctx: PrecisionContext) -> HPReal:
        base = ctx.pi ** self.order if self.constant == "pi" else zeta_int(self.order, ctx)
        return ctx.mpf(self.coefficient) * base

    def __str__(self):
        base = f"pi^{self.order}" if self.constant == "pi" else f"zeta({self.order})"
        if self.coefficient == 1:
            return base
        return f"{format_rational(self.coefficient)}*{base}"


@dataclass(frozen=True)
class IntegralRecipe:
    """How to evaluate a left-hand side.

    ``make_integrand(ctx)`` returns the integrand.  Finite-domain integrands
    receive ``(x, x - a, b - x)``; the others receive ``x``.  ``limits``
    maps a context to ``(a, b)`` and ``prefactor`` to the constant in front.
    """

    domain: str
    make_integrand: Callable[[PrecisionContext], Callable]
    limits: Callable[[PrecisionContext], tuple] | None = None
    prefactor: Callable[[PrecisionContext], HPReal] | None = None

    def evaluate(self, ctx: PrecisionContext, cfg: QuadConfig | None = None) -> tuple[HPReal, QuadResult]:
        f = self.make_integrand(ctx)
        if self.domain == FINITE:
            a, b = self.limits(ctx)
            res = integrate_finite(f, a, b, cfg, ctx, endpoint_distances=True)
        elif self.domain == HALF_LINE:
            res = integrate_half_line(f, cfg, ctx)
        else:
            res = integrate_real_line(f, cfg, ctx)
        scale = self.prefactor(ctx) if self.prefactor else 1
        return res.value * scale, res


@dataclass(frozen=True)
class Identity:
    id: str
    description: str
    lhs: IntegralRecipe
    rhs: ClosedFormConstant
    tolerance_slack: int = TOLERANCE_SLACK

    def default_tolerance(self, ctx: PrecisionContext) -> HPReal:
        return ctx.tolerance(self.tolerance_slack)


@dataclass
class VerificationReport:
    id: str
    lhs_value: HPReal
    rhs_value: HPReal
    abs_residual: HPReal
    tolerance: HPReal
    passed: bool
    evaluations: int
    elapsed: float
    note: str | None = None


# -- integrands ----------------------------------------------------------------


def _unit_logs(mp):
    """``(log t, log(1-t))`` accurate at both ends of (0, 1)."""

    def logs(t, one_minus_t):
        if t < 0.5:
            return mp.log(t), mp.log1p(-t)
        return mp.log1p(-one_minus_t), mp.log(one_minus_t)

    return logs


def _unit_integrand(body):
    """Adapt ``body(mp, t, 1-t, log t, log(1-t))`` to an endpoint-distance integrand."""

    def make(ctx):
        mp = ctx.mp
        logs = _unit_logs(mp)

        def f(_, t, u):
            lt, lu = logs(t, u)
            return body(mp, t, u, lt, lu)

        return f

    return make


def _unit_limits(ctx):
    return 0, 1


def _euler_rep(s):
    def body(mp, u, one_minus_u, lu, l1mu):
        return (-lu) ** (s - 1) / one_minus_u

    return IntegralRecipe(FINITE, _unit_integrand(body), _unit_limits, lambda ctx: ctx.mpf(Fraction(1, factorial(s - 1))))


def _mellin_rep(s):
    def make(ctx):
        mp = ctx.mp

        def f(t):
            if t > 1:
                return t ** (s - 1) * mp.exp(-t) / -mp.expm1(-t)
            return t ** (s - 1) / mp.expm1(t)

        return f

    return IntegralRecipe(HALF_LINE, make, prefactor=lambda ctx: ctx.mpf(Fraction(1, factorial(s - 1))))


def _borwein():
    def make(ctx):
        mp = ctx.mp

        def f(theta, _, to_pi):
            # 2 cos(theta/2) = 2 sin((pi - theta)/2), exact near theta = pi
            return theta ** 2 * mp.log(2 * mp.sin(to_pi / 2)) ** 2

        return f

    return IntegralRecipe(FINITE, make, lambda ctx: (0, ctx.pi), lambda ctx: 2 / (11 * ctx.pi))


def _moment(p, form):
    form = MomentForm(form)
    make = lambda ctx: moment_integrand(p, form, ctx)  # noqa: E731
    if form is MomentForm.REAL_LINE:
        return IntegralRecipe(REAL_LINE, make)
    if form is MomentForm.HALF_LINE:
        return IntegralRecipe(HALF_LINE, make)
    return IntegralRecipe(FINITE, make, _unit_limits)


def _z(coeff, order=4):
    return ClosedFormConstant(Fraction(coeff), "zeta", order)


def _pi(coeff, order):
    return ClosedFormConstant(Fraction(coeff), "pi", order)


def _build_catalog() -> tuple[Identity, ...]:
    rows = []
    rhs_for_s = {2: _pi(Fraction(1, 6), 2), 3: _z(1, 3), 4: _pi(Fraction(1, 90), 4)}
    for s in (2, 3, 4):
        rows.append(Identity(
            f"EULER_REP_S{s}",
            f"Euler: zeta({s}) = 1/Gamma({s}) int_0^1 (-ln u)^{s - 1}/(1-u) du",
            _euler_rep(s), rhs_for_s[s],
        ))
        rows.append(Identity(
            f"MELLIN_REP_S{s}",
            f"Mellin: zeta({s}) = 1/Gamma({s}) int_0^inf t^{s - 1}/(e^t - 1) dt",
            _mellin_rep(s), rhs_for_s[s],
        ))
    rows += [
        Identity(
            "BORWEIN_Z4",
            "Borwein-Borwein: zeta(4) = 2/(11 pi) int_0^pi theta^2 ln^2(2 cos(theta/2)) dtheta",
            _borwein(), _pi(Fraction(1, 90), 4),
        ),
        Identity(
            "BLOCK_A",
            "int_0^1 ln^2(t) ln(1-t)/t dt = -2 zeta(4)  (limit x -> 1 of the Lewin Li4 identity; denominator t)",
            IntegralRecipe(FINITE, _unit_integrand(lambda mp, t, u, lt, lu: lt ** 2 * lu / t), _unit_limits),
            _z(-2),
        ),
        Identity(
            "BLOCK_A_PRINTED",
            "int_0^1 ln^2(t) ln(1-t)/(1-t) dt = -zeta(4)/2  (commonly printed variant with denominator 1-t; "
            "NOT the block needed for the decomposition of I, equals BLOCK_C by t <-> 1-t)",
            IntegralRecipe(FINITE, _unit_integrand(lambda mp, t, u, lt, lu: lt ** 2 * lu / u), _unit_limits),
            _z(Fraction(-1, 2)),
        ),
        Identity(
            "BLOCK_B",
            "int_0^1 ln^3(1-t)/t dt = -6 zeta(4)",
            IntegralRecipe(FINITE, _unit_integrand(lambda mp, t, u, lt, lu: lu ** 3 / t), _unit_limits),
            _z(-6),
        ),
        Identity(
            "BLOCK_C",
            "int_0^1 ln(t) ln^2(1-t)/t dt = -zeta(4)/2",
            IntegralRecipe(FINITE, _unit_integrand(lambda mp, t, u, lt, lu: lt * lu ** 2 / t), _unit_limits),
            _z(Fraction(-1, 2)),
        ),
        Identity(
            "SYMMETRY_B",
            "int_0^1 ln^3(t)/(1-t) dt = int_0^1 ln^3(1-t)/t dt = -6 zeta(4)",
            IntegralRecipe(FINITE, _unit_integrand(lambda mp, t, u, lt, lu: lt ** 3 / u), _unit_limits),
            _z(-6),
        ),
        Identity(
            "MAIN_Z4_REAL_LINE",
            "int_R z^2 ln(1+e^z)/(1+e^z) dz = 7 zeta(4) = 7 pi^4/90",
            _moment(1, MomentForm.REAL_LINE), _pi(Fraction(7, 90), 4),
        ),
        Identity(
            "MAIN_Z4_HALF_LINE",
            "int_0^inf ln^2(u) ln(1+u)/(u(1+u)) du = 7 pi^4/90  (u = e^z)",
            _moment(1, MomentForm.HALF_LINE), _pi(Fraction(7, 90), 4),
        ),
        Identity(
            "MAIN_Z4_UNIT",
            "-int_0^1 [ln t - ln(1-t)]^2 ln(1-t)/t dt = 7 pi^4/90  (t = u/(1+u))",
            _moment(1, MomentForm.UNIT), _pi(Fraction(7, 90), 4),
        ),
        Identity(
            "Z2_REP",
            "int_R ln(1+e^z)/(1+e^z) dz = zeta(2) = pi^2/6",
            _moment(0, MomentForm.REAL_LINE), _pi(Fraction(1, 6), 2),
        ),
        Identity(
            "MOMENT_P2",
            "int_R z^4 ln(1+e^z)/(1+e^z) dz = 279/2 zeta(6)",
            _moment(2, MomentForm.REAL_LINE), _z(Fraction(279, 2), 6),
        ),
        Identity(
            "MOMENT_P3",
            "int_R z^6 ln(1+e^z)/(1+e^z) dz = 5715 zeta(8)",
            _moment(3, MomentForm.REAL_LINE), _z(5715, 8),
        ),
        Identity(
            "MOMENT_P4",
            "int_R z^8 ln(1+e^z)/(1+e^z) dz = 804825/2 zeta(10)",
            _moment(4, MomentForm.REAL_LINE), _z(Fraction(804825, 2), 10),
        ),
    ]
    ids = [r.id for r in rows]
    assert len(ids) == len(set(ids))
    return tuple(sorted(rows, key=lambda r: r.id))


_CATALOG = _build_catalog()
_BY_ID = {row.id: row for row in _CATALOG}
# group keys covering the per-argument rows
GROUPS = {
    "EULER_REP": tuple(i for i in _BY_ID if i.startswith("EULER_REP_")),
    "MELLIN_REP": tuple(i for i in _BY_ID if i.startswith("MELLIN_REP_")),
}


def catalog() -> list[Identity]:
    """Every identity, ordered by id."""
    return list(_CATALOG)


def get(identity_id: str) -> Identity:
    try:
        return _BY_ID[identity_id]
    except KeyError:
        raise UsageError(f"unknown identity id {identity_id!r}") from None


def expand_ids(ids: Iterable[str] | str) -> list[str]:
    """Resolve ``"all"``, group keys and plain ids to a sorted list of catalog ids."""
    if isinstance(ids, str):
        ids = [ids]
    out = set()
    for i in ids:
        if i.lower() == "all":
            out.update(_BY_ID)
        elif i in GROUPS:
            out.update(GROUPS[i])
        else:
            get(i)
            out.add(i)
    return sorted(out)


def verify(identity_id: str, ctx: PrecisionContext, overrides: QuadConfig | None = None) -> VerificationReport:
    row = get(identity_id)
    tol = row.default_tolerance(ctx)
    start = time.perf_counter()
    rhs = row.rhs.value(ctx)
    note = None
    try:
        lhs, res = row.lhs.evaluate(ctx, overrides)
        evaluations = res.evaluations
    except ConvergenceError as exc:
        scale = row.lhs.prefactor(ctx) if row.lhs.prefactor else 1
        lhs = exc.value * scale if exc.value is not None else ctx.mp.nan
        evaluations = exc.evaluations
        note = f"convergence: {exc}"
    except IntegrandError as exc:
        lhs, evaluations, note = ctx.mp.nan, 0, f"integrand: {exc}"
    residual = abs(lhs - rhs)
    passed = note is None and bool(residual <= tol)
    return VerificationReport(
        row.id, lhs, rhs, residual, tol, passed, evaluations, time.perf_counter() - start, note
    )


def verify_all(ctx: PrecisionContext, overrides: QuadConfig | None = None) -> list[VerificationReport]:
    """Verify every row; failures are reported, never raised."""
    return [verify(row.id, ctx, overrides) for row in _CATALOG]


# -- Fourier / Parseval route ----------------------------------------------------


def fourier_coefficient(n: int, ctx: PrecisionContext, cfg: QuadConfig | None = None) -> HPReal:
    """``c_n = 1/(2 pi) int_{-pi}^{pi} t^2 cos(n t) dt`` for ``f(t) = t^2``."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise UsageError(f"n must be a non-negative integer, got {n!r}")
    mp = ctx.mp
    res = integrate_finite(lambda t: t * t * mp.cos(n * t), -ctx.pi, ctx.pi, cfg, ctx)
    return res.value / (2 * ctx.pi)


def fourier_coefficient_exact(n: int, ctx: PrecisionContext) -> HPReal:
    """``pi^2/3`` for ``n = 0`` and ``2 (-1)^n / n^2`` otherwise."""
    if n == 0:
        return ctx.pi ** 2 / 3
    return ctx.mpf(Fraction(2 * (-1) ** n, n * n))


def parseval_partial(N: int, ctx: PrecisionContext) -> HPReal:
    """``sum_{n=1}^{N} n^-4``, the Parseval series truncated at ``N``.

    Each term is ``|c_n|^2 / 4`` for the coefficients of ``t^2``.
    """
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise UsageError(f"N must be a positive integer, got {N!r}")
    mp = ctx.mp
    return mp.fsum(mp.one / mp.mpf(n) ** 4 for n in range(1, N + 1))


@dataclass
class ParsevalReport:
    N: int
    partial: HPReal
    target: HPReal
    gap: HPReal
    tail_bound: HPReal
    consistent: bool


def parseval_report(N: int, ctx: PrecisionContext) -> ParsevalReport:
    """Compare the partial sum with ``(pi^4/5 - pi^4/9)/8`` and the tail bound ``1/(3 N^3)``."""
    partial = parseval_partial(N, ctx)
    pi4 = ctx.pi ** 4
    target = (pi4 / 5 - pi4 / 9) / 8
    gap = target - partial
    bound = ctx.mpf(Fraction(1, 3 * N ** 3))
    return ParsevalReport(N, partial, target, gap, bound, bool(0 < gap < bound))


def parseval_zeta4(ctx: PrecisionContext, cfg: QuadConfig | None = None) -> HPReal:
    """``zeta(4)`` from quadrature alone: ``(mean of t^4 - c_0^2) / 8``."""
    mean_f2 = integrate_finite(lambda t: t ** 4, -ctx.pi, ctx.pi, cfg, ctx).value / (2 * ctx.pi)
    c0 = fourier_coefficient(0, ctx, cfg)
    return (mean_f2 - c0 ** 2) / 8
