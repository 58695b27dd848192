"""Moment integrals ``I(p) = int z^2p log(1+e^z)/(1+e^z) dz`` and their closed form.

The workflow is: tabulate ``I(p)``, divide by ``zeta(2p+2)`` and by
``eta(2p+2)``, recognise both quotients as exact rationals, fit a
polynomial to the ratios of consecutive eta-basis coefficients, telescope
it into a closed form and check that closed form against freshly computed
integrals further out.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import QuadratureError, RecognitionError, UsageError
from .numctx import HPReal, PrecisionContext, format_rational, fraction_from_mpf
from .quadrature import QuadConfig, QuadResult, integrate_finite, integrate_half_line, integrate_real_line
from .special import eta, zeta_int

P_CEILING = 12
MAX_DENOMINATOR = 10**9
RATIONALIZE_SLACK = 12  # tol = 10**-(digits - 12)
CHECK_SLACK = 10  # conjecture tolerance 10**-(digits - 10)


class MomentForm(str, enum.Enum):
    REAL_LINE = "REAL_LINE"  # z over the whole line
    HALF_LINE = "HALF_LINE"  # u = e^z
    UNIT = "UNIT"  # t = u / (1 + u)


def moment_integrand(p: int, form: MomentForm, ctx: PrecisionContext) -> Callable:
    """Integrand of ``I(p)`` in the given representation.

    The REAL_LINE form uses ``log(1+e^z) = z + log1p(e^-z)`` and
    ``1/(1+e^z) = e^-z/(1+e^-z)`` for ``z > 0`` so large nodes never
    overflow.  The UNIT form expects ``(t, t, 1-t)`` from an
    endpoint-distance quadrature and carries the leading minus sign.
    """
    mp = ctx.mp
    two_p = 2 * p
    form = MomentForm(form)
    if form is MomentForm.REAL_LINE:

        def f(z):
            if z > 0:
                e = mp.exp(-z)
                return z ** two_p * (z + mp.log1p(e)) * e / (1 + e)
            e = mp.exp(z)
            return z ** two_p * mp.log1p(e) / (1 + e)

    elif form is MomentForm.HALF_LINE:

        def f(u):
            return mp.log(u) ** two_p * mp.log1p(u) / (u * (1 + u))

    else:

        def f(_, t, one_minus_t):
            # the distance 1 - t loses t near 0, so switch to log1p there
            log_c = mp.log1p(-t) if t < 0.5 else mp.log(one_minus_t)
            return -((mp.log(t) - log_c) ** two_p) * log_c / t

    return f


def moment_integral(
    p: int,
    form: MomentForm | str = MomentForm.REAL_LINE,
    ctx: PrecisionContext | None = None,
    cfg: QuadConfig | None = None,
    *,
    p_ceiling: int = P_CEILING,
) -> QuadResult:
    if isinstance(p, bool) or not isinstance(p, int) or not 0 <= p <= p_ceiling:
        raise UsageError(f"p must be an integer in [0, {p_ceiling}], got {p!r}")
    if ctx is None:
        raise UsageError("a PrecisionContext is required")
    form = MomentForm(form)
    f = moment_integrand(p, form, ctx)
    if form is MomentForm.REAL_LINE:
        return integrate_real_line(f, cfg, ctx)
    if form is MomentForm.HALF_LINE:
        return integrate_half_line(f, cfg, ctx)
    return integrate_finite(f, 0, 1, cfg, ctx, endpoint_distances=True)


# -- rational recognition ------------------------------------------------------


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return fraction_from_mpf(x)


def rationalize(x, max_denominator: int, tol) -> Fraction:
    """Smallest-denominator continued-fraction convergent within ``tol`` of ``x``.

    Raises :class:`RecognitionError` when no convergent with denominator
    ``<= max_denominator`` is close enough.
    """
    if max_denominator < 1:
        raise UsageError("max_denominator must be >= 1")
    target = _exact(x)
    tol = _exact(tol)
    if tol <= 0:
        raise UsageError("tol must be positive")
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    rest = target
    while True:
        a = math.floor(rest)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > max_denominator:
            break
        if abs(target - Fraction(h, k)) <= tol:
            return Fraction(h, k)
        frac = rest - a
        if frac == 0:
            break
        rest = 1 / frac
    raise RecognitionError(
        f"no rational with denominator <= {max_denominator} within {float(tol):.3g} of {float(target):.17g}"
    )


# -- coefficient table ---------------------------------------------------------


@dataclass
class MomentRecord:
    p: int
    value: HPReal
    coeff_zeta: Fraction | None
    coeff_eta: Fraction | None
    residual_zeta: HPReal | None
    residual_eta: HPReal | None
    note: str | None = None

    @property
    def ok(self) -> bool:
        return self.coeff_zeta is not None and self.coeff_eta is not None


def _recognise(value, basis, ctx, tol):
    try:
        coeff = rationalize(value / basis, MAX_DENOMINATOR, tol)
    except RecognitionError as exc:
        return None, None, str(exc)
    return coeff, abs(value - ctx.mpf(coeff) * basis), None


def moment_record(p: int, ctx: PrecisionContext, cfg: QuadConfig | None = None, *, p_ceiling: int = P_CEILING) -> MomentRecord:
    """One table row: ``I(p)`` and its recognised zeta- and eta-basis coefficients."""
    try:
        value = moment_integral(p, MomentForm.REAL_LINE, ctx, cfg, p_ceiling=p_ceiling).value
    except QuadratureError as exc:
        return MomentRecord(p, ctx.mp.nan, None, None, None, None, f"quadrature: {exc}")
    tol = ctx.tolerance(RATIONALIZE_SLACK)
    cz, rz, nz = _recognise(value, zeta_int(2 * p + 2, ctx), ctx, tol)
    ce, re_, ne = _recognise(value, eta(2 * p + 2, ctx), ctx, tol)
    notes = [f"{b}: {n}" for b, n in (("zeta", nz), ("eta", ne)) if n]
    return MomentRecord(p, value, cz, ce, rz, re_, "; ".join(notes) or None)


def coefficient_table(
    p_max: int, ctx: PrecisionContext, cfg: QuadConfig | None = None, *, p_ceiling: int = P_CEILING
) -> list[MomentRecord]:
    """Rows ``p = 0 .. p_max``; failed recognitions are noted per row."""
    if isinstance(p_max, bool) or not isinstance(p_max, int) or not 0 <= p_max <= p_ceiling:
        raise UsageError(f"p_max must be an integer in [0, {p_ceiling}], got {p_max!r}")
    return [moment_record(p, ctx, cfg, p_ceiling=p_ceiling) for p in range(p_max + 1)]


# -- pattern fitting -----------------------------------------------------------


def _poly_eval(coeffs: list[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _interpolate(points: list[tuple[int, Fraction]]) -> list[Fraction]:
    """Exact coefficients (lowest degree first) of the interpolating polynomial."""
    n = len(points)
    rows = [[Fraction(x) ** j for j in range(n)] + [y] for x, y in points]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [v / lead for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    coeffs = [rows[i][n] for i in range(n)]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(coeffs: list[Fraction]) -> list[Fraction] | None:
    """All roots (with multiplicity) if the polynomial splits over Q, else None."""
    coeffs = list(coeffs)
    roots = []
    while len(coeffs) > 1:
        if coeffs[0] == 0:
            roots.append(Fraction(0))
            coeffs = coeffs[1:]
            continue
        scale = math.lcm(*(c.denominator for c in coeffs))
        ints = [int(c * scale) for c in coeffs]
        found = None
        for num in _divisors(ints[0]):
            for den in _divisors(ints[-1]):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if _poly_eval(coeffs, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return None
        roots.append(found)
        # synthetic division by (x - found)
        quotient = [Fraction(0)] * (len(coeffs) - 1)
        carry = Fraction(0)
        for i in range(len(coeffs) - 1, 0, -1):
            carry = coeffs[i] + carry * found if i < len(coeffs) - 1 else coeffs[i]
            quotient[i - 1] = carry
        coeffs = quotient
    return sorted(roots, reverse=True)


def _linear_factor(root: Fraction, mult: Fraction = Fraction(1)) -> str:
    a = root.denominator * mult  # a*p - b with b/a == root
    b = root.numerator * mult
    head = "p" if a == 1 else f"{format_rational(a)}p"
    if b == 0:
        return head
    return f"{head} {'-' if b > 0 else '+'} {format_rational(abs(b))}"


def format_polynomial(coeffs: list[Fraction], var: str = "p") -> str:
    parts = []
    for deg in range(len(coeffs) - 1, -1, -1):
        c = coeffs[deg]
        if c == 0:
            continue
        mag = abs(c)
        body = format_rational(mag) if mag != 1 or deg == 0 else ""
        if deg >= 1:
            body += var + (f"^{deg}" if deg > 1 else "")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class RatioPolynomial:
    coefficients: tuple[Fraction, ...]  # lowest degree first
    roots: tuple[Fraction, ...] | None

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def __call__(self, p) -> Fraction:
        return _poly_eval(list(self.coefficients), p)

    def expanded(self) -> str:
        return format_polynomial(list(self.coefficients))

    def factored(self) -> str:
        """Product of integer-coefficient linear factors, leftover constant absorbed.

        ``4p^2 + 2p - 2`` renders as ``(2p - 1)(2p + 2)``.
        """
        if self.roots is None or not self.roots:
            return self.expanded()
        rest = self.leading
        for r in self.roots:
            rest /= r.denominator
        mults = [Fraction(1)] * len(self.roots)
        if rest.denominator == 1 and rest > 0 and rest != 1:
            # fold a positive integer constant into the last monic factor
            monic = [i for i, r in enumerate(self.roots) if r.denominator == 1]
            if monic:
                mults[monic[-1]] = rest
                rest = Fraction(1)
        body = "".join(f"({_linear_factor(r, m)})" for r, m in zip(self.roots, mults))
        if rest == 1:
            return body
        if rest == -1:
            return "-" + body
        return f"{format_rational(rest)}*{body}"


@dataclass(frozen=True)
class ClosedForm:
    """``c_p = c0 * prod_{k=1}^{p} q(k)`` for a ratio polynomial that splits over Q.

    Calling the object returns the exact coefficient for ``p``.  ``basis``
    names the constant the coefficient multiplies: ``eta`` or ``zeta``.
    """

    c0: Fraction
    ratio: RatioPolynomial
    basis: str = "eta"

    def __call__(self, p: int) -> Fraction:
        acc = Fraction(self.c0)
        for k in range(1, p + 1):
            acc *= self.ratio(k)
        return acc

    def factorial_form(self, max_degree: int = 3, probe: int = 12) -> tuple[Fraction, RatioPolynomial, int] | None:
        """Find ``A, R, m`` with ``c_p = A * R(p) * (m p)!``, ``R`` monic.

        The candidate is fitted on the first points and confirmed on all
        ``p < probe``.
        """
        for m in (1, 2, 3):
            values = [(p, self(p) / math.factorial(m * p)) for p in range(probe)]
            for deg in range(max_degree + 1):
                coeffs = _interpolate(values[: deg + 1])
                if all(_poly_eval(coeffs, p) == v for p, v in values):
                    lead = coeffs[-1]
                    monic = tuple(c / lead for c in coeffs)
                    return lead, RatioPolynomial(monic, tuple(rational_roots(list(monic)) or ()) or None), m
        return None

    def render(self) -> str:
        ff = self.factorial_form()
        if ff is not None:
            a, r, m = ff
            fact = "p!" if m == 1 else f"({m}p)!"
            poly = r.factored() if r.degree else ""
            pieces = [format_rational(a)] if a != 1 or not poly else []
            if poly:
                pieces.append(poly if poly.startswith("(") else f"({poly})")
            pieces.append(fact)
            return "*".join(pieces)
        return f"{format_rational(self.c0)} * prod_(k=1..p) [{self.ratio.factored()}]"

    def integral_form(self) -> str:
        return f"I(p) = {self.render()} * {self.basis}(2p+2)"


@dataclass
class FitResult:
    found: bool
    ratios: list[tuple[int, Fraction]]
    ratio_polynomial: RatioPolynomial | None = None
    closed_form: ClosedForm | None = None
    fit_range: list[int] = field(default_factory=list)
    validated_range: list[int] = field(default_factory=list)
    message: str = ""


def fit_ratio_pattern(table: Iterable[MomentRecord], degree_max: int = 4) -> FitResult:
    """Fit ``c_p / c_(p-1) = q(p)`` exactly on the eta-basis coefficients.

    The lowest degree ``d <= degree_max`` is accepted only if the polynomial
    through ``d + 1`` ratios also reproduces at least one further ratio.
    A table without such a fit returns ``found=False`` and the ratios.
    """
    rows = sorted((r for r in table if r.coeff_eta is not None), key=lambda r: r.p)
    if len(rows) < degree_max + 1:
        raise UsageError(
            f"need at least {degree_max + 1} recognised eta-basis rows for a degree-{degree_max} fit, got {len(rows)}"
        )
    if rows[0].p != 0 or any(b.p != a.p + 1 for a, b in zip(rows, rows[1:])):
        raise UsageError("eta-basis rows must cover p = 0, 1, 2, ... without gaps")
    ratios = [(b.p, b.coeff_eta / a.coeff_eta) for a, b in zip(rows, rows[1:])]
    fit_range = [r.p for r in rows]
    for deg in range(degree_max + 1):
        if len(ratios) < deg + 2:
            break
        coeffs = _interpolate(ratios[: deg + 1])
        if all(_poly_eval(coeffs, p) == r for p, r in ratios):
            roots = rational_roots(coeffs)
            poly = RatioPolynomial(tuple(coeffs), tuple(roots) if roots is not None else None)
            closed = ClosedForm(rows[0].coeff_eta, poly) if roots is not None else None
            if closed is not None:
                assert all(closed(r.p) == r.coeff_eta for r in rows)
            msg = f"ratio polynomial q(p) = {poly.factored()}"
            if closed is None:
                msg += " does not split over Q; no telescoped closed form"
            return FitResult(True, ratios, poly, closed, fit_range, [], msg)
    listing = ", ".join(f"r_{p} = {format_rational(r)}" for p, r in ratios)
    return FitResult(False, ratios, fit_range=fit_range, message=f"no polynomial of degree <= {degree_max} fits: {listing}")


# -- conjecture check ----------------------------------------------------------


@dataclass
class ConjectureCheck:
    p: int
    value: HPReal
    predicted: HPReal
    residual: HPReal
    tolerance: HPReal
    passed: bool
    note: str | None = None


def conjecture_check(
    closed_form: Callable[[int], Fraction],
    p_list: Iterable[int],
    ctx: PrecisionContext,
    cfg: QuadConfig | None = None,
    *,
    p_ceiling: int = P_CEILING,
) -> list[ConjectureCheck]:
    """Compare freshly integrated ``I(p)`` with ``closed_form(p) * basis(2p+2)``.

    ``closed_form`` maps ``p`` to an exact coefficient; its ``basis``
    attribute (``"eta"`` unless set to ``"zeta"``) picks the constant.
    """
    basis_fn = zeta_int if getattr(closed_form, "basis", "eta") == "zeta" else eta
    tol = ctx.tolerance(CHECK_SLACK)
    out = []
    for p in p_list:
        predicted = ctx.mpf(Fraction(closed_form(p))) * basis_fn(2 * p + 2, ctx)
        try:
            value = moment_integral(p, MomentForm.REAL_LINE, ctx, cfg, p_ceiling=p_ceiling).value
        except QuadratureError as exc:
            nan = ctx.mp.nan
            out.append(ConjectureCheck(p, nan, predicted, nan, tol, False, f"quadrature: {exc}"))
            continue
        residual = abs(value - predicted)
        out.append(ConjectureCheck(p, value, predicted, residual, tol, bool(residual <= tol)))
    return out
