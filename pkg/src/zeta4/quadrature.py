"""Double-exponential quadrature at arbitrary precision.

Three transformations share one level-doubling driver:

* tanh-sinh  ``x = tanh(pi/2 sinh t)``      finite intervals
* exp-sinh   ``x = exp(pi/2 sinh t)``       the half line (0, inf)
* sinh-sinh  ``x = sinh(pi/2 sinh t)``      the whole real line

Level ``k`` is the trapezoid rule in ``t`` with step ``2**-k``.  Each level
reuses the previous sum and only evaluates the new odd-indexed nodes.
Abscissas and weights are cached per (transformation, precision, level).

Integrands must be side-effect free.  They are handed working-precision
mpf values from ``ctx.mp`` and should compute with ``ctx.mp`` functions.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceError, IntegrandError, UsageError
from .numctx import HPReal, PrecisionContext

TANH_SINH = "tanh-sinh"
EXP_SINH = "exp-sinh"
SINH_SINH = "sinh-sinh"

# Largest |t| ever visited.  Well past the point where any integrand that
# meets the decay preconditions has negligible terms.
_T_CAP = {TANH_SINH: 6.5, EXP_SINH: 6.5, SINH_SINH: 4.5}

# consecutive small, non-increasing terms that end a sweep
_SMALL_RUN = 3


@dataclass(frozen=True)
class QuadConfig:
    """Stopping parameters.  ``target_abs_err=None`` means ``10**-digits``."""

    target_abs_err: HPReal | None = None
    max_level: int = 12
    initial_level: int = 3

    def __post_init__(self):
        if not 1 <= self.initial_level <= self.max_level <= 20:
            raise UsageError(
                "need 1 <= initial_level <= max_level <= 20, got "
                f"initial_level={self.initial_level}, max_level={self.max_level}"
            )
        if self.target_abs_err is not None and not self.target_abs_err > 0:
            raise UsageError("target_abs_err must be positive")

    def target(self, ctx: PrecisionContext) -> HPReal:
        if self.target_abs_err is None:
            return ctx.tolerance(0)
        return ctx.mpf(self.target_abs_err)


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class QuadResult:
    value: HPReal
    err_estimate: HPReal
    levels_used: int
    evaluations: int


# -- node tables ---------------------------------------------------------------


class _NodeTable:
    """Lazily grown list of nodes at ``t = j * 2**-level``, ``j = 1, 2, ...``.

    Entries are tuples whose layout depends on the transformation:

    * tanh-sinh: ``(c, w)`` with ``c = 1 - tanh(u)`` (distance to +1)
    * exp-sinh:  ``(x, w_pos, w_neg)``; the mirrored node sits at ``1/x``
    * sinh-sinh: ``(x, w)``; the mirrored node sits at ``-x``
    """

    def __init__(self, kind: str, mp, level: int):
        self.kind = kind
        self.mp = mp
        self.h = mp.ldexp(mp.one, -level)
        self.t_cap = _T_CAP[kind]
        self.nodes: list[tuple] = []
        self.exhausted = False
        self._lock = threading.Lock()

    def get(self, j: int):
        """Node ``j >= 1``, or ``None`` past the t cap."""
        nodes = self.nodes
        if j <= len(nodes):
            return nodes[j - 1]
        if self.exhausted:
            return None
        with self._lock:
            while len(self.nodes) < j and not self.exhausted:
                self._extend()
        return self.nodes[j - 1] if j <= len(self.nodes) else None

    def _extend(self, chunk: int = 32) -> None:
        mp = self.mp
        half_pi = mp.pi / 2
        start = len(self.nodes) + 1
        for j in range(start, start + chunk):
            t = j * self.h
            if t > self.t_cap:
                self.exhausted = True
                return
            sh, ch = mp.sinh(t), mp.cosh(t)
            u = half_pi * sh
            dudt = half_pi * ch
            if self.kind == TANH_SINH:
                c = 2 / (1 + mp.exp(2 * u))
                self.nodes.append((c, dudt * c * (2 - c)))
            elif self.kind == EXP_SINH:
                x = mp.exp(u)
                self.nodes.append((x, dudt * x, dudt / x))
            else:
                self.nodes.append((mp.sinh(u), dudt * mp.cosh(u)))


_tables: dict[tuple, _NodeTable] = {}
_tables_lock = threading.Lock()


def _table(kind: str, ctx: PrecisionContext, level: int) -> _NodeTable:
    key = (kind, ctx.prec, level)
    table = _tables.get(key)
    if table is None:
        with _tables_lock:
            table = _tables.setdefault(key, _NodeTable(kind, ctx.mp, level))
    return table


# -- driver --------------------------------------------------------------------


class _Counter:
    __slots__ = ("n",)

    def __init__(self):
        self.n = 0


def _checked(f, ctx, counter):
    isfinite = ctx.mp.isfinite

    def g(*args):
        counter.n += 1
        y = f(*args)
        if not isfinite(y):
            raise IntegrandError(f"integrand returned {y} at node {args[0]}", node=args[0])
        return y

    return g


def _sweep(terms: Callable[[int], HPReal | None], j0: int, step: int, threshold) -> HPReal | int:
    """Sum ``terms(j)`` outward from ``j0``.

    Stops when ``terms`` returns ``None`` (no more usable nodes) or after
    ``_SMALL_RUN`` consecutive terms that are below ``threshold`` and not
    increasing.  The second condition keeps integrands that vanish at the
    centre (e.g. high even powers) from being cut off early.
    """
    total = 0
    run = 0
    prev = None
    j = j0
    while True:
        term = terms(j)
        if term is None:
            break
        total += term
        mag = abs(term)
        if mag <= threshold and (prev is None or mag <= prev):
            run += 1
            if run >= _SMALL_RUN:
                break
        else:
            run = 0
        prev = mag
        j += step
    return total


def _level_sum(side_sums, center, ctx, kind, level, full, threshold):
    table = _table(kind, ctx, level)
    j0, step = (1, 1) if full else (1, 2)
    total = center if full else 0
    for side in side_sums:
        total += _sweep(lambda j, side=side: side(table.get(j)), j0, step, threshold)
    return total * table.h


def _drive(side_terms, center_fn, kind, cfg: QuadConfig, ctx: PrecisionContext, scale=1) -> QuadResult:
    """Level-doubling loop.  The integral is ``scale`` times the t-space sum."""
    cfg = cfg or DEFAULT_CONFIG
    mp = ctx.mp
    scale = abs(scale)
    target = cfg.target(ctx) / scale
    roundoff = ctx.eps * 100
    threshold = target / 100

    level = cfg.initial_level
    estimate = _level_sum(side_terms, center_fn(), ctx, kind, level, True, threshold)
    levels = 1
    diff = mp.inf
    for level in range(cfg.initial_level + 1, cfg.max_level + 1):
        floor = abs(estimate) * roundoff
        new = _level_sum(side_terms, None, ctx, kind, level, False, max(threshold, floor / 100))
        refined = estimate / 2 + new
        levels += 1
        diff = abs(refined - estimate)
        estimate = refined
        floor = abs(estimate) * roundoff
        if diff <= max(target, floor):
            return QuadResult(estimate * scale, max(diff, floor) * scale, levels, _evaluations(side_terms))
    raise ConvergenceError(
        f"{kind} quadrature did not reach {mp.nstr(target * scale, 3)} by level {cfg.max_level} "
        f"(last level difference {mp.nstr(diff * scale, 3)})",
        value=estimate * scale,
        err_estimate=diff * scale,
        levels_used=levels,
        evaluations=_evaluations(side_terms),
    )


def _evaluations(side_terms) -> int:
    return side_terms.counter.n


class _Sides(list):
    """List of per-side term functions that also carries an evaluation counter."""

    def __init__(self, funcs, counter):
        super().__init__(funcs)
        self.counter = counter


# -- public engines ------------------------------------------------------------


def integrate_finite(
    f: Callable,
    a,
    b,
    cfg: QuadConfig | None = None,
    ctx: PrecisionContext | None = None,
    *,
    endpoint_distances: bool = False,
) -> QuadResult:
    """Integrate ``f`` over ``(a, b)`` with the tanh-sinh rule.

    ``f`` is never evaluated at ``a`` or ``b``.  Nodes that round onto an
    endpoint end the sweep on that side.  With ``endpoint_distances=True``
    the integrand is called as ``f(x, x - a, b - x)`` where both distances
    are computed directly from the transformation, so singular factors such
    as ``log(1 - x)`` keep full relative accuracy right up to the endpoint.
    """
    if ctx is None:
        raise UsageError("a PrecisionContext is required")
    a, b = ctx.mpf(a), ctx.mpf(b)
    if not a < b:
        raise UsageError(f"need a < b, got a={a}, b={b}")
    counter = _Counter()
    g = _checked(f, ctx, counter)
    half = (b - a) / 2
    mid = a + half
    width = b - a

    if endpoint_distances:

        def right(node):
            if node is None:
                return None
            c, w = node
            dr = half * c
            return w * g(b - dr, width - dr, dr)

        def left(node):
            if node is None:
                return None
            c, w = node
            dl = half * c
            return w * g(a + dl, dl, width - dl)

        center = lambda: (ctx.mp.pi / 2) * g(mid, half, half)  # noqa: E731
    else:

        def right(node):
            if node is None:
                return None
            c, w = node
            x = b - half * c
            if x >= b:
                return None
            return w * g(x)

        def left(node):
            if node is None:
                return None
            c, w = node
            x = a + half * c
            if x <= a:
                return None
            return w * g(x)

        center = lambda: (ctx.mp.pi / 2) * g(mid)  # noqa: E731

    sides = _Sides([right, left], counter)
    return _drive(sides, center, TANH_SINH, cfg, ctx, scale=half)


def integrate_half_line(f: Callable, cfg: QuadConfig | None = None, ctx: PrecisionContext | None = None) -> QuadResult:
    """Integrate ``f`` over ``(0, inf)`` with the exp-sinh rule."""
    if ctx is None:
        raise UsageError("a PrecisionContext is required")
    counter = _Counter()
    g = _checked(f, ctx, counter)

    def outer(node):
        if node is None:
            return None
        x, w_pos, _ = node
        return w_pos * g(x)

    def inner(node):
        if node is None:
            return None
        x, _, w_neg = node
        return w_neg * g(1 / x)

    center = lambda: (ctx.mp.pi / 2) * g(ctx.mp.one)  # noqa: E731
    return _drive(_Sides([outer, inner], counter), center, EXP_SINH, cfg, ctx)


def integrate_real_line(f: Callable, cfg: QuadConfig | None = None, ctx: PrecisionContext | None = None) -> QuadResult:
    """Integrate ``f`` over the whole real line with the sinh-sinh rule."""
    if ctx is None:
        raise UsageError("a PrecisionContext is required")
    counter = _Counter()
    g = _checked(f, ctx, counter)

    def pos(node):
        if node is None:
            return None
        x, w = node
        return w * g(x)

    def neg(node):
        if node is None:
            return None
        x, w = node
        return w * g(-x)

    center = lambda: (ctx.mp.pi / 2) * g(ctx.mp.zero)  # noqa: E731
    return _drive(_Sides([pos, neg], counter), center, SINH_SINH, cfg, ctx)
