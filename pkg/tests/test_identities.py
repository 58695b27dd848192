from fractions import Fraction

import pytest

from zeta4.errors import UsageError
from zeta4.identities import (
    GROUPS,
    catalog,
    expand_ids,
    fourier_coefficient,
    fourier_coefficient_exact,
    get,
    parseval_partial,
    parseval_report,
    parseval_zeta4,
    verify,
    verify_all,
)
from zeta4.numctx import make_context
from zeta4.quadrature import QuadConfig
from zeta4.special import zeta_int

IDS = [row.id for row in catalog()]


def test_catalog_shape():
    assert IDS == sorted(IDS)
    assert len(IDS) == 19
    assert set(GROUPS["EULER_REP"]) == {"EULER_REP_S2", "EULER_REP_S3", "EULER_REP_S4"}
    assert set(GROUPS["MELLIN_REP"]) == {"MELLIN_REP_S2", "MELLIN_REP_S3", "MELLIN_REP_S4"}


@pytest.mark.parametrize(
    "ident, coeff, constant, order",
    [
        ("MAIN_Z4_REAL_LINE", Fraction(7, 90), "pi", 4),
        ("MOMENT_P2", Fraction(279, 2), "zeta", 6),
        ("Z2_REP", Fraction(1, 6), "pi", 2),
        ("BLOCK_A", -2, "zeta", 4),
        ("BLOCK_B", -6, "zeta", 4),
        ("BLOCK_C", Fraction(-1, 2), "zeta", 4),
        ("MOMENT_P4", Fraction(804825, 2), "zeta", 10),
    ],
)
def test_catalog_right_hand_sides(ident, coeff, constant, order):
    rhs = get(ident).rhs
    assert (rhs.coefficient, rhs.constant, rhs.order) == (coeff, constant, order)


def test_expand_ids():
    assert expand_ids("all") == IDS
    assert expand_ids(["EULER_REP", "Z2_REP"]) == ["EULER_REP_S2", "EULER_REP_S3", "EULER_REP_S4", "Z2_REP"]
    with pytest.raises(UsageError):
        expand_ids(["NO_SUCH"])


@pytest.mark.parametrize("digits", [15, 30, 50])
def test_every_row_passes(digits):
    ctx = make_context(digits)
    reports = verify_all(ctx)
    assert len(reports) == len(IDS)
    failed = [(r.id, r.abs_residual, r.note) for r in reports if not r.passed]
    assert not failed
    for r in reports:
        assert r.tolerance == ctx.tolerance(8)


def test_specific_rows_at_50_digits(ctx50):
    for ident in ("BORWEIN_Z4", "MAIN_Z4_REAL_LINE"):
        assert verify(ident, ctx50).abs_residual < ctx50.mpf("1e-42")
    b = verify("BLOCK_B", ctx50)
    assert b.passed and abs(b.lhs_value + 6 * zeta_int(4, ctx50)) < ctx50.mpf("1e-42")
    p4 = verify("MOMENT_P4", ctx50)
    assert p4.passed
    assert abs(p4.lhs_value / zeta_int(10, ctx50) - ctx50.mpf(Fraction(804825, 2))) < ctx50.mpf("1e-40")


def test_underresolved_rows_fail_without_raising(ctx50):
    reports = verify_all(ctx50, QuadConfig(max_level=4))
    assert any(not r.passed for r in reports)
    for r in reports:
        if not r.passed:
            assert r.note and r.note.startswith("convergence")


def test_three_main_forms_agree(ctx50):
    values = [verify(i, ctx50).lhs_value for i in ("MAIN_Z4_REAL_LINE", "MAIN_Z4_HALF_LINE", "MAIN_Z4_UNIT")]
    tol = ctx50.tolerance(8)
    for a in values:
        for b in values:
            assert abs(a - b) < tol


def test_printed_block_equals_block_c_by_symmetry(ctx50):
    a = verify("BLOCK_A_PRINTED", ctx50).lhs_value
    c = verify("BLOCK_C", ctx50).lhs_value
    assert abs(a - c) < ctx50.tolerance(8)


def test_block_recomposition(ctx50):
    lhs = {i: verify(i, ctx50).lhs_value for i in ("MAIN_Z4_UNIT", "BLOCK_A", "BLOCK_B", "BLOCK_C")}
    recomposed = -lhs["BLOCK_A"] - lhs["BLOCK_B"] + 2 * lhs["BLOCK_C"]
    assert abs(lhs["MAIN_Z4_UNIT"] - recomposed) < 10 * ctx50.tolerance(8)


def test_symmetry_row_matches_block_b(ctx50):
    assert abs(verify("SYMMETRY_B", ctx50).lhs_value - verify("BLOCK_B", ctx50).lhs_value) < ctx50.tolerance(8)


@pytest.mark.parametrize("n, expected", [(1, -2), (2, Fraction(1, 2)), (3, Fraction(-2, 9)), (10, Fraction(1, 50))])
def test_fourier_coefficients(ctx50, n, expected):
    assert abs(fourier_coefficient(n, ctx50) - ctx50.mpf(expected)) < ctx50.tolerance(0)
    assert fourier_coefficient_exact(n, ctx50) == ctx50.mpf(expected)


def test_fourier_coefficient_zero(ctx50):
    assert abs(fourier_coefficient(0, ctx50) - ctx50.pi**2 / 3) < ctx50.tolerance(0)
    with pytest.raises(UsageError):
        fourier_coefficient(-1, ctx50)


def test_parseval(ctx50):
    z4 = ctx50.pi**4 / 90
    assert parseval_partial(1, ctx50) == 1
    p10 = parseval_partial(10, ctx50)
    assert abs(p10 - ctx50.mpf(sum(Fraction(1, n**4) for n in range(1, 11)))) < ctx50.eps
    assert ctx50.nstr(p10, 7) == "1.082037"
    assert 0 < z4 - p10 < ctx50.mpf(1) / 3000
    report = parseval_report(1000, ctx50)
    assert report.consistent and abs(report.target - z4) < ctx50.eps * 10
    assert abs(report.gap) < ctx50.mpf("1e-8")
    assert abs(parseval_zeta4(ctx50) - z4) < ctx50.tolerance(0)
    with pytest.raises(UsageError):
        parseval_partial(0, ctx50)
