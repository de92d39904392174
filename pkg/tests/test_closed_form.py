from decimal import Decimal, localcontext
from fractions import Fraction

import mpmath
import pytest

from dysongas.closed_form import (
    ConvergenceError,
    EnergyReport,
    Hyp3F2Query,
    energy_boxed,
    energy_exact,
    energy_report,
    energy_rescaled,
    finite_sum_S,
    hyp3f2,
    hyp3f2_identity_residual,
    hyp3f2_partial,
    polynomial_tail_bound,
)
from dysongas.exact import ConstExpr, HighPrec, eval_const, gamma_half_ratio

mpmath.mp.dps = 60


def mp_hyp3f2(n):
    return mpmath.hyp3f2(1, n - 1, n + mpmath.mpf(3) / 2, n + 2, n + 1, 1)


def test_finite_sum_examples():
    assert finite_sum_S(2) == 0
    assert gamma_half_ratio(2) == Fraction(15, 4)
    assert finite_sum_S(3) == Fraction(3 * 2, 2 * 1) * Fraction(1, 6) * Fraction(15, 4) == Fraction(15, 8)


@pytest.mark.parametrize(
    "n,expected",
    [
        (2, ConstExpr(1, -1, 1)),
        (3, ConstExpr(Fraction(29, 8), -3, 3)),
        (4, ConstExpr(Fraction(793, 96), -6, 6)),
    ],
)
def test_initial_conditions(n, expected):
    assert energy_exact(n) == expected


def test_energy_exact_rejects_small_n():
    with pytest.raises(ValueError):
        energy_exact(1)


@pytest.mark.parametrize("n", range(2, 60))
def test_gamma_and_ln2_coefficients(n):
    e = energy_exact(n)
    assert e.qgamma == Fraction(-n * (n - 1), 2)
    assert e.qln2 == Fraction(n * (n - 1), 2)
    assert e.qlnN == 0


def test_rescaled_examples():
    assert energy_rescaled(5) == ConstExpr(Fraction(5831, 384), -10, 10, -10, 5)
    r2 = energy_rescaled(2)
    assert (r2.q1, r2.qgamma, r2.qln2, r2.qlnN, r2.n_ref) == (1, -1, 1, -1, 2)
    assert abs(eval_const(r2, 30).value - eval_const(ConstExpr(1, -1), 30).value) < Decimal("1e-29")
    v10 = eval_const(energy_rescaled(10), 19).value
    assert abs(v10 - Decimal("-7.766078379434240251")) <= Decimal("1e-18")


def test_energy_mpmath_oracle():
    # independent: digamma and Gamma from mpmath, plain summation
    for n in (5, 17, 40):
        s = sum(
            mpmath.mpf(n * (n - 1)) / (k * (k - 1)) / mpmath.factorial(k + 1)
            * mpmath.gamma(k + mpmath.mpf(3) / 2) / mpmath.gamma(mpmath.mpf(3) / 2)
            for k in range(2, n)
        )
        ref = (
            n * n * mpmath.digamma(n) / 2 + mpmath.mpf(1) / 4
            + (mpmath.mpf(13) / 8 + mpmath.euler / 2 - mpmath.log(2) / 2) * n
            + (-mpmath.mpf(9) / 8 + mpmath.log(2) / 2) * n * n + s
        )
        got = mpmath.mpf(str(eval_const(energy_exact(n), 40).value))
        assert abs(got - ref) < mpmath.mpf(10) ** -35


def test_hyp3f2_n2_closed_form():
    f = hyp3f2(Hyp3F2Query(2, 30)).value
    with localcontext() as ctx:
        ctx.prec = 60
        expected = Decimal(14) / 5 - Decimal(8) / 5 * Decimal(
            "0.6931471805599453094172321214581765680755001343602552541206800094933936"
        )
    assert abs(f - expected) < Decimal("1e-31")


@pytest.mark.parametrize("n", [2, 3, 5, 11, 30, 50])
def test_hyp3f2_matches_mpmath(n):
    f = hyp3f2(Hyp3F2Query(n, 30)).value
    assert abs(mpmath.mpf(str(f)) - mp_hyp3f2(n)) < mpmath.mpf(10) ** -31


def test_first_partial_sum_is_one():
    for n in (2, 7, 40):
        head, last = hyp3f2_partial(n, 1)
        assert head == 1 and last == 1


def test_partial_sums_increase():
    prev = Decimal(0)
    for m in range(1, 200, 7):
        head, _ = hyp3f2_partial(6, m)
        assert head > prev
        prev = head


@pytest.mark.parametrize("n,m", [(2, 50), (5, 100), (20, 200)])
def test_polynomial_tail_bound_dominates(n, m):
    head, _ = hyp3f2_partial(n, m)
    _, t_m = hyp3f2_partial(n, m + 1)
    longer, _ = hyp3f2_partial(n, 10 * m)
    bound = polynomial_tail_bound(n, m, t_m)
    assert longer - head < bound
    true_tail = mpmath.mpf(str(hyp3f2(Hyp3F2Query(n, 30)).value)) - mpmath.mpf(str(head))
    assert true_tail < mpmath.mpf(str(bound))


def test_convergence_error_when_capped():
    with pytest.raises(ConvergenceError):
        hyp3f2(Hyp3F2Query(40, 30), m_terms=2)


@pytest.mark.parametrize("n,digits,tol", [(2, 25, "1e-23"), (7, 25, "1e-23"), (50, 20, "1e-18")])
def test_identity_residual_examples(n, digits, tol):
    assert abs(hyp3f2_identity_residual(n, digits).value) < Decimal(tol)


@pytest.mark.parametrize("n", [2, 3, 4, 8, 15, 26, 37, 50])
def test_boxed_form_matches_exact(n):
    boxed = energy_boxed(n, 20).value
    exact = eval_const(energy_exact(n), 30).value
    assert abs(boxed - exact) <= abs(exact) * Decimal("1e-20") + Decimal("1e-20")


@pytest.mark.parametrize(
    "n,expected",
    [
        (25, "-99.84816319738693935"),
        (50, "-492.8773199345421588"),
        (75, "-1191.5028305194359964"),
    ],
)
def test_report_examples(n, expected):
    rep = energy_report(n, 20)
    assert abs(rep.rescaled_numeric.value - Decimal(expected)) < 2 * Decimal(1).scaleb(
        Decimal(expected).as_tuple().exponent
    )
    assert rep.rescaled_exact == rep.exact + ConstExpr(qlnN=Fraction(-n * (n - 1), 2), n_ref=n)
    assert rep.numeric.value == eval_const(rep.exact, 20).value


def test_report_json_fixpoint():
    rep = energy_report(10, 20)
    doc = rep.to_json()
    again = EnergyReport(
        doc["n"],
        ConstExpr.from_json(doc["exact"]),
        HighPrec(Decimal(doc["exact"]["decimal"]), doc["exact"]["digits"]),
        ConstExpr.from_json(doc["rescaled"]),
        HighPrec(Decimal(doc["rescaled"]["decimal"]), doc["rescaled"]["digits"]),
    )
    assert again.to_json() == doc
    assert again.exact == rep.exact and again.rescaled_exact == rep.rescaled_exact
