"""Large-N expansion of the mean energy and checks of its intermediate series."""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable

from .closed_form import TAIL_CONSTANT, finite_sum_S, summand
from .exact import (
    ConstExpr,
    HighPrec,
    decimal_constants,
    digamma_int,
    eval_const,
    frac_to_decimal,
)

_PREC = 50


@dataclass(frozen=True)
class AsymptoticTerm:
    """``(coeff + inv_sqrt_pi / sqrt(pi)) * N**power``, times ``ln N`` if ``is_log``."""

    power: Fraction
    coeff: ConstExpr = ConstExpr()
    inv_sqrt_pi: Fraction = Fraction(0)
    is_log: bool = False

    def value(self, n: int, prec: int = _PREC) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = prec
            c = decimal_constants(prec)
            coeff = frac_to_decimal(self.coeff.q1) + frac_to_decimal(self.coeff.qgamma) * c["gamma"]
            coeff += frac_to_decimal(self.coeff.qln2) * c["ln2"]
            coeff += frac_to_decimal(self.inv_sqrt_pi) / c["sqrt_pi"]
            N = Decimal(n)
            v = coeff * N ** frac_to_decimal(self.power)
            if self.is_log:
                v *= N.ln()
            return v


_TERMS = (
    AsymptoticTerm(Fraction(2), ConstExpr(q1=Fraction(1, 2)), is_log=True),
    AsymptoticTerm(Fraction(2), ConstExpr(q1=Fraction(-1, 4))),
    AsymptoticTerm(Fraction(1), ConstExpr(q1=Fraction(1, 2), qgamma=Fraction(1, 2))),
    AsymptoticTerm(Fraction(1, 2), inv_sqrt_pi=Fraction(-4, 3)),
    AsymptoticTerm(Fraction(0), ConstExpr(q1=Fraction(5, 24))),
    AsymptoticTerm(Fraction(-1, 2), inv_sqrt_pi=Fraction(1, 30)),
    AsymptoticTerm(Fraction(-3, 2), inv_sqrt_pi=Fraction(-107, 3360)),
    AsymptoticTerm(Fraction(-2), ConstExpr(q1=Fraction(1, 240))),
)

POWERS = tuple(sorted({t.power for t in _TERMS}, reverse=True))

# Coefficients of N^{-3/2}, N^{-5/2}, N^{-7/2} (over sqrt(pi)) in
# sum_{k=2}^{N-1} summand(k) - const.  The printed intermediate display carries
# +7/10 and -391/672; only -13/10 and -895/672 reproduce the partial sums and
# yield the 1/30 and -107/3360 of the final expansion.
PARTIAL_SUM_COEFFS = (Fraction(-4, 3), Fraction(-13, 10), Fraction(-895, 672))
PARTIAL_SUM_COEFFS_DISPLAYED = (Fraction(-4, 3), Fraction(7, 10), Fraction(-391, 672))
# Same after multiplying by N(N-1): powers 1/2, -1/2, -3/2.
MULTIPLIED_SUM_COEFFS = (Fraction(-4, 3), Fraction(1, 30), Fraction(-107, 3360))
# summand(k) ~ (2 k^{-5/2} + 3/4 k^{-7/2} + 121/64 k^{-9/2}) / sqrt(pi)
SUMMAND_COEFFS = (Fraction(2), Fraction(3, 4), Fraction(121, 64))


def asymptotic_terms() -> list[AsymptoticTerm]:
    return list(_TERMS)


def tail_constant() -> ConstExpr:
    """``sum_{k>=2} summand(k) = 7/8 - ln(2)/2``."""
    return TAIL_CONSTANT


def energy_asymptotic(n: int, truncate_after_power=Fraction(-2), digits: int = 20) -> HighPrec:
    """Sum of all expansion terms whose power of N is at least ``truncate_after_power``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    cut = Fraction(truncate_after_power)
    if cut not in POWERS:
        raise ValueError(f"unknown truncation power {cut}; choose from {[str(p) for p in POWERS]}")
    prec = digits + 15
    with localcontext() as ctx:
        ctx.prec = prec
        total = sum((t.value(n, prec) for t in _TERMS if t.power >= cut), Decimal(0))
    return HighPrec(total, digits)


def asymptotic_error(n: int, truncate_after_power=Fraction(-2)) -> Decimal:
    """``|energy_asymptotic - E_N(1)|``."""
    approx = energy_asymptotic(n, truncate_after_power, 30)
    exact = eval_const(_energy(n), 30)
    with localcontext() as ctx:
        ctx.prec = 40
        return abs(approx.value - exact.value)


def _energy(n: int) -> ConstExpr:
    from .closed_form import energy_exact

    return energy_exact(n)


def summand_expansion_check(k_min: int, k_max: int, n_terms: int = 3) -> Decimal:
    """Max over k of ``|summand(k) - expansion| * sqrt(pi) * k**(11/2)``.

    With all three coefficients this stays bounded by roughly the next
    coefficient; dropping terms makes it grow with k.
    """
    if not 10 <= k_min < k_max:
        raise ValueError("need 10 <= k_min < k_max")
    worst = Decimal(0)
    with localcontext() as ctx:
        ctx.prec = _PREC
        sqrt_pi = decimal_constants(_PREC)["sqrt_pi"]
        for k in range(k_min, k_max + 1):
            K = Decimal(k)
            sqk = K.sqrt()
            # scaled expansion: sum_i c_i k^{3-i}
            approx = sum(
                (frac_to_decimal(c) * K ** (3 - i) for i, c in enumerate(SUMMAND_COEFFS[:n_terms])),
                Decimal(0),
            )
            exact = frac_to_decimal(summand(k)) * sqrt_pi * K**5 * sqk
            worst = max(worst, abs(exact - approx))
    return worst


def partial_sum_deviations(
    n: int,
    coeffs: tuple = PARTIAL_SUM_COEFFS,
    multiplied: tuple = MULTIPLIED_SUM_COEFFS,
) -> tuple[Decimal, Decimal]:
    """Scaled deviations of both partial-sum expansions at one N.

    ``pre``: ``|sum_{k<N} summand - const - series| * sqrt(pi) * N**(9/2)``.
    ``post``: ``|S_N - N(N-1) const - series| * sqrt(pi) * N**(5/2)``.
    """
    s_exact = finite_sum_S(n)
    with localcontext() as ctx:
        ctx.prec = _PREC
        c = decimal_constants(_PREC)
        const = frac_to_decimal(TAIL_CONSTANT.q1) + frac_to_decimal(TAIL_CONSTANT.qln2) * c["ln2"]
        N = Decimal(n)
        rootN = N.sqrt()
        partial = frac_to_decimal(s_exact / (n * (n - 1)))
        series = sum(
            (frac_to_decimal(a) / (N ** (i + 1) * rootN) for i, a in enumerate(coeffs)), Decimal(0)
        )
        pre = abs(partial - const - series / c["sqrt_pi"]) * c["sqrt_pi"] * N**4 * rootN
        mseries = sum(
            (frac_to_decimal(a) * rootN / N ** (i) for i, a in enumerate(multiplied)), Decimal(0)
        )
        post = abs(frac_to_decimal(s_exact) - N * (N - 1) * const - mseries / c["sqrt_pi"])
        post = post * c["sqrt_pi"] * N**2 * rootN
        return pre, post


def partial_sum_expansion_check(
    n_values: Iterable[int],
    coeffs: tuple = PARTIAL_SUM_COEFFS,
    multiplied: tuple = MULTIPLIED_SUM_COEFFS,
) -> Decimal:
    """Largest scaled deviation of either partial-sum expansion over ``n_values``."""
    worst = Decimal(0)
    for n in n_values:
        if n < 10:
            raise ValueError(f"partial-sum expansion check needs n >= 10, got {n}")
        worst = max(worst, *partial_sum_deviations(n, coeffs, multiplied))
    return worst


def digamma_expansion_deviation(n: int) -> Decimal:
    """``|N^2 psi(N)/2 - (N^2 ln N/2 - N/4 - 1/24 + N^-2/240 - N^-4/504)| * N**6``."""
    with localcontext() as ctx:
        ctx.prec = _PREC
        exact = eval_const(digamma_int(n) * Fraction(n * n, 2), 40).value
        N = Decimal(n)
        approx = N * N * N.ln() / 2 - N / 4 - Decimal(1) / 24 + 1 / (240 * N**2) - 1 / (504 * N**4)
        return abs(exact - approx) * N**6
