"""Exact finite-N mean energy and the unit-argument 3F2 that closes it.

The energy itself is always computed exactly from the finite pair sum; the
hypergeometric evaluator exists to check the 3F2 form of that sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .exact import (
    ConstExpr,
    HighPrec,
    bernoulli_numbers,
    decimal_constants,
    digamma_int,
    eval_const,
    frac_to_decimal,
    gamma_exact,
    gamma_half_ratio,
    gamma_ratio_series,
)

TAIL_CONSTANT = ConstExpr(q1=Fraction(7, 8), qln2=Fraction(-1, 2))


class ConvergenceError(RuntimeError):
    """The hypergeometric tail could not be certified within the caps."""


@dataclass(frozen=True)
class Hyp3F2Query:
    n: int
    digits: int = 25

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.digits < 1:
            raise ValueError(f"digits must be >= 1, got {self.digits}")


@dataclass(frozen=True)
class EnergyReport:
    n: int
    exact: ConstExpr
    numeric: HighPrec
    rescaled_exact: ConstExpr
    rescaled_numeric: HighPrec

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "exact": {**self.exact.to_json(), "decimal": str(self.numeric), "digits": self.numeric.working_digits},
            "rescaled": {
                **self.rescaled_exact.to_json(),
                "decimal": str(self.rescaled_numeric),
                "digits": self.rescaled_numeric.working_digits,
            },
        }


def summand(k: int) -> Fraction:
    """``Gamma(k+3/2) / (Gamma(3/2) (k+1)! k (k-1))``, the pair-sum term."""
    return gamma_half_ratio(k) / (k * (k - 1) * math.factorial(k + 1))


def finite_sum_S(n: int) -> Fraction:
    """``sum_{k=2}^{n-1} n(n-1)/(k(k-1)) * Gamma(k+3/2)/(Gamma(3/2)(k+1)!)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    acc = Fraction(0)
    for k in range(2, n):
        acc += summand(k)
    return acc * (n * (n - 1))


def energy_exact(n: int) -> ConstExpr:
    """Mean Coulomb energy ``E_N(1)`` as an exact combination of 1, gamma, ln 2."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    c1 = ConstExpr(q1=Fraction(13, 8), qgamma=Fraction(1, 2), qln2=Fraction(-1, 2))
    c2 = ConstExpr(q1=Fraction(-9, 8), qln2=Fraction(1, 2))
    return (
        digamma_int(n) * Fraction(n * n, 2)
        + Fraction(1, 4)
        + c1 * n
        + c2 * (n * n)
        + finite_sum_S(n)
    )


def energy_rescaled(n: int) -> ConstExpr:
    """Energy for the confinement ``exp(-N sum |z|^2)``: shift by ``-N(N-1)/2 ln N``."""
    return energy_exact(n) + ConstExpr(qlnN=Fraction(-n * (n - 1), 2), n_ref=n)


def energy_report(n: int, digits: int = 20) -> EnergyReport:
    exact = energy_exact(n)
    rescaled = energy_rescaled(n)
    return EnergyReport(n, exact, eval_const(exact, digits), rescaled, eval_const(rescaled, digits))


# --------------------------------------------------------------------------
# 3F2(1, N-1, N+3/2; N+2, N+1; 1)
# --------------------------------------------------------------------------


def hyp3f2_parameters(n: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    return (Fraction(1), Fraction(n - 1), Fraction(2 * n + 3, 2)), (Fraction(n + 2), Fraction(n + 1))


def hyp3f2_partial(n: int, m_terms: int, prec: int = 40) -> tuple[Decimal, Decimal]:
    """Sum of the first ``m_terms`` series terms and the last term added."""
    a, b = hyp3f2_parameters(n)
    b = b + (Fraction(1),)
    # integer term ratio: scale every parameter by the common denominator
    D = math.lcm(*(x.denominator for x in a + b))
    A = [int(x * D) for x in a]
    B = [int(x * D) for x in b]
    with localcontext() as ctx:
        ctx.prec = prec
        term = Decimal(1)
        total = Decimal(0)
        last = term
        for m in range(m_terms):
            total += term
            last = term
            mD = m * D
            num = (mD + A[0]) * (mD + A[1]) * (mD + A[2])
            den = (mD + B[0]) * (mD + B[1]) * (mD + B[2])
            term = term * Decimal(num) / Decimal(den)
        return total, last


def polynomial_tail_bound(n: int, m: int, t_m: Decimal) -> Decimal:
    """Bound on ``sum_{j>=m} t_j`` from the ``m^(-5/2)`` decay, with safety factor 2.

    Useful only for modest accuracy; reaching 25 digits this way would need
    about 10**18 terms.
    """
    shift = n + 1
    return 2 * t_m * (m + shift) / Decimal("1.5")


def _hurwitz_zeta(s: Fraction, x: int, tol: Decimal) -> tuple[Decimal, Decimal]:
    """``sum_{j>=x} j**(-s)`` by Euler-Maclaurin; returns value and remainder bound."""
    ds = frac_to_decimal(s)
    X = Decimal(x)
    x_pow = X ** (-ds)
    total = X * x_pow / (ds - 1) + x_pow / 2
    bern = bernoulli_numbers(80)
    rising = ds  # (s)_{2k-1}
    power = x_pow / X  # x**(-s-2k+1) at k = 1
    prev = None
    for k in range(1, 40):
        term = frac_to_decimal(bern[2 * k] / math.factorial(2 * k)) * rising * power
        if prev is not None and abs(term) > abs(prev):
            raise ConvergenceError(f"Euler-Maclaurin diverging at x={x}, s={s}")
        total += term
        if abs(term) < tol:
            return total, abs(term)
        prev = term
        rising *= (ds + 2 * k - 1) * (ds + 2 * k)
        power /= X * X
    raise ConvergenceError(f"Euler-Maclaurin did not reach tolerance at x={x}, s={s}")


def _prefactor(a, b) -> Decimal:
    """``prod Gamma(b) / prod Gamma(a)`` (m! cancels against (1)_m) in the current context."""
    r = Fraction(1)
    p = 0
    for x in b:
        g, gp = gamma_exact(x)
        r *= g
        p += gp
    for x in a:
        g, gp = gamma_exact(x)
        r /= g
        p -= gp
    value = frac_to_decimal(r)
    if p:
        value *= decimal_constants(60)["sqrt_pi"] ** p
    return value


def hyp3f2(q: Hyp3F2Query, m_terms: int | None = None, max_terms: int = 200_000) -> HighPrec:
    """``3F2(1, N-1, N+3/2; N+2, N+1; 1)`` to ``q.digits`` digits.

    The first ``M`` terms are summed directly.  The remainder is the large-m
    expansion of the term, ``t_m = K * x**sigma * sum_k d_k x**-k`` with
    ``x = m + N``, summed in closed form via Hurwitz zeta values.  Its error
    estimate is twice the last included contribution plus the Euler-Maclaurin
    remainders; ``M`` doubles until that estimate clears ``10**-(digits+2)``.
    """
    n = q.n
    target_exp = q.digits + 2
    prec = q.digits + 15
    a, b = hyp3f2_parameters(n)
    shift = n
    alphas = [x - shift for x in a]
    betas = [x - shift for x in b] + [Fraction(1 - shift)]
    # drop the (1)_m / m! cancellation pair so the series stays well conditioned
    alphas.remove(Fraction(1 - shift))
    betas.remove(Fraction(1 - shift))
    n_asym = 40
    sigma, d = gamma_ratio_series(alphas, betas, n_asym)
    if sigma >= -1:
        raise ConvergenceError("series does not converge at unit argument")
    M = m_terms if m_terms is not None else 64 + 8 * n
    while M <= max_terms:
        with localcontext() as ctx:
            ctx.prec = prec
            tol = Decimal(10) ** (-target_exp)
            head, _ = hyp3f2_partial(n, M, prec)
            K = _prefactor(a, b)
            tail = Decimal(0)
            err = Decimal(0)
            prev = None
            ok = False
            try:
                for k, dk in enumerate(d):
                    if dk == 0:
                        continue
                    z, zerr = _hurwitz_zeta(-sigma + k, M + shift, tol / 100)
                    contrib = K * frac_to_decimal(dk) * z
                    err += abs(K * frac_to_decimal(dk)) * zerr
                    if prev is not None and abs(contrib) > abs(prev) and abs(contrib) > tol:
                        break  # asymptotic series turned; need more direct terms
                    tail += contrib
                    prev = contrib
                    if abs(contrib) * 2 + err < tol:
                        ok = True
                        break
            except ConvergenceError:
                ok = False
            if ok:
                return HighPrec(head + tail, q.digits)
        if m_terms is not None:
            break
        M *= 2
    raise ConvergenceError(f"3F2 tail not certified for n={n} within {max_terms} direct terms")


def hyp3f2_prefactor(n: int) -> Fraction:
    """``Gamma(n+3/2) / (Gamma(n+2) Gamma(3/2))`` -- rational."""
    return gamma_half_ratio(n) / math.factorial(n + 1)


def hyp3f2_identity_residual(n: int, digits: int = 25) -> HighPrec:
    """``S_N - [N(N-1)/2 (7/4 - ln 2) - prefactor * 3F2]``, numerically."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    s_exact = finite_sum_S(n)
    # absolute error target: scale of S_N is ~ N^2
    extra = len(str(n * n))
    f = hyp3f2(Hyp3F2Query(n, digits + extra + 4))
    prec = digits + extra + 15
    with localcontext() as ctx:
        ctx.prec = prec
        ln2 = decimal_constants(prec)["ln2"]
        pairs = Decimal(n * (n - 1)) / 2
        rhs = pairs * (Decimal("1.75") - ln2) - frac_to_decimal(hyp3f2_prefactor(n)) * f.value
        return HighPrec(frac_to_decimal(s_exact) - rhs, digits)


def energy_boxed(n: int, digits: int = 20) -> HighPrec:
    """Energy through the 3F2 closed form, evaluated numerically."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    # the 3F2 term is the only inexact piece
    extra = len(str(n * n))
    f = hyp3f2(Hyp3F2Query(n, digits + extra + 4))
    rational_part = digamma_int(n) * Fraction(n * n, 2) + ConstExpr(
        q1=Fraction(-n * n, 4) + Fraction(3 * n, 4) + Fraction(1, 4), qgamma=Fraction(n, 2)
    )
    base = eval_const(rational_part, min(digits + extra + 4, 50))
    prec = digits + extra + 15
    with localcontext() as ctx:
        ctx.prec = prec
        value = base.value - frac_to_decimal(hyp3f2_prefactor(n)) * f.value
    return HighPrec(value, digits)
