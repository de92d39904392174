"""Third-order difference equations for ``e_N(eps)`` and ``E_N(1)``.

Residuals are evaluated exactly; a window satisfies its recursion iff the
residual is zero.  The energy recursion is also solved forward from the
known ``E_2, E_3, E_4``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .closed_form import finite_sum_S
from .exact import ConstExpr, digamma_int

E2 = ConstExpr(q1=1, qgamma=-1, qln2=1)
E3 = ConstExpr(q1=Fraction(29, 8), qgamma=-3, qln2=3)
E4 = ConstExpr(q1=Fraction(793, 96), qgamma=-6, qln2=6)
INITIAL_ENERGIES = (E2, E3, E4)

C1 = ConstExpr(q1=Fraction(13, 8), qgamma=Fraction(1, 2), qln2=Fraction(-1, 2))
C2 = ConstExpr(q1=Fraction(-9, 8), qln2=Fraction(1, 2))
C3 = ConstExpr(q1=1)


@dataclass(frozen=True)
class RecursionWindow:
    n: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != 4:
            raise ValueError(f"a recursion window holds 4 values, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(self.values))


def e_recursion_coefficients(n: int, eps: int) -> tuple[int, int, int, int]:
    """Coefficients of ``e_N, e_{N+1}, e_{N+2}, e_{N+3}``."""
    N, e = n, eps
    return (
        (N + 1) * (e + 2 * N + 3) * (e + 2 * N + 4),
        -2 * (12 + 34 * N + 26 * N**2 + 6 * N**3 + 5 * e + 10 * N * e + 4 * N**2 * e + e**2 + N * e**2),
        (N + 1) * (12 * N**2 + 38 * N + 4 * N * e + e**2 + 5 * e + 24),
        -4 * (N + 2) * (N + 1) ** 2,
    )


def energy_recursion_coefficients(n: int) -> tuple[tuple[int, int, int, int], int]:
    """Homogeneous coefficients of ``E_N .. E_{N+3}`` and the inhomogeneous term."""
    N = n
    return (
        (
            2 * (2 * N + 3) * (N + 2) * (N + 1),
            -4 * (N + 2) * (3 * N**2 + 7 * N + 3),
            2 * (N + 1) * (6 * N**2 + 19 * N + 12),
            -4 * (N + 2) * (N + 1) ** 2,
        ),
        (3 * N + 5) * (N + 1),
    )


def e_recursion_residual(
    n: int,
    eps: int,
    w: RecursionWindow | Sequence,
    coefficients: Callable = e_recursion_coefficients,
) -> Fraction:
    values = w.values if isinstance(w, RecursionWindow) else tuple(w)
    coeffs = coefficients(n, eps)
    return sum((Fraction(c) * v for c, v in zip(coeffs, values)), Fraction(0))


def energy_recursion_residual(
    n: int,
    w: RecursionWindow | Sequence[ConstExpr],
    coefficients: Callable = energy_recursion_coefficients,
) -> ConstExpr:
    values = w.values if isinstance(w, RecursionWindow) else tuple(w)
    if any(v.qlnN != 0 for v in values):
        raise ValueError("energy recursion applies to unrescaled energies (no ln N component)")
    coeffs, inhom = coefficients(n)
    total = ConstExpr.rational(inhom)
    for c, v in zip(coeffs, values):
        total = total + v * c
    return total


def solve_energy_forward(n_max: int, coefficients: Callable = energy_recursion_coefficients) -> dict[int, ConstExpr]:
    """``{N: E_N(1)}`` for ``N = 2..n_max`` from the three initial energies."""
    if n_max < 4:
        raise ValueError(f"n_max must be >= 4, got {n_max}")
    energies = {2: E2, 3: E3, 4: E4}
    for N in range(2, n_max - 2):
        (c0, c1, c2, c3), inhom = coefficients(N)
        rhs = energies[N] * c0 + energies[N + 1] * c1 + energies[N + 2] * c2 + inhom
        energies[N + 3] = rhs / (-c3)
    return energies


def generic_solution(n: int, c1, c2, c3) -> ConstExpr:
    """Three-parameter family ``N^2 psi(N)/2 + 1/4 + c1 N + c2 N^2 + c3 * sum``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")

    def as_expr(c):
        return c if isinstance(c, ConstExpr) else ConstExpr.rational(c)

    c1, c2, c3 = as_expr(c1), as_expr(c2), as_expr(c3)
    total = digamma_int(n) * Fraction(n * n, 2) + Fraction(1, 4)
    total = total + c1 * n + c2 * (n * n)
    s = finite_sum_S(n)
    # c3 multiplies a rational, so only its coefficients scale
    total = total + ConstExpr(c3.q1 * s, c3.qgamma * s, c3.qln2 * s)
    return total


# --------------------------------------------------------------------------
# eps-expansion consistency between the two recursions
# --------------------------------------------------------------------------


def _pair_count(n: int) -> int:
    return n * (n - 1) // 2


def epsilon_expansion_check(n: int, coefficients: Callable = e_recursion_coefficients) -> dict:
    """Substitute ``e_N = N(N-1)/2 + eps E_N + O(eps^2)`` into the e-recursion.

    The e-recursion coefficients are quadratic in eps, so the value and slope
    at eps = 0 follow exactly from samples at eps = 0, 1, 2.  Returns the
    order-0 residual and, at order 1, whether the induced homogeneous
    coefficients and inhomogeneous term equal the energy recursion's.
    """
    f0, f1, f2 = (coefficients(n, e) for e in (0, 1, 2))
    slope = [Fraction(-3 * a + 4 * b - c, 2) for a, b, c in zip(f0, f1, f2)]
    pairs = [_pair_count(n + i) for i in range(4)]
    order0 = sum(c * p for c, p in zip(f0, pairs))
    induced_inhom = sum((s * p for s, p in zip(slope, pairs)), Fraction(0))
    e_coeffs, e_inhom = energy_recursion_coefficients(n)
    return {
        "order0_residual": order0,
        "homogeneous_match": tuple(f0) == tuple(e_coeffs),
        "inhomogeneous_induced": induced_inhom,
        "inhomogeneous_expected": e_inhom,
        "ok": order0 == 0 and tuple(f0) == tuple(e_coeffs) and induced_inhom == e_inhom,
    }
