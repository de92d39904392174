"""Partition function and the replica correlator ``e_N(eps)`` at natural eps.

Two independent routes to ``e_N(eps) = < sum_{i<j} |z_i - z_j|^(2 eps) >``:

* :func:`e_formula` -- the closed double sum over level pairs ``a < b``;
* :func:`e_oracle` -- literal expansion of both Vandermonde determinants over
  permutation pairs, with every planar Gaussian moment evaluated by
  ``int z^i zbar^j exp(-|z|^2) d^2z / pi = delta_ij i!``.

Everything is exact integer arithmetic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

ORACLE_MAX_N = 6
ORACLE_MAX_EPS = 4


class OracleLimitError(ValueError):
    """Query too large for the permutation-pair oracle."""


@dataclass(frozen=True)
class CorrelatorQuery:
    n: int
    eps: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least two particles, got n={self.n}")
        if self.eps < 0:
            raise ValueError(f"eps must be non-negative, got {self.eps}")


def moment(i: int, j: int) -> int:
    """Planar Gaussian moment with the factor pi removed."""
    return math.factorial(i) if i == j else 0


def partition_beta1(n: int) -> int:
    """``Z_n(1) = 1! 2! ... n!``."""
    if n < 1:
        raise ValueError(f"partition_beta1 requires n >= 1, got {n}")
    z = 1
    for k in range(1, n + 1):
        z *= math.factorial(k)
    return z


def _pair_term(a: int, b: int, eps: int) -> int:
    f = math.factorial
    c = math.comb
    direct = 0
    for i in range(eps + 1):
        direct += c(eps, i) ** 2 * f(eps - i + a) * f(i + b)
    exchange = 0
    d = b - a
    for i in range(eps - d + 1):
        exchange += c(eps, i) * c(eps, i + d) * f(eps - i + a) * f(i + b)
    if d % 2:
        exchange = -exchange
    num = direct - exchange
    den = f(a) * f(b)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"non-integral pair term at a={a}, b={b}, eps={eps}")
    return q


def e_formula(q: CorrelatorQuery) -> int:
    """``e_N(eps)`` from the level-pair double sum."""
    return sum(_pair_term(a, b, q.eps) for b in range(q.n) for a in range(b))


def _sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _two_body_moment(eps: int, p1: int, p2: int, q1: int, q2: int) -> int:
    """``(1/pi^2) int |z1-z2|^(2eps) z1^p1 z2^p2 zbar1^q1 zbar2^q2 e^{-|z1|^2-|z2|^2}``."""
    total = 0
    for i in range(eps + 1):
        ci = math.comb(eps, i)
        for j in range(eps + 1):
            m1 = moment(p1 + eps - i, q1 + eps - j)
            if not m1:
                continue
            m2 = moment(p2 + i, q2 + j)
            if not m2:
                continue
            total += (-1) ** (i + j) * ci * math.comb(eps, j) * m1 * m2
    return total


def e_oracle(q: CorrelatorQuery) -> int:
    """``e_N(eps)`` by brute-force permutation-pair expansion."""
    n, eps = q.n, q.eps
    if n > ORACLE_MAX_N or eps > ORACLE_MAX_EPS:
        raise OracleLimitError(
            f"oracle limited to n <= {ORACLE_MAX_N}, eps <= {ORACLE_MAX_EPS}; got n={n}, eps={eps}"
        )
    perms = [(p, _sign(p)) for p in itertools.permutations(range(n))]
    numer = 0
    z = 0
    for sigma, s_sigma in perms:
        for tau, s_tau in perms:
            rest = 1
            for k in range(2, n):
                rest *= moment(sigma[k], tau[k])
                if not rest:
                    break
            if not rest:
                continue
            sign = s_sigma * s_tau
            z += sign * rest * moment(sigma[0], tau[0]) * moment(sigma[1], tau[1])
            numer += sign * rest * _two_body_moment(eps, sigma[0], sigma[1], tau[0], tau[1])
    value = Fraction(n * (n - 1), 2) * Fraction(numer, z)
    if value.denominator != 1:
        raise ArithmeticError(f"oracle produced non-integer {value}")
    return int(value)


def partition_oracle(n: int) -> int:
    """``Z_n(1)`` by the same permutation-pair expansion."""
    if n > ORACLE_MAX_N + 1:
        raise OracleLimitError(f"oracle limited to n <= {ORACLE_MAX_N + 1}")
    perms = [(p, _sign(p)) for p in itertools.permutations(range(n))]
    z = 0
    for sigma, s_sigma in perms:
        for tau, s_tau in perms:
            prod = 1
            for k in range(n):
                prod *= moment(sigma[k], tau[k])
                if not prod:
                    break
            z += s_sigma * s_tau * prod
    return z


def e_table(n_max: int, eps_max: int) -> list[list[int]]:
    """Rows ``N = 2..n_max``, columns ``eps = 1..eps_max``."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    if eps_max < 0:
        raise ValueError(f"eps_max must be >= 0, got {eps_max}")
    return [
        [e_formula(CorrelatorQuery(n, eps)) for eps in range(1, eps_max + 1)]
        for n in range(2, n_max + 1)
    ]
