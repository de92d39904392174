"""Exact arithmetic primitives.

Rationals are plain :class:`fractions.Fraction`.  Energies live in
:class:`ConstExpr`, a rational linear combination over the basis
``{1, gamma, ln 2, ln N}``; numeric values are rendered through
:class:`HighPrec`, a :class:`decimal.Decimal` tagged with the number of
significant digits it is good for.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

Rational = Union[int, Fraction]

# 70 significant digits each; eval_const accepts at most MAX_DIGITS.
EULER_GAMMA_DIGITS = "0.5772156649015328606065120900824024310421593359399235988057672348848677"
LN2_DIGITS = "0.6931471805599453094172321214581765680755001343602552541206800094933936"
SQRT_PI_DIGITS = "1.772453850905516027298167483341145182797549456122387128213807789852911"
PI_DIGITS = "3.141592653589793238462643383279502884197169399375105820974944592307816"

MAX_DIGITS = 50
GUARD_DIGITS = 10


class PrecisionError(ValueError):
    """Requested more digits than the embedded constants support."""


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number: {n}")
    return math.factorial(n)


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    """Return the harmonic number ``H_n = 1 + 1/2 + ... + 1/n``."""
    if n < 1:
        raise ValueError(f"harmonic(n) requires n >= 1, got {n}")
    if n == 1:
        return Fraction(1)
    return harmonic(n - 1) + Fraction(1, n)


def gamma_half_ratio(k: int) -> Fraction:
    """``Gamma(k + 3/2) / Gamma(3/2) = prod_{j=1..k} (j + 1/2)``."""
    if k < 0:
        raise ValueError(f"gamma_half_ratio requires k >= 0, got {k}")
    num = 1
    for j in range(1, k + 1):
        num *= 2 * j + 1
    return Fraction(num, 2**k)


def gamma_exact(x: Fraction) -> tuple[Fraction, int]:
    """Gamma at a positive integer or half-integer, as ``(r, p)`` meaning ``r * sqrt(pi)**p``."""
    x = Fraction(x)
    if x <= 0 or (2 * x).denominator != 1:
        raise ValueError(f"gamma_exact needs a positive (half-)integer, got {x}")
    if x.denominator == 1:
        return Fraction(math.factorial(int(x) - 1)), 0
    # Gamma(k + 1/2) = Gamma(k - 1 + 3/2) = gamma_half_ratio(k - 1) * sqrt(pi) / 2
    k = int(x - Fraction(1, 2))
    if k == 0:
        return Fraction(1), 1
    return gamma_half_ratio(k - 1) / 2, 1


# --------------------------------------------------------------------------
# Symbolic constants
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstExpr:
    """``q1 + qgamma*gamma + qln2*ln(2) + qlnN*ln(n_ref)`` with rational coefficients.

    The form is canonical: ``n_ref`` is dropped whenever ``qlnN`` is zero, so
    dataclass equality is exact mathematical equality of the coefficients.
    """

    q1: Fraction = Fraction(0)
    qgamma: Fraction = Fraction(0)
    qln2: Fraction = Fraction(0)
    qlnN: Fraction = Fraction(0)
    n_ref: Optional[int] = None

    def __post_init__(self):
        for name in ("q1", "qgamma", "qln2", "qlnN"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.qlnN == 0:
            object.__setattr__(self, "n_ref", None)
        elif self.n_ref is None or self.n_ref < 1:
            raise ValueError("a nonzero ln N coefficient needs a positive n_ref")

    @classmethod
    def rational(cls, q: Rational) -> "ConstExpr":
        return cls(q1=Fraction(q))

    def _merged_ref(self, other: "ConstExpr") -> Optional[int]:
        if self.n_ref is not None and other.n_ref is not None and self.n_ref != other.n_ref:
            raise ValueError(f"cannot combine ln({self.n_ref}) and ln({other.n_ref}) terms")
        return self.n_ref if self.n_ref is not None else other.n_ref

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ConstExpr.rational(other)
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return ConstExpr(
            self.q1 + other.q1,
            self.qgamma + other.qgamma,
            self.qln2 + other.qln2,
            self.qlnN + other.qlnN,
            self._merged_ref(other),
        )

    __radd__ = __add__

    def __neg__(self):
        return ConstExpr(-self.q1, -self.qgamma, -self.qln2, -self.qlnN, self.n_ref)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ConstExpr.rational(other)
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return ConstExpr(self.q1 * k, self.qgamma * k, self.qln2 * k, self.qlnN * k, self.n_ref)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(k))

    def is_zero(self) -> bool:
        return self == ConstExpr()

    def __str__(self) -> str:
        parts = []
        for coeff, symbol in (
            (self.q1, ""),
            (self.qgamma, "γ"),
            (self.qln2, "ln2"),
            (self.qlnN, f"ln{self.n_ref}"),
        ):
            if coeff == 0:
                continue
            mag = abs(coeff)
            if symbol and mag == 1:
                body = symbol
            elif symbol:
                body = f"{mag}{symbol}" if mag.denominator == 1 else f"({mag}){symbol}"
            else:
                body = str(mag)
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {
            "rational": str(self.q1),
            "gamma": str(self.qgamma),
            "ln2": str(self.qln2),
            "lnN": str(self.qlnN),
            "n_ref": self.n_ref,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ConstExpr":
        return cls(
            Fraction(d["rational"]),
            Fraction(d["gamma"]),
            Fraction(d["ln2"]),
            Fraction(d["lnN"]),
            d.get("n_ref"),
        )


def digamma_int(n: int) -> ConstExpr:
    """Digamma at a positive integer: ``psi(n) = H_{n-1} - gamma``."""
    if n < 1:
        raise ValueError(f"digamma_int requires n >= 1, got {n}")
    h = harmonic(n - 1) if n > 1 else Fraction(0)
    return ConstExpr(q1=h, qgamma=-1)


# --------------------------------------------------------------------------
# Numeric rendering
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HighPrec:
    """A decimal value good to ``working_digits`` significant digits.

    ``value`` may carry guard digits beyond ``working_digits``; ``str`` rounds.
    """

    value: Decimal
    working_digits: int

    def render(self, digits: Optional[int] = None) -> str:
        digits = self.working_digits if digits is None else digits
        if self.value == 0:
            return "0"
        with localcontext() as ctx:
            ctx.prec = digits
            rounded = +self.value
        return _plain(rounded)

    def __str__(self) -> str:
        return self.render()

    def __float__(self) -> float:
        return float(self.value)

    def __add__(self, other: "HighPrec") -> "HighPrec":
        with localcontext() as ctx:
            ctx.prec = max(self.working_digits, other.working_digits) + GUARD_DIGITS
            return HighPrec(self.value + other.value, min(self.working_digits, other.working_digits))

    def __sub__(self, other: "HighPrec") -> "HighPrec":
        with localcontext() as ctx:
            ctx.prec = max(self.working_digits, other.working_digits) + GUARD_DIGITS
            return HighPrec(self.value - other.value, min(self.working_digits, other.working_digits))


def _plain(d: Decimal) -> str:
    """Fixed-point string without exponent."""
    s = format(d, "f")
    return s


def decimal_constants(prec: int) -> dict[str, Decimal]:
    with localcontext() as ctx:
        ctx.prec = prec
        return {
            "gamma": +Decimal(EULER_GAMMA_DIGITS),
            "ln2": +Decimal(LN2_DIGITS),
            "sqrt_pi": +Decimal(SQRT_PI_DIGITS),
            "pi": +Decimal(PI_DIGITS),
        }


def frac_to_decimal(q: Fraction) -> Decimal:
    """Divide in the current decimal context."""
    return Decimal(q.numerator) / Decimal(q.denominator)


def _eval_at(expr: ConstExpr, prec: int) -> tuple[Decimal, Decimal]:
    """Value and largest term magnitude at ``prec`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = prec
        c = decimal_constants(prec)
        terms = [
            frac_to_decimal(expr.q1),
            frac_to_decimal(expr.qgamma) * c["gamma"],
            frac_to_decimal(expr.qln2) * c["ln2"],
        ]
        if expr.qlnN != 0:
            terms.append(frac_to_decimal(expr.qlnN) * Decimal(expr.n_ref).ln())
        total = sum(terms, Decimal(0))
        return total, max(abs(t) for t in terms)


def eval_const(expr: ConstExpr, digits: int = 20) -> HighPrec:
    """Numeric value of ``expr`` correct to ``digits`` significant digits."""
    if digits < 1:
        raise ValueError("digits must be positive")
    if digits > MAX_DIGITS:
        raise PrecisionError(f"at most {MAX_DIGITS} digits available, requested {digits}")
    prec = digits + GUARD_DIGITS
    value, biggest = _eval_at(expr, prec)
    if value != 0 and biggest != 0:
        # cancellation between basis terms eats leading digits
        lost = biggest.adjusted() - value.adjusted()
        if lost > 0:
            value, _ = _eval_at(expr, prec + lost)
    return HighPrec(value, digits)


# --------------------------------------------------------------------------
# Bernoulli numbers and gamma-ratio asymptotics
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_numbers(n_max: int) -> tuple[Fraction, ...]:
    """``B_0 .. B_{n_max}`` with the ``B_1 = -1/2`` convention."""
    b = [Fraction(0)] * (n_max + 1)
    b[0] = Fraction(1)
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b[m] = -acc / (m + 1)
    return tuple(b)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    b = bernoulli_numbers(max(n, 96))
    x = Fraction(x)
    return sum((math.comb(n, k) * b[k] * x ** (n - k) for k in range(n + 1)), Fraction(0))


def gamma_ratio_series(alphas, betas, n_terms: int) -> tuple[Fraction, list[Fraction]]:
    """Large-x expansion of ``prod Gamma(x + a) / prod Gamma(x + b)``.

    Both lists must have equal length.  Returns ``(sigma, d)`` with
    ``ratio ~ x**sigma * sum_k d[k] * x**(-k)`` for ``k < n_terms``.
    """
    if len(alphas) != len(betas):
        raise ValueError("need as many numerator as denominator gammas")
    alphas = [Fraction(a) for a in alphas]
    betas = [Fraction(b) for b in betas]
    sigma = sum(alphas) - sum(betas)
    # log ratio = sigma*ln x + sum_{n>=1} c_n x^-n
    c = [Fraction(0)] * n_terms
    for n in range(1, n_terms):
        diff = sum(bernoulli_poly(n + 1, a) for a in alphas) - sum(bernoulli_poly(n + 1, b) for b in betas)
        c[n] = (-1) ** (n + 1) * diff / (n * (n + 1))
    # exp of a power series with zero constant term: k d_k = sum_j j c_j d_{k-j}
    d = [Fraction(0)] * n_terms
    d[0] = Fraction(1)
    for k in range(1, n_terms):
        d[k] = sum((j * c[j] * d[k - j] for j in range(1, k + 1)), Fraction(0)) / k
    return sigma, d
