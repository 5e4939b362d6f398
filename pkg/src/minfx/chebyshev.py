"""Chebyshev polynomials and their exponential-substituted expansion.

The detector polynomial used by the contamination estimators is
``T_q(2 exp(x) - 1)``, expanded as ``sum_j a_j exp(x j)`` with integer
coefficients ``a_j``.  Those coefficients alternate in sign and grow
like ``(3 + 2 sqrt 2)^q``, so the monomial-basis sum cancels
catastrophically in float64 (absolute error around 1e-2 at q = 20).
Coefficients are therefore computed in exact integer arithmetic and the
expansion is evaluated by an exact integer Horner scheme on the binary
representation of exp(x), with a single rounding at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .types import InputError, require_int

__all__ = ["ChebCoefficients", "cheb_eval", "cheb_exp_coeffs", "cheb_exp_eval",
           "cheb_exp_expansion", "COEFF_MAX_DEGREE"]

# Above this degree the float64 images of the coefficients start to lose
# integer exactness in ways the estimators are not tuned for.
COEFF_MAX_DEGREE = 60

# Threshold on 2 exp(x) - 1 past which the cosh closed form takes over.
_COSH_SWITCH = 1.0 + 1e-12


def cheb_eval(k: int, x: float) -> float:
    """Chebyshev polynomial T_k(x) via the closed form on each branch."""
    require_int(k, "k", minimum=1)
    v = float(x)
    if -1.0 <= v <= 1.0:
        return math.cos(k * math.acos(v))
    if v >= 1.0:
        return math.cosh(k * math.acosh(v))
    r = math.cosh(k * math.acosh(-v))
    return r if k % 2 == 0 else -r


def _require_even_degree(q: int) -> int:
    require_int(q, "q", minimum=2, maximum=COEFF_MAX_DEGREE)
    if q % 2 != 0:
        raise InputError(f"degree must be even, got {q}")
    return int(q)


@lru_cache(maxsize=None)
def _exact_coeffs(q: int) -> tuple[int, ...]:
    # a_j = (-4)^j * q * (q+j-1)! / ((q-j)! (2j)!)  -- an integer for even q
    out = []
    for j in range(q + 1):
        num = 4**j * q * math.factorial(q + j - 1)
        den = math.factorial(q - j) * math.factorial(2 * j)
        if num % den != 0:
            raise AssertionError(f"non-integer coefficient at q={q}, j={j}")
        sign = -1 if j % 2 else 1
        out.append(sign * (num // den))
    return tuple(out)


@dataclass(frozen=True)
class ChebCoefficients:
    """Expansion coefficients of T_q(2 exp(x) - 1) in powers of exp(x)."""

    q: int
    exact: tuple[int, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array(self.exact, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.exact)


def cheb_exp_coeffs(q: int) -> ChebCoefficients:
    """Exact integer coefficients a_0..a_q with sum exactly 1."""
    q = _require_even_degree(q)
    return ChebCoefficients(q=q, exact=_exact_coeffs(q))


def _exact_expansion(coeffs: tuple[int, ...], z: float) -> float:
    """Evaluate sum_j a_j z^j exactly, for z a nonnegative float.

    Writes z = m / 2^s from its binary representation, accumulates
    N = sum_j a_j m^j 2^(s (q - j)) in exact integers and performs one
    correctly rounded division N / 2^(s q) at the end.
    """
    q = len(coeffs) - 1
    m, d = z.as_integer_ratio()
    s = d.bit_length() - 1
    acc = 0
    for j in range(q, -1, -1):
        acc = acc * m + coeffs[j] * (1 << (s * (q - j)))
    shift = s * q
    if shift == 0:
        return float(acc)
    return acc / (1 << shift)


def cheb_exp_expansion(q: int, x: float) -> float:
    """The coefficient expansion sum_j a_j exp(x j), evaluated exactly."""
    coeffs = cheb_exp_coeffs(q)
    v = float(x)
    if not math.isfinite(v):
        raise InputError("cheb_exp_expansion requires a finite argument")
    return _exact_expansion(coeffs.exact, math.exp(v))


def cheb_exp_eval(q: int, x: float) -> float:
    """T_q(2 exp(x) - 1), exact in the oscillatory region.

    For arguments with 2 exp(x) - 1 > 1 + 1e-12 the cosh closed form is
    used; elsewhere the result is the exactly evaluated coefficient
    expansion, which lands in [-1, 1] for x <= 0 up to one rounding.
    """
    q = _require_even_degree(q)
    v = float(x)
    if not math.isfinite(v):
        raise InputError("cheb_exp_eval requires a finite argument")
    w = 2.0 * math.exp(v) - 1.0
    if w > _COSH_SWITCH:
        return math.cosh(q * math.acosh(w))
    return cheb_exp_expansion(q, v)
