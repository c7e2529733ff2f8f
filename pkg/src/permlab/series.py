"""Truncated power series with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Series = list[Fraction]


def binomial_series(exponent: Fraction, scale: Fraction, order: int) -> Series:
    """Coefficients of ``(1 + scale*z)**exponent`` up to ``z**order``."""
    out = [Fraction(1)]
    coef = Fraction(1)
    for k in range(1, order + 1):
        coef = coef * (exponent - k + 1) / k
        out.append(coef * scale**k)
    return out


def add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Series:
    size = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)]


def scale(a: Sequence[Fraction], c: Fraction) -> Series:
    return [c * x for x in a]


def multiply(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> Series:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] += x * y
    return out


def reciprocal(a: Sequence[Fraction], order: int) -> Series:
    if not a or a[0] == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    inv0 = 1 / Fraction(a[0])
    out = [inv0]
    for k in range(1, order + 1):
        acc = sum((a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        out.append(-acc * inv0)
    return out


def shift_down(a: Sequence[Fraction], k: int = 1) -> Series:
    """Divide by ``z**k``; the dropped coefficients must vanish."""
    if any(x != 0 for x in a[:k]):
        raise ValueError(f"series is not divisible by z^{k}")
    return list(a[k:])
