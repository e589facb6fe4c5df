"""Exact power-series expansion of rational functions with integer coefficients.

Polynomials are dicts from exponent (int, or (i, j) for two variables) to
integer coefficient.  Denominators must have constant term 1 so the
expansion stays integral.
"""

from __future__ import annotations

from typing import Mapping


def expand_univariate(num: Mapping[int, int], den: Mapping[int, int], n_terms: int) -> list[int]:
    """First ``n_terms`` coefficients of num(t) / den(t)."""
    if den.get(0, 0) != 1:
        raise ValueError("denominator must have constant term 1")
    out = [0] * n_terms
    for k in range(n_terms):
        acc = num.get(k, 0)
        for d, c in den.items():
            if 0 < d <= k:
                acc -= c * out[k - d]
        out[k] = acc
    return out


def expand_bivariate(
    num: Mapping[tuple[int, int], int],
    den: Mapping[tuple[int, int], int],
    max_i: int,
    max_j: int,
) -> dict[tuple[int, int], int]:
    """Coefficients of r**i t**j in num / den for i <= max_i, j <= max_j (nonzero only)."""
    if den.get((0, 0), 0) != 1:
        raise ValueError("denominator must have constant term 1")
    coef: dict[tuple[int, int], int] = {}
    for i in range(max_i + 1):
        for j in range(max_j + 1):
            acc = num.get((i, j), 0)
            for (a, b), c in den.items():
                if (a, b) == (0, 0) or a > i or b > j:
                    continue
                acc -= c * coef.get((i - a, j - b), 0)
            if acc:
                coef[(i, j)] = acc
    return coef


def linear_recurrence(initial: list[int], coeffs: list[int], n_terms: int) -> list[int]:
    """a_k = sum(coeffs[d] * a_{k-1-d}) beyond the given initial terms."""
    out = list(initial[:n_terms])
    while len(out) < n_terms:
        k = len(out)
        out.append(sum(c * out[k - 1 - d] for d, c in enumerate(coeffs)))
    return out
