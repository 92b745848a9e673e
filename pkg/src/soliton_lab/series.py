"""Near-origin power series of the radial profile.

The profile equation forces r(0) = r'(0) = 0 and r''(0) = 1/n, and all odd
Taylor coefficients vanish.  Coefficients of the even series

    r(t) = a_2 t^2 + a_4 t^4 + ... + a_m t^m

follow recursively by cancelling the ODE residual order by order: adding
d t^(2k) shifts the residual at order t^(2k-2) by d 2k (2k + n - 2), so each
coefficient is determined by the residual of the shorter truncation.  The
residual of the degree-m truncation is itself an even function of t, hence
O(t^m) rather than the naive O(t^(m-1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams

__all__ = ["OriginSeries", "series_coefficients", "series_eval"]


def _trunc_mul(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Product of two polynomials, truncated at degree m."""
    return np.convolve(a, b)[: m + 1]


def _one_plus_pow(q: np.ndarray, p: float, m: int) -> np.ndarray:
    """(1 + q)^p as a truncated series, where q has zero constant term.

    Uses the generalized binomial series with coefficients built by the
    recurrence coef *= (p - k + 1)/k, which stays exact at negative and
    fractional p where a Gamma-function route hits poles.
    """
    out = np.zeros(m + 1)
    out[0] = 1.0
    term = np.zeros(m + 1)
    term[0] = 1.0
    coef = 1.0
    for k in range(1, m + 1):
        coef *= (p - k + 1.0) / k
        term = _trunc_mul(term, q, m)
        if not term.any():
            break
        out += coef * term
    return out


def _residual_series(n: int, alpha: float, r: np.ndarray, m: int) -> np.ndarray:
    """ODE residual r''/(1+r'^2) + (n-1) r'/t - (1+r'^2)^((1-alpha)/2), to degree m."""
    deg = len(r) - 1
    dr = np.zeros(m + 1)
    for i in range(1, min(deg, m + 1) + 1):
        if i - 1 <= m:
            dr[i - 1] = i * r[i]
    ddr = np.zeros(m + 1)
    for i in range(2, min(deg, m + 2) + 1):
        if i - 2 <= m:
            ddr[i - 2] = i * (i - 1) * r[i]
    dr_over_t = np.zeros(m + 1)
    for i in range(2, min(deg, m + 2) + 1):
        if i - 2 <= m:
            dr_over_t[i - 2] = i * r[i]
    q = _trunc_mul(dr, dr, m)
    lhs = _trunc_mul(ddr, _one_plus_pow(q, -1.0, m), m)
    rhs = _one_plus_pow(q, (1.0 - alpha) / 2.0, m)
    return lhs + (n - 1.0) * dr_over_t - rhs


@dataclass(frozen=True)
class OriginSeries:
    """Truncated even Taylor expansion of the profile at the axis.

    ``coeffs`` holds (a_2, a_4, ..., a_order).
    """

    params: ModelParams
    order: int
    coeffs: tuple[float, ...]


def series_coefficients(params: ModelParams, order: int = 8) -> OriginSeries:
    """Compute the origin series of the profile to the given even degree."""
    if not isinstance(order, int) or isinstance(order, bool):
        raise ValueError(f"series order must be an integer, got {order!r}")
    if order < 2 or order > 12 or order % 2:
        raise ValueError(f"series order must be an even integer in [2, 12], got {order}")
    n, alpha = params.n, params.alpha
    r = np.zeros(order + 1)
    r[2] = 1.0 / (2.0 * n)
    for k in range(2, order // 2 + 1):
        res = _residual_series(n, alpha, r, 2 * k - 2)
        r[2 * k] = -res[2 * k - 2] / ((2.0 * k) * (2.0 * k + n - 2.0))
    coeffs = tuple(float(r[2 * j]) for j in range(1, order // 2 + 1))
    return OriginSeries(params=params, order=order, coeffs=coeffs)


def series_eval(series: OriginSeries, t):
    """Evaluate the truncated series and its first two derivatives.

    Parameters
    ----------
    series : OriginSeries
    t : float or array_like
        Evaluation points, t >= 0.

    Returns
    -------
    (r, dr, ddr) : floats or ndarrays matching the shape of ``t``.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise ValueError("series evaluation needs t >= 0")
    u = t_arr * t_arr
    r = np.zeros_like(t_arr)
    dr_du = np.zeros_like(t_arr)   # d(r)/d(t^2) * (series in u)
    ddr_uu = np.zeros_like(t_arr)
    # Horner in u = t^2 for the series and its u-derivatives.
    for k in range(len(series.coeffs), 0, -1):
        a = series.coeffs[k - 1]
        r = r * u + a
        dr_du = dr_du * u + a * k
        if k >= 2:
            ddr_uu = ddr_uu * u + a * k * (k - 1.0)
    r = r * u
    dr = 2.0 * t_arr * dr_du
    ddr = 2.0 * dr_du + 4.0 * u * ddr_uu
    if t_arr.ndim == 0:
        return float(r), float(dr), float(ddr)
    return r, dr, ddr
