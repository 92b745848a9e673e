"""Shared oracles for the test suite.

The mpmath series oracle recomputes the origin expansion independently at
50 digits, so float64 coefficient rounding cannot hide in residual-order
measurements (the residual of the degree-8 truncation is ~1e-24 at
t = 1e-3, far beneath double precision).
"""

import mpmath as mp


def mp_series_coeffs(n, alpha, order, dps=50):
    """Origin series coefficients (a_2, a_4, ..., a_order) at high precision."""
    with mp.workdps(dps):
        coeffs = {2: mp.mpf(1) / (2 * n)}
        for k in range(2, order // 2 + 1):
            m = 2 * k - 2
            res = mp_series_residual_poly(n, alpha, coeffs, m)
            coeffs[2 * k] = -res[m] / ((2 * k) * (2 * k + n - 2))
        return [coeffs[2 * j] for j in range(1, order // 2 + 1)]


def mp_series_residual_poly(n, alpha, coeffs, m):
    """Taylor coefficients (degree <= m) of the profile ODE residual.

    ``coeffs`` maps even powers to high-precision Taylor coefficients of r.
    """
    alpha = mp.mpf(alpha)
    dr = [mp.mpf(0)] * (m + 1)
    ddr = [mp.mpf(0)] * (m + 1)
    dr_over_t = [mp.mpf(0)] * (m + 1)
    for i, a in coeffs.items():
        if i - 1 <= m:
            dr[i - 1] = i * a
        if i - 2 <= m:
            ddr[i - 2] = i * (i - 1) * a
            dr_over_t[i - 2] = i * a
    q = _mul(dr, dr, m)
    lhs = _mul(ddr, _one_plus_pow(q, mp.mpf(-1), m), m)
    rhs = _one_plus_pow(q, (1 - alpha) / 2, m)
    return [lhs[i] + (n - 1) * dr_over_t[i] - rhs[i] for i in range(m + 1)]


def _mul(a, b, m):
    out = [mp.mpf(0)] * (m + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j > m:
                break
            out[i + j] += ai * bj
    return out


def _one_plus_pow(q, p, m):
    out = [mp.mpf(0)] * (m + 1)
    out[0] = mp.mpf(1)
    term = [mp.mpf(0)] * (m + 1)
    term[0] = mp.mpf(1)
    coef = mp.mpf(1)
    for k in range(1, m + 1):
        coef *= (p - k + 1) / k
        term = _mul(term, q, m)
        if all(x == 0 for x in term):
            break
        for i in range(m + 1):
            out[i] += coef * term[i]
    return out


def mp_series_residual_slope(n, alpha, order, t_lo=1e-3, t_hi=1e-2, points=9, dps=50):
    """Log-log slope of the truncated-series ODE residual over [t_lo, t_hi]."""
    with mp.workdps(dps):
        coeffs = mp_series_coeffs(n, alpha, order, dps)
        alpha_mp = mp.mpf(alpha)
        logs_t, logs_r = [], []
        for k in range(points):
            t = mp.mpf(t_lo) * (mp.mpf(t_hi) / mp.mpf(t_lo)) ** (mp.mpf(k) / (points - 1))
            r1 = mp.mpf(0)
            r2 = mp.mpf(0)
            for j, a in enumerate(coeffs, start=1):
                r1 += a * 2 * j * t ** (2 * j - 1)
                r2 += a * 2 * j * (2 * j - 1) * t ** (2 * j - 2)
            w = 1 + r1 * r1
            res = r2 / w + (n - 1) * r1 / t - w ** ((1 - alpha_mp) / 2)
            logs_t.append(mp.log(t))
            logs_r.append(mp.log(abs(res)))
        # least-squares slope
        mt = sum(logs_t) / points
        mr = sum(logs_r) / points
        num = sum((a - mt) * (b - mr) for a, b in zip(logs_t, logs_r))
        den = sum((a - mt) ** 2 for a in logs_t)
        return float(num / den)
