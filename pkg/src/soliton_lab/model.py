"""Parameters and the slope map shared by every profile computation.

A rotationally symmetric translator of the power mean curvature flow is a
graph whose radial profile r(t) satisfies

    r''/(1 + r'^2) + (n - 1) r'/t = (1 + r'^2)^((1 - alpha)/2),

with r(0) = r'(0) = 0.  The monotone odd map

    g(y) = y (1 + y^2)^((alpha - 1)/2)

controls the sharp slope bounds t/n < g(r'(t)) < t/(n - 1) and the
coefficients of the far-field expansion, so it lives here together with
parameter validation and the closed-form expansion coefficients.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "CoefficientSet",
    "validate_params",
    "g_eval",
    "g_invert",
    "coeff_B",
    "coeff_C",
    "coefficient_set",
    "is_log_branch",
]

#: Below this distance from alpha = 1 the power-law correction coefficient
#: C blows up like 1/(alpha - 1) and the logarithmic branch is used instead.
ALPHA_ONE_THRESHOLD = 1e-12


def is_log_branch(alpha: float) -> bool:
    """True when alpha is (numerically) 1, selecting the log-branch formulas."""
    return abs(alpha - 1.0) < ALPHA_ONE_THRESHOLD


def _check_dimension(n) -> int:
    if isinstance(n, bool):
        raise ValueError("dimension must be an integer, got a bool")
    try:
        n = operator.index(n)
    except TypeError:
        raise ValueError(f"dimension must be an integer, got {n!r}") from None
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    return n


def _check_exponent(alpha) -> float:
    try:
        alpha = float(alpha)
    except (TypeError, ValueError):
        raise ValueError(f"alpha must be a real number, got {alpha!r}") from None
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    return alpha


@dataclass(frozen=True)
class ModelParams:
    """Ambient dimension ``n`` and speed exponent ``alpha`` of the flow."""

    n: int
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "n", _check_dimension(self.n))
        object.__setattr__(self, "alpha", _check_exponent(self.alpha))


def validate_params(n, alpha) -> ModelParams:
    """Validate raw inputs and build a :class:`ModelParams`.

    Raises
    ------
    ValueError
        If ``n`` is not an integer >= 2 or ``alpha`` is not finite and
        positive.
    """
    return ModelParams(_check_dimension(n), _check_exponent(alpha))


# ----------------------------------------------------------------------
# the slope map g and its inverse
# ----------------------------------------------------------------------

def g_eval(y, params: ModelParams):
    """Evaluate g(y) = y (1 + y^2)^((alpha - 1)/2).

    Odd and strictly increasing in ``y``; the identity map when
    ``alpha == 1``.  Accepts scalars or arrays.
    """
    a = params.alpha
    y = np.asarray(y, dtype=float)
    if is_log_branch(a):
        out = y.copy()
    else:
        out = y * (1.0 + y * y) ** ((a - 1.0) / 2.0)
    if out.ndim == 0:
        return float(out)
    return out


def _slope_map(alpha: float, y: float) -> float:
    return y * (1.0 + y * y) ** ((alpha - 1.0) / 2.0)


def _slope_map_deriv(alpha: float, y: float) -> float:
    # d/dy [y (1+y^2)^((alpha-1)/2)] = (1+y^2)^((alpha-3)/2) (1 + alpha y^2)
    w = 1.0 + y * y
    return w ** ((alpha - 3.0) / 2.0) * (1.0 + alpha * y * y)


def _invert_slope(alpha: float, v: float, seed: float | None = None) -> float:
    """Solve g(y) = v for y >= 0, given v >= 0.

    Newton iteration inside a bisection bracket.  The default seed sits on
    the monotone side of the root (g is convex on y > 0 for alpha >= 1 and
    concave for alpha <= 1), so the plain iteration already converges
    monotonically; the bracket guards the last digits and bad seeds.
    """
    if v == 0.0:
        return 0.0
    if v < 0.0:
        raise ValueError(f"slope map inversion needs a nonnegative value, got {v}")
    if is_log_branch(alpha):
        return v

    if seed is None or seed <= 0.0 or not math.isfinite(seed):
        # g(y) ~ y for small y and ~ y^alpha for large y, so v and
        # v^(1/alpha) enclose the root from the same side.
        if v > 1.0 and math.log(v) / alpha > 700.0:
            raise ValueError(
                f"slope map inversion overflows: g(y) = {v:g} needs y ~ v^(1/alpha) "
                f"beyond float range for alpha = {alpha:g}"
            )
        guess = v ** (1.0 / alpha)
        y = min(v, guess) if alpha > 1.0 else max(v, guess)
    else:
        y = seed

    lo, hi = 0.0, math.inf
    for _ in range(120):
        f = _slope_map(alpha, y) - v
        if f == 0.0:
            return y
        if f < 0.0:
            lo = max(lo, y)
        else:
            hi = min(hi, y)
        y_new = y - f / _slope_map_deriv(alpha, y)
        if not lo < y_new < hi:
            y_new = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * max(y, 1.0)
        if abs(y_new - y) <= 4e-16 * (1.0 + abs(y_new)):
            return y_new
        y = y_new
    return y


def g_invert(v: float, params: ModelParams) -> float:
    """Invert the slope map: the unique y >= 0 with g(y) = v.

    Scalar only.  Accurate to a relative tolerance well below 1e-12.
    """
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"slope map inversion needs a finite value, got {v}")
    return _invert_slope(params.alpha, v)


# ----------------------------------------------------------------------
# far-field expansion coefficients
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientSet:
    """Closed-form coefficients of the far-field profile expansion.

    ``leading`` multiplies the power law (t^(1 + 1/alpha) in general, t^2
    on the alpha == 1 branch), ``c_coeff`` multiplies the subleading
    t^(1 - 1/alpha) correction and is ``None`` on the logarithmic branch,
    ``b_coeff`` is the matching slope-expansion coefficient, and
    ``log_term`` flags the alpha == 1 branch where a -log(t) term replaces
    the power-law correction.
    """

    leading: float
    b_coeff: float
    c_coeff: float | None
    log_term: bool


def coeff_B(params: ModelParams) -> float:
    """Second coefficient of the far-field slope expansion.

    r'(t) ~ t^(1/alpha) ((n-1)^(-1/alpha) - B t^(-2/alpha) + ...), with
    B = (n-1)^(1/alpha) (1/(alpha^2 (n-1)) + (alpha-1)/(2 alpha)).
    Equals 1 exactly when alpha == 1, for every n.
    """
    n, a = params.n, params.alpha
    if is_log_branch(a):
        return 1.0
    return (n - 1.0) ** (1.0 / a) * (1.0 / (a * a * (n - 1.0)) + (a - 1.0) / (2.0 * a))


def coeff_C(params: ModelParams) -> float:
    """Second coefficient of the far-field height expansion, alpha != 1.

    r(t) ~ alpha/(alpha+1) (n-1)^(-1/alpha) t^(1+1/alpha) - C t^(1-1/alpha);
    C = (n-1)^(1/alpha)/(alpha-1) (1/(alpha (n-1)) + (alpha-1)/2).  Related
    to the slope coefficient by C = alpha B / (alpha - 1), which changes
    sign with alpha - 1.

    Raises
    ------
    ValueError
        When ``alpha == 1``: the correction there is the logarithmic branch
        -log(t), not a power law, and no finite C exists.
    """
    n, a = params.n, params.alpha
    if is_log_branch(a):
        raise ValueError(
            "no power-law correction coefficient at alpha = 1; the expansion "
            "carries a logarithmic branch -log(t) there"
        )
    return (n - 1.0) ** (1.0 / a) / (a - 1.0) * (1.0 / (a * (n - 1.0)) + (a - 1.0) / 2.0)


def coefficient_set(params: ModelParams) -> CoefficientSet:
    """Bundle the far-field coefficients for the given parameters."""
    a = params.alpha
    if is_log_branch(a):
        leading = 1.0 / (2.0 * (params.n - 1.0))
        return CoefficientSet(leading=leading, b_coeff=1.0, c_coeff=None, log_term=True)
    leading = a / (a + 1.0) * (params.n - 1.0) ** (-1.0 / a)
    return CoefficientSet(
        leading=leading,
        b_coeff=coeff_B(params),
        c_coeff=coeff_C(params),
        log_term=False,
    )
