"""Vectorised quadrature building blocks.

The adaptive Gauss-Kronrod driver evaluates whole batches of panels with a
single call to the integrand, which is what makes the nested (xi, kappa)
integrals cheap: every outer node carries a full inner Gauss-Legendre rule.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import ConvergenceError

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452125,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# Full symmetric rule on [-1, 1].
GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
G_WEIGHTS = np.zeros(21)
G_WEIGHTS[1:10:2] = _WG
G_WEIGHTS[11:20:2] = _WG[::-1]


@dataclass(frozen=True)
class IntegralEstimate:
    """A numerical value with its absolute error estimate."""

    value: float
    error: float
    evaluations: int = 0

    def __float__(self):
        return float(self.value)

    def scaled(self, factor):
        return IntegralEstimate(self.value * factor, self.error * abs(factor), self.evaluations)


@lru_cache(maxsize=64)
def gauss_legendre_unit(n):
    """Gauss-Legendre nodes and weights on (0, 1)."""
    x, w = special.roots_legendre(n)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _evaluate(func, x):
    out = func(x)
    if isinstance(out, tuple):
        values, node_err = out
        return np.asarray(values, dtype=float), np.abs(np.asarray(node_err, dtype=float))
    return np.asarray(out, dtype=float), None


def _panel_batch(func, a, b):
    """Apply the 21-point rule to every panel [a_i, b_i] in one integrand call."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * GK_NODES[None, :]
    values, node_err = _evaluate(func, x.ravel())
    values = values.reshape(x.shape)
    kronrod = half * (values @ GK_WEIGHTS)
    gauss = half * (values @ G_WEIGHTS)
    err = np.abs(kronrod - gauss)
    if node_err is not None:
        err = err + np.abs(half) * (node_err.reshape(x.shape) @ GK_WEIGHTS)
    return kronrod, err


def adaptive_gauss_kronrod(func, a, b, rel_tol=1e-8, abs_tol=0.0, max_subdivisions=200,
                           initial_panels=4):
    """Globally adaptive G10/K21 quadrature of a vectorised integrand on [a, b].

    ``func`` receives a 1-d array of abscissae and returns either the values
    or a ``(values, node_errors)`` pair; node errors (e.g. from an inner
    quadrature) are integrated into the panel error estimates.

    Panels are refined in batches and summed in left-to-right order, so the
    result is bitwise reproducible for fixed inputs.
    """
    edges = np.linspace(a, b, initial_panels + 1)
    left, right = edges[:-1], edges[1:]
    integral, error = _panel_batch(func, left, right)
    evaluations = 21 * left.size

    while True:
        order = np.argsort(left, kind="stable")
        left, right, integral, error = left[order], right[order], integral[order], error[order]
        total = float(np.sum(integral))
        total_err = float(np.sum(error))
        tol = max(abs_tol, rel_tol * abs(total))
        if total_err <= tol:
            return IntegralEstimate(total, total_err, evaluations)
        if left.size >= max_subdivisions:
            raise ConvergenceError(
                f"adaptive quadrature used {left.size} panels without reaching "
                f"tolerance {tol:.3e} (error estimate {total_err:.3e})",
                partial=total, error=total_err)

        # split the worst panels that together account for the excess error
        worst = np.lexsort((left, -error))
        excess = total_err - tol
        cumulative = np.cumsum(error[worst])
        count = int(np.searchsorted(cumulative, excess) + 1)
        count = min(count, max_subdivisions - left.size, worst.size)
        count = max(count, 1)
        chosen = np.zeros(left.size, dtype=bool)
        chosen[worst[:count]] = True

        mid = 0.5 * (left[chosen] + right[chosen])
        new_left = np.concatenate([left[chosen], mid])
        new_right = np.concatenate([mid, right[chosen]])
        new_int, new_err = _panel_batch(func, new_left, new_right)
        evaluations += 21 * new_left.size

        keep = ~chosen
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        integral = np.concatenate([integral[keep], new_int])
        error = np.concatenate([error[keep], new_err])


def euler_average(partial_sums, levels=None):
    """Accelerate an alternating series by repeated averaging of its partial sums.

    Returns ``(limit, error)`` where the error is the change produced by the
    last averaging level.
    """
    s = np.asarray(partial_sums, dtype=float)
    if s.size == 1:
        return float(s[0]), float("inf")
    if levels is None:
        levels = s.size - 1
    previous = s[-1]
    for _ in range(min(levels, s.size - 1)):
        previous = s[-1]
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[-1]), float(abs(s[-1] - previous))


def power_law_tail(terms):
    """Estimate sum_{j > n} t_j from the last terms of a series with t_j ~ C j^-s.

    ``terms[i]`` is taken to be the term of index ``i + 1``. Returns 0 when
    the terms do not look like a convergent power law (sign changes, s <= 1).
    """
    t = np.asarray(terms, dtype=float)
    n = t.size
    if n < 3 or t[-1] == 0.0 or t[-2] == 0.0 or np.sign(t[-1]) != np.sign(t[-2]):
        return 0.0
    s = np.log(t[-2] / t[-1]) / np.log(n / (n - 1.0))
    if not np.isfinite(s) or s <= 1.0:
        return 0.0
    return float(t[-1] * n**s * special.zeta(s, n + 1))
