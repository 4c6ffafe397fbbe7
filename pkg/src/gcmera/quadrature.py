"""Adaptive Gauss-Kronrod quadrature and series acceleration.

The integrator bisects the panel with the largest Kronrod-Gauss discrepancy
until the summed error estimate meets the tolerance. Integrands receive numpy
arrays of abscissae and must return arrays of the same shape.
"""
import heapq
import math

import numpy as np

from .exceptions import NumericalError

# 15-point Kronrod extension of the 7-point Gauss-Legendre rule.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (x_1, x_3, x_5, x_7 = 0).
_GAUSS[[1, 3, 5]] = _WG[:3]
_GAUSS[[13, 11, 9]] = _WG[:3]
_GAUSS[7] = _WG[3]

_EPS = np.finfo(float).eps


def _panel(f, a, b):
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    values = np.asarray(f(center + half * _NODES), dtype=float)
    kronrod = half * np.dot(_KRONROD, values)
    gauss = half * np.dot(_GAUSS, values)
    resabs = abs(half) * np.dot(_KRONROD, np.abs(values))
    if not np.all(np.isfinite(values)):
        raise NumericalError(
            "integrand returned non-finite values", diagnostics={"interval": (a, b)}
        )
    return kronrod, abs(kronrod - gauss), resabs


def gauss_kronrod(f, a, b, abs_tol=1e-12, rel_tol=1e-12, limit=500, breakpoints=None):
    """Integrate ``f`` over ``[a, b]`` adaptively.

    Parameters
    ----------
    f : callable
        Vectorized integrand.
    a, b : float
        Finite limits.
    abs_tol, rel_tol : float
        Stop once the error estimate is below ``max(abs_tol, rel_tol * |I|)``.
    limit : int
        Maximum number of panels.
    breakpoints : sequence of float, optional
        Interior points where the integrand changes character; each one
        starts a separate panel.

    Returns
    -------
    value, error : float
        Integral estimate and its error estimate.

    Raises
    ------
    NumericalError
        If the tolerance is not met within ``limit`` panels and the remaining
        error is not explained by floating-point roundoff.
    """
    if a == b:
        return 0.0, 0.0
    points = [a]
    if breakpoints is not None:
        points.extend(sorted(p for p in breakpoints if min(a, b) < p < max(a, b)))
    points.append(b)
    if b < a:
        points = [a] + sorted(points[1:-1], reverse=True) + [b]

    heap = []
    total = total_err = total_abs = 0.0
    for lo, hi in zip(points[:-1], points[1:]):
        val, err, rabs = _panel(f, lo, hi)
        heapq.heappush(heap, (-err, lo, hi, val, rabs))
        total += val
        total_err += err
        total_abs += rabs

    while total_err > max(abs_tol, rel_tol * abs(total)):
        if len(heap) >= limit:
            if total_err <= 50 * _EPS * total_abs:
                break
            raise NumericalError(
                "adaptive quadrature did not converge",
                estimate=total,
                error=total_err,
                diagnostics={"panels": len(heap), "interval": (a, b)},
            )
        neg_err, lo, hi, val, rabs = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= min(lo, hi) or mid >= max(lo, hi):
            # interval cannot be split further in double precision
            heapq.heappush(heap, (0.0, lo, hi, val, rabs))
            if all(e == 0.0 for e, *_ in heap):
                break
            continue
        v1, e1, r1 = _panel(f, lo, mid)
        v2, e2, r2 = _panel(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1, r1))
        heapq.heappush(heap, (-e2, mid, hi, v2, r2))
        total += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        total_abs += r1 + r2 - rabs

    # re-sum to remove drift from the running updates
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return total, total_err


def integrate_to_infinity(f, a, abs_tol=1e-12, rel_tol=1e-12, limit=500, breakpoints=None):
    """Integrate ``f`` over ``[a, inf)``.

    The finite part runs up to the last breakpoint (or ``max(1, 2a)``); the
    tail is mapped onto ``(0, 1]`` with ``k = b / u``. The integrand must decay
    faster than ``1/k``.
    """
    points = sorted(p for p in (breakpoints or ()) if p > a)
    b = points[-1] if points else max(1.0, 2.0 * a)
    head, head_err = gauss_kronrod(
        f, a, b, abs_tol=abs_tol / 2, rel_tol=rel_tol, limit=limit, breakpoints=points[:-1]
    )

    def tail_integrand(u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        pos = u > 0
        out[pos] = f(b / u[pos]) * b / u[pos] ** 2
        return out

    tail, tail_err = gauss_kronrod(tail_integrand, 0.0, 1.0, abs_tol=abs_tol / 2, rel_tol=rel_tol, limit=limit)
    return head + tail, head_err + tail_err


def levin_u(partial_sums, beta=1.0):
    """Levin u-transform estimates of the limit of a sequence of partial sums.

    Returns an array whose entry ``k`` uses the first ``k + 1`` sums
    (entry 0 is the first partial sum itself). Terms that vanish exactly make
    the remainder model singular; those estimates are returned as NaN.
    """
    S = np.asarray(partial_sums, dtype=float)
    a = np.diff(S, prepend=0.0)
    j = np.arange(len(S), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_omega = 1.0 / ((beta + j) * a)
    out = np.full(len(S), np.nan)
    out[0] = S[0]
    for k in range(1, len(S)):
        jj = j[: k + 1]
        coeff = np.array([math.comb(k, int(i)) for i in jj], dtype=float)
        coeff *= (-1.0) ** jj
        coeff *= ((beta + jj) / (beta + k)) ** (k - 1)
        den = np.dot(coeff, inv_omega[: k + 1])
        num = np.dot(coeff, S[: k + 1] * inv_omega[: k + 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            out[k] = num / den
    return out


def wynn_epsilon(partial_sums):
    """Wynn epsilon-algorithm estimates, one per even column of the table.

    Returns the estimates ``eps_{2r}^{(n-1-2r)}`` along the last row, which
    use the latest partial sums. The table stops early once two entries
    coincide to the last bit.
    """
    S = [float(x) for x in partial_sums]
    n = len(S)
    prev = [0.0] * (n + 1)
    cur = S[:]
    estimates = [S[0]]
    column = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0:
                nxt.append(math.inf)
            else:
                nxt.append(prev[i + 1] + 1.0 / diff)
        if not all(math.isfinite(v) for v in nxt):
            # converged to roundoff; deeper columns are meaningless
            break
        prev, cur = cur, nxt
        column += 1
        if column % 2 == 0 and cur:
            estimates.append(cur[-1])
    return np.array(estimates)


def accelerate(partial_sums, tol, method="levin"):
    """Pick the most stable accelerated estimate of a series limit.

    Returns
    -------
    value, error : float
        The estimate whose difference from its predecessor is smallest, and
        that difference as the error estimate.
    """
    if method == "levin":
        est = levin_u(partial_sums)
    elif method == "epsilon":
        est = wynn_epsilon(partial_sums)
    else:
        raise ValueError(f"unknown acceleration method {method!r}")
    finite = np.isfinite(est)
    diffs = np.full(len(est), np.inf)
    for i in range(2, len(est)):
        if finite[i] and finite[i - 1] and finite[i - 2]:
            diffs[i] = max(abs(est[i] - est[i - 1]), abs(est[i - 1] - est[i - 2]))
    best = int(np.argmin(diffs))
    if not np.isfinite(diffs[best]):
        raise NumericalError(
            "series acceleration produced no usable estimate",
            diagnostics={"partial_sums": list(map(float, partial_sums))},
        )
    return float(est[best]), float(diffs[best])
