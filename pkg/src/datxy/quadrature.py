"""Globally adaptive Gauss-Kronrod quadrature with vectorized integrands.

Every analytic formula in the package funnels through this engine.  The
integrand is called on arrays of abscissae and may return one value per
point (shape ``(n,)``) or several simultaneously integrated components
(shape ``(n, k)``); components share function evaluations, which matters
when each evaluation is an eigensolve.

The interval with the largest error estimate is bisected until every
component's summed error is below tolerance.  Error per interval uses the
QUADPACK-style rescaled |K15 - G7| estimate.  Evaluation order is a pure
function of the inputs, so repeated calls are bit-identical.
"""

from __future__ import annotations

import heapq
import itertools
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, NonConvergence
from .params import QuadratureSpec

# 15-point Kronrod nodes on [-1, 1] (positive half) and weights; the
# embedded 7-point Gauss rule lives on the odd-indexed nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
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

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 ascending nodes
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GMASK = np.zeros(15, dtype=bool)
_GMASK[1:15:2] = True                                       # Gauss subset
_GWEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])


def _eval_panels(f, lo, hi, n_comp):
    """Apply the GK15 rule on each [lo_i, hi_i]; returns (integrals, errors).

    One call to f covers all panels.  Shapes: (n_panels, n_comp).
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    centers = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = (centers[:, None] + half[:, None] * _NODES[None, :]).ravel()
    fx = np.asarray(f(x), dtype=float)
    if fx.ndim == 1:
        fx = fx[:, None]
    if fx.shape[0] != x.size:
        raise DomainError("integrand must return one row per abscissa")
    fx = fx.reshape(len(lo), 15, -1)
    if fx.shape[2] != n_comp:
        raise DomainError("integrand changed its number of components")
    if not np.all(np.isfinite(fx)):
        raise DomainError("integrand returned a non-finite value")

    resk = np.einsum("j,ijc->ic", _KWEIGHTS, fx)
    resg = np.einsum("j,ijc->ic", _GWEIGHTS, fx[:, _GMASK, :])
    mean = resk * 0.5
    resasc = np.einsum("j,ijc->ic", _KWEIGHTS, np.abs(fx - mean[:, None, :]))

    integrals = resk * half[:, None]
    err = np.abs(resk - resg) * half[:, None]
    scale = resasc * half[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(scale > 0.0, (200.0 * err / np.maximum(scale, 1e-300)) ** 1.5, 1.0)
    err = np.where((scale > 0.0) & (ratio < 1.0), scale * ratio, err)
    return integrals, err


def integrate_vec(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec = QuadratureSpec(),
    *,
    breakpoints: Iterable[float] = (),
    n_components: int | None = None,
) -> np.ndarray:
    """Integrate a vector-valued f over [a, b]; returns shape (k,).

    breakpoints inside (a, b) force initial subdivision there (kinks,
    branch switches).  Raises NonConvergence when the worst interval hits
    spec.max_depth with the tolerance still unmet.
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError("integration limits must be finite")
    if a > b:
        raise DomainError(f"need a <= b, got [{a}, {b}]")

    pts = sorted({float(a), float(b), *(float(x) for x in breakpoints if a < x < b)})
    if a == b:
        probe = np.asarray(f(np.array([a])), dtype=float)
        k = 1 if probe.ndim == 1 else probe.shape[1]
        return np.zeros(k)

    lo = np.array(pts[:-1])
    hi = np.array(pts[1:])
    if n_components is None:
        probe = np.asarray(f(np.array([0.5 * (a + b)])), dtype=float)
        n_components = 1 if probe.ndim == 1 else probe.shape[1]

    integrals, errors = _eval_panels(f, lo, hi, n_components)
    counter = itertools.count()
    # heap entries: (-max_err, seq, lo, hi, depth, I_row, err_row)
    heap = [
        (-float(errors[i].max()), next(counter), lo[i], hi[i], 0, integrals[i], errors[i])
        for i in range(len(lo))
    ]
    heapq.heapify(heap)
    total_err = errors.sum(axis=0)
    total_int = integrals.sum(axis=0)

    while True:
        tol = np.maximum(spec.abs_tol, spec.rel_tol * np.abs(total_int))
        if np.all(total_err <= tol):
            break

        # split a cohort: every interval whose error is within 2x of the worst
        worst = -heap[0][0]
        if worst <= 0.0:
            break
        cohort = []
        while heap and -heap[0][0] >= 0.5 * worst and len(cohort) < 64:
            cohort.append(heapq.heappop(heap))
        if any(item[4] >= spec.max_depth for item in cohort):
            raise NonConvergence(
                f"quadrature depth budget ({spec.max_depth}) exhausted; "
                f"residual error {float(total_err.max()):.3e}",
                estimate=total_int if n_components > 1 else float(total_int[0]),
                error=float(total_err.max()),
            )

        mids = [0.5 * (it[2] + it[3]) for it in cohort]
        new_lo = np.array([x for it, m in zip(cohort, mids) for x in (it[2], m)])
        new_hi = np.array([x for it, m in zip(cohort, mids) for x in (m, it[3])])
        new_int, new_err = _eval_panels(f, new_lo, new_hi, n_components)
        for idx, item in enumerate(cohort):
            total_err = total_err - item[6] + new_err[2 * idx] + new_err[2 * idx + 1]
            total_int = total_int - item[5] + new_int[2 * idx] + new_int[2 * idx + 1]
            for child in (2 * idx, 2 * idx + 1):
                heapq.heappush(heap, (
                    -float(new_err[child].max()), next(counter),
                    new_lo[child], new_hi[child], item[4] + 1,
                    new_int[child], new_err[child],
                ))

    # deterministic final summation ordered by interval position
    ordered = sorted(heap, key=lambda item: item[2])
    result = np.zeros(n_components)
    for item in ordered:
        result += item[5]
    return result


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    spec: QuadratureSpec = QuadratureSpec(),
    *,
    breakpoints: Sequence[float] = (),
) -> float:
    """Adaptive integral of a scalar integrand; f maps arrays to arrays."""
    out = integrate_vec(f, a, b, spec, breakpoints=breakpoints, n_components=1)
    return float(out[0])
