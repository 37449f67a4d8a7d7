"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`.  The phase-map and gap
criteria work on 100x100 grids and take the longest; the whole module is
sized for a workstation run.
"""

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from datxy import (ModelParams, QuadratureSpec, QuenchSpec, SpinChainED,
                   chiral_order, chiral_order_closed_form, ergodicity_verdict,
                   equilibrium_ln, evolve, min_gap, thermal_correlators_alt,
                   time_averaged_ln, zero_T_correlators_uniform)
from datxy.errors import UnclassifiedPoint
from datxy.order import classify_point
from datxy.rdm import derivative_ladder, equilibrium_correlators

GAMMA = 0.8
FIELDS = ("cxx", "cyy", "cxy", "cyx", "czz", "mz_e", "mz_o")


def _report(num, text):
    print(f"\nACCEPTANCE {num}: PASS - {text}")


# ---------------------------------------------------------------------------
# 1. weak-DM insensitivity of the zero-temperature entanglement
# ---------------------------------------------------------------------------

def test_criterion_01_insensitivity():
    spec = QuadratureSpec(abs_tol=1e-10)
    l1s = np.linspace(0.0, 2.0, 10)
    ds = np.linspace(0.0, GAMMA, 10, endpoint=False)
    worst = 0.0
    for l1 in l1s:
        base = equilibrium_ln(ModelParams(gamma=GAMMA, d=0.0, lambda1=float(l1)), spec)
        for d in ds[1:]:
            val = equilibrium_ln(ModelParams(gamma=GAMMA, d=float(d),
                                             lambda1=float(l1)), spec)
            worst = max(worst, abs(val - base))
    assert worst < 1e-8
    _report(1, f"max |LN(d) - LN(0)| = {worst:.2e} < 1e-8 over the 10x10 grid")


# ---------------------------------------------------------------------------
# 2. critical lines and the gapless region certified by the gap scan
# ---------------------------------------------------------------------------

def _gapless_map_row(args):
    d, l2, l1s, n_phi = args
    return [min_gap(ModelParams(gamma=GAMMA, d=d, lambda1=float(l1),
                                lambda2=float(l2)), n_phi) for l1 in l1s]


def test_criterion_02_gap_certification():
    # (a) the two weak-DM critical lines are gapless pointwise
    for d in (0.0, 0.5):
        for l2 in np.linspace(0.0, 2.5, 100):
            l1 = math.sqrt(1.0 + l2 * l2)
            assert min_gap(ModelParams(gamma=GAMMA, d=d, lambda1=l1,
                                       lambda2=float(l2))) < 1e-6
        for l1 in np.linspace(0.0, 2.5, 100):
            l2 = math.sqrt(l1 * l1 + GAMMA ** 2 - d ** 2)
            assert min_gap(ModelParams(gamma=GAMMA, d=d, lambda1=float(l1),
                                       lambda2=l2)) < 1e-6
        # control: two cells away from both lines the spectrum is gapped
        for l1, l2 in ((0.5, 0.3), (1.8, 0.4), (0.2, 1.5)):
            assert min_gap(ModelParams(gamma=GAMMA, d=d, lambda1=l1,
                                       lambda2=l2)) > 1e-3

    # (b) d = 1.2: the gapless region boundary matches the strong-DM lines
    d = 1.2
    n = 100
    vals = np.linspace(0.0, 2.5, n)
    cell = vals[1] - vals[0]
    with ProcessPoolExecutor(max_workers=2) as pool:
        rows = list(pool.map(_gapless_map_row,
                             [(d, float(l2), vals, 512) for l2 in vals]))
    gapless = np.array(rows) < 1e-6  # [iy, ix]

    right_errs = []
    left_errs = []
    for iy, l2 in enumerate(vals):
        cols = np.where(gapless[iy])[0]
        expected_right = math.sqrt(1.0 + l2 * l2 + d * d - GAMMA ** 2)
        expected_left = l2
        if expected_left >= vals[-1]:
            continue
        assert cols.size, f"no gapless cells on row lambda2={l2:.2f}"
        right_errs.append(abs(vals[cols[-1]] - min(expected_right, vals[-1])))
        left_errs.append(abs(vals[cols[0]] - expected_left))
    assert np.median(right_errs) <= cell
    assert np.median(left_errs) <= cell
    assert max(np.percentile(right_errs, 90), np.percentile(left_errs, 90)) <= 2 * cell
    _report(2, "critical lines gapless to < 1e-6; d=1.2 gapless region bounded "
               f"by the strong-DM lines within one cell (medians "
               f"{np.median(left_errs):.3f}/{np.median(right_errs):.3f}, cell {cell:.3f})")


# ---------------------------------------------------------------------------
# 3. chiral order parameter: closed form vs correlator route
# ---------------------------------------------------------------------------

def test_criterion_03_chiral_closed_form():
    spec = QuadratureSpec(abs_tol=1e-10)
    worst = 0.0
    for l1 in np.linspace(0.0, 2.0, 20):
        for d in np.linspace(0.0, 1.5, 20):
            p = ModelParams(gamma=GAMMA, d=float(d), lambda1=float(l1))
            closed = chiral_order_closed_form(p)
            route = chiral_order(zero_T_correlators_uniform(p, spec))
            worst = max(worst, abs(closed - route))
            if d < GAMMA:
                assert closed == 0.0 and route == 0.0
    assert worst < 1e-8
    _report(3, f"closed form vs correlator route: max dev {worst:.2e} on 20x20 grid; "
               "identically 0 for d < gamma")


# ---------------------------------------------------------------------------
# 4. factorization: curve at d = 0, volumes growing with d
# ---------------------------------------------------------------------------

def _ln_at(d, l1, l2, spec):
    return equilibrium_ln(ModelParams(gamma=GAMMA, d=d, lambda1=l1, lambda2=l2), spec)


def _zero_cells(d, spec):
    # cell size 0.002 resolves the thin separable bands
    count = 0
    for l2 in np.linspace(0.1, 0.9, 9):
        center = math.sqrt(l2 * l2 + 1.0 - GAMMA ** 2)
        for l1 in np.arange(center - 0.02, center + 0.06, 0.002):
            if _ln_at(d, float(l1), float(l2), spec) < 1e-6:
                count += 1
    return count


def test_criterion_04_factorization():
    spec = QuadratureSpec(abs_tol=1e-9)
    for l2 in np.linspace(0.0, 1.5, 25):
        l1 = math.sqrt(l2 * l2 + 1.0 - GAMMA ** 2)
        ln = _ln_at(0.0, l1, float(l2), spec)
        assert ln < 1e-6, f"LN={ln} on the factorization curve at lambda2={l2}"

    area = {d: _zero_cells(d, QuadratureSpec(abs_tol=1e-8)) for d in (0.2, 0.4)}
    assert area[0.4] > area[0.2] > 0
    _report(4, f"LN < 1e-6 at 25 curve samples; zero-LN cells {area[0.2]} (d=0.2) "
               f"-> {area[0.4]} (d=0.4)")


# ---------------------------------------------------------------------------
# 5. Wick identity across 200 random parameter/temperature points
# ---------------------------------------------------------------------------

def test_criterion_05_wick_identity():
    rng = np.random.default_rng(5)
    spec = QuadratureSpec(abs_tol=1e-10)
    worst = 0.0
    for k in range(200):
        use_alt = k % 5 == 0  # 40 alternating-field draws
        betaJ = float(rng.choice([0.0, 0.5, 2.0, 10.0, math.inf]))
        p = ModelParams(gamma=float(rng.uniform(0.2, 1.0)),
                        d=float(rng.uniform(0.0, 1.5)),
                        lambda1=float(rng.uniform(-2.0, 2.0)),
                        lambda2=float(rng.uniform(-1.5, 1.5)) if use_alt else 0.0,
                        betaJ=betaJ)
        cs = equilibrium_correlators(p, spec if not use_alt else QuadratureSpec(abs_tol=1e-8))
        worst = max(worst, abs(cs.wick_residual()))
    assert worst < 1e-9
    _report(5, f"max |C^zz - Wick combination| = {worst:.2e} over 200 random points")


# ---------------------------------------------------------------------------
# 6. oracle equivalence with size convergence
# ---------------------------------------------------------------------------

ORACLE_POINTS = [
    (0.0, 0.3, 0.2), (0.0, 0.5, 0.5), (0.0, 1.8, 0.0), (0.0, 0.2, 1.6),
    (0.3, 0.4, 0.3), (0.3, 1.6, 0.4), (0.3, 0.3, 1.5), (0.3, 0.7, 0.2),
    (0.5, 0.4, 0.3), (0.5, 2.0, 0.5), (0.5, 0.1, 1.4), (0.5, 0.6, 0.4),
    (0.7, 0.5, 0.2), (0.7, 1.7, 0.3), (0.7, 0.2, 1.7), (1.0, 2.0, 0.3),
    (1.0, 0.3, 1.5), (1.2, 2.2, 0.4), (1.2, 0.2, 1.8), (1.5, 2.4, 0.6),
]


def test_criterion_06_oracle_equivalence():
    spec = QuadratureSpec(abs_tol=1e-9)
    devs = {8: [], 10: [], 12: []}
    for d, l1, l2 in ORACLE_POINTS:
        p = ModelParams(gamma=GAMMA, d=d, lambda1=l1, lambda2=l2)
        assert min_gap(p, 512) > 0.05, "criterion needs non-critical points"
        target = equilibrium_correlators(p, spec)
        for N in (8, 10, 12):
            cs = SpinChainED(N, p).correlators()
            devs[N].append(max(abs(getattr(cs, f) - getattr(target, f))
                               for f in FIELDS))
    assert max(devs[12]) < 5e-2
    means = {N: float(np.mean(v)) for N, v in devs.items()}
    assert means[8] > means[10] > means[12]
    _report(6, f"N=12 worst dev {max(devs[12]):.2e} < 5e-2 at 20 points; "
               f"mean dev {means[8]:.1e} -> {means[10]:.1e} -> {means[12]:.1e}")


# ---------------------------------------------------------------------------
# 7. quench continuity and sustainable entanglement
# ---------------------------------------------------------------------------

def test_criterion_07_quench():
    tight = QuadratureSpec(abs_tol=1e-9)
    window = (80.0 * math.pi, 100.0 * math.pi)
    t_grid = np.concatenate([[0.0], np.linspace(window[0], window[1], 401)])
    averages = {}
    for d in (0.0, 1.2):
        p = ModelParams(gamma=GAMMA, d=d, lambda1=0.5, lambda2=0.5)
        qspec = QuenchSpec(initial=p, t_grid=t_grid, avg_window=window)
        trace = evolve(qspec, QuadratureSpec(abs_tol=1e-6))
        static = thermal_correlators_alt(p, tight)
        t0_trace = evolve(QuenchSpec(initial=p, t_grid=np.array([0.0, 1.0]),
                                     avg_window=(0.0, 1.0)), tight)
        dev0 = max(abs(getattr(t0_trace.values[0], f) - getattr(static, f))
                   for f in FIELDS)
        assert dev0 < 1e-8, f"t=0 trace deviates {dev0} from statics at d={d}"
        averages[d] = time_averaged_ln(trace, window)
    assert averages[1.2] > averages[0.0]
    _report(7, f"t=0 continuity < 1e-8; window-averaged LN {averages[0.0]:.4f} (d=0) "
               f"< {averages[1.2]:.4f} (d=1.2)")


# ---------------------------------------------------------------------------
# 8. ergodicity of the entanglement on the full grid
# ---------------------------------------------------------------------------

def _ergodicity_point(args):
    d, l1, l2 = args
    grid = np.concatenate([np.geomspace(0.1, 100.0, 41), [math.inf]])
    p = ModelParams(gamma=GAMMA, d=d, lambda1=l1, lambda2=l2)
    v = ergodicity_verdict(p, grid, QuadratureSpec(abs_tol=1e-6),
                           window_samples=201)
    return (d, l1, l2, v.lhs, v.rhs, v.ergodic)


def test_criterion_08_ergodicity():
    tasks = [(d, float(l1), float(l2))
             for d in (0.4, 0.8, 1.2)
             for l1 in np.linspace(0.0, 2.0, 5)
             for l2 in np.linspace(0.0, 2.0, 5)]
    with ProcessPoolExecutor(max_workers=2) as pool:
        results = list(pool.map(_ergodicity_point, tasks))
    bad = [r for r in results if not r[5]]
    assert not bad, f"non-ergodic verdicts: {bad}"
    margin = min(r[3] - r[4] for r in results)
    _report(8, f"ergodic at all 75 grid points (worst lhs-rhs margin {margin:.2e})")


# ---------------------------------------------------------------------------
# 9. derivative-based criticality detection
# ---------------------------------------------------------------------------

def test_criterion_09_derivative_detection():
    spec = QuadratureSpec(abs_tol=1e-10)
    on_line = derivative_ladder(ModelParams(gamma=GAMMA, d=0.5, lambda1=1.0),
                                "lambda1", spec=spec)
    away = derivative_ladder(ModelParams(gamma=GAMMA, d=0.5, lambda1=1.2),
                             "lambda1", spec=spec)
    steps = sorted(on_line, reverse=True)
    growth = [on_line[h] for h in steps]
    assert growth[0] < growth[1] < growth[2], "derivative must keep growing"
    ratio = on_line[steps[-1]] / max(away.values())
    assert ratio >= 10.0
    _report(9, f"|dL/dl1| on the critical line exceeds the value 0.2 away by "
               f"x{ratio:.0f} (>= 10) and grows under the step ladder")


# ---------------------------------------------------------------------------
# 10. phase-map reproduction, checked structurally
# ---------------------------------------------------------------------------

_MAP_N = 100
_MAP_VALS = np.linspace(0.0, 2.5, _MAP_N)


def _phase_row(args):
    d, l2 = args
    spec = QuadratureSpec(abs_tol=1e-5)
    row = []
    for l1 in _MAP_VALS:
        p = ModelParams(gamma=GAMMA, d=d, lambda1=float(l1), lambda2=float(l2))
        try:
            lab = classify_point(p, ed_sites=8, n_phi=256, spec=spec)
            row.append({"AFM": 1, "PM-I": 2, "PM-II": 3, "CH": 4}[lab.phase.value])
        except UnclassifiedPoint:
            row.append(0)
    return row


def _largest_component_fraction(mask):
    from scipy import ndimage
    labels, n = ndimage.label(mask)
    if n == 0:
        return 0.0
    sizes = ndimage.sum_labels(np.ones_like(labels), labels, range(1, n + 1))
    return float(sizes.max() / mask.sum())


def _boundary_midpoints(M, inner, outer, axis, edge=False):
    """Detected transition positions keyed by sweep index.

    axis=0 sweeps each lambda2 row along lambda1; axis=1 sweeps each
    lambda1 column along lambda2.  Default: midpoint of the gap between
    the last inner-phase cell and the first outer-phase cell; edge=True
    returns the inner edge itself (for gap-certified sharp boundaries).
    """
    mids = {}
    for k in range(_MAP_N):
        line = M[k, :] if axis == 0 else M[:, k]
        inner_cells = np.where(line == inner)[0]
        if inner_cells.size == 0:
            continue
        last = inner_cells[-1]
        after = np.where((line == outer) & (np.arange(line.size) > last))[0]
        if after.size == 0:
            continue
        mids[k] = _MAP_VALS[last] if edge else 0.5 * (_MAP_VALS[last]
                                                      + _MAP_VALS[after[0]])
    return mids


def _offset_fit(mids, curve, inward_max, shape_tol, inward_min=-0.01):
    """Detected boundary = analytic curve shifted inward by one bounded
    offset; returns (offset, p90 shape residual).

    The ordered-phase markers round off at finite ED size, which moves the
    detected threshold crossings uniformly toward the ordered side; the
    curve SHAPE must survive once that single offset is removed.
    """
    ks = sorted(mids)
    assert len(ks) >= 10, "boundary not sampled by enough sweeps"
    delta = np.array([curve(_MAP_VALS[k]) - mids[k] for k in ks])
    offset = float(np.median(delta))
    assert inward_min <= offset <= inward_max, f"boundary offset {offset:.3f}"
    resid = np.abs(delta - offset)
    p90 = float(np.percentile(resid, 90))
    assert p90 <= shape_tol, f"boundary shape residual {p90:.3f}"
    return offset, p90


def test_criterion_10_phase_maps():
    cell = _MAP_VALS[1] - _MAP_VALS[0]
    expectations = {
        0.0: {"phases": (1, 2, 3), "absent": (4,)},
        0.5: {"phases": (1, 2, 3), "absent": (4,)},
        0.78: {"phases": (1, 2, 3), "absent": (4,)},
        1.2: {"phases": (4, 2, 3), "absent": (1,)},
    }
    maps = {}
    for d, expect in expectations.items():
        with ProcessPoolExecutor(max_workers=2) as pool:
            rows = list(pool.map(_phase_row, [(d, float(l2)) for l2 in _MAP_VALS]))
        M = np.array(rows)  # [iy (lambda2), ix (lambda1)]
        maps[d] = M
        n_cells = M.size

        # topology: the expected phases exist as single blobs, nothing else
        for code in expect["phases"]:
            frac = (M == code).sum() / n_cells
            assert frac > 0.05, f"phase {code} missing at d={d}"
            assert _largest_component_fraction(M == code) > 0.9, \
                f"phase {code} fragmented at d={d}"
        for code in expect["absent"]:
            assert (M == code).sum() / n_cells < 0.02, \
                f"unexpected phase {code} at d={d}"
        assert (M == 0).sum() / n_cells < 0.1, f"too many unclassified at d={d}"

    summaries = []
    # weak DM: thresholded order parameters round the detected boundary
    # uniformly toward the ordered phase (<= 0.15 at the N=8 desk scale);
    # the curve shape and its d-(in)dependence are checked bias-free
    mids_pmI = {}
    for d in (0.0, 0.5, 0.78):
        M = maps[d]
        mids_pmI[d] = _boundary_midpoints(M, 1, 2, axis=0)
        off1, p90_1 = _offset_fit(mids_pmI[d], lambda l2: math.sqrt(1 + l2 * l2),
                                  inward_max=0.15, shape_tol=3 * cell)
        curve2 = lambda l1, d=d: math.sqrt(l1 * l1 + GAMMA ** 2 - d * d)
        off2, p90_2 = _offset_fit(_boundary_midpoints(M, 1, 3, axis=1), curve2,
                                  inward_max=0.2, shape_tol=3 * cell)
        summaries.append(f"d={d}: offsets {off1:.3f}/{off2:.3f}, "
                         f"shape p90 {p90_1:.3f}/{p90_2:.3f}")

    # the PM-I line is d-independent below gamma: detected boundaries of
    # the three weak-DM maps coincide row by row (estimator bias cancels)
    for d in (0.5, 0.78):
        common = sorted(set(mids_pmI[0.0]) & set(mids_pmI[d]))
        shifts = [abs(mids_pmI[d][k] - mids_pmI[0.0][k]) for k in common]
        assert np.median(shifts) <= 1.5 * cell, \
            f"PM-I boundary moved with d={d} (median {np.median(shifts):.3f})"

    # strong DM: both chiral edges are gap-certified, hence sharp; fit the
    # chiral region's own edge so the paramagnet thresholds play no role
    M = maps[1.2]
    shift = 1.2 ** 2 - GAMMA ** 2
    off1, p90_1 = _offset_fit(_boundary_midpoints(M, 4, 2, axis=0, edge=True),
                              lambda l2: math.sqrt(1 + l2 * l2 + shift),
                              inward_max=2 * cell, shape_tol=2 * cell,
                              inward_min=-2 * cell)
    off2, p90_2 = _offset_fit(_boundary_midpoints(M, 4, 3, axis=1, edge=True),
                              lambda l1: l1,
                              inward_max=2 * cell, shape_tol=2 * cell,
                              inward_min=-2 * cell)
    summaries.append(f"d=1.2: chiral edges offsets {off1:.3f}/{off2:.3f}, "
                     f"shape p90 {p90_1:.3f}/{p90_2:.3f}")
    _report(10, "four-phase topology and boundary-curve fits reproduced; "
            + "; ".join(summaries))
