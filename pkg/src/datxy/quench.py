"""Sudden-quench dynamics: both transverse fields switch off at t = 0.

The pre-quench state (zero-temperature or thermal) evolves under the
field-free chain.  For a uniform-field initial state the time-evolved
correlators have closed kernel forms; the alternating model evolves each
16-dimensional momentum block exactly, with all phi integration done by
the shared adaptive quadrature.  Time is dimensionless, t = J*time/hbar.

Ergodicity of the entanglement follows the long-time-average test: the
quantity is ergodic when some equilibrium temperature of the post-quench
Hamiltonian reaches (or exceeds) the window-averaged value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import blocks as _blocks
from .correlators import from_moments
from .errors import DomainError, EmptyWindow
from .params import ModelParams, QuadratureSpec
from .quadrature import integrate_vec
from .rdm import assemble_rdm, equilibrium_ln, log_negativity
from .uniform import dispersion_lambda, root_pair

DEFAULT_WINDOW = (80.0 * math.pi, 100.0 * math.pi)


def default_time_grid(t_max: float = 100.0 * math.pi, n: int = 2001) -> np.ndarray:
    return np.linspace(0.0, t_max, n)


@dataclass(frozen=True)
class QuenchSpec:
    initial: ModelParams
    t_grid: np.ndarray = field(default_factory=default_time_grid)
    avg_window: tuple = DEFAULT_WINDOW

    def __post_init__(self):
        t = np.asarray(self.t_grid, dtype=float)
        if t.ndim != 1 or t.size == 0 or np.any(np.diff(t) < 0):
            raise DomainError("t_grid must be a non-empty ascending 1-D sequence")
        object.__setattr__(self, "t_grid", t)
        w0, w1 = self.avg_window
        if not (t[0] <= w0 <= w1 <= t[-1]):
            raise DomainError("avg_window must lie inside the time grid")


@dataclass
class TimeTrace:
    t_grid: np.ndarray
    values: list
    ln: np.ndarray | None = None

    def ln_values(self) -> np.ndarray:
        """Logarithmic negativity per sample (computed from the
        correlators on first use unless supplied by the producer)."""
        if self.ln is None:
            self.ln = np.array([log_negativity(assemble_rdm(cs)) for cs in self.values])
        return self.ln


def kernels(p: ModelParams, t: float, phi) -> dict:
    """Time-evolution kernels of the uniform-field quench at one time.

    Returns K_plus (integrand of C^yy), K_minus (C^xx), S (cross
    correlators) and M (magnetization); each carries its own 1/pi.
    """
    if p.lambda2 != 0.0:
        raise DomainError("kernels require lambda2 = 0")
    K_minus, K_plus, S, M = _kernel_rows(p.gamma, p.lambda1, np.atleast_1d(
        np.asarray(phi, dtype=float)), np.array([t])).reshape(-1, 4).T
    scalar = np.isscalar(phi) or np.asarray(phi).ndim == 0
    if scalar:
        return {"K_plus": float(K_plus[0]), "K_minus": float(K_minus[0]),
                "S": float(S[0]), "M": float(M[0])}
    return {"K_plus": K_plus, "K_minus": K_minus, "S": S, "M": M}


def _kernel_rows(gamma: float, l1: float, phi: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """(n_phi, n_t, 4) kernel table, components (K_minus, K_plus, S, M).

    At |lambda1| = 1 the pre-quench dispersion vanishes at a zone edge;
    every kernel tends to 0 there (numerators vanish one order faster),
    so those 0/0 points get their limit value substituted.
    """
    c = np.cos(phi)
    s = np.sin(phi)
    s2 = s * s
    lam1 = dispersion_lambda(phi, l1, gamma)
    lam0 = dispersion_lambda(phi, 0.0, gamma)
    singular = lam1 < 1e-13
    lam1 = np.where(singular, 1.0, lam1)
    lam0sq = lam0 * lam0
    core = (gamma * s) ** 2 + (c + l1) * c

    arg = 2.0 * np.multiply.outer(lam0, ts)          # (n_phi, n_t)
    cos2 = np.cos(arg)
    sin2 = np.sin(arg)

    denom = lam1 * lam0sq
    tilt = (gamma / math.pi) * s2 / denom            # R-odd prefactor
    even = (1.0 / math.pi) * c / denom               # R-even prefactor
    first = tilt[:, None] * (core[:, None] - (l1 * c)[:, None] * cos2)
    second = even[:, None] * ((core * c)[:, None]
                              + (l1 * (gamma * s) ** 2)[:, None] * cos2)
    K_minus = -first - second
    K_plus = first - second
    S = (gamma * l1 / math.pi) * (s2 / (lam1 * lam0))[:, None] * sin2
    M = -(1.0 / math.pi) / denom[:, None] * (
        (l1 * (gamma * s) ** 2)[:, None] * cos2 + (c * core)[:, None])
    out = np.stack([K_minus, K_plus, S, M], axis=2)
    out[singular] = 0.0
    return out


def _lambda1_min_breakpoint(p: ModelParams):
    if p.gamma >= 1.0:
        return None
    c_star = -p.lambda1 / (1.0 - p.gamma ** 2)
    if -1.0 < c_star < 1.0:
        return math.acos(c_star)
    return None


def evolve_uniform(qspec: QuenchSpec, spec: QuadratureSpec = QuadratureSpec(),
                   chunk: int = 32) -> TimeTrace:
    """Closed-form evolution from a uniform-field zero-temperature state."""
    p = qspec.initial
    if p.lambda2 != 0.0:
        raise DomainError("evolve_uniform requires lambda2 = 0")
    if not p.zero_temperature:
        raise DomainError("evolve_uniform starts from the zero-temperature state")

    rp = root_pair(p)
    if rp.real_solutions:
        pieces = [(0.0, rp.phi1), (rp.phi2, math.pi)]
        offset = (math.cos(rp.phi2) - math.cos(rp.phi1)) / math.pi
    else:
        pieces = [(0.0, math.pi)]
        offset = 0.0
    bp = _lambda1_min_breakpoint(p)

    t_grid = qspec.t_grid
    values = []
    for start in range(0, t_grid.size, chunk):
        ts = t_grid[start:start + chunk]

        def integrand(x, ts=ts):
            rows = _kernel_rows(p.gamma, p.lambda1, x, ts)
            return rows.reshape(x.size, -1)

        total = np.zeros(ts.size * 4)
        for a, b in pieces:
            pts = [bp] if bp is not None and a < bp < b else []
            total += integrate_vec(integrand, a, b, spec, breakpoints=pts,
                                   n_components=ts.size * 4)
        rows = total.reshape(ts.size, 4)
        for K_minus, K_plus, S, M in rows:
            values.append(from_moments(
                cxx=K_minus, cyy=K_plus, cxy=S + offset, cyx=S - offset,
                mz_e=M, mz_o=M))
    return TimeTrace(t_grid=t_grid, values=values)


class _AltQuenchEngine:
    """Per-momentum spectral data for block evolution, cached by phi.

    For each phi the initial block density matrices are expressed in the
    post-quench eigenbasis; every observable expectation then becomes a
    finite sum sum_mn A_mn exp(-i (E_m - E_n) t), reused for every time
    sample.
    """

    def __init__(self, initial: ModelParams):
        self.p = initial
        self.post = initial.replace(lambda1=0.0, lambda2=0.0)
        self.cache = {}

    def _compute(self, phi: np.ndarray):
        p = self.p
        n = phi.size
        pre = _blocks._hamiltonian_blocks(p, phi)
        post = _blocks._hamiltonian_blocks(self.post, phi)
        ops = _blocks._operator_blocks(phi)

        pre_eig = [np.linalg.eigh(H) for H in pre]
        post_eig = [np.linalg.eigh(H) for H in post]

        # normalization across all four blocks (the null block contributes
        # two zero levels)
        all_E = np.concatenate([np.zeros((n, 2))] + [w for w, _ in pre_eig], axis=1)
        E0 = all_E.min(axis=1)
        if p.zero_temperature:
            members = all_E - E0[:, None] < 1e-12
            norm = members.sum(axis=1).astype(float)
        else:
            wts = np.exp(-p.betaJ * (all_E - E0[:, None]))
            norm = wts.sum(axis=1)

        A_rows = []
        dE_rows = []
        col = 2
        for k in range(3):
            w_pre, V = pre_eig[k]
            dim = w_pre.shape[1]
            if p.zero_temperature:
                occ = members[:, col:col + dim].astype(float)
            else:
                occ = np.exp(-p.betaJ * (w_pre - E0[:, None]))
            col += dim
            # initial block density matrix (unnormalized), then rotate into
            # the post-quench eigenbasis
            rho0 = np.einsum("nik,nk,njk->nij", V, occ, V.conj())
            w_post, W = post_eig[k]
            rho_t = np.einsum("nji,njk,nkl->nil", W.conj(), rho0, W)
            dE = w_post[:, :, None] - w_post[:, None, :]
            for name in _blocks._OP_NAMES:
                O = np.einsum("nji,njk,nkl->nil", W.conj(), ops[name][k], W)
                A_rows.append((name, k, O.transpose(0, 2, 1) * rho_t))
            dE_rows.append(dE.reshape(n, -1))

        payloads = []
        for i in range(n):
            A = np.empty((len(_blocks._OP_NAMES), 16 + 16 + 36), dtype=complex)
            for name_idx, name in enumerate(_blocks._OP_NAMES):
                pieces = [entry[2][i].ravel() for entry in A_rows
                          if entry[0] == name]
                A[name_idx] = np.concatenate(pieces)
            dE = np.concatenate([r[i] for r in dE_rows])
            payloads.append((A / norm[i], dE))
        return payloads

    def rows(self, phi: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """(n_phi, n_t, 6) observable expectations at the requested times."""
        missing = [x for x in phi if x not in self.cache]
        if missing:
            arr = np.array(missing)
            for x, payload in zip(missing, self._compute(arr)):
                self.cache[x] = payload
        out = np.empty((phi.size, ts.size, len(_blocks._OP_NAMES)))
        for i, x in enumerate(phi):
            A, dE = self.cache[x]
            phases = np.exp(-1j * np.multiply.outer(dE, ts))
            out[i] = (A @ phases).real.T
        return out


def evolve_alt(qspec: QuenchSpec, spec: QuadratureSpec = QuadratureSpec(),
               chunk: int = 48) -> TimeTrace:
    """Numerically exact block evolution of the alternating-field chain."""
    p = qspec.initial
    engine = _AltQuenchEngine(p)
    bp = _blocks.band_crossings(p) if p.zero_temperature else []

    t_grid = qspec.t_grid
    n_obs = len(_blocks._OP_NAMES)
    values = []
    for start in range(0, t_grid.size, chunk):
        ts = t_grid[start:start + chunk]

        def integrand(x, ts=ts):
            rows = engine.rows(x, ts) / math.pi
            return rows.reshape(x.size, -1)

        total = integrate_vec(integrand, 0.0, math.pi / 2, spec,
                              breakpoints=bp, n_components=ts.size * n_obs)
        rows = total.reshape(ts.size, n_obs)
        for cxx, cyy, cxy, cyx, mz_e, mz_o in rows:
            values.append(from_moments(cxx, cyy, cxy, cyx, mz_e, mz_o))
    return TimeTrace(t_grid=t_grid, values=values)


def evolve(qspec: QuenchSpec, spec: QuadratureSpec = QuadratureSpec()) -> TimeTrace:
    """Dispatch to the closed-form route when it applies."""
    p = qspec.initial
    if p.lambda2 == 0.0 and p.zero_temperature:
        return evolve_uniform(qspec, spec)
    return evolve_alt(qspec, spec)


def time_averaged_ln(trace: TimeTrace, window: tuple = DEFAULT_WINDOW) -> float:
    """Trapezoidal mean of the entanglement over a time window."""
    w0, w1 = window
    if w0 > w1:
        raise DomainError("window must be ordered")
    mask = (trace.t_grid >= w0) & (trace.t_grid <= w1)
    if not np.any(mask):
        raise EmptyWindow(f"no trace samples inside [{w0}, {w1}]")
    t = trace.t_grid[mask]
    ln = trace.ln_values()[mask]
    if t.size == 1:
        return float(ln[0])
    return float(np.trapezoid(ln, t) / (t[-1] - t[0]))


@dataclass(frozen=True)
class ErgodicityVerdict:
    lhs: float          # best equilibrium entanglement at the final fields
    rhs: float          # long-time-averaged entanglement after the quench
    ergodic: bool
    best_betaJ: float


def default_temperature_grid() -> np.ndarray:
    """betaJ candidates: 41 log-spaced points in [0.1, 100] plus T = 0."""
    return np.concatenate([np.geomspace(0.1, 100.0, 41), [math.inf]])


def ergodicity_verdict(p: ModelParams, Tprime_grid=None,
                       spec: QuadratureSpec = QuadratureSpec(),
                       window: tuple = DEFAULT_WINDOW,
                       window_samples: int = 201,
                       tol: float = 1e-9) -> ErgodicityVerdict:
    """Long-time average vs best thermal value at the post-quench fields.

    The initial state is the zero-temperature (or thermal) state at p;
    after the quench both fields vanish, so the equilibrium side scans
    temperature at lambda1 = lambda2 = 0 with the same gamma and d.
    """
    grid = default_temperature_grid() if Tprime_grid is None else np.asarray(
        Tprime_grid, dtype=float)
    lhs = -math.inf
    best = math.nan
    for bj in grid:
        val = equilibrium_ln(p.replace(lambda1=0.0, lambda2=0.0, betaJ=float(bj)), spec)
        if val > lhs:
            lhs, best = val, float(bj)

    t_grid = np.concatenate([[0.0], np.linspace(window[0], window[1], window_samples)])
    qspec = QuenchSpec(initial=p, t_grid=t_grid, avg_window=window)
    trace = evolve(qspec, spec)
    rhs = time_averaged_ln(trace, window)
    return ErgodicityVerdict(lhs=lhs, rhs=rhs, ergodic=lhs >= rhs - tol,
                             best_betaJ=best)
