"""Brute-force spin-chain exact diagonalization (N <= 12).

Works directly with the spin Hamiltonian

    H/J = (1/2) sum_j [ (1+gamma)/2 sx_j sx_{j+1} + (1-gamma)/2 sy_j sy_{j+1}
                        + (d/2)(sx_j sy_{j+1} - sy_j sx_{j+1})
                        + (lambda1 + (-1)^j lambda2) sz_j ]
            + hx sum_j (-1)^j sx_j

with periodic or open boundary, j = 1..N.  Nothing here flows through the
fermionic pipeline, so these numbers arbitrate every sign and phase
convention of the analytic modules.  Periodic spin chains differ from the
c-cyclic fermion convention by a parity boundary term, so comparisons
against the thermodynamic-limit formulas carry O(1/N) tolerances.
"""

from __future__ import annotations

import functools
import math

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh, expm_multiply

from .correlators import CorrelatorSet
from .errors import DomainError, ResourceLimit
from .params import ModelParams
from .quench import TimeTrace
from .rdm import log_negativity

_SX = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
_SY = sp.csr_matrix(np.array([[0, -1j], [1j, 0]], dtype=complex))
_SZ = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex))
_PAULI = {"x": _SX, "y": _SY, "z": _SZ}

MAX_SITES = 12


def _site_op(N, i, mat):
    left = sp.identity(2 ** i, dtype=complex, format="csr")
    right = sp.identity(2 ** (N - i - 1), dtype=complex, format="csr")
    return sp.kron(sp.kron(left, mat, format="csr"), right, format="csr")


def _pair_op(N, i, j, a, b):
    return _site_op(N, i, _PAULI[a]) @ _site_op(N, j, _PAULI[b])


@functools.lru_cache(maxsize=8)
def _templates(N: int, periodic: bool):
    """Coupling-independent operator sums, cached per lattice."""
    bonds = [(i, (i + 1) % N) for i in range(N if periodic else N - 1)]
    out = {}
    for name, (a, b) in {"sxx": ("x", "x"), "syy": ("y", "y"),
                         "sxy": ("x", "y"), "syx": ("y", "x")}.items():
        out[name] = sum(_pair_op(N, i, j, a, b) for i, j in bonds)
    out["sz_uni"] = sum(_site_op(N, i, _SZ) for i in range(N))
    # paper site index j = i + 1, so even sites carry +lambda2
    out["sz_alt"] = sum(((-1) ** (i + 1)) * _site_op(N, i, _SZ) for i in range(N))
    out["sx_alt"] = sum(((-1) ** (i + 1)) * _site_op(N, i, _SX) for i in range(N))

    # even-odd pair observables, translation averaged; even site first
    pairs = [(i, i + 1) for i in range(1, N - 1, 2)]
    if periodic:
        pairs.append((N - 1, 0))
    out["pairs"] = tuple(pairs)
    for name, (a, b) in {"cxx": ("x", "x"), "cyy": ("y", "y"), "czz": ("z", "z"),
                         "cxy": ("x", "y"), "cyx": ("y", "x")}.items():
        out[name] = sum(_pair_op(N, i, j, a, b) for i, j in pairs) / len(pairs)
    out["mz_e"] = sum(_site_op(N, i, _SZ) for i in range(1, N, 2)) / (N // 2)
    out["mz_o"] = sum(_site_op(N, i, _SZ) for i in range(0, N, 2)) / (N - N // 2)
    return out


class SpinChainED:
    """Dense/sparse exact diagonalization of one parameter point."""

    def __init__(self, N: int, params: ModelParams, boundary: str = "periodic",
                 hx: float = 0.0):
        if N > MAX_SITES:
            raise ResourceLimit(f"N = {N} exceeds the N <= {MAX_SITES} ceiling")
        if N < 4 or N % 2:
            raise DomainError(f"N must be even and >= 4, got {N}")
        if boundary not in ("periodic", "open"):
            raise DomainError(f"boundary must be 'periodic' or 'open', got {boundary!r}")
        if hx < 0.0:
            raise DomainError(f"hx must be >= 0, got {hx}")
        self.N = N
        self.params = params
        self.boundary = boundary
        self.hx = hx
        self._H = None
        self._dense_eig = None

    @property
    def dim(self) -> int:
        return 2 ** self.N

    def _ops(self):
        return _templates(self.N, self.boundary == "periodic")

    def hamiltonian(self, lambda1=None, lambda2=None, hx=None) -> sp.csr_matrix:
        """H/J as a sparse matrix; field overrides support quench targets."""
        p = self.params
        l1 = p.lambda1 if lambda1 is None else lambda1
        l2 = p.lambda2 if lambda2 is None else lambda2
        fx = self.hx if hx is None else hx
        t = self._ops()
        H = 0.5 * ((1 + p.gamma) / 2 * t["sxx"] + (1 - p.gamma) / 2 * t["syy"]
                   + p.d / 2 * (t["sxy"] - t["syx"])
                   + l1 * t["sz_uni"] + l2 * t["sz_alt"])
        if fx:
            H = H + fx * t["sx_alt"]
        return H.tocsr()

    def _cached_H(self):
        if self._H is None:
            self._H = self.hamiltonian()
        return self._H

    def ground_space(self, degtol: float = 1e-10):
        """(energies, vectors) of the ground multiplet."""
        H = self._cached_H()
        if self.dim <= 1024:
            k = min(self.dim - 1, 7)
            w, v = eigh(H.toarray(), subset_by_index=(0, k))
        else:
            w, v = eigsh(H, k=8, which="SA")
            order = np.argsort(w)
            w, v = w[order], v[:, order]
        sel = w - w[0] < degtol
        return w[sel], v[:, sel]

    def full_spectrum(self):
        if self._dense_eig is None:
            self._dense_eig = eigh(self._cached_H().toarray())
        return self._dense_eig

    def _expectations(self, operators, betaJ: float):
        """Thermal (or ground-multiplet averaged) expectations of sparse ops."""
        if math.isinf(betaJ):
            _, V = self.ground_space()
            return [float(np.einsum("ik,ik->", V.conj(), O @ V).real) / V.shape[1]
                    for O in operators]
        w, V = self.full_spectrum()
        weights = np.exp(-betaJ * (w - w[0]))
        weights /= weights.sum()
        out = []
        for O in operators:
            diag = np.einsum("ik,ik->k", V.conj(), O @ V).real
            out.append(float(diag @ weights))
        return out

    def correlators(self, betaJ: float | None = None) -> CorrelatorSet:
        """Translation-averaged even-odd correlators; C^zz measured directly."""
        bJ = self.params.betaJ if betaJ is None else betaJ
        t = self._ops()
        names = ("cxx", "cyy", "cxy", "cyx", "czz", "mz_e", "mz_o")
        cxx, cyy, cxy, cyx, czz, mz_e, mz_o = self._expectations(
            [t[n] for n in names], bJ)
        return CorrelatorSet(cxx=cxx, cyy=cyy, cxy=cxy, cyx=cyx, czz=czz,
                             mz_e=mz_e, mz_o=mz_o)

    def pauli_expectation(self, ops: dict, betaJ: float | None = None) -> float:
        """Expectation of a product of single-site Paulis {site_index: 'x'|'y'|'z'}."""
        bJ = self.params.betaJ if betaJ is None else betaJ
        O = sp.identity(self.dim, dtype=complex, format="csr")
        for i, axis in sorted(ops.items()):
            O = O @ _site_op(self.N, i, _PAULI[axis])
        (val,) = self._expectations([O], bJ)
        return val

    def _pair_rdm_from_state(self, psi: np.ndarray, pair) -> np.ndarray:
        i, j = pair
        N = self.N
        if j == i + 1:
            block = psi.reshape(2 ** i, 4, 2 ** (N - i - 2))
            return np.einsum("aib,ajb->ij", block, block.conj())
        # wrap pair (N-1, 0): even site is the last tensor factor
        block = psi.reshape(2, 2 ** (N - 2), 2)
        rho = np.einsum("amb,cmd->badc", block, block.conj())
        return rho.reshape(4, 4)

    def two_site_rdm(self, betaJ: float | None = None) -> np.ndarray:
        """Even-odd pair density matrix, averaged over translations.

        Pure ground states use a genuine partial trace; thermal states
        reconstruct the 4x4 matrix from the complete two-site Pauli basis
        (exact, no Gaussian assumption).
        """
        bJ = self.params.betaJ if betaJ is None else betaJ
        if math.isinf(bJ):
            _, V = self.ground_space()
            t = self._ops()
            rho = np.zeros((4, 4), dtype=complex)
            for k in range(V.shape[1]):
                for pair in t["pairs"]:
                    rho += self._pair_rdm_from_state(np.ascontiguousarray(V[:, k]), pair)
            return rho / (V.shape[1] * len(t["pairs"]))

        t = self._ops()
        paulis = {"x": np.array([[0, 1], [1, 0]], dtype=complex),
                  "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
                  "z": np.array([[1, 0], [0, -1]], dtype=complex),
                  "i": np.eye(2, dtype=complex)}
        operators = []
        basis = []
        for ae in "xyz":
            for ao in "xyz":
                operators.append(sum(_pair_op(self.N, i, j, ae, ao)
                                     for i, j in t["pairs"]) / len(t["pairs"]))
                basis.append(np.kron(paulis[ae], paulis[ao]))
        for axis in "xyz":
            operators.append(sum(_site_op(self.N, i, _PAULI[axis])
                                 for i in range(1, self.N, 2)) / (self.N // 2))
            basis.append(np.kron(paulis[axis], paulis["i"]))
            operators.append(sum(_site_op(self.N, i, _PAULI[axis])
                                 for i in range(0, self.N, 2)) / (self.N - self.N // 2))
            basis.append(np.kron(paulis["i"], paulis[axis]))
        vals = self._expectations(operators, bJ)
        rho = np.eye(4, dtype=complex) / 4.0
        for val, mat in zip(vals, basis):
            rho += val * mat / 4.0
        return rho

    def log_negativity(self, betaJ: float | None = None) -> float:
        return log_negativity(self.two_site_rdm(betaJ))

    def staggered_mx(self) -> float:
        """|(1/N) sum_j (-1)^j <sx_j>| in the (symmetry-broken) ground state."""
        _, V = self.ground_space()
        t = self._ops()
        OV = t["sx_alt"] @ V
        val = float(np.einsum("ik,ik->", V.conj(), OV).real) / V.shape[1]
        return abs(val) / self.N

    def quench_trace(self, t_grid, include_ln: bool = False) -> TimeTrace:
        """Evolve the ground state with the field-free Hamiltonian.

        Krylov stepping (expm_multiply) between consecutive grid times;
        correlators per sample, plus the partial-trace LN when requested.
        """
        t_grid = np.asarray(t_grid, dtype=float)
        if t_grid.ndim != 1 or t_grid.size == 0 or np.any(np.diff(t_grid) < 0):
            raise DomainError("t_grid must be a non-empty ascending 1-D sequence")
        _, V = self.ground_space()
        psi = np.ascontiguousarray(V[:, 0])
        Hq = self.hamiltonian(lambda1=0.0, lambda2=0.0, hx=0.0)

        t_ops = self._ops()
        names = ("cxx", "cyy", "cxy", "cyx", "czz", "mz_e", "mz_o")

        def measure(state):
            vals = {}
            for name in names:
                vals[name] = float((state.conj() @ (t_ops[name] @ state)).real)
            return CorrelatorSet(**vals)

        values = []
        lns = []
        prev_t = 0.0
        state = psi
        for t in t_grid:
            if t != prev_t:
                state = expm_multiply(-1j * (t - prev_t) * Hq, state)
                prev_t = t
            values.append(measure(state))
            if include_ln:
                rho = np.zeros((4, 4), dtype=complex)
                for pair in t_ops["pairs"]:
                    rho += self._pair_rdm_from_state(state, pair)
                lns.append(log_negativity(rho / len(t_ops["pairs"])))
        return TimeTrace(t_grid=t_grid, values=values,
                         ln=np.array(lns) if include_ln else None)


def ed_thermal_correlators(ed: SpinChainED, betaJ: float) -> CorrelatorSet:
    return ed.correlators(betaJ)


def ed_quench(ed: SpinChainED, t_grid, include_ln: bool = False) -> TimeTrace:
    return ed.quench_trace(t_grid, include_ln=include_ln)
