"""Polariton-chain transport models.

On resonance each atom-cavity site reduces to the two polariton levels
|G> and |E> = (|1g> - |0e>)/sqrt(2) (photon blockade forbids double
occupancy).  After eliminating the connecting fibers the chain is a
nearest-neighbour hopping model; two identical uncoupled chains evolve
side by side in the interleaved site order |X1 X1' X2 X2' X3 X3'>.
Losses enter as a zero-temperature Lindblad dissipator with a polariton
lowering operator at every site.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qstate
from .errors import (
    DimensionError,
    IntegrationAccuracyError,
    UndefinedRatioError,
    ValidationError,
)

SITE_SLOTS = {"1": 0, "1p": 1, "2": 2, "2p": 3, "3": 4, "3p": 5}
N_SLOTS = 6
DIM = 2**N_SLOTS

_SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |G><E| with E = bit 1


@dataclass(frozen=True)
class ChainParams:
    """Single-chain parameters; ``delta`` and ``lam`` are derived.

    ``gamma_loss`` is the per-site loss rate in units of the effective
    hopping ``lam``.  The fiber phase ``phi`` drops out of both effective
    Hamiltonians and is kept only for bookkeeping.
    """

    n_sites: int = 3
    omega: float = 1.0
    g: float = 0.0
    omega_f: float = 0.0
    J: float = 0.0
    phi: float = 0.0
    gamma_loss: float = 0.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValidationError(f"a chain needs at least 2 sites, got {self.n_sites}")
        if self.gamma_loss < 0:
            raise ValidationError(f"loss rate must be >= 0, got {self.gamma_loss}")
        if self.J > 0 and self.delta > 0 and self.delta < 5 * self.J:
            warnings.warn(
                "perturbative fiber elimination assumes delta >> J "
                f"(delta={self.delta:.3g}, J={self.J:.3g})",
                stacklevel=2,
            )

    @property
    def delta(self) -> float:
        return (self.omega - self.g) - self.omega_f

    @property
    def lam(self) -> float:
        if self.delta == 0:
            raise ValidationError("lambda = J^2/(2 delta) is singular at delta = 0")
        return self.J**2 / (2 * self.delta)


def polariton_energies(n: int, g: float, delta: float, omega_c: float = 0.0):
    """(E_minus, E_plus) of the n-photon polariton doublet."""
    if n < 1:
        raise ValidationError(f"polariton ladder starts at n = 1, got {n}")
    split = np.sqrt(delta**2 + 4 * g**2 * n) / 2
    base = omega_c * n + delta / 2
    return base - split, base + split


def effective_h_adiabatic(params: ChainParams) -> np.ndarray:
    """Single-excitation chain Hamiltonian after adiabatic fiber
    elimination: hopping -J^2/omega_f with boundary-corrected site terms."""
    if params.omega_f == 0:
        raise ValidationError("adiabatic elimination is singular at omega_f = 0")
    n = params.n_sites
    shift = params.J**2 / params.omega_f
    h = np.zeros((n, n), dtype=complex)
    for i in range(n):
        h[i, i] = params.omega - params.g - 2 * shift
        if i == 0 or i == n - 1:
            h[i, i] += shift
    for i in range(n - 1):
        h[i, i + 1] = h[i + 1, i] = -shift
    return h


def effective_h_perturbative(params: ChainParams) -> np.ndarray:
    """Single-excitation chain Hamiltonian after projecting the fibers on
    their vacuum: hopping lam = J^2/(2 delta) with one on-site lam per
    adjacent bond."""
    if params.J == 0:
        return np.zeros((params.n_sites, params.n_sites), dtype=complex)
    lam = params.lam
    if lam <= 0:
        raise ValidationError("perturbative elimination needs delta > 0")
    return lam * unit_hopping_matrix(params.n_sites)


def unit_hopping_matrix(n_sites: int) -> np.ndarray:
    """Perturbative chain matrix at lam = 1: bond counts on the diagonal,
    unit nearest-neighbour hopping."""
    h = np.zeros((n_sites, n_sites), dtype=complex)
    for i in range(n_sites - 1):
        h[i, i] += 1.0
        h[i + 1, i + 1] += 1.0
        h[i, i + 1] = h[i + 1, i] = 1.0
    return h


def site_lowering(slot: int, n_slots: int = N_SLOTS) -> np.ndarray:
    ops = [np.eye(2, dtype=complex)] * n_slots
    ops[slot] = _SIGMA_MINUS
    return qstate.tensor_product(*ops)


def embedded_hamiltonian(h_single: np.ndarray, slots: Sequence[int],
                         n_slots: int = N_SLOTS) -> np.ndarray:
    """Sum_ij h[i,j] L_i^dag L_j with chain site i living on tensor slot
    slots[i]."""
    h_single = np.asarray(h_single, dtype=complex)
    if h_single.shape[0] != len(slots):
        raise DimensionError("single-particle matrix does not match the slot list")
    lowering = [site_lowering(s, n_slots) for s in slots]
    total = np.zeros((2**n_slots, 2**n_slots), dtype=complex)
    for i in range(len(slots)):
        for j in range(len(slots)):
            if h_single[i, j] == 0:
                continue
            total += h_single[i, j] * (lowering[i].conj().T @ lowering[j])
    return total


def two_chain_hamiltonian(h_single: np.ndarray | None = None) -> np.ndarray:
    """H1 (x) I + I (x) H2 for two identical 3-site chains interleaved as
    |X1 X1' X2 X2' X3 X3'>; defaults to the unit-lam perturbative chain."""
    if h_single is None:
        h_single = unit_hopping_matrix(3)
    return embedded_hamiltonian(h_single, (0, 2, 4)) + embedded_hamiltonian(h_single, (1, 3, 5))


def basis_index(label: str) -> int:
    """Index of a product state like "GEGGGG" (slot 0 leftmost)."""
    if len(label) != N_SLOTS or any(ch not in "GE" for ch in label):
        raise ValidationError(f"state label must be 6 letters of G/E, got {label!r}")
    idx = 0
    for ch in label:
        idx = 2 * idx + (1 if ch == "E" else 0)
    return idx


def initial_state(kind: str, theta: float) -> np.ndarray:
    """Pure two-chain initial states: a single shared excitation (kind
    "a") or a double excitation against the ground (kind "b")."""
    if not 0.0 <= theta <= np.pi / 2:
        raise ValidationError(f"theta must lie in [0, pi/2], got {theta}")
    psi = np.zeros(DIM, dtype=complex)
    if kind == "a":
        psi[basis_index("GEGGGG")] = np.sin(theta)
        psi[basis_index("EGGGGG")] = np.cos(theta)
    elif kind == "b":
        psi[basis_index("GGGGGG")] = np.sin(theta)
        psi[basis_index("EEGGGG")] = np.cos(theta)
    else:
        raise ValidationError(f"initial state kind must be 'a' or 'b', got {kind!r}")
    return psi


def werner_initial(a: float) -> np.ndarray:
    """Werner pair on sites (1, 1'), every other site in |G>."""
    if not 0.0 <= a <= 1.0:
        raise ValidationError(f"Werner weight must lie in [0, 1], got {a}")
    psi = np.zeros(4, dtype=complex)
    psi[1] = psi[2] = 1 / np.sqrt(2)  # (|EG> + |GE>)/sqrt(2) on the pair
    pair = (1 - a) / 4 * np.eye(4, dtype=complex) + a * np.outer(psi, psi.conj())
    rest = np.zeros((16, 16), dtype=complex)
    rest[0, 0] = 1.0
    return qstate.tensor_product(pair, rest)


@dataclass
class ChainTrajectory:
    times: np.ndarray
    states: list[np.ndarray]

    def max_trace_drift(self) -> float:
        return max(abs(float(np.real(np.trace(s))) - 1.0) for s in self.states)

    def min_eigenvalue(self) -> float:
        return min(float(np.linalg.eigvalsh(s).min()) for s in self.states)

    def purities(self) -> np.ndarray:
        return np.array([qstate.purity(s) for s in self.states])


def _excitation_counts(n_slots: int = N_SLOTS) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(2**n_slots)], dtype=float)


def evolve(state0, h_tot: np.ndarray, gamma_loss: float, t_grid,
           step_scale: float = 1.0, trace_tol: float = 1e-6) -> ChainTrajectory:
    """Two-chain evolution sampled at t_grid.

    Lossless runs are propagated exactly through the eigendecomposition of
    the Hamiltonian; lossy runs use fixed-step fourth-order Runge-Kutta on
    the Lindblad equation with per-site lowering operators.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or np.any(np.diff(t_grid) < 0):
        raise ValidationError("t_grid must be a non-empty ascending sequence")
    state0 = np.asarray(state0, dtype=complex)
    dim = h_tot.shape[0]
    n_slots = int(np.log2(dim))

    evals, evecs = np.linalg.eigh((h_tot + h_tot.conj().T) / 2)

    if gamma_loss == 0.0:
        states = []
        if state0.ndim == 1:
            amp0 = evecs.conj().T @ state0
            for t in t_grid:
                psi = evecs @ (np.exp(-1j * evals * t) * amp0)
                states.append(np.outer(psi, psi.conj()))
        else:
            rho_eig = evecs.conj().T @ state0 @ evecs
            for t in t_grid:
                phase = np.exp(-1j * evals * t)
                rho = evecs @ (phase[:, None] * rho_eig * phase.conj()[None, :]) @ evecs.conj().T
                states.append((rho + rho.conj().T) / 2)
        return ChainTrajectory(times=t_grid.copy(), states=states)

    rho = np.outer(state0, state0.conj()) if state0.ndim == 1 else state0.copy()
    counts = _excitation_counts(n_slots)
    anticomm = 0.5 * gamma_loss * (counts[:, None] + counts[None, :])
    lowered = []
    for slot in range(n_slots):
        bit = 1 << (n_slots - 1 - slot)
        lo = np.array([i for i in range(dim) if not i & bit])
        lowered.append((lo, lo + bit))

    def rhs(r):
        out = -1j * (h_tot @ r - r @ h_tot) - anticomm * r
        for lo, hi in lowered:
            out[np.ix_(lo, lo)] += gamma_loss * r[np.ix_(hi, hi)]
        return out

    span = max(float(evals[-1] - evals[0]), gamma_loss * n_slots, 1e-12)
    h_cap = 0.05 * step_scale / span
    states = []
    t = float(t_grid[0])
    for target in t_grid:
        while t < target - 1e-15:
            h = min(h_cap, target - t)
            k1 = rhs(rho)
            k2 = rhs(rho + 0.5 * h * k1)
            k3 = rhs(rho + 0.5 * h * k2)
            k4 = rhs(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            rho = (rho + rho.conj().T) / 2
            t += h
            drift = abs(float(np.real(np.trace(rho))) - 1.0)
            if drift > trace_tol:
                raise IntegrationAccuracyError(
                    f"trace drift {drift:.3e} at t={t:.6g}; reduce the step"
                )
        states.append(rho.copy())
        t = float(target)
    return ChainTrajectory(times=t_grid.copy(), states=states)


def reduce_pair(rho: np.ndarray, pair=("3", "3p")) -> np.ndarray:
    """Two-qubit reduction onto a labelled site pair (first label = side A)."""
    slots = [SITE_SLOTS[p] for p in pair]
    if slots[0] > slots[1]:
        raise ValidationError("list the pair in tensor order, e.g. ('3', '3p')")
    return qstate.partial_trace(rho, (2,) * N_SLOTS, slots)


def site_population(rho: np.ndarray, site: str) -> float:
    reduced = qstate.partial_trace(rho, (2,) * N_SLOTS, [SITE_SLOTS[site]])
    return float(np.real(reduced[1, 1]))


def eavesdrop_measure(rho: np.ndarray, site: str = "2") -> np.ndarray:
    """Project a site onto its ground state and renormalize."""
    slot = SITE_SLOTS[site]
    bit = 1 << (N_SLOTS - 1 - slot)
    keep = np.array([i for i in range(DIM) if not i & bit])
    projected = np.zeros_like(rho)
    projected[np.ix_(keep, keep)] = rho[np.ix_(keep, keep)]
    p = float(np.real(np.trace(projected)))
    if p < 1e-12:
        raise ValidationError(
            f"projection on |G_{site}> has probability {p:.3e}; outcome impossible"
        )
    return projected / p


def transmission_ratio(times: np.ndarray, src_value: float, dst_series: np.ndarray):
    """Peak destination concurrence over the run divided by the source
    concurrence at t=0, as a percentage, with parabolic refinement of the
    sampled peak; also returns the refined peak time."""
    times = np.asarray(times, dtype=float)
    dst_series = np.asarray(dst_series, dtype=float)
    if src_value <= 1e-12:
        raise UndefinedRatioError("source concurrence vanishes at t=0")
    k = int(np.argmax(dst_series))
    peak, t_peak = dst_series[k], times[k]
    if 0 < k < dst_series.size - 1:
        y0, y1, y2 = dst_series[k - 1 : k + 2]
        denom = y0 - 2 * y1 + y2
        if denom < -1e-15:
            shift = 0.5 * (y0 - y2) / denom
            shift = float(np.clip(shift, -1.0, 1.0))
            dt = times[1] - times[0]
            t_peak = times[k] + shift * dt
            peak = y1 - 0.25 * (y0 - y2) * shift
    return 100.0 * peak / src_value, float(t_peak)
