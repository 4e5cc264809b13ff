"""Dressed-basis master equation with ground-linked thermal transitions.

The dissipator couples every dressed state |k> only to the dressed ground
state |0>, with downward rates gamma_{k->0} and thermally activated upward
rates gamma_{0->k}.  The weight of reservoir channel j in the rate of
state k is the channel's photon content <k|a_j^dag a_j|k>, the natural
many-excitation extension of the single-excitation transformation-matrix
coefficients (for one excitation the two coincide exactly).  Spectral
densities are flat and the upward/downward ratio satisfies detailed
balance exactly when the baths share one temperature.

Correlation readouts default to the co-rotating (interaction) frame in
which the free dressed phases are removed before the vacuum projection;
the integrated state itself always carries the full phase evolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg as sla

from . import correlations, network, qstate
from .errors import (
    ContractViolationError,
    DimensionError,
    IntegrationAccuracyError,
    ValidationError,
)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Mean thermal photon number 1/(exp(omega/T) - 1); zero at T = 0."""
    if omega <= 0:
        raise ValidationError(f"thermal occupation needs omega > 0, got {omega}")
    if temperature < 0:
        raise ValidationError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0:
        return 0.0
    return float(1.0 / np.expm1(omega / temperature))


def temperature_for_occupation(nbar: float, omega: float) -> float:
    """Inverse of thermal_occupation at fixed frequency."""
    if nbar < 0:
        raise ValidationError(f"thermal photon number must be >= 0, got {nbar}")
    if omega <= 0:
        raise ValidationError(f"reference frequency must be > 0, got {omega}")
    if nbar == 0:
        return 0.0
    return float(omega / np.log1p(1.0 / nbar))


@dataclass(frozen=True)
class RateTable:
    """Transition rates between each dressed state and the ground state.

    Index 0 (the ground state itself) carries zero rates.
    """

    omega_down: np.ndarray
    gamma_down: np.ndarray
    gamma_up: np.ndarray

    @property
    def dim(self) -> int:
        return self.gamma_down.size


def transition_weights(dressed: network.DressedBasis, basis: network.ExcitationBasis) -> np.ndarray:
    """w[j, k] = <k|a_j^dag a_j|k>, the channel-j photon content of each
    dressed state, for the three reservoir channels."""
    lowering = network.lowering_operators(basis)
    weights = np.zeros((3, dressed.dim))
    for j, a in enumerate(lowering):
        number_op = qstate.dagger(a) @ a
        weights[j] = np.real(
            np.einsum("ik,ij,jk->k", dressed.transform.conj(), number_op, dressed.transform)
        )
    weights[:, 0] = 0.0
    return np.clip(weights, 0.0, None)


def compute_rates(
    dressed: network.DressedBasis,
    params: network.NetworkParams,
    basis: network.ExcitationBasis,
) -> RateTable:
    omega_down = dressed.energies - dressed.energies[0]
    if dressed.dim > 1 and omega_down[1:].min() <= 0:
        raise ContractViolationError(
            "every excited dressed energy must exceed the ground energy"
        )
    weights = transition_weights(dressed, basis)
    gamma_down = np.zeros(dressed.dim)
    gamma_up = np.zeros(dressed.dim)
    for k in range(1, dressed.dim):
        for j in range(3):
            w = weights[j, k]
            if w == 0.0:
                continue
            nbar = thermal_occupation(omega_down[k], params.temps[j])
            gamma_down[k] += w * params.gamma[j] * (nbar + 1.0)
            gamma_up[k] += w * params.gamma[j] * nbar
    return RateTable(omega_down=omega_down, gamma_down=gamma_down, gamma_up=gamma_up)


class _Generator:
    """Precomputed elementwise coefficients of the master equation."""

    def __init__(self, dressed: network.DressedBasis, rates: RateTable):
        if rates.dim != dressed.dim:
            raise DimensionError("rate table does not match the dressed basis")
        energies = dressed.energies
        phase = -1j * (energies[:, None] - energies[None, :])
        decay = 0.5 * (rates.gamma_down[:, None] + rates.gamma_down[None, :])
        up_sum = rates.gamma_up.sum()
        # Rows/columns touching the ground state also damp at half the total
        # upward rate; on the diagonal this drains rho_00 into the fed states.
        decay[0, :] += 0.5 * up_sum
        decay[:, 0] += 0.5 * up_sum
        self.coeff = phase - decay
        self.gamma_down = rates.gamma_down
        self.gamma_up = rates.gamma_up
        self.dim = dressed.dim

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        out = self.coeff * rho
        pops = np.real(np.diag(rho))
        out[0, 0] += self.gamma_down @ pops
        diag = np.arange(self.dim)
        out[diag[1:], diag[1:]] += self.gamma_up[1:] * pops[0]
        return out

    def matrix(self) -> np.ndarray:
        """Dense superoperator acting on the row-major flattened state."""
        d = self.dim
        mat = np.diag(self.coeff.ravel()).astype(complex)
        flat = lambda m, n: m * d + n
        for k in range(1, d):
            mat[flat(0, 0), flat(k, k)] += self.gamma_down[k]
            mat[flat(k, k), flat(0, 0)] += self.gamma_up[k]
        return mat


def rhs(rho: np.ndarray, dressed: network.DressedBasis, rates: RateTable) -> np.ndarray:
    """Time derivative of a dressed-basis density operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dressed.dim, dressed.dim):
        raise DimensionError(f"state shape {rho.shape} != dressed dim {dressed.dim}")
    return _Generator(dressed, rates).rhs(rho)


@dataclass
class Trajectory:
    times: np.ndarray
    states: list[np.ndarray]
    p_vac: np.ndarray = field(default=None)

    def max_trace_drift(self) -> float:
        return max(abs(float(np.real(np.trace(s))) - 1.0) for s in self.states)

    def min_eigenvalue(self) -> float:
        return min(float(np.linalg.eigvalsh(s).min()) for s in self.states)


def _vacuum_probability(rho_dressed, dressed, basis) -> float:
    rho_bare = dressed.to_bare(rho_dressed)
    idx = list(network.atomic_vacuum_indices(basis).values())
    return float(np.real(rho_bare[idx, idx].sum()))


def integrate(
    rho0: np.ndarray,
    dressed: network.DressedBasis,
    rates: RateTable,
    t_grid: Sequence[float],
    basis: network.ExcitationBasis | None = None,
    step_scale: float = 1.0,
    trace_tol: float = 1e-6,
) -> Trajectory:
    """Fixed-step fourth-order Runge-Kutta integration sampled at t_grid.

    The step honours h * max(|frequency|, rate) <= 0.05 * step_scale.  The
    state is re-Hermitized after every step; the trace is monitored but
    never renormalized, a drift beyond ``trace_tol`` raises.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or np.any(np.diff(t_grid) < 0):
        raise ValidationError("t_grid must be a non-empty ascending sequence")
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (dressed.dim, dressed.dim):
        raise DimensionError(f"state shape {rho.shape} != dressed dim {dressed.dim}")
    gen = _Generator(dressed, rates)
    span = dressed.energies[-1] - dressed.energies[0]
    fastest = max(float(span), float(rates.gamma_down.max(initial=0.0)),
                  float(rates.gamma_up.sum()), 1e-12)
    h_cap = 0.05 * step_scale / fastest

    states = []
    pvac = []
    t = float(t_grid[0])
    for target in t_grid:
        while t < target - 1e-15:
            h = min(h_cap, target - t)
            k1 = gen.rhs(rho)
            k2 = gen.rhs(rho + 0.5 * h * k1)
            k3 = gen.rhs(rho + 0.5 * h * k2)
            k4 = gen.rhs(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            rho = (rho + rho.conj().T) / 2
            t += h
            drift = abs(float(np.real(np.trace(rho))) - 1.0)
            if drift > trace_tol:
                raise IntegrationAccuracyError(
                    f"trace drift {drift:.3e} at t={t:.6g}; reduce the step"
                )
        states.append(rho.copy())
        pvac.append(_vacuum_probability(rho, dressed, basis) if basis is not None else np.nan)
        t = float(target)
    return Trajectory(times=t_grid.copy(), states=states, p_vac=np.array(pvac))


def evolve_exact(
    rho0: np.ndarray,
    dressed: network.DressedBasis,
    rates: RateTable,
    t_grid: Sequence[float],
    basis: network.ExcitationBasis | None = None,
) -> Trajectory:
    """Matrix-exponential solution of the vectorized generator; the
    verification oracle for :func:`integrate` at small dimensions."""
    t_grid = np.asarray(t_grid, dtype=float)
    gen = _Generator(dressed, rates)
    lmat = gen.matrix()
    d = dressed.dim
    rho0 = np.asarray(rho0, dtype=complex)
    states = []
    pvac = []
    steps = np.diff(t_grid, prepend=t_grid[0])
    propagators: dict[float, np.ndarray] = {}
    vec = rho0.ravel().copy()
    for dt in steps:
        key = round(float(dt), 15)
        if key not in propagators:
            propagators[key] = sla.expm(lmat * dt) if dt != 0 else np.eye(d * d)
        vec = propagators[key] @ vec
        rho = vec.reshape(d, d)
        rho = (rho + rho.conj().T) / 2
        states.append(rho)
        pvac.append(_vacuum_probability(rho, dressed, basis) if basis is not None else np.nan)
    return Trajectory(times=t_grid.copy(), states=states, p_vac=np.array(pvac))


def correlation_trajectory(
    traj: Trajectory,
    dressed: network.DressedBasis,
    basis: network.ExcitationBasis,
    side: str = "B",
    x_tol: float = correlations.X_LEAKAGE_TOL,
    frame: str = "interaction",
) -> correlations.CorrelationSeries:
    """Atomic correlation measures along a trajectory (vacuum projection
    followed by the two-qubit measures, one point per sample).

    ``frame="interaction"`` strips the free dressed-phase rotation before
    projecting, which exposes the slow dissipative envelope the sudden
    transition and freezing analyses live on; ``frame="schrodinger"``
    projects the raw state.
    """
    if frame not in ("interaction", "schrodinger"):
        raise ValidationError(f"unknown readout frame {frame!r}")
    energies = dressed.energies
    series = correlations.CorrelationSeries()
    for t, state in zip(traj.times, traj.states):
        if frame == "interaction":
            state = state * np.exp(1j * (energies[:, None] - energies[None, :]) * t)
        rho4, p_vac = network.reduce_to_atoms(state, dressed, basis)
        series.append(
            correlations.measure_point(rho4, t=t, p_vac=p_vac, side=side, x_tol=x_tol)
        )
    return series
