"""Two-node atom-cavity-fiber network.

Bare states are |A1 A2 C1 C2 F> with two-level atoms (0=g, 1=e) and photon
counts in the two cavities and the connecting fiber, truncated at a total
excitation number ``n_max``.  The Hamiltonian conserves total excitation,
so the dressed (eigenstate) transform is block diagonal per sector and the
bare ground state |gg000> is itself the dressed ground state.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import qstate
from .errors import (
    CapacityError,
    ContractViolationError,
    DegenerateProjectionError,
    DimensionError,
    ValidationError,
)


class BareState(NamedTuple):
    a1: int
    a2: int
    c1: int
    c2: int
    f: int

    @property
    def total(self) -> int:
        return self.a1 + self.a2 + self.c1 + self.c2 + self.f

    def label(self) -> str:
        atoms = "ge"[self.a1] + "ge"[self.a2]
        return f"{atoms}{self.c1}{self.c2}{self.f}"


def excited_state_count(n_max: int) -> int:
    """Number of bare states holding at least one excitation."""
    return n_max + 2 * sum(k * (k + 1) for k in range(1, n_max + 1))


@dataclass(frozen=True)
class ExcitationBasis:
    n_max: int
    states: tuple[BareState, ...]
    index: dict[BareState, int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def totals(self) -> np.ndarray:
        return np.array([s.total for s in self.states])

    def index_of_label(self, label: str) -> int:
        for state, i in self.index.items():
            if state.label() == label:
                return i
        raise ValidationError(f"no bare state {label!r} in basis with n_max={self.n_max}")


def enumerate_basis(n_max: int) -> ExcitationBasis:
    """All bare states with total excitation <= n_max, ground first, then
    ascending total and lexicographic within each sector."""
    if n_max < 0:
        raise ValidationError(f"n_max must be >= 0, got {n_max}")
    states = [
        BareState(*s)
        for s in itertools.product(range(2), range(2), *(range(n_max + 1),) * 3)
        if sum(s) <= n_max
    ]
    states.sort(key=lambda s: (s.total, s))
    index = {s: i for i, s in enumerate(states)}
    return ExcitationBasis(n_max=n_max, states=tuple(states), index=index)


@dataclass(frozen=True)
class NetworkParams:
    """Frequencies and couplings in units of a reference frequency (hbar=1),
    plus per-reservoir damping rates and temperatures (k_B=1)."""

    omega_a: float = 1.0
    omega_0: float = 1.0
    omega_f: float = 1.0
    g1: float = 0.0
    g2: float = 0.0
    J: float = 0.0
    gamma: tuple[float, float, float] = (0.0, 0.0, 0.0)
    temps: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if len(self.gamma) != 3 or len(self.temps) != 3:
            raise ValidationError("gamma and temps must list the 3 reservoirs")
        if any(g < 0 for g in self.gamma):
            raise ValidationError(f"damping rates must be >= 0, got {self.gamma}")
        if any(t < 0 for t in self.temps):
            raise ValidationError(f"temperatures must be >= 0, got {self.temps}")
        gmax = max(self.gamma)
        if gmax > 0 and 2 * min(self.g1, self.g2) <= gmax:
            warnings.warn(
                "rotating-wave regime requires 2*min(g1,g2) > max damping rate",
                stacklevel=2,
            )


def lowering_operators(basis: ExcitationBasis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Photon annihilation matrices (a1, a2, a3) in the truncated basis."""
    dim = basis.dim
    ops = [np.zeros((dim, dim), dtype=complex) for _ in range(3)]
    for i, s in enumerate(basis.states):
        for mode, n in enumerate((s.c1, s.c2, s.f)):
            if n == 0:
                continue
            lowered = list(s)
            lowered[2 + mode] -= 1
            j = basis.index[BareState(*lowered)]
            ops[mode][j, i] = np.sqrt(n)
    return tuple(ops)


def atomic_raising_operators(basis: ExcitationBasis) -> tuple[np.ndarray, np.ndarray]:
    """S+ matrices for the two atoms (elements leaving the truncation are
    dropped; excitation-conserving products never need them)."""
    dim = basis.dim
    ops = [np.zeros((dim, dim), dtype=complex) for _ in range(2)]
    for i, s in enumerate(basis.states):
        for atom in range(2):
            if s[atom] == 1:
                continue
            raised = list(s)
            raised[atom] = 1
            target = BareState(*raised)
            if target.total <= basis.n_max:
                ops[atom][basis.index[target], i] = 1.0
    return tuple(ops)


def build_hamiltonian(params: NetworkParams, basis: ExcitationBasis) -> np.ndarray:
    """Rotating-wave network Hamiltonian with S_z eigenvalues +-1/2."""
    a1, a2, a3 = lowering_operators(basis)
    sp1, sp2 = atomic_raising_operators(basis)
    diag = np.zeros(basis.dim)
    for i, s in enumerate(basis.states):
        diag[i] = (
            params.omega_a * ((s.a1 - 0.5) + (s.a2 - 0.5))
            + params.omega_0 * (s.c1 + s.c2)
            + params.omega_f * s.f
        )
    h = np.diag(diag).astype(complex)
    for g, sp, a in ((params.g1, sp1, a1), (params.g2, sp2, a2)):
        coupling = g * (sp @ a)
        h += coupling + qstate.dagger(coupling)
    for a in (a1, a2):
        hop = params.J * (qstate.dagger(a) @ a3)
        h += hop + qstate.dagger(hop)
    return h


def total_excitation_operator(basis: ExcitationBasis) -> np.ndarray:
    return np.diag(basis.totals().astype(float)).astype(complex)


@dataclass(frozen=True)
class DressedBasis:
    """Eigenframe of the network Hamiltonian.

    ``transform`` columns are the dressed states expressed in the bare
    basis; ``energies`` ascend and ``sectors`` records the conserved total
    excitation of each dressed state.
    """

    energies: np.ndarray
    transform: np.ndarray
    sectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.energies.size

    def to_dressed(self, op_bare: np.ndarray) -> np.ndarray:
        v = self.transform
        return v.conj().T @ op_bare @ v

    def to_bare(self, op_dressed: np.ndarray) -> np.ndarray:
        v = self.transform
        return v @ op_dressed @ v.conj().T


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real positive."""
    fixed = vectors.copy()
    for k in range(fixed.shape[1]):
        col = fixed[:, k]
        lead = col[np.argmax(np.abs(col))]
        if abs(lead) > 0:
            fixed[:, k] = col * (lead.conjugate() / abs(lead))
    return fixed


def dressed_states(h: np.ndarray, basis: ExcitationBasis, tol: float = 1e-9) -> DressedBasis:
    """Diagonalize per excitation sector, then order globally by energy.

    Per-sector diagonalization keeps the transform exactly block diagonal
    even when energies of different sectors collide numerically.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (basis.dim, basis.dim):
        raise DimensionError(f"Hamiltonian shape {h.shape} != basis dim {basis.dim}")
    if not qstate.is_hermitian(h, tol):
        raise ContractViolationError("network Hamiltonian must be Hermitian")
    totals = basis.totals()
    energies = np.zeros(basis.dim)
    transform = np.zeros((basis.dim, basis.dim), dtype=complex)
    sectors = np.zeros(basis.dim, dtype=int)
    pos = 0
    for n in range(basis.n_max + 1):
        idx = np.flatnonzero(totals == n)
        block = h[np.ix_(idx, idx)]
        w, v = np.linalg.eigh((block + block.conj().T) / 2)
        v = _fix_phases(v)
        span = slice(pos, pos + idx.size)
        energies[span] = w
        sectors[span] = n
        transform[np.ix_(idx, np.arange(pos, pos + idx.size))] = v
        pos += idx.size
    order = np.lexsort((np.arange(basis.dim), sectors, energies))
    energies = energies[order]
    sectors = sectors[order]
    transform = transform[:, order]
    if sectors[0] != 0:
        raise ContractViolationError(
            "bare ground state is not the dressed ground state; "
            "the ground-linked rate formulas do not apply"
        )
    return DressedBasis(energies=energies, transform=transform, sectors=sectors)


_ATOM_CONFIGS = ((0, 0), (0, 1), (1, 0), (1, 1))  # |gg>, |ge>, |eg>, |ee>


def atomic_vacuum_indices(basis: ExcitationBasis) -> dict[tuple[int, int], int]:
    """Basis index of |a1 a2 000> for each atomic configuration present."""
    out = {}
    for a1, a2 in _ATOM_CONFIGS:
        s = BareState(a1, a2, 0, 0, 0)
        if s in basis.index:
            out[(a1, a2)] = basis.index[s]
    return out


def prepare_atomic_state(rho4: np.ndarray, basis: ExcitationBasis, dressed: DressedBasis,
                         tol: float = qstate.DEFAULT_TOL) -> np.ndarray:
    """Embed a two-qubit atomic state (gg, ge, eg, ee order) with all field
    modes in vacuum and rotate it to the dressed basis."""
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape != (4, 4):
        raise DimensionError(f"atomic state must be 4x4, got {rho4.shape}")
    qstate.check_density_operator(rho4, tol)
    vac = atomic_vacuum_indices(basis)
    rho_bare = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i, cfg_i in enumerate(_ATOM_CONFIGS):
        for j, cfg_j in enumerate(_ATOM_CONFIGS):
            if abs(rho4[i, j]) <= tol:
                continue
            if cfg_i not in vac or cfg_j not in vac:
                raise CapacityError(
                    f"atomic state needs n_max >= {max(sum(cfg_i), sum(cfg_j))}, "
                    f"basis has n_max={basis.n_max}"
                )
            rho_bare[vac[cfg_i], vac[cfg_j]] = rho4[i, j]
    return dressed.to_dressed(rho_bare)


def prepare_bell_diagonal(c: Sequence[float], basis: ExcitationBasis,
                          dressed: DressedBasis) -> np.ndarray:
    from .correlations import bell_diagonal_matrix

    return prepare_atomic_state(bell_diagonal_matrix(c), basis, dressed)


def prepare_bare_state(label: str, basis: ExcitationBasis, dressed: DressedBasis) -> np.ndarray:
    """Density operator of a single bare state such as ``"eg000"``."""
    i = basis.index_of_label(label)
    rho_bare = np.zeros((basis.dim, basis.dim), dtype=complex)
    rho_bare[i, i] = 1.0
    return dressed.to_dressed(rho_bare)


def reduce_to_atoms(rho_dressed: np.ndarray, dressed: DressedBasis,
                    basis: ExcitationBasis, min_pvac: float = 1e-12):
    """Project the field modes on |000>, renormalize, return the atomic 4x4
    state (gg, ge, eg, ee order) and the vacuum probability."""
    rho_bare = dressed.to_bare(np.asarray(rho_dressed, dtype=complex))
    vac = atomic_vacuum_indices(basis)
    block = np.zeros((4, 4), dtype=complex)
    for i, cfg_i in enumerate(_ATOM_CONFIGS):
        if cfg_i not in vac:
            continue
        for j, cfg_j in enumerate(_ATOM_CONFIGS):
            if cfg_j in vac:
                block[i, j] = rho_bare[vac[cfg_i], vac[cfg_j]]
    p_vac = float(np.real(np.trace(block)))
    if p_vac < min_pvac:
        raise DegenerateProjectionError(
            f"vacuum probability {p_vac:.3e} below {min_pvac:.0e}"
        )
    rho4 = block / p_vac
    return (rho4 + rho4.conj().T) / 2, p_vac
