import itertools

import numpy as np
import pytest

from cqednet import network, qstate
from cqednet.errors import (
    CapacityError,
    ContractViolationError,
    DegenerateProjectionError,
    DimensionError,
    ValidationError,
)
from cqednet.network import (
    BareState,
    NetworkParams,
    build_hamiltonian,
    dressed_states,
    enumerate_basis,
    excited_state_count,
    prepare_atomic_state,
    prepare_bare_state,
    prepare_bell_diagonal,
    reduce_to_atoms,
    total_excitation_operator,
)


def brute_force_count(n_max):
    count = 0
    for a1, a2 in itertools.product(range(2), range(2)):
        for c1 in range(n_max + 1):
            for c2 in range(n_max + 1):
                for f in range(n_max + 1):
                    if a1 + a2 + c1 + c2 + f <= n_max:
                        count += 1
    return count


RESONANT = NetworkParams(omega_a=1.0, omega_0=1.0, omega_f=1.0, g1=0.1, g2=0.1, J=0.05)


class TestBasis:
    def test_landmark_dimensions(self):
        assert enumerate_basis(2).dim == 19
        assert enumerate_basis(6).dim == 231

    def test_single_excitation(self):
        basis = enumerate_basis(1)
        assert basis.dim == 6
        assert basis.states[0] == BareState(0, 0, 0, 0, 0)

    def test_counts_match_brute_force(self):
        for n in range(7):
            basis = enumerate_basis(n)
            assert basis.dim == brute_force_count(n)
            assert basis.dim == 1 + excited_state_count(n)

    def test_ordering_ground_then_sectors(self):
        basis = enumerate_basis(3)
        totals = basis.totals()
        assert totals[0] == 0
        assert np.all(np.diff(totals) >= 0)
        # lexicographic inside each sector
        for n in range(4):
            sector = [s for s in basis.states if s.total == n]
            assert sector == sorted(sector)

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            enumerate_basis(-1)

    def test_label_round_trip(self):
        basis = enumerate_basis(2)
        idx = basis.index_of_label("eg000")
        assert basis.states[idx] == BareState(1, 0, 0, 0, 0)


class TestHamiltonian:
    def test_atom_cavity_matrix_element(self):
        basis = enumerate_basis(1)
        params = NetworkParams(g1=0.13, g2=0.07, J=0.05)
        h = build_hamiltonian(params, basis)
        i = basis.index_of_label("gg100")
        j = basis.index_of_label("eg000")
        assert h[i, j] == pytest.approx(0.13)

    def test_zero_couplings_diagonal(self):
        basis = enumerate_basis(2)
        params = NetworkParams(omega_a=1.0, omega_0=0.9, omega_f=1.1)
        h = build_hamiltonian(params, basis)
        assert np.abs(h - np.diag(np.diag(h))).max() == 0
        for i, s in enumerate(basis.states):
            expected = (
                1.0 * (s.a1 + s.a2 - 1.0) + 0.9 * (s.c1 + s.c2) + 1.1 * s.f
            )
            assert h[i, i] == pytest.approx(expected)

    def test_single_excitation_block_oracle(self):
        # Resonant chain f-c2-c1 with atoms; explicit 5x5 in lexicographic
        # order (gg001, gg010, gg100, ge000, eg000), diagonal at the common
        # single-excitation energy.
        g, J = 0.1, 0.04
        basis = enumerate_basis(1)
        params = NetworkParams(g1=g, g2=g, J=J)
        h = build_hamiltonian(params, basis)
        e1 = 0.0  # omega_a = omega_0 = omega_f = 1 and S_z offset -1 + 1
        oracle = np.array(
            [
                [e1, J, J, 0, 0],
                [J, e1, 0, g, 0],
                [J, 0, e1, 0, g],
                [0, g, 0, e1, 0],
                [0, 0, g, 0, e1],
            ],
            dtype=complex,
        )
        block = h[1:, 1:]
        assert np.allclose(block, oracle, atol=1e-14)
        evals = np.linalg.eigvalsh(block)
        assert np.allclose(evals + evals[::-1], 2 * e1, atol=1e-12)

    def test_hermitian(self):
        basis = enumerate_basis(2)
        h = build_hamiltonian(NetworkParams(g1=0.2, g2=0.15, J=0.1), basis)
        assert qstate.is_hermitian(h, 1e-12)

    def test_commutes_with_total_excitation(self):
        basis = enumerate_basis(3)
        h = build_hamiltonian(
            NetworkParams(omega_0=0.9, g1=0.2, g2=0.15, J=0.1), basis
        )
        n_op = total_excitation_operator(basis)
        comm = h @ n_op - n_op @ h
        assert np.abs(comm).max() <= 1e-10 * np.abs(h).max()

    def test_rwa_guard_warns(self):
        with pytest.warns(UserWarning):
            NetworkParams(g1=0.01, g2=0.01, J=0.0, gamma=(0.05, 0.0, 0.0))

    def test_invalid_rates_rejected(self):
        with pytest.raises(ValidationError):
            NetworkParams(gamma=(-0.1, 0.0, 0.0))
        with pytest.raises(ValidationError):
            NetworkParams(temps=(0.0, -1.0, 0.0))


class TestDressedStates:
    def test_zero_coupling_identity(self):
        basis = enumerate_basis(2)
        h = build_hamiltonian(NetworkParams(omega_0=0.9, omega_f=1.1), basis)
        dressed = dressed_states(h, basis)
        # diagonal H: transform is a permutation with unit entries; within
        # each sector the energies are already resolved by the bare values
        assert np.allclose(np.abs(dressed.transform).sum(axis=0), 1.0)
        assert np.allclose(dressed.transform @ dressed.transform.conj().T, np.eye(19))

    def test_single_excitation_energies_match_block(self):
        basis = enumerate_basis(1)
        params = NetworkParams(g1=0.1, g2=0.1, J=0.04)
        h = build_hamiltonian(params, basis)
        dressed = dressed_states(h, basis)
        oracle = np.sort(np.linalg.eigvalsh(h[1:, 1:]))
        assert np.allclose(dressed.energies[1:], oracle, atol=1e-12)

    def test_ground_state_exact(self):
        basis = enumerate_basis(2)
        h = build_hamiltonian(NetworkParams(omega_0=0.9, g1=0.08, g2=0.08, J=0.08), basis)
        dressed = dressed_states(h, basis)
        ground = np.zeros(19)
        ground[0] = 1.0
        assert np.allclose(dressed.transform[:, 0], ground, atol=0)
        assert dressed.sectors[0] == 0

    def test_unitarity_and_sector_blocks(self):
        basis = enumerate_basis(2)
        h = build_hamiltonian(NetworkParams(omega_0=0.9, g1=0.2, g2=0.18, J=0.12), basis)
        dressed = dressed_states(h, basis)
        v = dressed.transform
        assert np.abs(v.conj().T @ v - np.eye(basis.dim)).max() <= 1e-10
        totals = basis.totals()
        for k in range(basis.dim):
            outside = np.abs(v[totals != dressed.sectors[k], k])
            assert outside.max(initial=0.0) <= 1e-12

    def test_energies_ascending(self):
        basis = enumerate_basis(2)
        h = build_hamiltonian(NetworkParams(omega_0=0.9, g1=0.2, g2=0.18, J=0.12), basis)
        dressed = dressed_states(h, basis)
        assert np.all(np.diff(dressed.energies) >= -1e-12)

    def test_eigen_reconstruction(self):
        basis = enumerate_basis(2)
        h = build_hamiltonian(NetworkParams(omega_0=0.9, g1=0.2, g2=0.18, J=0.12), basis)
        dressed = dressed_states(h, basis)
        v = dressed.transform
        rebuilt = v @ np.diag(dressed.energies) @ v.conj().T
        assert np.abs(rebuilt - h).max() <= 1e-10 * np.abs(h).max()

    def test_non_hermitian_rejected(self):
        basis = enumerate_basis(1)
        m = np.zeros((6, 6), dtype=complex)
        m[0, 1] = 1.0
        with pytest.raises(ContractViolationError):
            dressed_states(m, basis)


@pytest.fixture(scope="module")
def frame2():
    basis = enumerate_basis(2)
    h = build_hamiltonian(NetworkParams(omega_0=0.9, g1=0.08, g2=0.08, J=0.08), basis)
    return basis, dressed_states(h, basis)


class TestPrepareAndReduce:
    def test_bd_eigenvalues(self, frame2):
        basis, dressed = frame2
        rho = prepare_bell_diagonal((1.0, -0.9, 0.9), basis, dressed)
        evals = np.sort(np.linalg.eigvalsh(rho))[::-1]
        expected = np.zeros(basis.dim)
        expected[:4] = [0.95, 0.05, 0.0, 0.0]
        assert np.allclose(evals, expected, atol=1e-12)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)

    def test_maximally_mixed_pair(self, frame2):
        basis, dressed = frame2
        rho = prepare_bell_diagonal((0.0, 0.0, 0.0), basis, dressed)
        rho_bare = dressed.to_bare(rho)
        vac = network.atomic_vacuum_indices(basis)
        for idx in vac.values():
            assert rho_bare[idx, idx].real == pytest.approx(0.25, abs=1e-12)

    def test_pure_bare_state(self, frame2):
        basis, dressed = frame2
        rho = prepare_bare_state("eg000", basis, dressed)
        rho_bare = dressed.to_bare(rho)
        i = basis.index_of_label("eg000")
        expected = np.zeros((19, 19))
        expected[i, i] = 1.0
        assert np.allclose(rho_bare, expected, atol=1e-12)

    def test_capacity_error_small_basis(self):
        basis = enumerate_basis(1)
        h = build_hamiltonian(NetworkParams(g1=0.1, g2=0.1, J=0.05), basis)
        dressed = dressed_states(h, basis)
        with pytest.raises(CapacityError):
            prepare_bell_diagonal((1.0, -0.9, 0.9), basis, dressed)

    def test_round_trip_identity(self, frame2):
        basis, dressed = frame2
        rho4 = np.diag([0.475, 0.025, 0.025, 0.475]).astype(complex)
        rho4[0, 3] = rho4[3, 0] = 0.475
        rho4[1, 2] = rho4[2, 1] = 0.025
        rho = prepare_atomic_state(rho4, basis, dressed)
        back, p_vac = reduce_to_atoms(rho, dressed, basis)
        assert p_vac == pytest.approx(1.0, abs=1e-12)
        assert np.abs(back - rho4).max() <= 1e-12

    def test_reduce_ground(self, frame2):
        basis, dressed = frame2
        rho = prepare_bare_state("gg000", basis, dressed)
        rho4, p_vac = reduce_to_atoms(rho, dressed, basis)
        assert p_vac == pytest.approx(1.0)
        assert rho4[0, 0].real == pytest.approx(1.0)

    def test_degenerate_projection(self, frame2):
        basis, dressed = frame2
        rho = prepare_bare_state("gg001", basis, dressed)
        with pytest.raises(DegenerateProjectionError):
            reduce_to_atoms(rho, dressed, basis)

    def test_rejects_bad_shape(self, frame2):
        basis, dressed = frame2
        with pytest.raises(DimensionError):
            prepare_atomic_state(np.eye(3) / 3, basis, dressed)
