import numpy as np
import pytest

from cqednet import mme, network, qstate
from cqednet.errors import (
    ContractViolationError,
    DimensionError,
    IntegrationAccuracyError,
    ValidationError,
)
from cqednet.mme import (
    RateTable,
    compute_rates,
    correlation_trajectory,
    evolve_exact,
    integrate,
    rhs,
    temperature_for_occupation,
    thermal_occupation,
    transition_weights,
)
from cqednet.network import (
    NetworkParams,
    build_hamiltonian,
    dressed_states,
    enumerate_basis,
    prepare_bare_state,
    prepare_bell_diagonal,
)


def frame(params, n_max=1):
    basis = enumerate_basis(n_max)
    h = build_hamiltonian(params, basis)
    dressed = dressed_states(h, basis)
    return basis, dressed


class TestThermalOccupation:
    def test_zero_temperature(self):
        assert thermal_occupation(1.0, 0.0) == 0.0

    def test_unit_occupation(self):
        # solve exp(omega/T) = 2
        t = 0.7
        assert thermal_occupation(t * np.log(2.0), t) == pytest.approx(1.0, rel=1e-12)

    def test_high_temperature_limit(self):
        # n -> T/omega as omega/T -> 0, checked at 1e-4 within 0.01%
        omega, temp = 1e-4, 1.0
        assert thermal_occupation(omega, temp) == pytest.approx(
            temp / omega, rel=1e-4
        )

    def test_domain_error(self):
        with pytest.raises(ValidationError):
            thermal_occupation(0.0, 1.0)
        with pytest.raises(ValidationError):
            thermal_occupation(-1.0, 1.0)

    def test_inverse(self):
        for nbar in (0.5, 1.0, 4.0, 7.0):
            t = temperature_for_occupation(nbar, 1.0)
            assert thermal_occupation(1.0, t) == pytest.approx(nbar, rel=1e-12)
        assert temperature_for_occupation(0.0, 1.0) == 0.0


class TestRates:
    def test_zero_temperature_no_upward(self):
        basis, dressed = frame(NetworkParams(g1=0.1, g2=0.1, J=0.05, gamma=(0.01,) * 3))
        rates = compute_rates(dressed, NetworkParams(g1=0.1, g2=0.1, J=0.05, gamma=(0.01,) * 3), basis)
        assert np.all(rates.gamma_up == 0.0)
        assert rates.gamma_down[0] == 0.0

    def test_zero_coupling_weights_are_kronecker(self):
        # bare cavity-1 photon decays through channel 1 only
        params = NetworkParams(omega_0=0.9, omega_f=1.1, gamma=(0.02, 0.03, 0.04),
                               temps=(0.5, 0.7, 0.9))
        basis, dressed = frame(params)
        weights = transition_weights(dressed, basis)
        for k in range(1, dressed.dim):
            bare = np.argmax(np.abs(dressed.transform[:, k]))
            state = basis.states[bare]
            expected = np.array([state.c1, state.c2, state.f], dtype=float)
            np.testing.assert_allclose(weights[:, k], expected, atol=1e-12)
        rates = compute_rates(dressed, params, basis)
        bare = basis.index_of_label("gg100")
        k = int(np.argmax(np.abs(dressed.transform[bare, :])))  # dressed slot of gg100
        omega = dressed.energies[k] - dressed.energies[0]
        nbar = thermal_occupation(omega, params.temps[0])
        assert rates.gamma_down[k] == pytest.approx(0.02 * (nbar + 1), rel=1e-12)
        assert rates.gamma_up[k] == pytest.approx(0.02 * nbar, rel=1e-12)

    def test_detailed_balance_equal_baths(self):
        temp = 0.8
        params = NetworkParams(g1=0.1, g2=0.1, J=0.05, gamma=(0.01, 0.02, 0.03),
                               temps=(temp,) * 3)
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        for k in range(1, dressed.dim):
            if rates.gamma_down[k] == 0:
                continue
            ratio = rates.gamma_up[k] / rates.gamma_down[k]
            omega = dressed.energies[k] - dressed.energies[0]
            assert abs(ratio - np.exp(-omega / temp)) <= 1e-12

    def test_photon_content_weights(self):
        # weights sum over channels to the total photon number expectation,
        # so two-excitation dressed states are damped as well
        params = NetworkParams(omega_0=0.9, g1=0.08, g2=0.08, J=0.08, gamma=(0.008,) * 3)
        basis, dressed = frame(params, n_max=2)
        weights = transition_weights(dressed, basis)
        for k in range(1, dressed.dim):
            col = dressed.transform[:, k]
            photons = sum(
                (s.c1 + s.c2 + s.f) * abs(col[i]) ** 2 for i, s in enumerate(basis.states)
            )
            assert weights[:, k].sum() == pytest.approx(photons, abs=1e-12)
        rates = compute_rates(dressed, params, basis)
        upper = dressed.sectors >= 2
        assert rates.gamma_down[upper].min() > 0.0


class TestRHS:
    @pytest.fixture(scope="class")
    def setup(self):
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05,
                               gamma=(0.01, 0.01, 0.01))
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        return basis, dressed, rates

    def test_ground_state_stationary(self, setup):
        _, dressed, rates = setup
        rho = np.zeros((6, 6), dtype=complex)
        rho[0, 0] = 1.0
        assert np.abs(rhs(rho, dressed, rates)).max() <= 1e-15

    def test_excited_population_decay(self, setup):
        _, dressed, rates = setup
        for k in range(1, 6):
            rho = np.zeros((6, 6), dtype=complex)
            rho[k, k] = 1.0
            deriv = rhs(rho, dressed, rates)
            assert deriv[k, k] == pytest.approx(-rates.gamma_down[k], rel=1e-12)
            assert deriv[0, 0] == pytest.approx(rates.gamma_down[k], rel=1e-12)

    def test_coherence_term_by_term(self, setup):
        # rho_k0 decays at (gamma_down_k + sum gamma_up)/2 and rotates at
        # the transition frequency.
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05,
                               gamma=(0.01,) * 3, temps=(0.9, 0.9, 0.9))
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        k = 3
        rho = np.zeros((6, 6), dtype=complex)
        rho[k, 0] = 0.5
        rho[0, k] = 0.5
        deriv = rhs(rho, dressed, rates)
        omega = dressed.energies[k] - dressed.energies[0]
        expected = (-1j * (omega - 0.0) - (rates.gamma_down[k] + rates.gamma_up.sum()) / 2) * 0.5
        assert deriv[k, 0] == pytest.approx(expected, rel=1e-12)

    def test_traceless_derivative(self, setup):
        _, dressed, rates = setup
        rng = np.random.default_rng(31)
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        rho = a @ a.conj().T
        rho /= np.trace(rho)
        assert abs(np.trace(rhs(rho, dressed, rates))) <= 1e-12

    def test_dimension_mismatch(self, setup):
        _, dressed, rates = setup
        with pytest.raises(DimensionError):
            rhs(np.eye(4) / 4, dressed, rates)

    def test_kms_gibbs_state_stationary(self):
        temp = 1.1
        params = NetworkParams(g1=0.1, g2=0.1, J=0.05, gamma=(0.01, 0.02, 0.03),
                               temps=(temp,) * 3)
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        pops = np.exp(-(dressed.energies - dressed.energies[0]) / temp)
        pops /= pops.sum()
        rho = np.diag(pops).astype(complex)
        assert np.abs(rhs(rho, dressed, rates)).max() <= 1e-12


class TestIntegrate:
    def test_zero_rates_pure_phase(self):
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05)
        basis, dressed = frame(params)
        rates = RateTable(
            omega_down=dressed.energies - dressed.energies[0],
            gamma_down=np.zeros(6),
            gamma_up=np.zeros(6),
        )
        rho0 = prepare_bare_state("eg000", basis, dressed)
        t_grid = np.linspace(0.0, 30.0, 7)
        traj = integrate(rho0, dressed, rates, t_grid, basis=basis)
        omegas = dressed.energies
        for t, state in zip(traj.times, traj.states):
            phases = np.exp(-1j * (omegas[:, None] - omegas[None, :]) * t)
            expected = rho0 * phases
            assert np.abs(state - expected).max() <= 1e-9
        assert np.abs(np.real(np.diag(traj.states[-1])) - np.real(np.diag(rho0))).max() <= 1e-9

    def test_zero_temperature_ground_state_attractor(self):
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05, gamma=(0.01,) * 3)
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        rho0 = prepare_bare_state("eg000", basis, dressed)
        t_end = 20.0 / rates.gamma_down[1:].min()
        traj = integrate(rho0, dressed, rates, np.array([0.0, t_end]), basis=basis)
        fidelity = float(np.real(traj.states[-1][0, 0]))
        assert fidelity > 1 - 1e-6

    def test_equal_bath_steady_populations(self):
        temp = 1.0
        params = NetworkParams(g1=0.1, g2=0.1, J=0.05, gamma=(0.02,) * 3,
                               temps=(temp,) * 3)
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        rho0 = prepare_bare_state("gg000", basis, dressed)
        t_end = 40.0 / rates.gamma_down[1:].min()
        traj = integrate(rho0, dressed, rates, np.array([0.0, t_end]), basis=basis)
        pops = np.real(np.diag(traj.states[-1]))
        for k in range(1, 6):
            expected = np.exp(-(dressed.energies[k] - dressed.energies[0]) / temp)
            assert abs(pops[k] / pops[0] - expected) <= 1e-3

    def test_linearity(self):
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05, gamma=(0.01,) * 3)
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        rho_a = prepare_bare_state("eg000", basis, dressed)
        rho_b = prepare_bare_state("gg100", basis, dressed)
        alpha = 0.3
        t_grid = np.linspace(0.0, 50.0, 6)
        mix = integrate(alpha * rho_a + (1 - alpha) * rho_b, dressed, rates, t_grid)
        sep_a = integrate(rho_a, dressed, rates, t_grid)
        sep_b = integrate(rho_b, dressed, rates, t_grid)
        for m, a, b in zip(mix.states, sep_a.states, sep_b.states):
            assert np.abs(m - (alpha * a + (1 - alpha) * b)).max() <= 1e-9

    def test_matches_matrix_exponential(self):
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05,
                               gamma=(0.01,) * 3, temps=(0.0, 0.0, 0.8))
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        rho0 = prepare_bare_state("eg000", basis, dressed)
        t_grid = np.linspace(0.0, 40.0, 9)
        fine = integrate(rho0, dressed, rates, t_grid, basis=basis, step_scale=0.05)
        exact = evolve_exact(rho0, dressed, rates, t_grid, basis=basis)
        for a, b in zip(fine.states, exact.states):
            assert np.abs(a - b).max() <= 1e-8

    def test_trace_and_positivity_audit(self):
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05, gamma=(0.01,) * 3)
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        rho0 = prepare_bare_state("eg000", basis, dressed)
        traj = integrate(rho0, dressed, rates, np.linspace(0.0, 100.0, 40), basis=basis)
        assert traj.max_trace_drift() <= 1e-8
        assert traj.min_eigenvalue() >= -1e-7

    def test_trace_blowup_raises(self):
        # push the population subsystem outside the RK4 stability region so
        # the monitored trace actually drifts
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05)
        basis, dressed = frame(params)
        rates = RateTable(
            omega_down=dressed.energies - dressed.energies[0],
            gamma_down=np.array([0.0, 30.0, 30.0, 30.0, 30.0, 30.0]),
            gamma_up=np.zeros(6),
        )
        rho0 = prepare_bare_state("eg000", basis, dressed)
        with pytest.raises(IntegrationAccuracyError):
            integrate(rho0, dressed, rates, np.array([0.0, 40.0]), step_scale=3000.0)

    def test_bad_grid_rejected(self):
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.05)
        basis, dressed = frame(params)
        rates = RateTable(np.zeros(6), np.zeros(6), np.zeros(6))
        rho0 = prepare_bare_state("eg000", basis, dressed)
        with pytest.raises(ValidationError):
            integrate(rho0, dressed, rates, np.array([1.0, 0.5]))


class TestCorrelationTrajectory:
    def test_bd_point_at_t0(self):
        params = NetworkParams(omega_0=0.9, g1=0.08, g2=0.08, J=0.08, gamma=(0.008,) * 3)
        basis, dressed = frame(params, n_max=2)
        rates = compute_rates(dressed, params, basis)
        rho0 = prepare_bell_diagonal((1.0, -0.9, 0.9), basis, dressed)
        traj = integrate(rho0, dressed, rates, np.array([0.0]), basis=basis)
        series = correlation_trajectory(traj, dressed, basis)
        point = series.points[0]
        assert point.concurrence == pytest.approx(0.9, abs=1e-9)
        assert point.p_vac == pytest.approx(1.0, abs=1e-12)
        assert point.cc > 0 and point.qd > 0
        expected_info = 2.0 - (-(0.95 * np.log2(0.95) + 0.05 * np.log2(0.05)))
        assert point.mutual_info == pytest.approx(expected_info, abs=1e-9)

    def test_projected_states_stay_x_shaped(self):
        from cqednet.correlations import x_leakage
        from cqednet.network import reduce_to_atoms

        params = NetworkParams(omega_0=0.9, g1=0.08, g2=0.08, J=0.08, gamma=(0.008,) * 3)
        basis, dressed = frame(params, n_max=2)
        rates = compute_rates(dressed, params, basis)
        rho0 = prepare_bell_diagonal((1.0, -0.9, 0.9), basis, dressed)
        traj = integrate(rho0, dressed, rates, np.linspace(0.0, 120.0, 13), basis=basis)
        for state in traj.states:
            rho4, _ = reduce_to_atoms(state, dressed, basis)
            assert x_leakage(rho4) <= 1e-8

    def test_single_excitation_correlations_die_out(self):
        # transient correlations generated from a separable one-excitation
        # state decay to zero once the ground state wins
        params = NetworkParams(omega_0=0.9, g1=0.1, g2=0.1, J=0.1, gamma=(0.01,) * 3)
        basis, dressed = frame(params)
        rates = compute_rates(dressed, params, basis)
        rho0 = prepare_bare_state("eg000", basis, dressed)
        t_end = 25.0 / rates.gamma_down[1:].min()
        traj = integrate(rho0, dressed, rates, np.array([0.0, 30.0, t_end]), basis=basis)
        series = correlation_trajectory(traj, dressed, basis)
        assert series.points[1].concurrence > 0.01  # generated on the way
        last = series.points[-1]
        assert last.concurrence <= 1e-5
        assert last.qd <= 1e-4
        assert last.cc <= 1e-4
