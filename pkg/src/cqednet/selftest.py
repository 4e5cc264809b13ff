"""Fast invariant suites behind ``cqednet selftest``.

Each check prints one PASS/FAIL line; the exit code is 0 only if all
pass.  These are smoke-level guards, not the full pytest suite.
"""

from __future__ import annotations

import numpy as np

from . import chains, correlations, mme, network, qstate


def _check_basis_dimensions():
    return (
        network.enumerate_basis(2).dim == 19
        and network.enumerate_basis(6).dim == 231
    )


def _check_partial_trace(rng):
    for _ in range(20):
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        rho = a @ a.conj().T
        rho /= np.trace(rho)
        once = qstate.partial_trace(rho, (2, 2, 2), [0])
        steps = qstate.partial_trace(
            qstate.partial_trace(rho, (2, 2, 2), [0, 1]), (2, 2), [0]
        )
        if np.abs(once - steps).max() > 1e-12:
            return False
    return True


def _check_kms_stationarity():
    temp = 0.9
    params = network.NetworkParams(
        g1=0.1, g2=0.1, J=0.05, gamma=(0.01, 0.02, 0.03), temps=(temp,) * 3
    )
    basis = network.enumerate_basis(1)
    dressed = network.dressed_states(network.build_hamiltonian(params, basis), basis)
    rates = mme.compute_rates(dressed, params, basis)
    pops = np.exp(-(dressed.energies - dressed.energies[0]) / temp)
    pops /= pops.sum()
    deriv = mme.rhs(np.diag(pops).astype(complex), dressed, rates)
    return np.abs(deriv).max() <= 1e-12


def _check_detailed_balance():
    temp = 1.3
    params = network.NetworkParams(
        g1=0.1, g2=0.1, J=0.05, gamma=(0.01, 0.02, 0.03), temps=(temp,) * 3
    )
    basis = network.enumerate_basis(2)
    dressed = network.dressed_states(network.build_hamiltonian(params, basis), basis)
    rates = mme.compute_rates(dressed, params, basis)
    for k in range(1, dressed.dim):
        if rates.gamma_down[k] == 0:
            continue
        omega = dressed.energies[k] - dressed.energies[0]
        if abs(rates.gamma_up[k] / rates.gamma_down[k] - np.exp(-omega / temp)) > 1e-12:
            return False
    return True


def _check_decomposition_identity(rng):
    for _ in range(20):
        pops = rng.dirichlet(np.ones(4))
        z1 = rng.uniform(0, 1) * np.sqrt(pops[0] * pops[3])
        z2 = rng.uniform(0, 1) * np.sqrt(pops[1] * pops[2])
        rho = np.diag(pops).astype(complex)
        rho[0, 3] = rho[3, 0] = z1
        rho[1, 2] = rho[2, 1] = z2
        info = correlations.mutual_information(rho)
        cc, _ = correlations.classical_correlations(rho)
        qd = correlations.quantum_discord(rho)
        if abs(info - (cc + qd)) > 2e-6 or qd < -1e-9:
            return False
    return True


def _check_chain_mirror():
    h = chains.two_chain_hamiltonian()
    times = np.linspace(0.0, 10.0, 11)
    psi1 = np.zeros(chains.DIM, dtype=complex)
    psi1[chains.basis_index("EGGGGG")] = 1.0
    psi3 = np.zeros(chains.DIM, dtype=complex)
    psi3[chains.basis_index("GGGGEG")] = 1.0
    t1 = chains.evolve(psi1, h, 0.0, times)
    t3 = chains.evolve(psi3, h, 0.0, times)
    for s1, s3 in zip(t1.states, t3.states):
        if abs(chains.site_population(s1, "1") - chains.site_population(s3, "3")) > 1e-10:
            return False
    return True


CHECKS = (
    ("basis dimensions 19/231", lambda rng: _check_basis_dimensions()),
    ("partial trace composition", _check_partial_trace),
    ("KMS Gibbs stationarity", lambda rng: _check_kms_stationarity()),
    ("detailed balance", lambda rng: _check_detailed_balance()),
    ("mutual information = CC + QD", _check_decomposition_identity),
    ("chain mirror symmetry", lambda rng: _check_chain_mirror()),
)


def run(seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    failures = 0
    for name, check in CHECKS:
        ok = bool(check(rng))
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 3
