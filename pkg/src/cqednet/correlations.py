"""Two-qubit correlation measures and sudden-change detection.

Qubit A is the first tensor factor, B the second, computational order
|gg>, |ge>, |eg>, |ee|.  Every measure here is invariant under local
unitaries; X-shaped states are therefore reduced to a normal form with
real non-negative anti-diagonal coherences before the fast evaluation
paths run.  The measurement maximization behind the classical
correlations follows a coarse (theta, phi) grid plus simplex refinement;
a one-dimensional variant of the same search is used for X states, whose
optimum lies in the x-z plane of the normal form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize

from . import qstate
from .errors import ValidationError

X_LEAKAGE_TOL = 1e-8

_X_OFF_MASK = np.ones((4, 4), dtype=bool)
for _i in range(4):
    _X_OFF_MASK[_i, _i] = False
    _X_OFF_MASK[_i, 3 - _i] = False

_SYY = np.kron(qstate.SIGMA_Y, qstate.SIGMA_Y)


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


def _plogp(p: np.ndarray) -> np.ndarray:
    return np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)


# ---------------------------------------------------------------------------
# Bell-diagonal states


def bd_eigenvalues(c: Sequence[float]) -> np.ndarray:
    c1, c2, c3 = (float(x) for x in c)
    return np.array(
        [
            (1 + c1 - c2 + c3) / 4,
            (1 - c1 + c2 + c3) / 4,
            (1 + c1 + c2 - c3) / 4,
            (1 - c1 - c2 - c3) / 4,
        ]
    )


def validate_bd_vector(c: Sequence[float], tol: float = 1e-12) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise ValidationError(f"Bell-diagonal vector needs 3 components, got {c.shape}")
    if np.abs(c).max() > 1 + tol:
        raise ValidationError(f"Bell-diagonal components must lie in [-1, 1], got {c}")
    evs = bd_eigenvalues(c)
    if evs.min() < -tol:
        raise ValidationError(
            f"coefficients {tuple(c)} give a negative eigenvalue {evs.min():.3e}"
        )
    return c


def bell_diagonal_matrix(c: Sequence[float]) -> np.ndarray:
    """(I@I + sum_i c_i sigma_i@sigma_i) / 4 as an explicit 4x4 matrix."""
    c = validate_bd_vector(c)
    rho = np.eye(4, dtype=complex)
    for ci, sigma in zip(c, qstate.PAULI):
        rho += ci * np.kron(sigma, sigma)
    return rho / 4


def nearest_bell_diagonal(c: Sequence[float], max_defect: float = 0.05) -> np.ndarray:
    """Project a c-vector onto the physical Bell-diagonal simplex.

    Negative Bell-basis eigenvalues up to ``max_defect`` are clamped to
    zero and the spectrum renormalized; already-valid vectors pass through
    unchanged.  Lets slightly unphysical literature parameter sets run.
    """
    c = np.asarray(c, dtype=float)
    evs = bd_eigenvalues(c)
    if evs.min() >= -1e-12:
        return c
    if evs.min() < -max_defect:
        raise ValidationError(
            f"coefficients {tuple(c)} are too far outside the Bell-diagonal "
            f"simplex (eigenvalue {evs.min():.3e})"
        )
    lam = np.clip(evs, 0.0, None)
    lam /= lam.sum()
    l1, l2, l3, l4 = lam
    return np.array([l1 - l2 + l3 - l4, -l1 + l2 + l3 - l4, l1 + l2 - l3 - l4])


def bd_concurrence(c: Sequence[float]) -> float:
    c1, c2, c3 = validate_bd_vector(c)
    return max(abs(c1 - c2) - 1 + c3, abs(c1 + c2) - 1 - c3, 0.0) / 2


# ---------------------------------------------------------------------------
# Entanglement measures


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence from the square roots of eigenvalues of
    rho (sy@sy) rho* (sy@sy), in decreasing order.

    The square roots are evaluated as the singular values of
    sqrt(rho) (sy@sy) sqrt(rho)*, which carries the same spectrum without
    squaring away half the floating-point precision near zero.
    """
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    w = np.clip(w, 0.0, None)
    w[w < 64 * np.finfo(float).eps * w.max()] = 0.0  # rank-deficiency noise
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    m = sqrt_rho @ _SYY @ sqrt_rho.conj()
    lam = np.linalg.svd(m, compute_uv=False)
    return float(min(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0), 1.0))


def eof_from_concurrence(c: float) -> float:
    return binary_entropy(0.5 + 0.5 * np.sqrt(max(1.0 - c * c, 0.0)))


def eof(rho: np.ndarray) -> float:
    return eof_from_concurrence(concurrence(rho))


def geometric_entanglement(state, normalized: bool = True) -> float:
    """2 - sqrt(2) (1 + sqrt(1 - C^2))^(1/2), optionally divided by the
    maximum 2 - sqrt(2).  Accepts a 4x4 state or a Bell-diagonal vector."""
    state = np.asarray(state)
    if state.shape == (3,):
        c = bd_concurrence(state)
    else:
        c = concurrence(state)
    ge = 2.0 - np.sqrt(2.0) * np.sqrt(1.0 + np.sqrt(max(1.0 - c * c, 0.0)))
    ge = max(ge, 0.0)
    return float(ge / (2.0 - np.sqrt(2.0))) if normalized else float(ge)


# ---------------------------------------------------------------------------
# Entropic correlations


def mutual_information(rho: np.ndarray, tol: float = 1e-7) -> float:
    rho = np.asarray(rho, dtype=complex)
    s_a = qstate.von_neumann_entropy(qstate.partial_trace(rho, (2, 2), [0]), tol)
    s_b = qstate.von_neumann_entropy(qstate.partial_trace(rho, (2, 2), [1]), tol)
    return s_a + s_b - qstate.von_neumann_entropy(rho, tol)


def _conditional_entropy(rho: np.ndarray, thetas, phis, side: str) -> np.ndarray:
    """Post-measurement conditional entropy for projective measurements
    along (theta, phi); broadcasts over equal-length angle arrays."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    nx = np.sin(thetas) * np.cos(phis)
    ny = np.sin(thetas) * np.sin(phis)
    nz = np.cos(thetas)
    # B_+ = (I + n.sigma)/2 for every grid point, shape (G, 2, 2)
    proj = 0.5 * np.stack(
        [
            np.stack([1 + nz, nx - 1j * ny], axis=-1),
            np.stack([nx + 1j * ny, 1 - nz], axis=-1),
        ],
        axis=-2,
    )
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    total = np.zeros(thetas.shape, dtype=float)
    for sign in (1.0, -1.0):
        p_op = proj if sign > 0 else np.eye(2) - proj
        if side == "B":
            m = np.einsum("abcd,gdb->gac", r, p_op)
        elif side == "A":
            m = np.einsum("abcd,gca->gbd", r, p_op)
        else:
            raise ValidationError(f"measured side must be 'A' or 'B', got {side!r}")
        p = np.real(m[:, 0, 0] + m[:, 1, 1])
        det = np.real(m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0])
        disc = np.sqrt(np.clip(p * p - 4 * det, 0.0, None))
        e_hi = np.clip((p + disc) / 2, 0.0, None)
        e_lo = np.clip((p - disc) / 2, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            # p_k S(rho_k) = -sum_i e_i log2(e_i / p); zero-probability
            # branches contribute nothing (limit convention).
            contrib = -(_plogp(e_hi) + _plogp(e_lo)) + _plogp(p)
        total += np.where(p > 1e-15, contrib, 0.0)
    return total


def x_leakage(rho: np.ndarray) -> float:
    """Largest magnitude among entries outside the X pattern."""
    return float(np.abs(np.asarray(rho)[_X_OFF_MASK]).max())


def x_normal_form(rho: np.ndarray) -> np.ndarray:
    """Local-unitary normal form of an X state: real populations, real
    non-negative anti-diagonal coherences, off-X entries dropped."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    out[np.diag_indices(4)] = np.real(np.diag(rho))
    z1 = abs(rho[0, 3])
    z2 = abs(rho[1, 2])
    out[0, 3] = out[3, 0] = z1
    out[1, 2] = out[2, 1] = z2
    return out


def bd_vector(rho: np.ndarray) -> np.ndarray:
    """Pauli correlation coefficients tr[rho sigma_i@sigma_i] of the local
    normal form; exact when the state is Bell diagonal."""
    nf = x_normal_form(np.asarray(rho, dtype=complex))
    z1 = float(np.real(nf[0, 3]))
    z2 = float(np.real(nf[1, 2]))
    pops = np.real(np.diag(nf))
    return np.array(
        [2 * (z1 + z2), 2 * (z2 - z1), pops[0] - pops[1] - pops[2] + pops[3]]
    )


def _marginal_entropy(rho: np.ndarray, side: str, tol: float) -> float:
    keep = [0] if side == "B" else [1]
    return qstate.von_neumann_entropy(qstate.partial_trace(rho, (2, 2), keep), tol)


def classical_correlations_grid(
    rho: np.ndarray,
    side: str = "B",
    n_theta: int = 128,
    n_phi: int = 64,
    refine: bool = True,
    tol: float = 1e-7,
):
    """Measurement maximization by dense (theta, phi) grid plus simplex
    refinement; the reference path every fast evaluation is checked against."""
    rho = np.asarray(rho, dtype=complex)
    thetas = np.linspace(0.0, np.pi / 2, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    cond = _conditional_entropy(rho, tt.ravel(), pp.ravel(), side)
    best = int(np.argmin(cond))
    angles = np.array([tt.ravel()[best], pp.ravel()[best]])
    best_val = cond[best]
    if refine:
        res = optimize.minimize(
            lambda a: _conditional_entropy(rho, [a[0]], [a[1]], side)[0],
            angles,
            method="Nelder-Mead",
            options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 400},
        )
        if res.fun < best_val:
            best_val = res.fun
            angles = res.x
    cc = _marginal_entropy(rho, side, tol) - best_val
    return max(float(cc), 0.0), (float(angles[0]), float(angles[1]))


def _x_fast_conditional_minimum(nf: np.ndarray, side: str) -> tuple[float, float]:
    """Minimum conditional entropy for an X normal form; the optimum sits
    in the x-z plane, so a 1-D search over theta suffices."""
    thetas = np.linspace(0.0, np.pi / 2, 65)
    cond = _conditional_entropy(nf, thetas, np.zeros_like(thetas), side)
    k = int(np.argmin(cond))
    lo = thetas[max(k - 1, 0)]
    hi = thetas[min(k + 1, thetas.size - 1)]
    res = optimize.minimize_scalar(
        lambda t: _conditional_entropy(nf, [t], [0.0], side)[0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if res.fun <= cond[k]:
        return float(res.fun), float(res.x)
    return float(cond[k]), float(thetas[k])


def classical_correlations(
    rho: np.ndarray,
    side: str = "B",
    x_tol: float = X_LEAKAGE_TOL,
    tol: float = 1e-7,
):
    """Henderson-Vedral classical correlations, maximized over one-qubit
    von Neumann measurements on ``side``.

    X states (off-X leakage below ``x_tol``) take the one-dimensional fast
    path on their local normal form; anything else falls back to the full
    grid search with a warning.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError(f"classical correlations need a 4x4 state, got {rho.shape}")
    if x_leakage(rho) < x_tol:
        nf = x_normal_form(rho)
        cond, theta = _x_fast_conditional_minimum(nf, side)
        cc = _marginal_entropy(nf, side, tol) - cond
        return max(float(cc), 0.0), (theta, 0.0)
    warnings.warn(
        f"state leaks {x_leakage(rho):.2e} outside the X pattern; "
        "using the general grid search",
        stacklevel=2,
    )
    return classical_correlations_grid(rho, side=side, tol=tol)


def quantum_discord(rho: np.ndarray, side: str = "B", tol: float = 1e-7) -> float:
    cc, _ = classical_correlations(rho, side=side, tol=tol)
    return mutual_information(rho, tol) - cc


# ---------------------------------------------------------------------------
# Bures geometric discord


_BURES_NORM = 1.0 / (1.0 - 1.0 / np.sqrt(2.0))


def bures_gqd_bd(c: Sequence[float], tol: float = 1e-12) -> float:
    """Normalized Bures geometric discord of a Bell-diagonal state."""
    c1, c2, c3 = validate_bd_vector(c, tol)
    pairs = (
        ((1 + c1) ** 2 - (c2 - c3) ** 2, (1 - c1) ** 2 - (c2 + c3) ** 2),
        ((1 + c2) ** 2 - (c1 - c3) ** 2, (1 - c2) ** 2 - (c1 + c3) ** 2),
        ((1 + c3) ** 2 - (c1 - c2) ** 2, (1 - c3) ** 2 - (c1 + c2) ** 2),
    )
    branches = []
    for r1, r2 in pairs:
        if r1 < -tol or r2 < -tol:
            raise ValidationError(
                f"negative radicand for Bell-diagonal vector {tuple((c1, c2, c3))}"
            )
        branches.append((np.sqrt(max(r1, 0.0)) + np.sqrt(max(r2, 0.0))) / 2)
    b_max = max(branches)
    value = _BURES_NORM * (1.0 - np.sqrt((1.0 + b_max) / 2.0))
    return float(min(max(value, 0.0), 1.0))


# ---------------------------------------------------------------------------
# Trajectory records


@dataclass
class CorrelationPoint:
    t: float
    mutual_info: float
    cc: float
    qd: float
    eof: float
    concurrence: float
    gqd_bures: float
    ge_norm: float
    p_vac: float


MEASURE_FIELDS = ("mutual_info", "cc", "qd", "eof", "concurrence", "gqd_bures", "ge_norm")


@dataclass
class CorrelationSeries:
    points: list[CorrelationPoint] = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([p.t for p in self.points])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])

    def append(self, point: CorrelationPoint) -> None:
        self.points.append(point)


def measure_point(
    rho4: np.ndarray,
    t: float = 0.0,
    p_vac: float = 1.0,
    side: str = "B",
    x_tol: float = X_LEAKAGE_TOL,
    tol: float = 1e-7,
) -> CorrelationPoint:
    """Every correlation measure of a (projected) two-qubit state."""
    rho4 = np.asarray(rho4, dtype=complex)
    info = mutual_information(rho4, tol)
    cc, _ = classical_correlations(rho4, side=side, x_tol=x_tol, tol=tol)
    conc = concurrence(rho4)
    gqd = bures_gqd_bd(bd_vector(rho4)) if x_leakage(rho4) < x_tol else np.nan
    return CorrelationPoint(
        t=float(t),
        mutual_info=float(info),
        cc=float(cc),
        qd=float(info - cc),
        eof=eof_from_concurrence(conc),
        concurrence=conc,
        gqd_bures=float(gqd),
        ge_norm=geometric_entanglement(rho4),
        p_vac=float(p_vac),
    )


# ---------------------------------------------------------------------------
# Sudden-change detection


@dataclass
class SuddenChangeReport:
    measure: str
    change_times: list[float]
    change_indices: list[int]

    @property
    def count(self) -> int:
        return len(self.change_times)


def detect_sudden_changes(
    times: np.ndarray,
    values: np.ndarray,
    measure: str = "",
    kappa: float = 20.0,
    slope_factor: float = 10.0,
    noise_window: int = 12,
    edge_guard: int = 3,
) -> SuddenChangeReport:
    """Flag slope discontinuities on a uniform time grid.

    A sample is a change candidate when its second difference exceeds
    ``kappa`` times the global median absolute second difference and
    ``slope_factor`` times the locally estimated noise; adjacent
    candidates collapse to the strongest sample of their cluster.  The
    first/last ``edge_guard`` interior samples are never flagged, since a
    one-sided slope at the window edge cannot witness a discontinuity.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size != values.size:
        raise ValidationError("times and values must have equal length")
    if times.size < 5:
        raise ValidationError("need at least 5 samples to detect slope changes")
    steps = np.diff(times)
    if steps.min() <= 0 or (steps.max() - steps.min()) > 1e-6 * steps.mean():
        raise ValidationError("sudden-change detection requires a uniform time grid")

    d2 = np.abs(values[2:] - 2 * values[1:-1] + values[:-2])
    floor = 1e-14 * max(1.0, float(np.abs(values).max()))
    global_med = max(float(np.median(d2)), floor)

    flagged = []
    for i in range(d2.size):
        if i < edge_guard or i >= d2.size - edge_guard:
            continue
        if d2[i] <= kappa * global_med:
            continue
        lo = max(i - noise_window, 0)
        hi = min(i + noise_window + 1, d2.size)
        neighbourhood = np.concatenate([d2[lo:max(i - 1, lo)], d2[min(i + 2, hi):hi]])
        local_noise = max(float(np.median(neighbourhood)), floor) if neighbourhood.size else floor
        if d2[i] > slope_factor * local_noise:
            flagged.append(i)

    change_indices: list[int] = []
    cluster: list[int] = []
    for i in flagged:
        if cluster and i - cluster[-1] > 2:
            best = max(cluster, key=lambda j: d2[j])
            change_indices.append(best + 1)
            cluster = []
        cluster.append(i)
    if cluster:
        best = max(cluster, key=lambda j: d2[j])
        change_indices.append(best + 1)

    return SuddenChangeReport(
        measure=measure,
        change_times=[float(times[i]) for i in change_indices],
        change_indices=change_indices,
    )
