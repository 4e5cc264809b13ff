"""Dense complex-matrix quantum state algebra.

All operators are plain ``numpy.ndarray`` of complex dtype.  Density
operators are Hermitian, unit-trace and positive semidefinite within a
tolerance (default ``1e-9``); :func:`check_density_operator` enforces the
contract at module boundaries.  Entropies are in bits (base-2 logarithm).
"""

from __future__ import annotations

from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolationError, DimensionError

DEFAULT_TOL = 1e-9

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def tensor_product(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor major."""
    if not ops:
        raise DimensionError("tensor_product needs at least one operator")
    return reduce(np.kron, [np.asarray(op, dtype=complex) for op in ops])


def ket(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def density(psi: np.ndarray) -> np.ndarray:
    """|psi><psi| for a (not necessarily normalized) state vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    scale = max(1.0, float(np.abs(m).max()))
    return bool(np.abs(m - dagger(m)).max() <= tol * scale)


def check_density_operator(rho: np.ndarray, tol: float = DEFAULT_TOL) -> None:
    """Raise ContractViolationError unless rho is a valid density operator."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density operator must be square, got {rho.shape}")
    if not np.isfinite(rho).all():
        raise ContractViolationError("density operator has non-finite entries")
    if not is_hermitian(rho, tol):
        raise ContractViolationError("density operator is not Hermitian within tolerance")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > max(tol, 1e3 * np.finfo(float).eps * rho.shape[0]):
        raise ContractViolationError(f"density operator trace {tr:.3e} != 1")
    evals = np.linalg.eigvalsh((rho + dagger(rho)) / 2)
    if evals.min() < -tol:
        raise ContractViolationError(
            f"density operator has eigenvalue {evals.min():.3e} below -tolerance"
        )


def _layout_check(rho: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionError(
            f"layout {dims} implies dimension {total}, operator is {rho.shape}"
        )
    return dims


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced operator over the kept subsystems (original relative order).

    ``dims`` lists the local dimensions in tensor order; ``keep`` is the set
    of subsystem indices to retain.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = _layout_check(rho, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("keep must be a non-empty subset of subsystems")
    if keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"keep indices {keep} out of range for {n} subsystems")

    reshaped = rho.reshape(dims + dims)
    # Trace out the complement pairwise, highest index first so axis numbers
    # of the remaining subsystems stay valid.
    traced = reshaped
    removed = 0
    for axis in range(n - 1, -1, -1):
        if axis in keep:
            continue
        m = n - removed
        traced = np.trace(traced, axis1=axis, axis2=axis + m)
        removed += 1
    d_keep = int(np.prod([dims[k] for k in keep]))
    return traced.reshape(d_keep, d_keep)


def eigen_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL):
    """Ascending eigenvalues and orthonormal eigenvector columns of a
    Hermitian matrix.  Rejects non-Hermitian input."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ContractViolationError("eigen_hermitian requires a Hermitian matrix")
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return w, v


def von_neumann_entropy(rho: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """S(rho) = -tr[rho log2 rho] with the 0*log(0) = 0 convention.

    Eigenvalues in [-tol, 0) are clamped to zero; anything more negative is
    a contract violation.
    """
    w = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    if w.min() < -tol:
        raise ContractViolationError(
            f"entropy of an operator with eigenvalue {w.min():.3e} below -tolerance"
        )
    w = np.clip(w, 0.0, None)
    w = w[w > 0.0]
    return float(-(w * np.log2(w)).sum())


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))
