"""Residual multipartite entanglement (tangle) and its mixed-state bounds.

For a pure global state the one-to-rest squared concurrence of a qubit is
2(1 - tr[rho_1^2]); the tangle subtracts every squared pairwise
concurrence with the reference site.  Mixed states bracket the tangle
between the pure-state expression (upper) and 2(tr[rho^2] - tr[rho_1^2])
minus the same pairwise sum (lower); both are trusted only while the
global state stays nearly pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import correlations, qstate
from .errors import ValidationError


@dataclass
class TangleReport:
    reference_site: int
    pairwise_c2: list[float]
    one_to_rest_c2: float
    tau_lower: float
    tau_upper: float
    total_purity: float
    marginal_purity: float
    validity: bool

    @property
    def tau(self) -> float:
        """Point value for (numerically) pure states."""
        return self.tau_upper


def _qubit_layout(rho: np.ndarray, dims: Sequence[int], site: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValidationError(f"layout {dims} does not match state of shape {rho.shape}")
    if not 0 <= site < len(dims):
        raise ValidationError(f"site {site} outside layout of {len(dims)} subsystems")
    if dims[site] != 2:
        raise ValidationError("tangle is defined for qubit subsystems")
    return dims


def one_to_rest_c2_pure(rho: np.ndarray, dims: Sequence[int], site: int,
                        purity_tol: float = 1e-9) -> float:
    """2(1 - tr[rho_site^2]) for a globally pure state."""
    rho = np.asarray(rho, dtype=complex)
    dims = _qubit_layout(rho, dims, site)
    impurity = 1.0 - qstate.purity(rho)
    if impurity > purity_tol:
        raise ValidationError(
            f"global state has purity defect {impurity:.3e}; "
            "the pure-state formula does not apply"
        )
    marginal = qstate.partial_trace(rho, dims, [site])
    return float(max(2.0 * (1.0 - qstate.purity(marginal)), 0.0))


def pairwise_c2(rho: np.ndarray, dims: Sequence[int], site: int) -> list[float]:
    """Squared concurrences between the reference site and every partner."""
    rho = np.asarray(rho, dtype=complex)
    dims = _qubit_layout(rho, dims, site)
    values = []
    for other in range(len(dims)):
        if other == site:
            continue
        if dims[other] != 2:
            raise ValidationError("pairwise concurrence needs qubit partners")
        keep = sorted((site, other))
        pair = qstate.partial_trace(rho, dims, keep)
        if keep[0] != site:
            # put the reference site first (swap is a relabelling only,
            # concurrence does not care, but keep the convention tidy)
            pair = pair.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
        values.append(correlations.concurrence(pair) ** 2)
    return values


def tangle_pure(rho: np.ndarray, dims: Sequence[int], site: int,
                purity_tol: float = 1e-9) -> float:
    """One-to-rest minus the pairwise squared concurrences, pure states."""
    c2_rest = one_to_rest_c2_pure(rho, dims, site, purity_tol)
    return float(c2_rest - sum(pairwise_c2(rho, dims, site)))


def tangle_bounds(rho: np.ndarray, dims: Sequence[int], site: int,
                  purity_threshold: float = 0.89) -> TangleReport:
    """Upper/lower tangle bounds for (possibly) mixed states.

    validity is False once the global purity falls below
    ``purity_threshold`` or the lower bound turns negative; the bracketing
    is unreliable there.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = _qubit_layout(rho, dims, site)
    marginal = qstate.partial_trace(rho, dims, [site])
    total_purity = qstate.purity(rho)
    marginal_purity = qstate.purity(marginal)
    pairs = pairwise_c2(rho, dims, site)
    pair_sum = sum(pairs)
    upper = 2.0 * (1.0 - marginal_purity) - pair_sum
    lower = 2.0 * (total_purity - marginal_purity) - pair_sum
    validity = bool(total_purity >= purity_threshold and lower >= 0.0)
    return TangleReport(
        reference_site=site,
        pairwise_c2=pairs,
        one_to_rest_c2=float(2.0 * (1.0 - marginal_purity)),
        tau_lower=float(lower),
        tau_upper=float(upper),
        total_purity=float(total_purity),
        marginal_purity=float(marginal_purity),
        validity=validity,
    )
