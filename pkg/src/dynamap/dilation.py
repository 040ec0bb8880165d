"""Unitary dilation of CPTP maps from their Kraus operators.

A map given by complete Kraus operators ``{M_i}`` acts as conjugation by a
unitary on system (x) ancilla followed by tracing out the ancilla:

    map(rho) = Tr_anc[ U (rho (x) |0><0|) U^dag ]

The columns of ``U`` addressed by the ancilla reference index are the
stacked isometry ``x -> sum_i (M_i x) (x) |i>``; completeness makes those
columns orthonormal and the remaining columns are filled by a deterministic
Gram-Schmidt sweep over the standard basis, so dilations are reproducible
bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotCompleteKraus
from .generators import random_density_matrix
from .linalg import DEFAULT_TOL, ToleranceConfig, frob, partial_trace
from .maps import KrausSet, LinearMap, apply_map


@dataclass(frozen=True, eq=False)
class UnitaryDilation:
    system_dim: int
    ancilla_dim: int
    unitary: np.ndarray
    ancilla_ref_index: int

    def evolve(self, rho) -> np.ndarray:
        """Apply the dilation to a system state: extend, conjugate, trace."""
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.system_dim, self.system_dim):
            raise DimensionMismatch(
                f"state shape {rho.shape} does not match system dim {self.system_dim}"
            )
        anc = np.zeros((self.ancilla_dim, self.ancilla_dim), dtype=complex)
        anc[self.ancilla_ref_index, self.ancilla_ref_index] = 1.0
        joint = np.kron(rho, anc)
        evolved = self.unitary @ joint @ self.unitary.conj().T
        return partial_trace(evolved, (self.system_dim, self.ancilla_dim), "b")


@dataclass(frozen=True)
class RoundTripReport:
    max_residual: float
    passed: bool
    samples: int
    seed: int


def kraus_to_unitary(kraus: KrausSet, tol: ToleranceConfig = DEFAULT_TOL) -> UnitaryDilation:
    """Complete a stacked Kraus isometry to a unitary on system (x) ancilla.

    Weights are folded into the operators first.  Raises
    :class:`NotCompleteKraus` when ``sum_i w_i M_i^dag M_i`` is not the
    identity within tolerance; callers must not dilate maps that are not
    completely positive and trace preserving.
    """
    ops = kraus.folded_operators()
    if not ops:
        raise NotCompleteKraus("empty Kraus set")
    n = kraus.dim
    d = len(ops)
    completeness = sum(op.conj().T @ op for op in ops)
    res = frob(completeness - np.eye(n))
    if res > tol.residual_abs:
        raise NotCompleteKraus(f"completeness residual {res:.3e} exceeds tolerance")

    total = n * d
    # joint index (system row r, ancilla row i) -> r * d + i; ref ancilla 0
    isometry = np.zeros((total, n), dtype=complex)
    for i, op in enumerate(ops):
        isometry[i::d, :] = op

    unitary = np.zeros((total, total), dtype=complex)
    for x in range(n):
        unitary[:, x * d] = isometry[:, x]
    remaining = [c for c in range(total) if c % d != 0]

    basis = [unitary[:, x * d] for x in range(n)]

    def orthonormalized(cand):
        for _ in range(2):  # re-orthogonalize for unitarity at 1e-15
            for b in basis:
                cand = cand - b * (b.conj() @ cand)
        norm = np.linalg.norm(cand)
        return cand / norm if norm > 1e-8 else None

    pos = 0
    for k in range(total):
        if pos == len(remaining):
            break
        cand = orthonormalized(np.eye(total, dtype=complex)[:, k])
        if cand is not None:
            unitary[:, remaining[pos]] = cand
            basis.append(cand)
            pos += 1
    # fixed-seed fallback in case the standard-basis sweep was insufficient
    rng = np.random.default_rng(0)
    attempts = 0
    while pos < len(remaining) and attempts < 100 * total:
        raw = rng.standard_normal(total) + 1j * rng.standard_normal(total)
        cand = orthonormalized(raw / np.linalg.norm(raw))
        if cand is not None:
            unitary[:, remaining[pos]] = cand
            basis.append(cand)
            pos += 1
        attempts += 1
    if pos != len(remaining):
        raise RuntimeError("orthonormal completion failed")

    return UnitaryDilation(system_dim=n, ancilla_dim=d, unitary=unitary, ancilla_ref_index=0)


def unitarity_residual(dilation: UnitaryDilation) -> float:
    u = dilation.unitary
    return frob(u.conj().T @ u - np.eye(u.shape[0]))


def dilation_round_trip(
    dilation: UnitaryDilation,
    m: LinearMap,
    samples: int = 20,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> RoundTripReport:
    """Compare the dilation against direct application on random states."""
    if m.dim != dilation.system_dim:
        raise DimensionMismatch(
            f"map dim {m.dim} does not match dilation system dim {dilation.system_dim}"
        )
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        rho = random_density_matrix(m.dim, rng)
        worst = max(worst, frob(dilation.evolve(rho) - apply_map(m, rho)))
    return RoundTripReport(
        max_residual=worst, passed=worst <= tol.residual_abs, samples=samples, seed=seed
    )
