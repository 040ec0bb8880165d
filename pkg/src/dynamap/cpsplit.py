"""Splitting a trace-preserving map into completely positive parts.

Any Hermiticity-preserving map decomposes through the eigensystem of its
Choi matrix into a difference of two completely positive maps,

    map = positive_part - negative_part,

by grouping eigenvalues by sign.  Two Hermitian matrices summarize the
traces of the parts:

    Tr[positive_part(X)] = Tr[plus_functional @ X]
    Tr[negative_part(X)] = Tr[minus_functional @ X]

with closed forms ``plus_functional = sum_i lambda_i L_i^dag L_i`` over the
positive eigenpairs and likewise (absolute values) for the minus side.  For
a trace-preserving map ``plus_functional - minus_functional = 1``, which
forces ``plus_functional`` to be positive definite while
``minus_functional`` stays PSD and may be singular.

Vectors annihilated by ``minus_functional`` are annihilated by every
negative canonical operator, so the negative part destroys any input
supported on that kernel; consequently

    negative_part(rho) = negative_part(support_projector @ rho)

for every input.  ``verify_annihilation`` measures all of these statements
numerically and ``trace_functionals`` measures the trace identities.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianChoi, NotTracePreserving, SingularJ
from .linalg import DEFAULT_TOL, ToleranceConfig, frob, hermitian_eig
from .maps import (
    KrausSet,
    LinearMap,
    apply_map,
    check_hermiticity_preserving,
    check_tp,
    kraus_to_map,
)
from .generators import random_complex, random_density_matrix


@dataclass(frozen=True, eq=False)
class CPSplit:
    """The sign-split of a map together with its trace-functional data.

    ``kernel_basis`` and ``support_basis`` hold orthonormal column vectors
    spanning the kernel and the range of ``minus_functional``;
    ``minus_pinv @ minus_functional == support_projector`` within tolerance.
    """

    source: LinearMap
    positive_part: LinearMap
    negative_part: LinearMap
    positive_kraus: KrausSet
    negative_kraus: KrausSet
    plus_functional: np.ndarray
    minus_functional: np.ndarray
    minus_pinv: np.ndarray
    support_projector: np.ndarray
    kernel_basis: np.ndarray
    support_basis: np.ndarray
    n_positive: int
    n_negative: int
    tol: ToleranceConfig

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def has_negative_part(self) -> bool:
        return self.n_negative > 0


@dataclass(frozen=True)
class AnnihilationReport:
    """Residuals of the kernel-annihilation identities (all should vanish).

    ``kernel_state_residual``: negative part applied to kernel projectors.
    ``kernel_cross_residual``: negative part applied to kernel/support dyads.
    ``mechanism_residual``: norms of negative canonical operators acting on
    kernel vectors (the reason the two previous families vanish).
    ``support_restriction_residual``: difference between the negative part
    applied to random states and to their support-projected versions.
    """

    kernel_state_residual: float
    kernel_cross_residual: float
    mechanism_residual: float
    support_restriction_residual: float
    max_residual: float
    passed: bool
    kernel_dim: int
    support_dim: int
    samples: int
    seed: int


@dataclass(frozen=True)
class TraceFunctionalReport:
    """Residuals of the trace-functional identities over random inputs."""

    plus_residual: float
    minus_residual: float
    plus_inverse_residual: float
    minus_support_residual: float
    max_residual: float
    passed: bool
    samples: int
    seed: int


def cp_split(m: LinearMap, tol: ToleranceConfig = DEFAULT_TOL) -> CPSplit:
    """Split a TP Hermiticity-preserving map into its CP parts.

    Raises :class:`NonHermitianChoi` or :class:`NotTracePreserving` when the
    preconditions fail.
    """
    ok, res = check_hermiticity_preserving(m, tol)
    if not ok:
        raise NonHermitianChoi(f"Choi Hermiticity residual {res:.3e} exceeds tolerance")
    ok, res = check_tp(m, tol)
    if not ok:
        raise NotTracePreserving(f"trace-preservation residual {res:.3e} exceeds tolerance")
    values, vectors = hermitian_eig(m.choi, tol)
    return split_from_eigensystem(m, values, vectors, tol)


def split_from_eigensystem(
    m: LinearMap, values, vectors, tol: ToleranceConfig = DEFAULT_TOL
) -> CPSplit:
    """Assemble a :class:`CPSplit` from a given Choi eigensystem.

    Exposed separately so that basis invariance under eigenvalue degeneracy
    can be exercised: any orthonormal basis of each degenerate eigenspace
    must lead to a split with identical action.
    """
    n = m.dim
    values = np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    thr = tol.zero_eig_rel * scale

    pos_ops, pos_w, neg_ops, neg_w = [], [], [], []
    for lam, vec in zip(values, np.asarray(vectors, dtype=complex).T):
        if lam > thr:
            pos_ops.append(vec.reshape(n, n))
            pos_w.append(lam)
        elif lam < -thr:
            neg_ops.append(vec.reshape(n, n))
            neg_w.append(-lam)

    positive_kraus = KrausSet(pos_ops, pos_w or None)
    negative_kraus = KrausSet(neg_ops, neg_w or None)
    positive_part = kraus_to_map(positive_kraus) if pos_ops else LinearMap(
        np.zeros((n * n, n * n), dtype=complex)
    )
    negative_part = kraus_to_map(negative_kraus) if neg_ops else LinearMap(
        np.zeros((n * n, n * n), dtype=complex)
    )

    plus_functional = np.zeros((n, n), dtype=complex)
    for w, op in zip(positive_kraus.weights if pos_ops else [], pos_ops):
        plus_functional += w * (op.conj().T @ op)
    minus_functional = np.zeros((n, n), dtype=complex)
    for w, op in zip(negative_kraus.weights if neg_ops else [], neg_ops):
        minus_functional += w * (op.conj().T @ op)

    k_vals, k_vecs = np.linalg.eigh(minus_functional)
    k_scale = float(np.max(np.abs(k_vals))) if k_vals.size else 0.0
    keep = k_vals > tol.zero_eig_rel * k_scale
    support_basis = k_vecs[:, keep]
    kernel_basis = k_vecs[:, ~keep]
    minus_pinv = (support_basis / k_vals[keep]) @ support_basis.conj().T
    support_projector = support_basis @ support_basis.conj().T

    return CPSplit(
        source=m,
        positive_part=positive_part,
        negative_part=negative_part,
        positive_kraus=positive_kraus,
        negative_kraus=negative_kraus,
        plus_functional=plus_functional,
        minus_functional=minus_functional,
        minus_pinv=minus_pinv,
        support_projector=support_projector,
        kernel_basis=kernel_basis,
        support_basis=support_basis,
        n_positive=len(pos_ops),
        n_negative=len(neg_ops),
        tol=tol,
    )


def verify_annihilation(
    split: CPSplit,
    tol: ToleranceConfig = DEFAULT_TOL,
    samples: int = 20,
    seed: int = 0,
) -> AnnihilationReport:
    """Measure how exactly the negative part annihilates the kernel.

    All four residual families must stay below ``residual_abs``; they are
    vacuously zero when the kernel is empty (checks over empty index sets).
    """
    neg = split.negative_part
    kernel = split.kernel_basis
    support = split.support_basis
    rng = np.random.default_rng(seed)

    kernel_state = 0.0
    cross = 0.0
    mechanism = 0.0
    for q in range(kernel.shape[1]):
        phi = kernel[:, q]
        kernel_state = max(kernel_state, frob(apply_map(neg, np.outer(phi, phi.conj()))))
        for r in range(support.shape[1]):
            psi = support[:, r]
            cross = max(cross, frob(apply_map(neg, np.outer(phi, psi.conj()))))
            cross = max(cross, frob(apply_map(neg, np.outer(psi, phi.conj()))))
        for op in split.negative_kraus.operators:
            mechanism = max(mechanism, float(np.linalg.norm(op @ phi)))

    restriction = 0.0
    for _ in range(samples):
        rho = random_density_matrix(split.dim, rng)
        delta = apply_map(neg, rho) - apply_map(neg, split.support_projector @ rho)
        restriction = max(restriction, frob(delta))

    worst = max(kernel_state, cross, mechanism, restriction)
    return AnnihilationReport(
        kernel_state_residual=kernel_state,
        kernel_cross_residual=cross,
        mechanism_residual=mechanism,
        support_restriction_residual=restriction,
        max_residual=worst,
        passed=bool(worst <= tol.residual_abs),
        kernel_dim=kernel.shape[1],
        support_dim=support.shape[1],
        samples=samples,
        seed=seed,
    )


def trace_functionals(
    split: CPSplit,
    samples: int = 20,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TraceFunctionalReport:
    """Measure the trace-functional identities on random matrices.

    Checks, for random ``X``: ``Tr[positive_part(X)] = Tr[plus_functional X]``
    and the minus-side analogue, plus the normalized forms
    ``Tr[positive_part(plus_functional^{-1} X)] = Tr[X]`` and
    ``Tr[negative_part(minus_pinv X)] = Tr[support_projector X]``.
    Raises :class:`SingularJ` when the plus functional is numerically
    singular, which cannot happen for a trace-preserving source.
    """
    j_vals = np.linalg.eigvalsh(split.plus_functional)
    if j_vals[0] <= split.tol.zero_eig_rel * max(1.0, j_vals[-1]):
        raise SingularJ(f"plus functional min eigenvalue {j_vals[0]:.3e}")
    j_inv = np.linalg.inv(split.plus_functional)

    rng = np.random.default_rng(seed)
    plus_res = minus_res = plus_inv_res = minus_sup_res = 0.0
    for _ in range(samples):
        x = random_complex((split.dim, split.dim), rng)
        plus_res = max(
            plus_res,
            abs(np.trace(apply_map(split.positive_part, x)) - np.trace(split.plus_functional @ x)),
        )
        minus_res = max(
            minus_res,
            abs(np.trace(apply_map(split.negative_part, x)) - np.trace(split.minus_functional @ x)),
        )
        plus_inv_res = max(
            plus_inv_res,
            abs(np.trace(apply_map(split.positive_part, j_inv @ x)) - np.trace(x)),
        )
        minus_sup_res = max(
            minus_sup_res,
            abs(
                np.trace(apply_map(split.negative_part, split.minus_pinv @ x))
                - np.trace(split.support_projector @ x)
            ),
        )
    worst = max(plus_res, minus_res, plus_inv_res, minus_sup_res)
    return TraceFunctionalReport(
        plus_residual=plus_res,
        minus_residual=minus_res,
        plus_inverse_residual=plus_inv_res,
        minus_support_residual=minus_sup_res,
        max_residual=worst,
        passed=bool(worst <= tol.residual_abs),
        samples=samples,
        seed=seed,
    )
