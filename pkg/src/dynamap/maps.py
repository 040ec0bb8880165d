"""Representations of linear maps on matrices and their physicality checks.

A map acting on ``N x N`` matrices is stored canonically through its Choi
matrix ``B`` (``N^2 x N^2``), indexed so that

    (map(rho))[r', s'] = sum_{r, s} B[(r', r), (s', s)] * rho[r, s]

with row multi-index ``(output row, input row)`` and column multi-index
``(output col, input col)``, both row-major.  Under this grouping:

* the map preserves Hermiticity iff ``B`` is Hermitian,
* it is trace preserving iff the partial trace of ``B`` over the output
  index is the identity,
* it is completely positive iff ``B`` is positive semidefinite,
* eigenvectors of ``B`` reshape (row-major) into canonical-decomposition
  operators ``L_i`` with ``map(rho) = sum_i lambda_i L_i rho L_i^dag``.

The superoperator acting on the row-major vectorized state (the "A form")
is related to the Choi form by the index reshuffle ``a_form``/``from_a_form``,
which is an exact involutive permutation of entries.
"""

import numpy as np

from .errors import DimensionMismatch, NonHermitianChoi
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_complex_matrix,
    frob,
    hermitian_eig,
    hermiticity_residual,
)


class LinearMap:
    """A linear map on ``dim x dim`` matrices, stored as its Choi matrix.

    Physicality verdicts (trace preserving, Hermiticity preserving,
    completely positive) are computed on demand by ``check_tp``,
    ``check_hermiticity_preserving`` and ``check_cp`` and cached per
    tolerance configuration.
    """

    def __init__(self, choi):
        choi = as_complex_matrix(choi)
        side = choi.shape[0]
        if choi.shape[0] != choi.shape[1]:
            raise DimensionMismatch(f"Choi matrix must be square, got {choi.shape}")
        dim = round(side ** 0.5)
        if dim * dim != side:
            raise DimensionMismatch(f"Choi side {side} is not a perfect square")
        self.dim = dim
        self.choi = choi
        self._verdicts = {}

    @property
    def choi4(self) -> np.ndarray:
        """Choi entries as a 4-tensor indexed ``[out_row, in_row, out_col, in_col]``."""
        n = self.dim
        return self.choi.reshape(n, n, n, n)

    def __repr__(self):
        return f"LinearMap(dim={self.dim})"


class DensityMatrix:
    """A Hermitian, positive semidefinite, unit-trace matrix."""

    def __init__(self, matrix, tol: ToleranceConfig = DEFAULT_TOL):
        matrix = as_complex_matrix(matrix)
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"density matrix must be square, got {matrix.shape}")
        if hermiticity_residual(matrix) > tol.residual_abs * max(1.0, frob(matrix)):
            raise ValueError("density matrix is not Hermitian within tolerance")
        eigs = np.linalg.eigvalsh(matrix)
        if eigs[0] < -tol.zero_eig_rel:
            raise ValueError(f"density matrix has negative eigenvalue {eigs[0]:.3e}")
        tr = complex(np.trace(matrix))
        if abs(tr - 1.0) > tol.residual_abs:
            raise ValueError(f"density matrix trace {tr} differs from 1")
        self.matrix = matrix
        self.dim = matrix.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


class KrausSet:
    """A weighted family of same-sized operators realizing a CP map.

    ``weights`` are positive reals (default all one); the induced map is
    ``rho -> sum_i w_i M_i rho M_i^dag``.  Completeness
    ``sum_i w_i M_i^dag M_i = 1`` holds exactly when that map is trace
    preserving; it is checked by consumers, never assumed here.
    """

    def __init__(self, operators, weights=None):
        ops = [as_complex_matrix(op) for op in operators]
        if ops:
            dim = ops[0].shape[0]
            for op in ops:
                if op.shape != (dim, dim):
                    raise DimensionMismatch(
                        f"all Kraus operators must be {dim}x{dim}, got {op.shape}"
                    )
        else:
            dim = 0
        if weights is None:
            weights = np.ones(len(ops))
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (len(ops),):
            raise DimensionMismatch("weights must match the number of operators")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        self.operators = ops
        self.weights = weights
        self.dim = dim

    def __len__(self):
        return len(self.operators)

    def folded_operators(self):
        """Operators with the weights absorbed, ``sqrt(w_i) * M_i``."""
        return [np.sqrt(w) * op for w, op in zip(self.weights, self.operators)]


def apply_map(m: LinearMap, rho) -> np.ndarray:
    """Apply a map to a matrix through its Choi form."""
    rho = as_complex_matrix(rho)
    if rho.shape != (m.dim, m.dim):
        raise DimensionMismatch(f"state shape {rho.shape} does not match dim {m.dim}")
    return np.einsum("arbs,rs->ab", m.choi4, rho)


def apply_kraus(kraus: KrausSet, rho, signs=None) -> np.ndarray:
    """Apply ``sum_i s_i w_i M_i rho M_i^dag`` directly (no Choi matrix)."""
    rho = as_complex_matrix(rho)
    if signs is None:
        signs = np.ones(len(kraus))
    out = np.zeros_like(rho)
    for s, w, op in zip(signs, kraus.weights, kraus.operators):
        out = out + s * w * (op @ rho @ op.conj().T)
    return out


def _reshuffle(m: np.ndarray) -> np.ndarray:
    """The exact index permutation relating the Choi form and the A form."""
    side = m.shape[0]
    n = round(side ** 0.5)
    if n * n != side or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix with square side, got {m.shape}")
    return m.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(side, side)


def a_form(m: LinearMap) -> np.ndarray:
    """Superoperator acting on the row-major vectorized state."""
    return _reshuffle(m.choi)


def from_a_form(a) -> LinearMap:
    """Build a map from its superoperator (A form) matrix."""
    return LinearMap(_reshuffle(as_complex_matrix(a)))


def kraus_to_map(kraus: KrausSet, signs=None) -> LinearMap:
    """Choi matrix of ``rho -> sum_i s_i w_i M_i rho M_i^dag``.

    ``signs`` (optional, one per operator, each +-1) admit the signed sums
    that arise when reassembling a map from its canonical decomposition.
    """
    if signs is None:
        signs = np.ones(len(kraus))
    signs = np.asarray(signs, dtype=float)
    if signs.shape != (len(kraus),):
        raise DimensionMismatch("signs must match the number of operators")
    n = kraus.dim
    choi = np.zeros((n * n, n * n), dtype=complex)
    for s, w, op in zip(signs, kraus.weights, kraus.operators):
        v = op.reshape(-1)
        choi += s * w * np.outer(v, v.conj())
    return LinearMap(choi)


def map_to_kraus(m: LinearMap, tol: ToleranceConfig = DEFAULT_TOL):
    """Canonical decomposition of a Hermiticity-preserving map.

    Eigendecomposes the Choi matrix and returns ``(positive, negative)``
    Kraus sets: eigenvectors with eigenvalue above the zero threshold become
    Hilbert-Schmidt-orthonormal operators weighted by the eigenvalue, those
    below minus the threshold are weighted by its absolute value, and
    eigenvalues within the threshold of zero are discarded from both.
    """
    ok, res = check_hermiticity_preserving(m, tol)
    if not ok:
        raise NonHermitianChoi(f"Choi Hermiticity residual {res:.3e} exceeds tolerance")
    values, vectors = hermitian_eig(m.choi, tol)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    thr = tol.zero_eig_rel * scale
    n = m.dim
    pos_ops, pos_w, neg_ops, neg_w = [], [], [], []
    for lam, vec in zip(values, vectors.T):
        if lam > thr:
            pos_ops.append(vec.reshape(n, n))
            pos_w.append(lam)
        elif lam < -thr:
            neg_ops.append(vec.reshape(n, n))
            neg_w.append(-lam)
    return KrausSet(pos_ops, pos_w or None), KrausSet(neg_ops, neg_w or None)


def choi_eigenvalues(m: LinearMap, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Eigenvalues of the Choi matrix, descending."""
    values, _ = hermitian_eig(m.choi, tol)
    return values


def check_tp(m: LinearMap, tol: ToleranceConfig = DEFAULT_TOL):
    """Trace preservation: partial trace of the Choi matrix over the output
    index must equal the identity.  Returns ``(verdict, residual)``."""
    key = ("tp", tol)
    if key not in m._verdicts:
        traced = np.einsum("aras->rs", m.choi4)
        residual = frob(traced - np.eye(m.dim))
        m._verdicts[key] = (residual <= tol.residual_abs, residual)
    return m._verdicts[key]


def check_hermiticity_preserving(m: LinearMap, tol: ToleranceConfig = DEFAULT_TOL):
    """Hermiticity preservation: the Choi matrix must be Hermitian.
    Returns ``(verdict, residual)``; the bound scales with the Choi norm."""
    key = ("hp", tol)
    if key not in m._verdicts:
        residual = hermiticity_residual(m.choi)
        bound = tol.residual_abs * max(1.0, frob(m.choi))
        m._verdicts[key] = (residual <= bound, residual)
    return m._verdicts[key]


def check_cp(m: LinearMap, tol: ToleranceConfig = DEFAULT_TOL):
    """Complete positivity: the Choi matrix must be PSD.

    Requires a Hermiticity-preserving map (raises :class:`NonHermitianChoi`
    otherwise).  Returns ``(verdict, min_choi_eigenvalue)`` where the verdict
    allows eigenvalues down to ``-zero_eig_rel * max|eig|``.
    """
    key = ("cp", tol)
    if key not in m._verdicts:
        ok, res = check_hermiticity_preserving(m, tol)
        if not ok:
            raise NonHermitianChoi(f"Choi Hermiticity residual {res:.3e} exceeds tolerance")
        values = np.linalg.eigvalsh(m.choi)
        scale = float(np.max(np.abs(values))) if values.size else 0.0
        min_eig = float(values[0])
        m._verdicts[key] = (min_eig >= -tol.zero_eig_rel * scale, min_eig)
    return m._verdicts[key]
