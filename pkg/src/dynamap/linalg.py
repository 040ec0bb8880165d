"""Dense complex matrix primitives used by every other module.

All functions are pure and operate on plain ``numpy`` arrays of complex
dtype.  Thresholding decisions (what counts as a zero eigenvalue, how much
residual is tolerated) are centralized in :class:`ToleranceConfig` so that
the whole pipeline shares one notion of "numerically zero".
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, NotPSD


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared across the package.

    ``zero_eig_rel`` is the relative cutoff below which an eigenvalue is
    treated as zero (relative to the largest absolute eigenvalue of the same
    matrix, so behavior is scale invariant).  ``residual_abs`` bounds the
    Frobenius norm of residuals in identity checks.
    """

    zero_eig_rel: float = 1e-10
    residual_abs: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.zero_eig_rel < 1.0:
            raise ValueError(f"zero_eig_rel must be in (0, 1), got {self.zero_eig_rel}")
        if not 0.0 < self.residual_abs < 1.0:
            raise ValueError(f"residual_abs must be in (0, 1), got {self.residual_abs}")


DEFAULT_TOL = ToleranceConfig()


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex ndarray, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got array of ndim {a.ndim}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    return a


def frob(m) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def hermiticity_residual(m: np.ndarray) -> float:
    return frob(m - m.conj().T)


def _require_square(m: np.ndarray) -> np.ndarray:
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def _require_hermitian(m: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    m = _require_square(m)
    res = hermiticity_residual(m)
    if res > tol.residual_abs * max(1.0, frob(m)):
        raise NonHermitianInput(f"Hermiticity residual {res:.3e} exceeds tolerance")
    return m


def hermitian_eig(m, tol: ToleranceConfig = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(values, vectors)`` with real eigenvalues sorted in descending
    order and orthonormal eigenvectors as the columns of ``vectors``.
    Raises :class:`NonHermitianInput` when the input fails the Hermiticity
    residual bound and :class:`DimensionMismatch` when it is not square.
    """
    m = _require_hermitian(m, tol)
    values, vectors = np.linalg.eigh(m)
    return values[::-1].astype(float), vectors[:, ::-1]


def partial_trace(m, dims: tuple[int, int], which: str) -> np.ndarray:
    """Trace out one tensor factor of an operator on a bipartite space.

    ``m`` acts on a space of dimension ``dims[0] * dims[1]`` with the first
    factor as the slow index.  ``which`` selects the factor to trace out:
    ``"a"`` (first) leaves a ``dims[1]`` square matrix, ``"b"`` (second)
    leaves a ``dims[0]`` square matrix.  The full trace is preserved.
    """
    d_a, d_b = dims
    m = _require_square(m)
    if d_a < 1 or d_b < 1 or m.shape[0] != d_a * d_b:
        raise DimensionMismatch(
            f"matrix of side {m.shape[0]} is not compatible with factors {d_a}x{d_b}"
        )
    t = m.reshape(d_a, d_b, d_a, d_b)
    if which == "a":
        return np.einsum("aiaj->ij", t)
    if which == "b":
        return np.einsum("iaja->ij", t)
    raise ValueError(f"which must be 'a' or 'b', got {which!r}")


def kron(a, b) -> np.ndarray:
    """Tensor (Kronecker) product with the first argument as the slow index."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def psd_sqrt(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues within the zero threshold of zero are clamped to zero;
    eigenvalues below ``-zero_eig_rel * max|eig|`` raise :class:`NotPSD`.
    """
    m = _require_hermitian(m, tol)
    values, vectors = np.linalg.eigh(m)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if values.size and values[0] < -tol.zero_eig_rel * scale:
        raise NotPSD(f"eigenvalue {values[0]:.3e} below PSD threshold")
    clamped = np.clip(values, 0.0, None)
    return (vectors * np.sqrt(clamped)) @ vectors.conj().T


def thresholded_pinv(m, tol: ToleranceConfig = DEFAULT_TOL):
    """Spectral pseudo-inverse and support projector of a PSD matrix.

    Eigenvalues above ``zero_eig_rel * max(eig)`` are inverted; the rest are
    treated as exact zeros.  Returns ``(pinv, support)`` where ``support`` is
    the orthogonal projector onto the retained eigenspace, so that
    ``pinv @ m == support`` up to the residual tolerance.
    """
    m = _require_hermitian(m, tol)
    values, vectors = np.linalg.eigh(m)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if values.size and values[0] < -tol.zero_eig_rel * scale:
        raise NotPSD(f"eigenvalue {values[0]:.3e} below PSD threshold")
    keep = values > tol.zero_eig_rel * scale
    v = vectors[:, keep]
    inv_vals = 1.0 / values[keep]
    pinv = (v * inv_vals) @ v.conj().T
    support = v @ v.conj().T
    return pinv, support
