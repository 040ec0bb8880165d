"""Extension maps and the sector evolution that reconstructs the source map.

An extension map embeds a system state into a system-plus-ancilla operator
whose ancilla partial trace returns the state unchanged.  For a completely
positive map the standard product extension ``rho -> rho (x) |0><0|``
suffices.  For a map with a genuine negative part the two-block extension

    E(rho) = plus_functional @ rho   on the "+" ancilla label,
           -(minus_functional @ rho) on the "-" ancilla label

still traces back to ``rho`` because the functionals differ by the identity
for any trace-preserving source.  The blocks are labels, never materialized
as ancilla kets; an :class:`ExtendedState` simply stores both blocks with
the minus sign folded in, so the ancilla partial trace is a plain block sum.

The sector evolution then divides the functional back out and applies the
matching CP part blockwise:

    plus block:   X -> positive_part(plus_functional^{-1} @ X)
    minus block:  X -> negative_part(minus_pinv @ X)

Tracing out the block label afterwards reproduces the source map exactly:
the pseudo-inverse only recovers the support projector, but the negative
part cannot see the difference (it annihilates the kernel).

Two variants are provided.  The ``literal`` variant above satisfies the
extension condition (block sum equals ``rho``) but its sector maps need not
even preserve Hermiticity, since left multiplication by a fixed matrix does
not.  The ``symmetric`` variant sandwiches the state between Hermitian
square roots instead (``sqrt(F) rho sqrt(F)`` and the matching inverse
roots), making both sector maps manifestly completely positive, at the
price of violating the extension condition whenever the functionals are not
scalar.  Both variants reconstruct the source map; ``sector_choi_report``
measures what each one satisfies instead of asserting it.
"""

from dataclasses import dataclass

import numpy as np

from .cpsplit import CPSplit
from .errors import DimensionMismatch, SingularJ
from .linalg import DEFAULT_TOL, ToleranceConfig, as_complex_matrix, frob, kron
from .maps import (
    DensityMatrix,
    LinearMap,
    a_form,
    apply_map,
    check_hermiticity_preserving,
    from_a_form,
)

VARIANTS = ("literal", "symmetric")


@dataclass(frozen=True, eq=False)
class ExtendedState:
    """Two signed blocks of an extended system-plus-label operator.

    ``minus_block`` is ``None`` when the source map has no negative part, in
    which case the extension needs no second label at all.
    """

    dim: int
    plus_block: np.ndarray
    minus_block: np.ndarray | None

    @property
    def has_minus(self) -> bool:
        return self.minus_block is not None

    def block_sum(self) -> np.ndarray:
        """Partial trace over the block label."""
        if self.minus_block is None:
            return self.plus_block
        return self.plus_block + self.minus_block


@dataclass(frozen=True)
class DimensionReport:
    """Sizes of the extended spaces required by the construction."""

    extension_dim: int
    dilation_dim: int
    n_squared_bound: int


def product_extension(rho, ancilla_dim: int) -> np.ndarray:
    """The standard product extension ``rho (x) |0><0|`` on a d-dim ancilla."""
    if ancilla_dim < 1:
        raise ValueError(f"ancilla_dim must be >= 1, got {ancilla_dim}")
    if isinstance(rho, DensityMatrix):
        rho = rho.matrix
    rho = as_complex_matrix(rho)
    anc = np.zeros((ancilla_dim, ancilla_dim), dtype=complex)
    anc[0, 0] = 1.0
    return kron(rho, anc)


def _check_state(split: CPSplit, rho) -> np.ndarray:
    rho = as_complex_matrix(rho)
    if rho.shape != (split.dim, split.dim):
        raise DimensionMismatch(f"state shape {rho.shape} does not match dim {split.dim}")
    return rho


def _plus_eigensystem(split: CPSplit):
    w, v = np.linalg.eigh(split.plus_functional)
    if w[0] <= split.tol.zero_eig_rel * max(1.0, w[-1]):
        raise SingularJ(f"plus functional min eigenvalue {w[0]:.3e}")
    return w, v


def _plus_power(split: CPSplit, power: float) -> np.ndarray:
    w, v = _plus_eigensystem(split)
    return (v * w ** power) @ v.conj().T


def _minus_sqrt(split: CPSplit) -> np.ndarray:
    w, v = np.linalg.eigh(split.minus_functional)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def _minus_pinv_sqrt(split: CPSplit) -> np.ndarray:
    k_vals = (
        split.support_basis.conj().T @ split.minus_functional @ split.support_basis
    ).diagonal().real
    return (split.support_basis / np.sqrt(k_vals)) @ split.support_basis.conj().T


def build_extension(split: CPSplit, rho, variant: str = "literal") -> ExtendedState:
    """Extend a state into the two signed blocks for the given variant."""
    rho = _check_state(split, rho)
    if variant == "literal":
        plus = split.plus_functional @ rho
        minus = -(split.minus_functional @ rho) if split.has_negative_part else None
    elif variant == "symmetric":
        j_sqrt = _plus_power(split, 0.5)
        plus = j_sqrt @ rho @ j_sqrt
        if split.has_negative_part:
            k_sqrt = _minus_sqrt(split)
            minus = -(k_sqrt @ rho @ k_sqrt)
        else:
            minus = None
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return ExtendedState(dim=split.dim, plus_block=plus, minus_block=minus)


def apply_sector_map(split: CPSplit, state: ExtendedState, variant: str = "literal") -> ExtendedState:
    """Apply the blockwise CP evolution to an extended state.

    Acts independently on the two blocks; cross blocks are not represented.
    The minus sign stored in the state passes through linearly.
    """
    if state.dim != split.dim:
        raise DimensionMismatch(f"state dim {state.dim} does not match split dim {split.dim}")
    if variant == "literal":
        j_inv = _plus_power(split, -1.0)
        plus = apply_map(split.positive_part, j_inv @ state.plus_block)
        minus = None
        if state.has_minus:
            minus = apply_map(split.negative_part, split.minus_pinv @ state.minus_block)
    elif variant == "symmetric":
        j_inv_sqrt = _plus_power(split, -0.5)
        plus = apply_map(split.positive_part, j_inv_sqrt @ state.plus_block @ j_inv_sqrt)
        minus = None
        if state.has_minus:
            k_pinv_sqrt = _minus_pinv_sqrt(split)
            minus = apply_map(
                split.negative_part, k_pinv_sqrt @ state.minus_block @ k_pinv_sqrt
            )
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return ExtendedState(dim=split.dim, plus_block=plus, minus_block=minus)


def reconstruct(split: CPSplit, rho, variant: str = "literal"):
    """Run extension -> sector evolution -> block sum and compare to the map.

    Returns ``(result, residual)`` where ``residual`` is the Frobenius
    distance between the chain output and the source map applied directly.
    """
    rho = _check_state(split, rho)
    chain = apply_sector_map(split, build_extension(split, rho, variant), variant)
    result = chain.block_sum()
    residual = frob(result - apply_map(split.source, rho))
    return result, residual


def _sector_a_forms(split: CPSplit, variant: str):
    """A-form matrices of the plus and minus sector maps."""
    n = split.dim
    eye = np.eye(n)
    a_plus_part = a_form(split.positive_part)
    a_minus_part = a_form(split.negative_part)
    if variant == "literal":
        a_plus = a_plus_part @ kron(_plus_power(split, -1.0), eye)
        a_minus = a_minus_part @ kron(split.minus_pinv, eye)
    elif variant == "symmetric":
        j_is = _plus_power(split, -0.5)
        a_plus = a_plus_part @ kron(j_is, j_is.T)
        k_ps = _minus_pinv_sqrt(split)
        a_minus = a_minus_part @ kron(k_ps, k_ps.T)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return a_plus, a_minus


@dataclass(frozen=True)
class SectorChoiReport:
    """Hermiticity residual and minimum eigenvalue of the sector-map Choi
    matrices; ``min_eig`` entries are ``None`` when the Choi matrix is not
    Hermitian within tolerance (no spectral claim is meaningful then)."""

    variant: str
    plus_hermiticity_residual: float
    plus_min_eig: float | None
    minus_hermiticity_residual: float | None
    minus_min_eig: float | None
    full_dim: int
    full_hermiticity_residual: float
    full_min_eig: float | None


def _choi_stats(m: LinearMap, tol: ToleranceConfig):
    ok, res = check_hermiticity_preserving(m, tol)
    if not ok:
        return res, None
    return res, float(np.linalg.eigvalsh(m.choi)[0])


def _assemble_block_diagonal(split: CPSplit, a_plus, a_minus) -> LinearMap:
    """Full map on the extended space: sector maps on the diagonal blocks,
    zero on cross blocks.  Block label is the slow index."""
    n = split.dim
    sectors = 2 if split.has_negative_part else 1
    full = sectors * n
    plus_map = from_a_form(a_plus)
    minus_map = from_a_form(a_minus) if sectors == 2 else None
    choi4 = np.zeros((full, full, full, full), dtype=complex)
    for a in range(sectors):
        sector = plus_map if a == 0 else minus_map
        for r in range(n):
            for s in range(n):
                unit = np.zeros((n, n), dtype=complex)
                unit[r, s] = 1.0
                out = apply_map(sector, unit)
                choi4[a * n:(a + 1) * n, a * n + r, a * n:(a + 1) * n, a * n + s] = out
    return LinearMap(choi4.reshape(full * full, full * full))


def sector_choi_report(
    split: CPSplit, variant: str, tol: ToleranceConfig = DEFAULT_TOL
) -> SectorChoiReport:
    """Measure Hermiticity and positivity of the sector maps for a variant."""
    a_plus, a_minus = _sector_a_forms(split, variant)
    plus_res, plus_min = _choi_stats(from_a_form(a_plus), tol)
    if split.has_negative_part:
        minus_res, minus_min = _choi_stats(from_a_form(a_minus), tol)
    else:
        minus_res, minus_min = None, None
    full_map = _assemble_block_diagonal(split, a_plus, a_minus)
    full_res, full_min = _choi_stats(full_map, tol)
    return SectorChoiReport(
        variant=variant,
        plus_hermiticity_residual=plus_res,
        plus_min_eig=plus_min,
        minus_hermiticity_residual=minus_res,
        minus_min_eig=minus_min,
        full_dim=full_map.dim,
        full_hermiticity_residual=full_res,
        full_min_eig=full_min,
    )


def dimension_report(split: CPSplit) -> DimensionReport:
    """Extended-space dimensions: the extension needs one system copy per
    nonzero block; the unitary dilation of the sector evolution needs one
    copy per canonical operator of each block's CP part."""
    n = split.dim
    bound = n * n
    if split.n_positive + split.n_negative > bound:
        raise ValueError("canonical operator count exceeds the dimension bound")
    dim_plus = n
    dim_minus = n if split.has_negative_part else 0
    return DimensionReport(
        extension_dim=dim_plus + dim_minus,
        dilation_dim=dim_plus * split.n_positive + dim_minus * split.n_negative,
        n_squared_bound=bound,
    )
