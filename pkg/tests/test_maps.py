import numpy as np
import pytest

from dynamap.channels import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    amplitude_damping_map,
    depolarizing_map,
    identity_map,
    matrix_unit,
    transpose_map,
)
from dynamap.errors import DimensionMismatch, NonHermitianChoi
from dynamap.generators import random_density_matrix, random_tp_map
from dynamap.maps import (
    DensityMatrix,
    KrausSet,
    LinearMap,
    a_form,
    apply_kraus,
    apply_map,
    check_cp,
    check_tp,
    choi_eigenvalues,
    from_a_form,
    kraus_to_map,
    map_to_kraus,
)


def test_apply_identity():
    rng = np.random.default_rng(0)
    rho = random_density_matrix(2, rng)
    assert np.allclose(apply_map(identity_map(2), rho), rho)


def test_apply_transpose_negates_sigma_y():
    rho = (np.eye(2) + 0.6 * SIGMA_Y) / 2
    expected = (np.eye(2) - 0.6 * SIGMA_Y) / 2
    assert np.allclose(apply_map(transpose_map(2), rho), expected, atol=1e-14)


def test_apply_fully_depolarizing():
    out = apply_map(depolarizing_map(1.0), matrix_unit(2, 0, 0))
    assert np.allclose(out, np.eye(2) / 2)


def test_apply_linearity():
    rng = np.random.default_rng(1)
    m = random_tp_map(3, rng)
    r1 = random_density_matrix(3, rng)
    r2 = random_density_matrix(3, rng)
    lhs = apply_map(m, 0.3 * r1 + (0.7 + 0.1j) * r2)
    rhs = 0.3 * apply_map(m, r1) + (0.7 + 0.1j) * apply_map(m, r2)
    assert np.linalg.norm(lhs - rhs) <= 1e-10


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        apply_map(identity_map(2), np.eye(3))


def test_a_form_identity_map():
    assert np.allclose(a_form(identity_map(2)), np.eye(4))


def test_a_form_round_trip_exact():
    rng = np.random.default_rng(2)
    raw = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.array_equal(from_a_form(a_form(LinearMap(raw))).choi, raw)
    assert np.array_equal(a_form(from_a_form(raw)), raw)


def test_a_form_transpose_is_permutation():
    # oracle: enumerate the action on the four matrix units
    expected = np.zeros((4, 4), dtype=complex)
    for r in range(2):
        for s in range(2):
            out = matrix_unit(2, r, s).T
            expected[:, r * 2 + s] = out.reshape(-1)
    assert np.allclose(a_form(transpose_map(2)), expected)


def test_kraus_to_map_single_identity():
    m = kraus_to_map(KrausSet([np.eye(2)]))
    assert np.allclose(m.choi, identity_map(2).choi)


def test_kraus_to_map_damping_gamma_zero_degenerates():
    m0 = np.array([[1, 0], [0, 1]], dtype=complex)  # sqrt(1-gamma) at gamma=0
    m1 = np.zeros((2, 2), dtype=complex)
    m = kraus_to_map(KrausSet([m0]))  # the zero operator contributes nothing
    m_with_zero = kraus_to_map(KrausSet([m0, m1]))
    assert np.allclose(m.choi, identity_map(2).choi)
    assert np.allclose(m_with_zero.choi, identity_map(2).choi)


def test_kraus_to_map_pauli_signs_give_transpose():
    ops = [np.eye(2) / np.sqrt(2), SIGMA_X / np.sqrt(2), SIGMA_Y / np.sqrt(2),
           SIGMA_Z / np.sqrt(2)]
    signs = [1.0, 1.0, -1.0, 1.0]
    m = kraus_to_map(KrausSet(ops), signs)
    # oracle: expand the signed sum against the four matrix units directly
    for r in range(2):
        for s in range(2):
            unit = matrix_unit(2, r, s)
            direct = sum(
                sg * (op @ unit @ op.conj().T) for sg, op in zip(signs, ops)
            )
            assert np.allclose(direct, unit.T, atol=1e-14)
            assert np.allclose(apply_map(m, unit), unit.T, atol=1e-14)


def test_map_to_kraus_identity():
    pos, neg = map_to_kraus(identity_map(2))
    assert len(pos) == 1 and len(neg) == 0
    assert np.allclose(pos.weights, [2.0])
    op = pos.operators[0]
    # the canonical operator is the normalized identity up to a global phase
    assert abs(abs(np.trace(op.conj().T @ (np.eye(2) / np.sqrt(2)))) - 1.0) < 1e-12


def test_map_to_kraus_transpose_counts():
    pos, neg = map_to_kraus(transpose_map(2))
    assert len(pos) == 3 and len(neg) == 1
    assert np.allclose(pos.weights, [1.0, 1.0, 1.0], atol=1e-12)
    assert np.allclose(neg.weights, [1.0], atol=1e-12)


def test_map_to_kraus_fully_depolarizing():
    pos, neg = map_to_kraus(depolarizing_map(1.0))
    assert len(pos) == 4 and len(neg) == 0
    assert np.allclose(pos.weights, [0.5] * 4, atol=1e-12)


def test_map_to_kraus_requires_hermitian_choi():
    bad = LinearMap(np.triu(np.ones((4, 4), dtype=complex)))
    with pytest.raises(NonHermitianChoi):
        map_to_kraus(bad)


def test_kraus_round_trip_reproduces_action():
    rng = np.random.default_rng(4)
    for n in (2, 3):
        m = random_tp_map(n, rng)
        pos, neg = map_to_kraus(m)
        for _ in range(20):
            rho = random_density_matrix(n, rng)
            rebuilt = apply_kraus(pos, rho) - apply_kraus(neg, rho)
            assert np.linalg.norm(rebuilt - apply_map(m, rho)) <= 1e-9


def test_check_tp():
    ok, res = check_tp(identity_map(2))
    assert ok and res < 1e-14
    ok, _ = check_tp(transpose_map(2))
    assert ok
    doubled = LinearMap(2.0 * identity_map(2).choi)
    ok, res = check_tp(doubled)
    assert not ok
    assert abs(res - np.sqrt(2.0)) < 1e-12  # ||I||_F for a doubled Choi


def test_check_cp():
    ok, min_eig = check_cp(identity_map(2))
    assert ok and abs(min_eig) < 1e-12
    ok, min_eig = check_cp(transpose_map(2))
    assert not ok and abs(min_eig + 1.0) < 1e-12
    ok, _ = check_cp(amplitude_damping_map(0.3))
    assert ok
    with pytest.raises(NonHermitianChoi):
        check_cp(LinearMap(np.triu(np.ones((4, 4), dtype=complex))))


def test_amplitude_damping_choi_eigenvalues_oracle():
    # oracle: build the rank-2 Choi from the explicit Kraus pair and eigensolve
    gamma = 0.3
    m0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    m1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    choi = sum(np.outer(op.reshape(-1), op.reshape(-1).conj()) for op in (m0, m1))
    oracle = np.linalg.eigvalsh(choi)[::-1]
    assert np.allclose(choi_eigenvalues(amplitude_damping_map(gamma)), oracle, atol=1e-12)
    assert oracle[-1] >= -1e-12


def test_tp_maps_preserve_trace_on_random_states():
    rng = np.random.default_rng(6)
    for n in (2, 3, 4):
        m = random_tp_map(n, rng)
        for _ in range(10):
            rho = random_density_matrix(n, rng)
            assert abs(np.trace(apply_map(m, rho)) - np.trace(rho)) <= 1e-9


def _remix_degenerate(values, vectors, rng):
    """Replace each degenerate eigenspace basis with a random unitary remix."""
    values = np.asarray(values)
    vectors = vectors.copy()
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and abs(values[stop] - values[start]) < 1e-8:
            stop += 1
        k = stop - start
        if k > 1:
            g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            q, _ = np.linalg.qr(g)
            vectors[:, start:stop] = vectors[:, start:stop] @ q
        start = stop
    return vectors


def test_map_to_kraus_basis_invariance_under_degeneracy():
    rng = np.random.default_rng(8)
    for m in (transpose_map(2), depolarizing_map(1.0), random_tp_map(2, rng)):
        values, vectors = np.linalg.eigh(m.choi)
        remixed = _remix_degenerate(values, vectors, rng)
        rebuilt = np.zeros_like(m.choi)
        for lam, vec in zip(values, remixed.T):
            rebuilt += lam * np.outer(vec, vec.conj())
        m2 = LinearMap(rebuilt)
        pos1, neg1 = map_to_kraus(m)
        pos2, neg2 = map_to_kraus(m2)
        assert len(pos1) == len(pos2) and len(neg1) == len(neg2)
        for _ in range(10):
            rho = random_density_matrix(m.dim, rng)
            out1 = apply_kraus(pos1, rho) - apply_kraus(neg1, rho)
            out2 = apply_kraus(pos2, rho) - apply_kraus(neg2, rho)
            assert np.linalg.norm(out1 - out2) <= 1e-9


def test_density_matrix_validation():
    DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))  # negative eigenvalue
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))  # not Hermitian


def test_kraus_set_validation():
    with pytest.raises(DimensionMismatch):
        KrausSet([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        KrausSet([np.eye(2)], [-1.0])
    with pytest.raises(DimensionMismatch):
        KrausSet([np.eye(2)], [1.0, 2.0])


def test_linear_map_rejects_bad_shapes():
    with pytest.raises(DimensionMismatch):
        LinearMap(np.zeros((3, 3)))  # side not a perfect square
    with pytest.raises(DimensionMismatch):
        LinearMap(np.zeros((4, 2)))
