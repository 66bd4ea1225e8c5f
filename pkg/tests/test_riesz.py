import numpy as np
import pytest

from fusionframes.errors import (
    DimensionMismatch,
    NotRieszBasis,
    NotSPD,
    ScalingNotVerified,
    SingularOperator,
    ZeroCoefficient,
)
from fusionframes.frame import FusionFrame, canonical_dual, frame_operator
from fusionframes.linalg import is_orthogonal_matrix, map_subspace, projector, subspace_relation
from fusionframes.riesz import (
    ScalingPair,
    check_riesz_conditions,
    construct_riesz_scaler,
    d_operator_check,
    scaled_operator,
    scaler_family_from_coeffs,
    transfer_scaling,
    verify_scaling,
)
from fusionframes.sampling import random_invertible, random_orthogonal, random_riesz_basis, random_weights

from conftest import EXAMPLE_U, ROTATION_K, family_T, lines_r2, orthogonal_r3, riesz_r3

ONB2 = FusionFrame.from_spans([[[1, 0]], [[0, 1]]])


def test_scaling_pair_validation():
    with pytest.raises(ValueError):
        ScalingPair(np.eye(2), [1.0, 0.0])
    with pytest.raises(DimensionMismatch):
        ScalingPair(np.ones((2, 3)), [1.0])
    with pytest.raises(ValueError):
        ScalingPair(np.eye(2), [1.0], gamma0=-1.0)
    with pytest.raises(DimensionMismatch):
        verify_scaling(riesz_r3(), ScalingPair(np.eye(3), [1.0]))
    with pytest.raises(SingularOperator):
        verify_scaling(riesz_r3(), ScalingPair(np.diag([1, 1, 0.0]), [1, 1]))


def test_verify_scaling_examples():
    rep = verify_scaling(riesz_r3(), ScalingPair(EXAMPLE_U, [1, 1]))
    assert rep.is_parseval and rep.residual <= 1e-14
    assert verify_scaling(ONB2, ScalingPair(np.eye(2), [1, 1])).is_parseval
    rotated = riesz_r3().mapped(ROTATION_K)
    assert not verify_scaling(rotated, ScalingPair(EXAMPLE_U, [1, 1])).is_parseval


def test_verify_scaling_mapped_frame_agrees():
    rep = verify_scaling(riesz_r3(2.0, 3.0), ScalingPair(EXAMPLE_U, [0.1, 0.7]))
    assert abs(rep.residual - rep.transformed_residual) <= 1e-12


def test_d_operator_examples():
    chk = d_operator_check(riesz_r3(), ScalingPair(EXAMPLE_U, [1, 1]))
    assert chk.residual <= 1e-12 and chk.criterion_holds and chk.equivalent_to_parseval
    chk = d_operator_check(ONB2, ScalingPair(np.eye(2), [1, 1]))
    assert np.allclose(chk.lhs, np.eye(2)) and np.allclose(chk.rhs, np.eye(2))
    chk = d_operator_check(riesz_r3(), ScalingPair(EXAMPLE_U, [2, 2]))
    assert chk.residual > 1e-3 and not chk.criterion_holds and chk.equivalent_to_parseval


def test_d_operator_lhs_is_conjugated_scaled_operator():
    # oracle: T D^-1 D^-T T^T = U^-1 S_{UW_gamma} U^-T
    F = riesz_r3(1.5, 0.7)
    sc = ScalingPair(family_T(2, 1, 3, -1, 1), [0.4, 1.3])
    Ui = np.linalg.inv(sc.U)
    assert np.allclose(d_operator_check(F, sc).lhs, Ui @ scaled_operator(F, sc) @ Ui.T)


@pytest.mark.parametrize("method", ["spd-inverse-sqrt", "synthesis-inverse"])
def test_construct_riesz_scaler_examples(method):
    sc = construct_riesz_scaler(riesz_r3(), method)
    assert verify_scaling(riesz_r3(), sc).residual <= 1e-9
    sc = construct_riesz_scaler(ONB2, method)
    assert is_orthogonal_matrix(sc.U) and np.allclose(sc.gammas, 1)
    F = riesz_r3()
    sc = construct_riesz_scaler(F, method)
    imgs = F.mapped(sc.U)
    assert subspace_relation(imgs[0].subspace, imgs[1].subspace).orthogonal
    with pytest.raises(NotRieszBasis):
        construct_riesz_scaler(lines_r2(), method)
    with pytest.raises(ValueError):
        construct_riesz_scaler(F, "cholesky")


def test_riesz_conditions_examples():
    c = check_riesz_conditions(riesz_r3(), family_T(1, 1, 0, 0, 1))
    assert all(c[k] for k in ("i", "ii", "iii", "iv")) and c.consistent
    U = np.array([[1, 2, 0], [0, 1, 0], [0, 0, 3]], float)
    c = check_riesz_conditions(orthogonal_r3(), U)
    assert c.orthogonal_frame and c["v"] and c.all_hold and c.consistent
    c = check_riesz_conditions(riesz_r3(), np.eye(3))
    assert not any(c[k] for k in ("i", "ii", "iii", "iv")) and c.consistent
    with pytest.raises(NotRieszBasis):
        check_riesz_conditions(lines_r2(), np.eye(2))


def test_example_family_scales_for_generic_parameters(rng):
    F = riesz_r3()
    for _ in range(20):
        a = rng.standard_normal(5)
        T = family_T(*a)
        if np.linalg.cond(T) > 1e6:
            continue
        assert verify_scaling(F, ScalingPair.inverse_weights(F, T)).is_parseval


def test_transfer_examples():
    F = riesz_r3()
    T = family_T(1, 1, 0, 0, 1)
    G, sc = transfer_scaling(F, T, "dual_inverse_adjoint")
    imgs = G.mapped(sc.U)
    assert subspace_relation(imgs[0].subspace, imgs[1].subspace).orthogonal
    G, sc = transfer_scaling(F, EXAMPLE_U, "transformed", T=np.eye(3))
    assert np.allclose(sc.U, EXAMPLE_U)
    for a, b in zip(G.subspaces, F.subspaces):
        assert subspace_relation(a, b).equal
    G, sc = transfer_scaling(F, EXAMPLE_U, "canonical_dual")
    assert verify_scaling(G, sc).residual <= 1e-9
    with pytest.raises(ScalingNotVerified):
        transfer_scaling(F, np.eye(3), "canonical_dual")
    with pytest.raises(ValueError):
        transfer_scaling(F, EXAMPLE_U, "transformed")
    with pytest.raises(ValueError):
        transfer_scaling(F, EXAMPLE_U, "nowhere")


def test_scaler_family_examples():
    sc = scaler_family_from_coeffs(ONB2, [[1.0], [1.0]])
    assert is_orthogonal_matrix(sc.U)
    assert np.allclose(np.linalg.norm(sc.U, axis=0) ** 2, 1)
    w = np.array([2.0, 0.5])
    F = orthogonal_r3(*w)
    sc = scaler_family_from_coeffs(F, [[w[0] ** -2] * 2, [w[1] ** -2]])
    assert check_riesz_conditions(F, sc.U)["v"]
    # oracle: G = S^-1 E diag(c) E^-1 assembled explicitly, symmetric and positive
    F = riesz_r3()
    E = np.hstack([W.basis for W in F.subspaces])
    G = np.linalg.inv(frame_operator(F)) @ E @ np.linalg.inv(E)
    assert np.allclose(G, G.T) and np.linalg.eigvalsh(G)[0] > 0
    sc = scaler_family_from_coeffs(F, [[1.0], [1.0, 1.0]])
    assert verify_scaling(F, sc).is_parseval
    assert np.allclose(sc.U.T @ sc.U, G)


def test_scaler_family_errors():
    F = riesz_r3()
    with pytest.raises(NotSPD):
        scaler_family_from_coeffs(F, [[1.0], [-1.0, 1.0]])
    with pytest.raises(ZeroCoefficient):
        scaler_family_from_coeffs(F, [[0.0], [1.0, 1.0]])
    with pytest.raises(DimensionMismatch):
        scaler_family_from_coeffs(F, [[1.0], [1.0]])
    with pytest.raises(ValueError):
        scaler_family_from_coeffs(F, [[1.0], [1.0, 1.0]], isometry=2 * np.eye(3))


def test_scaler_family_norms_and_isometry(rng):
    for _ in range(30):
        F = random_riesz_basis(int(rng.integers(1, 6)), rng)
        coeffs = [rng.uniform(0.2, 3.0, size=r) for r in F.ranks]
        E = random_orthogonal(F.ambient_dim, rng)
        sc = scaler_family_from_coeffs(F, coeffs, isometry=E)
        local = np.hstack([W.basis for W in F.subspaces])
        assert np.allclose(np.linalg.norm(sc.U @ local, axis=0) ** 2, np.concatenate(coeffs))
        assert verify_scaling(F, sc).is_parseval


# -- properties ---------------------------------------------------------------

def _parseval_or_random(F, rng, k):
    if k % 2 == 0:
        sc = construct_riesz_scaler(F, "spd-inverse-sqrt")
        return ScalingPair(random_orthogonal(F.ambient_dim, rng) @ sc.U, sc.gammas)
    return ScalingPair(random_invertible(F.ambient_dim, rng), random_weights(len(F), rng))


def test_mapped_frame_equivalence(rng):
    for k in range(100):
        F = random_riesz_basis(int(rng.integers(1, 7)), rng)
        sc = _parseval_or_random(F, rng, k)
        a = verify_scaling(F, sc).is_parseval
        b = verify_scaling(F.mapped(sc.U), ScalingPair(np.eye(F.ambient_dim), sc.gammas)).is_parseval
        assert a == b


def test_invariant_operator_does_not_change_scalability(rng):
    # orthogonal frames and U block diagonal on the same blocks: U^T U W_i = W_i
    for k in range(100):
        n = int(rng.integers(2, 7))
        Q = random_orthogonal(n, rng)
        cuts = np.sort(rng.choice(np.arange(1, n), size=int(rng.integers(0, n - 1)), replace=False))
        bounds = [0, *cuts, n]
        spans = [list(Q[:, a:b].T) for a, b in zip(bounds[:-1], bounds[1:])]
        w = random_weights(len(spans), rng)
        F = FusionFrame.from_spans(spans, w)
        blocks = np.zeros((n, n))
        for a, b in zip(bounds[:-1], bounds[1:]):
            blocks[a:b, a:b] = random_orthogonal(b - a, rng) * rng.uniform(0.5, 2)
        U = Q @ blocks @ Q.T
        gam = 1 / w if k % 2 == 0 else random_weights(len(F), rng)
        for W in F.subspaces:
            assert subspace_relation(map_subspace(U.T @ U, W), W).equal
        assert (verify_scaling(F, ScalingPair(U, gam)).is_parseval
                == verify_scaling(F, ScalingPair(np.eye(n), gam)).is_parseval)


def test_d_operator_matches_parseval(rng):
    seen = set()
    for k in range(100):
        F = random_riesz_basis(int(rng.integers(1, 7)), rng)
        sc = _parseval_or_random(F, rng, k)
        chk = d_operator_check(F, sc)
        p = verify_scaling(F, sc).is_parseval
        assert chk.equivalent_to_parseval
        assert (chk.residual <= 1e-9) == p
        seen.add(p)
    assert seen == {True, False}


def test_riesz_conditions_agree(rng):
    seen = set()
    for k in range(100):
        F = random_riesz_basis(int(rng.integers(1, 7)), rng)
        if k % 2 == 0:
            coeffs = [rng.uniform(0.2, 3.0, size=r) for r in F.ranks]
            U = scaler_family_from_coeffs(F, coeffs, random_orthogonal(F.ambient_dim, rng)).U
        else:
            U = random_invertible(F.ambient_dim, rng)
        c = check_riesz_conditions(F, U)
        vals = {c[key] for key in ("i", "ii", "iii", "iv")}
        assert len(vals) == 1 and c.consistent
        seen |= vals
    assert seen == {True, False}


def test_construct_methods_agree(rng):
    for _ in range(100):
        F = random_riesz_basis(int(rng.integers(1, 9)), rng)
        Sinv = np.linalg.inv(frame_operator(F))
        a = construct_riesz_scaler(F, "spd-inverse-sqrt").U
        b = construct_riesz_scaler(F, "synthesis-inverse").U
        for U in (a, b):
            assert np.linalg.norm(U.T @ U - Sinv) <= 1e-9 * max(1, np.linalg.norm(Sinv))
        assert is_orthogonal_matrix(a @ np.linalg.inv(b))


def test_dual_transfers(rng):
    for _ in range(50):
        F = random_riesz_basis(int(rng.integers(1, 7)), rng)
        U = construct_riesz_scaler(F).U
        dual = canonical_dual(F)
        for V in (U @ frame_operator(F), np.linalg.inv(U.T)):
            assert verify_scaling(dual, ScalingPair.inverse_weights(dual, V)).is_parseval
        for target in ("canonical_dual", "dual_inverse_adjoint"):
            transfer_scaling(F, U, target)
        T = random_invertible(F.ambient_dim, rng)
        G, sc = transfer_scaling(F, U, "transformed", T=T)
        assert np.allclose(projector(G[0].subspace), projector(map_subspace(T, F[0].subspace)))
