import json

import numpy as np
import pytest

from apcone.planes import (PlaneSpec, U_STAR, build_plane, conjugate,
                           plucker_coords, plucker_relation_defect,
                           rotation_matrix, singularity_degree, sym_basis6,
                           type2_basis)
from apcone.symcore import AffineSubspace, eig_sym, frob_inner, frob_norm


def test_type2_basis_matches_template():
    E, _ = build_plane(PlaneSpec("type2", (1.0, 0.0, 0.0, 1.0, 0.0)))
    want = [np.array([[-2, 1, 0], [1, 0, 0], [0, 0, 0]], float),
            np.array([[0, 0, -1], [0, 2, 0], [-1, 0, 0]], float),
            np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], float)]
    for B, W in zip(E.basis, want):
        assert np.array_equal(B, W)


@pytest.mark.parametrize("spec", [
    PlaneSpec("type2", (0.3, -0.8, 0.5, 1.2, -0.1)),
    PlaneSpec("type2", (0.3, -0.8, 0.5, 1.2, -0.1), theta=0.9),
    PlaneSpec("type1", (0.2, -0.4, 0.7, 0.1, 1.0, 0.3, -0.2, 0.5), mu=0.8),
])
def test_anchor_satisfies_constraints(spec):
    E, (A1, A2, A3) = build_plane(spec)
    assert frob_inner(A1, E.anchor) == pytest.approx(1.0, abs=1e-14)
    assert frob_inner(A2, E.anchor) == pytest.approx(0.0, abs=1e-14)
    assert frob_inner(A3, E.anchor) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("spec", [
    PlaneSpec("type2", (0.3, -0.8, 0.5, 1.2, -0.1), theta=0.4),
    PlaneSpec("type1", (0.2, -0.4, 0.7, 0.1, 1.0, 0.3, -0.2, 0.5),
              mu=0.8, theta=-1.1, reflect=True),
])
def test_plane_points_satisfy_constraints(spec):
    rng = np.random.RandomState(0)
    E, (A1, A2, A3) = build_plane(spec)
    for _ in range(10):
        X = E.point(rng.uniform(-1, 1, 3))
        assert frob_inner(A1, X) == pytest.approx(1.0, abs=1e-12)
        assert frob_inner(A2, X) == pytest.approx(0.0, abs=1e-12)
        assert frob_inner(A3, X) == pytest.approx(0.0, abs=1e-12)


def test_conjugation_equivariance():
    base = PlaneSpec("type2", (0.5, 0.2, -0.7, 1.1, 0.4))
    rot = PlaneSpec("type2", base.c, theta=0.77, reflect=True)
    E0, A0 = build_plane(base)
    E1, A1 = build_plane(rot)
    P = rotation_matrix(0.77, True)
    assert frob_norm(E1.anchor - conjugate(P, E0.anchor)) <= 1e-14
    for B0, B1 in zip(E0.basis, E1.basis):
        assert np.abs(B1 - conjugate(P, B0)).max() <= 1e-14
    for M0, M1 in zip(A0, A1):
        assert np.abs(M1 - conjugate(P, M0)).max() <= 1e-14


@pytest.mark.parametrize("spec,expected", [
    (PlaneSpec("type2", (0.0, 0.0, 0.0, 1.0, 0.0)), 2),
    (PlaneSpec("type2", (0.5, -0.5, 2.0, 0.0, 1.0)), 1),
    (PlaneSpec("type2", (1.0, 0.0, 0.0, 1.0, 0.0), theta=2.0), 2),
    (PlaneSpec("type1", (0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0), mu=2.0), 1),
    (PlaneSpec("type1", (1.0, 2.0, 0.1, 0.3, 0.0, 0.2, 0.9, -1.0), mu=0.1), 1),
])
def test_singularity_degree(spec, expected):
    assert singularity_degree(spec) == expected


@pytest.mark.parametrize("spec", [
    PlaneSpec("type2", (0.6, -0.3, 0.2, 0.9, 0.5)),
    PlaneSpec("type2", (0.0, 0.0, 0.0, 1.0, 0.0), theta=1.3),
    PlaneSpec("type1", (0.3, 0.1, -0.2, 0.4, 1.0, 0.0, 0.5, 0.2), mu=1.5),
])
def test_sampled_points_leave_psd_cone(spec):
    # heuristic check that the plane meets the cone only near the anchor
    rng = np.random.RandomState(42)
    E, _ = build_plane(spec)
    for _ in range(10 ** 4):
        p = rng.uniform(-1, 1, 3)
        if np.linalg.norm(p) < 1e-2:
            continue
        lam_min = eig_sym(E.point(p)).eigenvalues[-1]
        assert lam_min < 0.0


def test_spec_validation():
    with pytest.raises(ValueError):
        PlaneSpec("type2", (1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        PlaneSpec("type1", (0,) * 8, mu=1.0)       # A2 == 0
    with pytest.raises(ValueError):
        PlaneSpec("type1", (0, 0, 0, 0, 1, 0, 0, 0), mu=-1.0)
    with pytest.raises(ValueError):
        PlaneSpec("type3", (1, 2, 3, 4, 5))


def test_spec_json_round_trip():
    for spec in (PlaneSpec("type2", (1, 0, 0, 1, 0), theta=0.2),
                 PlaneSpec("type1", (1, 0, 0, 0, 1, 0, 0, 2), mu=0.5,
                           reflect=True)):
        back = PlaneSpec.from_json(spec.to_json())
        assert back == spec
    doc = json.loads(PlaneSpec("type2", (1, 0, 0, 1, 0)).to_json())
    assert doc == {"kind": "type2", "c": [1.0, 0.0, 0.0, 1.0, 0.0],
                   "theta": 0.0, "reflect": False}


# --- Pluecker ----------------------------------------------------------------

def test_plucker_standard_triple():
    e = sym_basis6()
    E = AffineSubspace.from_basis(U_STAR, np.array([e[0], e[1], e[2]]))
    coords = plucker_coords(E)
    assert coords[0] == pytest.approx(1.0, abs=1e-15)
    assert np.abs(coords[1:]).max() <= 1e-15


def test_plucker_scaling_multilinearity():
    spec = PlaneSpec("type2", (0.4, 0.1, -0.6, 1.0, 0.3))
    E, _ = build_plane(spec)
    scaled = AffineSubspace.from_basis(
        E.anchor, np.array([3.0 * E.basis[0], E.basis[1], E.basis[2]]))
    assert np.allclose(plucker_coords(scaled), 3.0 * plucker_coords(E),
                       rtol=1e-12, atol=1e-14)


def test_plucker_relations_random_planes():
    rng = np.random.RandomState(9)
    for _ in range(10):
        c = rng.uniform(-1.5, 1.5, 5)
        c[3] = rng.uniform(0.5, 1.5)
        spec = PlaneSpec("type2", tuple(c), theta=float(rng.uniform(0, 6.3)))
        E, _ = build_plane(spec)
        coords = plucker_coords(E)
        scale = max(1.0, float(np.max(np.abs(coords))) ** 2)
        assert plucker_relation_defect(coords) / scale < 1e-10


def test_plucker_needs_3plane():
    B = type2_basis((0, 0, 0, 1, 0))[:2]
    E = AffineSubspace.from_basis(U_STAR, B)
    with pytest.raises(ValueError):
        plucker_coords(E)


def test_rate_classification_matches_singularity_degree():
    # Rate classes separate the families: degree-1 planes follow the
    # k^(-1/2) law (1/dist^2 grows linearly in k), while a degree-2 plane
    # started on its slowest curve follows the k^(-1/6) law (1/dist^6
    # linear in k).
    from apcone.apengine import run_ap
    from apcone.rates import fit_inverse_power
    from apcone.slowcurve import curve_point

    type1 = PlaneSpec("type1", (0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0),
                      mu=2.0)
    E1, _ = build_plane(type1)
    trace = run_ap(E1, np.array([0.05, -0.03, 0.04]), max_iter=4000, tol=0.0)
    early = fit_inverse_power(trace, 2, (100, 1000))
    late = fit_inverse_power(trace, 2, (2000, 4000))
    assert early.slope > 0.05
    assert late.slope == pytest.approx(early.slope, rel=0.15)
    assert late.rmse < 1e-3 * trace.dists[4000] ** -2.0

    slow = PlaneSpec("type2", (1.0, 0.0, 0.0, 1.0, 0.0))
    E2, _ = build_plane(slow)
    start = E2.coefficients(curve_point(slow, 0.1).G)
    trace = run_ap(E2, start, max_iter=4000, tol=0.0)
    inv6 = fit_inverse_power(trace, 6, (100, 4000))
    assert inv6.slope > 0.0
    assert inv6.rmse < 1e-4 * trace.dists[4000] ** -6.0
    # on the k^(-1/2) scale the same trace is degenerate: its inverse-square
    # slope collapses relative to the degree-1 plane's
    slow_inv2 = fit_inverse_power(trace, 2, (100, 4000))
    assert slow_inv2.slope < 0.01 * early.slope


def test_constraints_match_golden_text_block():
    # constraint triple of the c = (0,0,1,1,0) instance, row-major blocks
    from apcone.symcore import read_sym_matrices

    golden = """
    # A1
    1 0 0
    0 0 1
    0 1 0

    # A2
    0 0 1
    0 1 0
    1 0 0

    # A3
    0 0 0
    0 0 0
    0 0 1
    """
    want = read_sym_matrices(golden)
    _, got = build_plane(PlaneSpec("type2", (0.0, 0.0, 1.0, 1.0, 0.0)))
    assert len(want) == 3
    for W, G in zip(want, got):
        assert np.array_equal(W, G)
