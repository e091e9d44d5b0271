import numpy as np
import pytest

from spinorsurf.errors import DegenerateParametrizationError, ValidationError
from spinorsurf.patch import (
    build_patch,
    export_csv,
    export_obj,
    interior,
    mean_curvature_frame,
    mean_curvature_vector,
    patch_from_positions,
    rotated_patch,
    shape_operator,
    structure_residuals,
)
from spinorsurf.quaternion import random_unit_quaternion
from spinorsurf.surfaces import SURFACE_NAMES, analytic_surface

ALL_SURFACES = list(SURFACE_NAMES)


def test_plane_metric_and_B():
    p = build_patch("plane", resolution=16)
    assert np.abs(p.g - np.eye(2)).max() < 1e-12
    assert np.abs(p.B).max() < 1e-12
    assert np.abs(p.omega12).max() < 1e-12
    assert np.abs(p.omega34).max() < 1e-12


def test_clifford_torus_metric():
    p = build_patch("clifford-torus", resolution=16)
    assert np.abs(p.g[..., 0, 0] - 0.5).max() < 1e-12
    assert np.abs(p.g[..., 1, 1] - 0.5).max() < 1e-12
    assert np.abs(p.g[..., 0, 1]).max() < 1e-12


def test_sphere_metric():
    p = build_patch("sphere", resolution=16, params={"radius": 2.0})
    U = p.us[:, None] * np.ones_like(p.vs)[None, :]
    assert np.abs(p.g[..., 0, 0] - 4.0).max() < 1e-10
    assert np.abs(p.g[..., 1, 1] - 4.0 * np.sin(U) ** 2).max() < 1e-10


@pytest.mark.parametrize("name", ALL_SURFACES)
def test_frame_orthonormal_and_oriented(name):
    p = build_patch(name, resolution=16)
    gram = np.einsum("...ai,...bi->...ab", p.frame, p.frame)
    assert np.abs(gram - np.eye(4)).max() < 1e-10
    dets = np.linalg.det(p.frame)
    assert np.abs(dets - 1.0).max() < 1e-10


@pytest.mark.parametrize("name", ALL_SURFACES)
def test_B_symmetric(name):
    p = build_patch(name, resolution=16)
    assert np.abs(p.B - p.B.transpose(0, 1, 3, 2, 4)).max() < 1e-10


def test_shape_operator_plane_and_sphere():
    p = build_patch("plane", resolution=16)
    assert np.abs(shape_operator(p, 3)).max() < 1e-12
    s = build_patch("sphere", resolution=16, params={"radius": 2.0})
    # seed frame picks e3 = outward radial normal, so S_{e3} = -(1/r) Id
    S3 = shape_operator(s, 3)
    assert np.abs(S3 - (-0.5) * np.eye(2)).max() < 1e-9
    assert np.abs(shape_operator(s, 4)).max() < 1e-9


def test_shape_operator_clifford_torus():
    p = build_patch("clifford-torus", resolution=16)
    S3 = shape_operator(p, 3)
    S4 = shape_operator(p, 4)
    # e3 = (0,0,cos v,sin v): S_{e3} = diag(0, -sqrt(2)); e4 = +-(cos u,sin u,0,0)
    assert np.abs(S3 - np.diag([0.0, -np.sqrt(2)])).max() < 1e-9
    evals = np.linalg.eigvalsh(S4)
    assert np.abs(np.abs(evals).max(axis=-1) - np.sqrt(2)).max() < 1e-9
    assert np.abs(np.abs(evals).min(axis=-1)).max() < 1e-9


def test_mean_curvature_plane_zero():
    p = build_patch("plane", resolution=16)
    assert np.abs(mean_curvature_vector(p)).max() < 1e-12


def test_mean_curvature_clifford_torus_is_minus_position():
    p = build_patch("clifford-torus", resolution=24)
    H = mean_curvature_vector(p)
    assert np.abs(H + p.F).max() < 1e-9


def test_mean_curvature_sphere():
    p = build_patch("sphere", resolution=16)
    H = mean_curvature_vector(p)
    n = p.F / np.linalg.norm(p.F, axis=-1)[..., None]
    assert np.abs(np.linalg.norm(H, axis=-1) - 1.0).max() < 1e-9
    assert np.abs(H + n).max() < 1e-9  # points inward for the outward-radial e3


def test_mean_curvature_tangent_components_vanish():
    for name in ALL_SURFACES:
        p = build_patch(name, resolution=12)
        H = mean_curvature_frame(p)
        assert np.abs(H[..., :2]).max() == 0.0


def test_gauss_curvature_analytic_values():
    s = analytic_surface("sphere", {"radius": 2.0})
    p = build_patch("sphere", resolution=12, params={"radius": 2.0})
    assert np.abs(p.curvature().K - 0.25).max() < 1e-10
    e = build_patch("enneper", resolution=12)
    U = e.us[:, None] * np.ones_like(e.vs)[None, :]
    V = np.ones_like(e.us)[:, None] * e.vs[None, :]
    expect = -4.0 / (1.0 + U**2 + V**2) ** 4
    assert np.abs(e.curvature().K - expect).max() < 1e-10
    t = build_patch("clifford-torus", resolution=12)
    assert np.abs(t.curvature().K).max() < 1e-10


@pytest.mark.parametrize("name", ALL_SURFACES)
def test_structure_residuals_analytic(name):
    p = build_patch(name, resolution=32)
    reps = p.structure_residuals(c=0.0)
    if name == "plane":
        for r in reps.values():
            assert r.max < 1e-12
    # Gauss residual is exact in analytic mode (exact K, exact B)
    assert reps["gauss"].max < 1e-9


@pytest.mark.parametrize("name", ["sphere", "clifford-torus", "holomorphic-graph"])
def test_structure_residuals_converge(name):
    reps = {}
    for n in (24, 48):
        p = build_patch(name, resolution=n)
        reps[n] = p.structure_residuals(c=0.0)
    for key in ("ricci", "codazzi_1", "codazzi_2"):
        coarse, fine = reps[24][key].max, reps[48][key].max
        if coarse < 1e-11 and fine < 1e-11:
            continue
        assert np.log2(coarse / fine) > 1.7, (key, coarse, fine)


def test_sampled_converges_to_analytic():
    errs = []
    for n in (65, 129):
        a = build_patch("catenoid", resolution=n)
        s = build_patch("catenoid", resolution=n, mode="sampled")
        errs.append(
            max(
                np.abs(interior(a.frame - s.frame)).max(),
                np.abs(interior(a.B - s.B)).max(),
                np.abs(interior(a.g - s.g)).max(),
            )
        )
    order = np.log2(errs[0] / errs[1])
    assert order > 1.9, errs


def test_gauss_residual_sampled_converges():
    maxes = []
    for n in (24, 48):
        p = build_patch("sphere", resolution=n, mode="sampled")
        maxes.append(p.structure_residuals()["gauss"].max)
    assert np.log2(maxes[0] / maxes[1]) > 1.7


def test_degenerate_parametrization_raises():
    F = np.zeros((12, 12, 4))
    us = np.linspace(0, 1, 12)
    vs = np.linspace(0, 1, 12)
    U, V = np.meshgrid(us, vs, indexing="ij")
    F[..., 0] = U
    F[..., 1] = U  # rank-1 differential
    with pytest.raises(DegenerateParametrizationError):
        patch_from_positions(F, (0, 1, 0, 1))


def test_resolution_validation():
    with pytest.raises(ValidationError):
        build_patch("plane", resolution=4)
    with pytest.raises(ValidationError):
        build_patch("plane", domain=(0, 0, 0, 1), resolution=16)


def test_rotated_patch_geometry():
    rng = np.random.default_rng(20)
    p = build_patch("catenoid", resolution=12)
    qp = random_unit_quaternion(rng)
    qm = random_unit_quaternion(rng)
    r = rotated_patch(p, qp, qm)
    gram = np.einsum("...ai,...bi->...ab", r.frame, r.frame)
    assert np.abs(gram - np.eye(4)).max() < 1e-10
    assert np.abs(np.linalg.norm(r.F, axis=-1) - np.linalg.norm(p.F, axis=-1)).max() < 1e-10


def test_interior_margin():
    a = np.arange(100).reshape(10, 10)
    assert interior(a).shape == (4, 4)
    assert interior(a, margin=1).shape == (8, 8)


def test_exports(tmp_path):
    p = build_patch("plane", resolution=8)
    csv = tmp_path / "mesh.csv"
    obj = tmp_path / "mesh.obj"
    export_csv(csv, p.us, p.vs, p.F)
    export_obj(obj, p.F)
    text = csv.read_text().splitlines()
    assert text[0] == "u,v,x1,x2,x3,x4"
    assert len(text) == 1 + 64
    lines = obj.read_text().splitlines()
    assert sum(1 for ln in lines if ln.startswith("v ")) == 64
    assert sum(1 for ln in lines if ln.startswith("f ")) == 2 * 49
