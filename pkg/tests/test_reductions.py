import numpy as np
import pytest

from spinorsurf.clifford import SpinorPair
from spinorsurf.errors import MinimalityError, NormConditionError, ValidationError
from spinorsurf.patch import build_patch, interior, patch_from_positions
from spinorsurf.quaternion import (
    FRAME_QUATS,
    K as QK,
    ONE,
    Quaternion,
    random_unit_quaternion,
)
from spinorsurf.reductions import (
    IntrinsicSpinorField,
    clifford_transport_residual,
    friedrich_immersion,
    friedrich_lift,
    friedrich_minus_gauge_constant,
    friedrich_residual,
    identification_residual,
    integrate_multiplicative_flow,
    intrinsic_dirac,
    intrinsic_from_restriction,
    lawson_transform,
    morel_beta,
    morel_residual,
    morel_sphere_immersion,
)
from spinorsurf.spinorfield import dirac_residual, restrict_parallel_spinor
from spinorsurf.weierstrass import verify_immersion, xi_form, xi_on_vector

E1, E2, E3, E4 = FRAME_QUATS
UNIT = SpinorPair(ONE, ONE)


def r3_sphere(n):
    return build_patch("sphere", resolution=n, frame_policy="r3")


def s3_patch(name, n):
    return build_patch(name, resolution=n, frame_policy="s3")


# -- identification -------------------------------------------------------------


def test_reduction_patches_have_flat_normal_connection():
    for patch in (r3_sphere(16), s3_patch("clifford-torus", 16), s3_patch("sphere", 16)):
        assert np.abs(patch.omega34).max() < 1e-10


def test_intrinsic_needs_reduction_frame():
    patch = build_patch("sphere", resolution=16)  # seed policy
    with pytest.raises(ValidationError):
        IntrinsicSpinorField(patch, Quaternion.zeros(patch.shape), np.zeros(patch.shape))


def test_identification_plane_and_sphere():
    plane = build_patch("plane", resolution=16, frame_policy="r3")
    psf, sf = intrinsic_from_restriction(plane)
    assert intrinsic_dirac(psf).norm().max() < 1e-12
    assert identification_residual(psf, sf).max < 1e-12
    psf, sf = intrinsic_from_restriction(r3_sphere(24))
    assert identification_residual(psf, sf).max < 1e-10


def test_clifford_transport_is_algebraic():
    psf, _ = intrinsic_from_restriction(r3_sphere(16))
    assert clifford_transport_residual(psf) < 1e-12


# -- hyperplane reduction ----------------------------------------------------------


def test_friedrich_equation_from_restriction():
    maxes = []
    for n in (24, 48):
        psf, _ = intrinsic_from_restriction(r3_sphere(n))
        maxes.append(friedrich_residual(psf).max)
    assert np.log2(maxes[0] / maxes[1]) > 1.8, maxes


def test_friedrich_lift_solves_dirac():
    patch = r3_sphere(33)
    psf, _ = intrinsic_from_restriction(patch)
    sf = friedrich_lift(psf)
    assert np.abs(sf.values.plus.norm() - 1).max() < 1e-10
    assert np.abs(sf.values.minus.norm() - 1).max() < 1e-10
    rep = dirac_residual(sf)
    assert rep.max < 5e-3


def test_friedrich_lift_checks_norm():
    patch = r3_sphere(16)
    psf, _ = intrinsic_from_restriction(patch)
    bad = IntrinsicSpinorField(patch, psf.psi.scale if False else 2.0 * psf.psi, psf.H)
    with pytest.raises(NormConditionError):
        friedrich_lift(bad)


def test_friedrich_immersion_stays_in_hyperplane():
    prev = None
    for n in (24, 48):
        psf, _ = intrinsic_from_restriction(r3_sphere(n))
        sf, rec, reports = friedrich_immersion(psf)
        assert reports["xi_nu_constant"].max < 1e-10
        assert reports["xi_tangent_imaginary"].max < 1e-10
        drift = reports["hyperplane_drift"].max
        if prev is not None and prev > 1e-12:
            assert drift < prev  # shrinking with refinement
        prev = drift
    assert prev < 1e-8


def test_friedrich_dirac_halves_identity():
    # D phi^- = nu . D phi^+ for the lifted field
    from spinorsurf.clifford import clifford_act, half_minus, half_plus
    from spinorsurf.quaternion import J as QJ
    from spinorsurf.spinorfield import dirac

    patch = r3_sphere(33)
    psf, _ = intrinsic_from_restriction(patch)
    sf = friedrich_lift(psf)
    lhs = dirac(patch, half_minus(sf.values))
    rhs = clifford_act(QJ, dirac(patch, half_plus(sf.values)))
    assert interior((lhs - rhs).norm()).max() < 5e-3


def test_friedrich_verify_immersion_families():
    patch = r3_sphere(33)
    psf, _ = intrinsic_from_restriction(patch)
    sf, rec, _ = friedrich_immersion(psf)
    fams = verify_immersion(rec, patch, sf)
    assert fams["tangent_isometry"].max < 1e-10
    assert fams["normal_isometry"].max < 1e-10
    assert fams["second_form"].max < 2e-2
    assert fams["normal_connection"].max < 2e-2


def test_friedrich_gauge_constant():
    # any valid solution's minus half differs from -nu.phi^+ by a constant
    # unit right factor; for restrictions it is conj(a0) * K * b0
    rng = np.random.default_rng(7)
    patch = r3_sphere(24)
    phi0 = SpinorPair(random_unit_quaternion(rng), random_unit_quaternion(rng))
    sf = restrict_parallel_spinor(patch, phi0)
    c = friedrich_minus_gauge_constant(sf)
    expect = phi0.plus.conj() * QK * phi0.minus
    assert np.abs(c.data - expect.data).max() < 1e-10


# -- sphere reduction ---------------------------------------------------------------


def test_morel_equation_from_restriction():
    maxes = []
    for n in (24, 48):
        psf, _ = intrinsic_from_restriction(s3_patch("clifford-torus", n))
        maxes.append(morel_residual(psf).max)
    assert np.log2(maxes[0] / maxes[1]) > 1.8, maxes
    psf, _ = intrinsic_from_restriction(s3_patch("sphere", 24))
    assert np.abs(psf.H).max() < 1e-9  # great sphere is minimal inside the 3-sphere
    assert morel_residual(psf).max < 5e-2


@pytest.mark.parametrize("name", ["sphere", "clifford-torus"])
def test_morel_immersion_on_unit_sphere(name):
    drifts = []
    for n in (24, 48):
        patch = s3_patch(name, n)
        psf, sf = intrinsic_from_restriction(patch)
        base = xi_on_vector(sf, E3)[0, 0]
        result = morel_sphere_immersion(psf, base_value=base.data)
        assert result.immersed
        drifts.append(result.radius_drift.max)
        assert result.compatibility.max < 0.5
        # F agrees with xi(nu) built from the full restricted field
        xin = xi_on_vector(sf, E3)
        assert np.abs(interior(result.rec.F - xin.data)).max() < 50 * patch.hu**2
        # and phi^- = -nu . phi^+ . F reproduces the minus half
        from spinorsurf.quaternion import J as QJ

        model = -(QJ * sf.values.plus) * Quaternion.from_array(result.rec.F)
        assert np.abs(interior((model - sf.values.minus).norm())).max() < 50 * patch.hu**2
    assert np.log2(drifts[0] / drifts[1]) > 1.8, drifts


def test_morel_clifford_torus_dirac_form():
    # minimal in the 3-sphere: D phi = -position . phi
    patch = s3_patch("clifford-torus", 33)
    sf = restrict_parallel_spinor(patch, UNIT)
    pos_frame = Quaternion.from_array(patch.ambient_to_frame(patch.F))
    rep = dirac_residual(sf, hvec=-pos_frame)
    assert rep.max < 5e-3


def test_morel_zero_flow_flagged():
    patch = s3_patch("sphere", 16)
    zero = Quaternion.zeros(patch.shape)
    rec, immersed = integrate_multiplicative_flow(patch, zero, zero, np.array([1.0, 0, 0, 0]))
    assert not immersed
    assert np.abs(rec.F - np.array([1.0, 0, 0, 0])).max() < 1e-14


# -- the CMC transform ----------------------------------------------------------------


def test_lawson_clifford_torus_cmc():
    errs = []
    for n in (24, 48):
        patch = s3_patch("clifford-torus", n)
        sf = restrict_parallel_spinor(patch, UNIT)
        result = lawson_transform(sf)
        assert result.normal_defect < 1e-10
        assert result.planarity.max < 1e-10
        errs.append(np.abs(interior(result.mean_curvature) + 1.0).max())
    assert np.log2(errs[0] / errs[1]) > 1.8, errs
    assert errs[-1] < 5e-3


def test_lawson_flip_normal_negates_image():
    # flipping N negates the image surface (a rigid rotation in R^4), so the
    # curvature against the transported normal stays -1; the sign convention
    # flip shows up against any fixed normal of the image
    patch = s3_patch("clifford-torus", 24)
    sf = restrict_parallel_spinor(patch, UNIT)
    plain = lawson_transform(sf)
    flipped = lawson_transform(sf, flip_normal=True)
    assert np.abs(flipped.rec.F + plain.rec.F).max() < 1e-10
    assert np.abs(interior(flipped.mean_curvature) + 1.0).max() < 5e-2


def test_lawson_great_sphere_gives_unit_sphere():
    patch = s3_patch("sphere", 33)
    sf = restrict_parallel_spinor(patch, UNIT)
    result = lawson_transform(sf)
    assert np.abs(interior(result.mean_curvature) + 1.0).max() < 5e-3
    # round: distances from the center of curvature are 1; the carried
    # normal is outward (H = -1 against it), so the center is p - n
    image_pts = result.rec.F[..., 1:]
    normal = xi_on_vector(result.field, Quaternion(0, 0, 1, 0)).data[..., 1:]
    centers = image_pts - normal
    center = centers.reshape(-1, 3).mean(axis=0)
    assert np.abs(centers - center).max() < 5e-3
    radii = np.linalg.norm(image_pts - center, axis=-1)
    assert np.abs(interior(radii - 1.0)).max() < 5e-3


def test_lawson_rejects_non_minimal_source():
    # a latitude 2-sphere inside the 3-sphere is not minimal there
    n = 24
    r0 = 0.7
    us = np.linspace(0.55, 1.3, n)
    vs = np.linspace(0.2, 1.4, n)
    U, V = np.meshgrid(us, vs, indexing="ij")
    F = np.stack(
        [
            np.sin(r0) * np.sin(U) * np.cos(V),
            np.sin(r0) * np.sin(U) * np.sin(V),
            np.sin(r0) * np.cos(U),
            np.full_like(U, np.cos(r0)),
        ],
        axis=-1,
    )
    patch = patch_from_positions(F, (0.55, 1.3, 0.2, 1.4), frame_policy="s3")
    sf = restrict_parallel_spinor(patch, UNIT)
    with pytest.raises(MinimalityError):
        lawson_transform(sf)
