import numpy as np
import pytest

from spinorsurf.clifford import (
    SpinorPair,
    clifford_act,
    half_minus,
    half_plus,
    project_quadrants,
    real_inner,
    spin4_frame_act,
)
from spinorsurf.errors import QuadrantVanishingError
from spinorsurf.patch import build_patch, interior, rotated_patch
from spinorsurf.quaternion import ONE, Quaternion, random_unit_quaternion
from spinorsurf.reports import convergence_order
from spinorsurf.spinorfield import (
    SpinorField,
    a_form_residuals,
    a_forms,
    compute_eta,
    covariant_derivative,
    curvature_residual,
    dirac,
    dirac_field,
    dirac_residual,
    eta_residual,
    gauss_formula_residual,
    norm_condition_residual,
    recover_B,
    recover_B_simplified,
    restrict_parallel_spinor,
    spin_lift,
)

UNIT = SpinorPair(ONE, ONE)


def smooth_test_field(patch, amp=1.0):
    """A smooth non-solution spinor field for derivative checks."""
    U = patch.us[:, None] * np.ones_like(patch.vs)[None, :]
    V = np.ones_like(patch.us)[:, None] * patch.vs[None, :]
    a = Quaternion(
        1.0 + amp * np.sin(U), amp * np.cos(V), amp * 0.3 * np.sin(U + V), amp * 0.1 * np.cos(2 * U)
    )
    b = Quaternion(
        1.0 - amp * 0.4 * np.cos(U), amp * 0.2 * np.sin(V), amp * 0.5 * np.cos(U - V), amp * 0.3 * np.sin(V)
    )
    return SpinorPair(a, b)


# -- spin lift and restriction ------------------------------------------------


@pytest.mark.parametrize("name", ["plane", "sphere", "catenoid", "enneper", "clifford-torus", "holomorphic-graph"])
def test_spin_lift_reproduces_frame(name):
    patch = build_patch(name, resolution=24)
    qp, qm = spin_lift(patch)
    assert np.abs(qp.norm() - 1).max() < 1e-12


def test_restriction_on_plane_is_constant():
    patch = build_patch("plane", resolution=16)
    rng = np.random.default_rng(0)
    phi0 = SpinorPair(random_unit_quaternion(rng), random_unit_quaternion(rng))
    sf = restrict_parallel_spinor(patch, phi0)
    assert np.abs(sf.values.plus.data - phi0.plus.data).max() < 1e-12
    assert np.abs(sf.values.minus.data - phi0.minus.data).max() < 1e-12


@pytest.mark.parametrize("name", ["sphere", "catenoid", "clifford-torus"])
def test_restriction_half_norms_constant(name):
    patch = build_patch(name, resolution=24)
    sf = restrict_parallel_spinor(patch, UNIT)
    assert np.abs(sf.values.plus.norm() - 1).max() < 1e-10
    assert np.abs(sf.values.minus.norm() - 1).max() < 1e-10


def test_restriction_equivariance_under_rotation():
    rng = np.random.default_rng(1)
    patch = build_patch("catenoid", resolution=16)
    qp = random_unit_quaternion(rng)
    qm = random_unit_quaternion(rng)
    rot = rotated_patch(patch, qp, qm)
    phi0 = SpinorPair(random_unit_quaternion(rng), random_unit_quaternion(rng))
    lhs = restrict_parallel_spinor(rot, phi0).values
    phi0_back = spin4_frame_act(qp.conj(), qm.conj(), phi0)
    rhs = restrict_parallel_spinor(patch, phi0_back).values
    # the two lifts may differ by a global sign
    d_plus = (lhs - rhs).max_abs()
    d_minus = (lhs + rhs).max_abs()
    assert min(d_plus, d_minus) < 1e-8


# -- covariant derivative ------------------------------------------------------


def test_constant_field_on_plane_is_parallel():
    patch = build_patch("plane", resolution=16)
    phi = SpinorPair(
        Quaternion.from_array(np.broadcast_to(ONE.data, patch.shape + (4,)).copy()),
        Quaternion.from_array(np.broadcast_to(ONE.data, patch.shape + (4,)).copy()),
    )
    for i in (0, 1):
        assert covariant_derivative(patch, phi, i).max_abs() < 1e-13
    assert dirac(patch, phi).max_abs() < 1e-13


def test_metric_compatibility_converges():
    errs = []
    for n in (24, 48):
        patch = build_patch("sphere", resolution=n)
        phi = smooth_test_field(patch)
        psi = smooth_test_field(patch, amp=0.7)
        worst = 0.0
        for i in (0, 1):
            lhs = patch.frame_deriv(real_inner(phi, psi), i)
            rhs = real_inner(covariant_derivative(patch, phi, i), psi) + real_inner(
                phi, covariant_derivative(patch, psi, i)
            )
            worst = max(worst, np.abs(interior(lhs - rhs)).max())
        errs.append(worst)
    assert np.log2(errs[0] / errs[1]) > 1.9, errs


def test_connection_commutes_with_quadrants():
    patch = build_patch("catenoid", resolution=16)
    phi = smooth_test_field(patch)
    grad = covariant_derivative(patch, phi, 0)
    gq = project_quadrants(grad)
    qg = [covariant_derivative(patch, part, 0) for part in project_quadrants(phi)]
    for a, b in zip(gq, qg):
        assert (a - b).max_abs() < 1e-10 * (1 + grad.max_abs())


# -- Dirac equation and residual suites ----------------------------------------


def test_dirac_block_structure():
    patch = build_patch("catenoid", resolution=16)
    phi = smooth_test_field(patch)
    rng = np.random.default_rng(2)
    pp, mm, pm, mp = project_quadrants(phi)
    noise = smooth_test_field(patch, amp=0.5)
    npp, nmm, npm, nmp = project_quadrants(noise)
    # replace the pp and pm parts: (D phi)^{pp} must not change
    modified = mm + mp + npp + npm
    d1 = project_quadrants(dirac(patch, phi))[0]
    d2 = project_quadrants(dirac(patch, modified))[0]
    assert (d1 - d2).max_abs() < 1e-11 * (1 + d1.max_abs())


@pytest.mark.parametrize("name", ["sphere", "catenoid", "clifford-torus"])
def test_dirac_residual_converges(name):
    reps = []
    for n in (24, 48):
        sf = restrict_parallel_spinor(build_patch(name, resolution=n), UNIT)
        reps.append(dirac_residual(sf))
    order = convergence_order(reps[0], reps[1])
    assert order is None or order > 1.9, [r.max for r in reps]
    assert reps[1].max < 5e-3


@pytest.mark.parametrize("name", ["sphere", "catenoid", "clifford-torus", "holomorphic-graph"])
def test_gauss_formula_residual_converges(name):
    maxes = []
    for n in (24, 48):
        sf = restrict_parallel_spinor(build_patch(name, resolution=n), UNIT)
        reps = gauss_formula_residual(sf)
        maxes.append(max(reps["e1"].max, reps["e2"].max))
    assert np.log2(maxes[0] / maxes[1]) > 1.9 or maxes[1] < 1e-12, maxes


def test_gauss_formula_plane_exact():
    sf = restrict_parallel_spinor(build_patch("plane", resolution=16), UNIT)
    reps = gauss_formula_residual(sf)
    assert reps["e1"].max < 1e-13
    assert reps["e2"].max < 1e-13


def test_norm_condition_restricted_and_scaled():
    patch = build_patch("catenoid", resolution=24)
    sf = restrict_parallel_spinor(patch, UNIT)
    reps = norm_condition_residual(sf)
    assert reps["plus"].max < 1e-10
    assert reps["minus"].max < 1e-10
    # rescaling one half keeps the condition (it constrains derivatives only)
    scaled = SpinorField(patch, SpinorPair(2.0 * sf.values.plus, sf.values.minus), 0.0)
    reps = norm_condition_residual(scaled)
    assert reps["plus"].max < 1e-9


def test_norm_condition_detects_non_solution():
    maxes = []
    for n in (24, 48):
        patch = build_patch("catenoid", resolution=n)
        sf = restrict_parallel_spinor(patch, UNIT)
        broken = SpinorField(patch, sf.values + smooth_test_field(patch, amp=0.2).scale(0.5), 0.0)
        reps = norm_condition_residual(broken)
        maxes.append(max(reps["plus"].max, reps["minus"].max))
    assert maxes[0] > 1e-2  # order-one residual
    assert np.log2(maxes[0] / maxes[1]) < 0.6  # and it does not converge away


def test_spinorial_curvature_identity():
    maxes = []
    for n in (24, 48):
        patch = build_patch("catenoid", resolution=n)
        phi = smooth_test_field(patch)
        sf = SpinorField(patch, phi, 0.0)
        maxes.append(curvature_residual(sf).max)
    assert np.log2(maxes[0] / maxes[1]) > 1.9, maxes
    # the flat torus gauge makes the identity exact to rounding
    patch = build_patch("clifford-torus", resolution=24)
    sf = SpinorField(patch, smooth_test_field(patch), 0.0)
    assert curvature_residual(sf).max < 1e-10


# -- recovery of B and eta ------------------------------------------------------


def test_recover_B_plane_zero():
    sf = restrict_parallel_spinor(build_patch("plane", resolution=16), UNIT)
    B = recover_B(sf)
    assert np.abs(B).max() < 1e-13


@pytest.mark.parametrize("name", ["catenoid", "clifford-torus"])
def test_recover_B_matches_geometry(name):
    errs = []
    for n in (24, 48):
        patch = build_patch(name, resolution=n)
        sf = restrict_parallel_spinor(patch, UNIT)
        B = recover_B(sf)
        errs.append(np.abs(interior(B - patch.B)).max())
    assert np.log2(errs[0] / errs[1]) > 1.9, errs


def test_recover_B_formulas_agree_at_unit_norms():
    patch = build_patch("catenoid", resolution=24)
    sf = restrict_parallel_spinor(patch, UNIT)
    full = recover_B(sf)
    simple = recover_B_simplified(sf)
    assert np.abs(full - simple).max() < 1e-12 * (1 + np.abs(full).max())


def test_recover_B_rejects_vanishing_halves():
    patch = build_patch("plane", resolution=16)
    zeros = Quaternion.zeros(patch.shape)
    sf = SpinorField(patch, SpinorPair(Quaternion.from_array(np.broadcast_to(ONE.data, patch.shape + (4,)).copy()), zeros), 0.0)
    with pytest.raises(QuadrantVanishingError):
        recover_B(sf)


def test_eta_commutator_identity():
    rng = np.random.default_rng(3)
    Bgrid = rng.normal(size=(6, 5, 2, 2, 2))
    Bgrid = 0.5 * (Bgrid + Bgrid.transpose(0, 1, 3, 2, 4))
    etas = compute_eta(Bgrid)
    from spinorsurf.quaternion import FRAME_QUATS

    for i in range(2):
        for j in range(2):
            z = etas[j].commutator_vector(FRAME_QUATS[i])
            expect = np.zeros((6, 5, 4))
            expect[..., 2:] = Bgrid[..., i, j, :]
            assert np.abs(z.data - expect).max() < 1e-12


@pytest.mark.parametrize("name", ["catenoid", "clifford-torus"])
def test_eta_residual_converges(name):
    maxes = []
    for n in (24, 48):
        sf = restrict_parallel_spinor(build_patch(name, resolution=n), UNIT)
        reps = eta_residual(sf)
        maxes.append(max(reps["e1"].max, reps["e2"].max))
    assert maxes[1] < 1e-12 or np.log2(maxes[0] / maxes[1]) > 1.9, maxes


def test_eta_residual_plane_zero():
    sf = restrict_parallel_spinor(build_patch("plane", resolution=16), UNIT)
    reps = eta_residual(sf)
    assert reps["e1"].max < 1e-13 and reps["e2"].max < 1e-13


# -- bilinear form suites --------------------------------------------------------


@pytest.mark.parametrize("name", ["sphere", "clifford-torus"])
def test_a_form_identities_converge(name):
    prev = None
    for n in (48, 96):
        sf = restrict_parallel_spinor(build_patch(name, resolution=n), UNIT)
        reps = a_form_residuals(sf)
        if prev is not None:
            for key in ("trace_F_pp", "symmetry_F_pp", "F_plus", "F_minus", "ratio_A"):
                coarse, fine = prev[key].max, reps[key].max
                if coarse < 1e-11 and fine < 1e-11:
                    continue
                assert np.log2(coarse / fine) > 1.8, (key, coarse, fine)
        prev = reps


def test_a_forms_fallback_on_minimal_surface():
    sf = restrict_parallel_spinor(build_patch("catenoid", resolution=16), UNIT)
    suite = a_forms(sf)
    assert suite.e3_fallback.all()
    reps = a_form_residuals(sf, suite)
    assert reps["trace_F_pp"].max < 5e-2  # converging to zero trace
