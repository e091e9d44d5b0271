"""Codimension-one reductions: surfaces of a hyperplane R^3 or the unit
3-sphere inside R^4, driven by intrinsic surface spinors.

The reduction gauge pins the normal frame to (e3, e4) = (nu, N): nu the
ambient normal of the hyperplane or sphere (frame policy "r3" or "s3"),
N the surface normal inside it.  Both are parallel for the normal
connection, so the twisted machinery runs with omega34 = 0 and the
intrinsic spinor calculus embeds as the plus half:

    psi  <->  (psi, 0),    X .M psi = N . X . (psi, 0),
    D_M psi = N . D (psi, 0).

In this model the intrinsic Clifford generators are left multiplication by
(-K, J), the hyperplane equation is D_M psi = -H psi, and the sphere
equation is D_M psi = -H psi + I psi, whose last term realizes the
conjugation-type zero-order operator in the fixed basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .clifford import SpinorPair, clifford_act, half_minus, half_plus
from .errors import ClosednessError, MinimalityError, NormConditionError, ValidationError
from .patch import FramedPatch, interior, mean_curvature_frame, mean_curvature_vector
from .quaternion import FRAME_QUATS, I as QI, J as QJ, K as QK, Quaternion, qmul
from .reports import ResidualReport, report_from_values
from .spinorfield import SpinorField, dirac, restrict_parallel_spinor
from .weierstrass import (
    ReconstructedImmersion,
    integrate_form,
    rk4_left_mul_line,
    xi_form,
    xi_on_vector,
)

E1, E2, E3, E4 = FRAME_QUATS


@dataclass
class IntrinsicSpinorField:
    """Surface spinor in the intrinsic model (one quaternion per point)."""

    patch: FramedPatch
    psi: Quaternion
    H: np.ndarray  # mean curvature scalar with respect to e4 = N

    def __post_init__(self):
        if self.patch.frame_policy not in ("r3", "s3"):
            raise ValidationError(
                "intrinsic spinor fields need a reduction frame (policy 'r3' or 's3')"
            )

    @property
    def shape(self):
        return self.patch.shape


def intrinsic_from_restriction(patch: FramedPatch, phi0: Optional[SpinorPair] = None):
    """Restrict an ambient constant spinor and read off the intrinsic data.

    Returns (IntrinsicSpinorField, SpinorField): psi is the plus half of the
    restriction, H the mean curvature component along e4 = N.
    """
    if phi0 is None:
        phi0 = SpinorPair(Quaternion(1, 0, 0, 0), Quaternion(1, 0, 0, 0))
    sf = restrict_parallel_spinor(patch, phi0)
    H = mean_curvature_frame(patch)[..., 3]
    return IntrinsicSpinorField(patch=patch, psi=sf.values.plus, H=H), sf


# ---------------------------------------------------------------------------
# intrinsic Dirac operator and the identification with the twisted model


def _intrinsic_covariant(patch: FramedPatch, psi: Quaternion, axis: int) -> Quaternion:
    h = patch.hu if axis == 0 else patch.hv
    d = np.gradient(psi.data, h, axis=axis, edge_order=2)
    om = patch.omega12[..., axis]
    return Quaternion.from_array(d + 0.5 * om[..., None] * qmul(QI.data, psi.data))


def intrinsic_covariant_derivative(patch: FramedPatch, psi: Quaternion, direction: int) -> Quaternion:
    L = patch.data.frame_coeff
    du = _intrinsic_covariant(patch, psi, 0)
    out = L[..., direction, 0] * du
    if direction == 1:
        dv = _intrinsic_covariant(patch, psi, 1)
        out = out + L[..., direction, 1] * dv
    return out


_GAMMA1 = -QK
_GAMMA2 = QJ


def intrinsic_clifford(x1, x2, psi: Quaternion) -> Quaternion:
    """Action of the tangent vector x1 e1 + x2 e2 in the intrinsic model."""
    return x1 * (_GAMMA1 * psi) + x2 * (_GAMMA2 * psi)


def intrinsic_dirac(psf: IntrinsicSpinorField) -> Quaternion:
    """D_M psi via the intrinsic connection and Clifford generators."""
    patch = psf.patch
    d1 = intrinsic_covariant_derivative(patch, psf.psi, 0)
    d2 = intrinsic_covariant_derivative(patch, psf.psi, 1)
    return _GAMMA1 * d1 + _GAMMA2 * d2


def embed_plus(psi: Quaternion) -> SpinorPair:
    return SpinorPair(psi, Quaternion.zeros(psi.shape))


def identification_residual(psf: IntrinsicSpinorField, sf: Optional[SpinorField] = None) -> ResidualReport:
    """Residual of (D_M psi)* = N . D psi* across the two code paths."""
    patch = psf.patch
    lhs = intrinsic_dirac(psf)
    psi_q = sf.values.plus if sf is not None else psf.psi
    d_twisted = dirac(patch, embed_plus(psi_q))
    rhs = clifford_act(E4, d_twisted)  # N = e4; lands back in the plus half
    res = (lhs - rhs.plus).norm()
    return report_from_values("identification", patch.shape, interior(res))


def clifford_transport_residual(psf: IntrinsicSpinorField, rng=None) -> float:
    """Algebraic check of (X .M psi)* = N . X . psi* on random tangent vectors."""
    rng = rng or np.random.default_rng(0)
    worst = 0.0
    for _ in range(8):
        x1, x2 = rng.normal(size=2)
        lhs = intrinsic_clifford(x1, x2, psf.psi)
        xq = Quaternion(x1, x2, 0.0, 0.0)
        rhs = clifford_act(E4, clifford_act(xq, embed_plus(psf.psi)))
        worst = max(worst, (lhs - rhs.plus).max_abs())
    return worst


# ---------------------------------------------------------------------------
# the two intrinsic equations


def friedrich_residual(psf: IntrinsicSpinorField) -> ResidualReport:
    """Residual of the hyperplane equation D_M psi = -H psi."""
    res = (intrinsic_dirac(psf) + psf.H * psf.psi).norm()
    return report_from_values("friedrich", psf.patch.shape, interior(res))


def morel_residual(psf: IntrinsicSpinorField) -> ResidualReport:
    """Residual of the sphere equation D_M psi = -H psi + I psi."""
    res = (intrinsic_dirac(psf) + psf.H * psf.psi - QI * psf.psi).norm()
    return report_from_values("morel", psf.patch.shape, interior(res))


# ---------------------------------------------------------------------------
# hyperplane lift


def friedrich_lift(psf: IntrinsicSpinorField, equation_budget: Optional[float] = None) -> SpinorField:
    """Lift an intrinsic solution of D_M psi = -H psi to the twisted model.

    phi = (psi, -nu . psi); the lifted field solves D phi = (H N) . phi with
    unit halves, so it feeds the quaternionic 1-form machinery.  |psi| must
    be constant 1.
    """
    patch = psf.patch
    if patch.frame_policy != "r3":
        raise ValidationError("the hyperplane lift needs an 'r3' frame policy patch")
    norms = psf.psi.norm()
    if np.abs(norms - 1.0).max() > 1e-8:
        raise NormConditionError(
            f"|psi| must be constant 1 (deviation {np.abs(norms - 1.0).max():.3e})"
        )
    if equation_budget is not None:
        rep = friedrich_residual(psf)
        if rep.max > equation_budget:
            raise ValidationError(
                f"Friedrich residual {rep.max:.3e} exceeds budget {equation_budget:.3e}"
            )
    minus = -(QJ * psf.psi)  # -nu . psi in the (e3 = nu) gauge
    return SpinorField(patch=patch, values=SpinorPair(psf.psi, minus), lam=0.0)


def friedrich_immersion(
    psf: IntrinsicSpinorField,
) -> Tuple[SpinorField, ReconstructedImmersion, Dict[str, ResidualReport]]:
    """Full hyperplane pipeline: lift, integrate, and report the invariants."""
    sf = friedrich_lift(psf)
    patch = psf.patch
    xi = xi_form(sf)
    rec = integrate_form(xi, base_value=np.zeros(4), provenance="friedrich")
    xi_nu = xi_on_vector(sf, E3)
    # xi(nu) must be the constant quaternion 1 and xi(tangent) purely imaginary
    nu_dev = np.abs(xi_nu.data - np.array([1.0, 0, 0, 0])).max()
    realpart = np.maximum(np.abs(xi.xi_u.w), np.abs(xi.xi_v.w))
    height = np.einsum("...i,...i->...", rec.F, xi_nu.data)
    reports = {
        "xi_nu_constant": report_from_values("xi_nu_constant", patch.shape, nu_dev),
        "xi_tangent_imaginary": report_from_values(
            "xi_tangent_imaginary", patch.shape, interior(realpart)
        ),
        "hyperplane_drift": report_from_values(
            "hyperplane_drift", patch.shape, interior(height - height.flat[0])
        ),
    }
    return sf, rec, reports


def friedrich_minus_gauge_constant(sf: SpinorField) -> Quaternion:
    """The constant c with phi^- = (-nu . phi^+) . c; gauge freedom witness."""
    minus_ref = -(QJ * sf.values.plus)
    return minus_ref.conj() * sf.values.minus


# ---------------------------------------------------------------------------
# sphere immersion (beta flow)


@dataclass
class MorelResult:
    rec: ReconstructedImmersion
    compatibility: ResidualReport
    radius_drift: ResidualReport
    immersed: bool


def morel_beta(sf_plus: Quaternion, patch: FramedPatch) -> Tuple[Quaternion, Quaternion]:
    """beta on the coordinate directions: beta(X) = -<<X . nu . psi, psi>>."""
    M = patch.data.coord_in_frame
    out = []
    for c in range(2):
        x = Quaternion(M[..., c, 0], M[..., c, 1], 0.0, 0.0)
        out.append(-(sf_plus.conj() * (x * (QJ * sf_plus))))
    return out[0], out[1]


def morel_compatibility_residual(patch: FramedPatch, bu: Quaternion, bv: Quaternion) -> ResidualReport:
    """Residual of d(beta)(X, Y) = beta(X) beta(Y) - beta(Y) beta(X)."""
    dbu = patch.partial_v(bu.data)
    dbv = patch.partial_u(bv.data)
    lhs = dbv - dbu
    rhs = qmul(bu.data, bv.data) - qmul(bv.data, bu.data)
    res = np.linalg.norm(lhs - rhs, axis=-1)
    return report_from_values("beta_compatibility", patch.shape, interior(res))


def morel_sphere_immersion(
    psf: IntrinsicSpinorField,
    base_value=None,
    compatibility_budget: float = 0.5,
    equation_budget: Optional[float] = None,
) -> MorelResult:
    """Integrate dF = beta(X) F; the image lies on the unit 3-sphere.

    |F| is not renormalized: its drift from 1 is a reported acceptance
    metric.  A vanishing beta flags a non-immersed (constant) image.
    """
    patch = psf.patch
    if patch.frame_policy != "s3":
        raise ValidationError("the sphere immersion needs an 's3' frame policy patch")
    if np.abs(psf.psi.norm() - 1.0).max() > 1e-8:
        raise NormConditionError("|psi| must be constant 1 for the sphere flow")
    if equation_budget is not None:
        rep = morel_residual(psf)
        if rep.max > equation_budget:
            raise ValidationError(
                f"sphere equation residual {rep.max:.3e} exceeds budget {equation_budget:.3e}"
            )
    bu, bv = morel_beta(psf.psi, patch)
    compat = morel_compatibility_residual(patch, bu, bv)
    if compat.max > compatibility_budget:
        raise ClosednessError(
            f"beta compatibility residual {compat.max:.3e} exceeds budget "
            f"{compatibility_budget:.3e}",
            compat,
        )
    if base_value is None:
        base_value = np.array([1.0, 0.0, 0.0, 0.0])
    rec, immersed = integrate_multiplicative_flow(patch, bu, bv, base_value)
    radius = np.linalg.norm(rec.F, axis=-1)
    drift = report_from_values("radius_drift", patch.shape, interior(radius - 1.0))
    return MorelResult(rec=rec, compatibility=compat, radius_drift=drift, immersed=immersed)


def integrate_multiplicative_flow(
    patch: FramedPatch, bu: Quaternion, bv: Quaternion, base_value
) -> Tuple[ReconstructedImmersion, bool]:
    """Solve dF(X) = beta(X) F along the spanning tree; no renormalization.

    Returns the immersion and whether it is one (a vanishing flow leaves F
    constant, flagged as non-immersed).
    """
    base_value = np.asarray(base_value, dtype=float)
    nu, nv = patch.shape
    F = np.empty((nu, nv, 4))
    F[0] = rk4_left_mul_line(base_value, bv.data[0], patch.hv)
    F[:] = rk4_left_mul_line(F[0], bu.data, patch.hu)
    rec = ReconstructedImmersion(
        F=F, domain=patch.domain, basepoint=(0, 0), base_value=base_value,
        provenance="morel",
    )
    speed = max(float(bu.norm().max()), float(bv.norm().max()))
    return rec, speed > 1e-8


# ---------------------------------------------------------------------------
# the minimal-in-sphere to constant-mean-curvature transform


@dataclass
class LawsonResult:
    field: SpinorField
    rec: ReconstructedImmersion
    mean_curvature: np.ndarray  # scalar field of the image against its carried normal
    planarity: ResidualReport  # deviation of the image from a hyperplane
    normal_defect: float  # how far the carried normal is from unit/orthogonal


def lawson_transform(
    sf: SpinorField, flip_normal: bool = False, minimality_budget: float = 1e-6
) -> LawsonResult:
    """Send a minimal surface of the unit 3-sphere to a CMC surface in R^3.

    The source field must come from an s3-policy patch with H = -position
    (minimality in the sphere; checked).  The new field is (phi^+, N.phi^+),
    integrated like any other unit-norm field; the image sits in a
    hyperplane and has constant mean curvature -1 against the transported
    normal xi~(nu).
    """
    patch = sf.patch
    if patch.frame_policy != "s3":
        raise ValidationError("the transform needs an 's3' frame policy source patch")
    H = mean_curvature_vector(patch)
    minimality = np.abs(H + patch.F).max()
    if minimality > max(minimality_budget, 50.0 * max(patch.hu, patch.hv) ** 2):
        raise MinimalityError(
            f"source is not minimal in the sphere: |H + position| up to {minimality:.3e}"
        )
    ngauge = -QK if flip_normal else QK
    plus = sf.values.plus
    tilde = SpinorField(patch, SpinorPair(plus, ngauge * plus), lam=0.0)
    xi = xi_form(tilde)
    rec = integrate_form(xi, base_value=np.zeros(4), provenance="lawson")

    carried_normal = xi_on_vector(tilde, QJ)  # image of nu
    ndefect = float(np.abs(carried_normal.norm() - 1.0).max())

    image = rec.as_patch()
    Himg = mean_curvature_vector(image)
    hscalar = np.einsum("...i,...i->...", Himg, carried_normal.data)

    w = rec.F[..., 0]
    planarity = report_from_values("planarity", patch.shape, interior(w - w.flat[0]))
    return LawsonResult(
        field=tilde, rec=rec, mean_curvature=hscalar, planarity=planarity, normal_defect=ndefect
    )
