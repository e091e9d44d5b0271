"""Discrete spinor fields in the adapted gauge of a framed patch.

A field assigns one SpinorPair per grid point, with components taken in the
spin frame over the patch's adapted orthonormal frame.  The covariant
derivative uses the frame expression

    nabla_X phi = d_X phi + 1/2 omega12(X) e1.e2.phi + 1/2 omega34(X) e3.e4.phi,

restriction of an ambient constant spinor is the inverse spin lift of the
frame rotation, and the Dirac operator is D = e1.nabla_{e1} + e2.nabla_{e2}.
The recovery operations rebuild the second fundamental form and the
connection-generating 1-form eta from a field, and evaluate the bilinear
form families used by the symmetry and trace identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .clifford import (
    CliffordOrder2,
    SpinorPair,
    clifford_act,
    clifford_act2,
    frame_vector_product,
    half_minus,
    half_plus,
    project_quadrants,
    real_inner,
    rotate_vector,
    spin4_frame_act,
)
from .errors import FrameLiftError, QuadrantVanishingError
from .patch import FramedPatch, interior, mean_curvature_frame
from .quaternion import FRAME_QUATS, I as QI, Quaternion, qconj, qmul
from .reports import ResidualReport, report_from_values

E1, E2, E3, E4 = FRAME_QUATS


@dataclass
class SpinorField:
    """Grid of spinors over a patch, plus the ambient Killing constant."""

    patch: FramedPatch
    values: SpinorPair
    lam: complex = 0.0

    @property
    def shape(self):
        return self.patch.shape


def scale_lam(phi: SpinorPair, lam: complex) -> SpinorPair:
    if lam == 0:
        return SpinorPair(Quaternion.zeros(phi.shape), Quaternion.zeros(phi.shape))
    return phi.scale_complex(complex(lam))


def _fiber_norms(phi: SpinorPair) -> np.ndarray:
    return phi.norm()


def _report(name: str, patch: FramedPatch, values: np.ndarray) -> ResidualReport:
    return report_from_values(name, patch.shape, interior(values))


# ---------------------------------------------------------------------------
# spin lift of the frame rotation


def _quat_from_rot3(M: np.ndarray) -> np.ndarray:
    """Unit quaternion (...,4) for rotation matrices (...,3,3); v -> q v conj(q)."""
    m00, m11, m22 = M[..., 0, 0], M[..., 1, 1], M[..., 2, 2]
    t = m00 + m11 + m22
    cand = np.stack(
        [
            np.stack([1 + t, M[..., 2, 1] - M[..., 1, 2], M[..., 0, 2] - M[..., 2, 0], M[..., 1, 0] - M[..., 0, 1]], axis=-1),
            np.stack([M[..., 2, 1] - M[..., 1, 2], 1 + 2 * m00 - t, M[..., 0, 1] + M[..., 1, 0], M[..., 0, 2] + M[..., 2, 0]], axis=-1),
            np.stack([M[..., 0, 2] - M[..., 2, 0], M[..., 0, 1] + M[..., 1, 0], 1 + 2 * m11 - t, M[..., 1, 2] + M[..., 2, 1]], axis=-1),
            np.stack([M[..., 1, 0] - M[..., 0, 1], M[..., 0, 2] + M[..., 2, 0], M[..., 1, 2] + M[..., 2, 1], 1 + 2 * m22 - t], axis=-1),
        ],
        axis=-2,
    )  # (..., 4 candidates, 4 components)
    leading = np.stack([1 + t, 1 + 2 * m00 - t, 1 + 2 * m11 - t, 1 + 2 * m22 - t], axis=-1)
    pick = np.argmax(leading, axis=-1)
    q = np.take_along_axis(cand, pick[..., None, None], axis=-2)[..., 0, :]
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def _propagate_signs(qp: np.ndarray, qm: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """Greedy sign continuity along row 0, then down each column; returns max jump.

    The pair (qp, qm) is defined up to a common sign per point; the relative
    sign against the already-fixed neighbor is chosen to minimize the jump.
    """

    def rel_sign(prev_i, prev_j, cur_i, cur_j):
        same = np.abs(qp[cur_i, cur_j] - qp[prev_i, prev_j]).sum(-1) + np.abs(
            qm[cur_i, cur_j] - qm[prev_i, prev_j]
        ).sum(-1)
        opp = np.abs(qp[cur_i, cur_j] + qp[prev_i, prev_j]).sum(-1) + np.abs(
            qm[cur_i, cur_j] + qm[prev_i, prev_j]
        ).sum(-1)
        return np.where(opp < same, -1.0, 1.0)

    nu, nv = qp.shape[:2]
    sign = np.ones((nu, nv))
    for j in range(1, nv):
        sign[0, j] = rel_sign(0, j - 1, 0, j) * sign[0, j - 1]
    for i in range(1, nu):
        sign[i] = rel_sign(i - 1, slice(None), i, slice(None)) * sign[i - 1]
    qp = qp * sign[..., None]
    qm = qm * sign[..., None]
    jump = 0.0
    for axis in (0, 1):
        d = np.diff(qp, axis=axis)
        jump = max(jump, np.linalg.norm(d, axis=-1).max())
        d = np.diff(qm, axis=axis)
        jump = max(jump, np.linalg.norm(d, axis=-1).max())
    return qp, qm, float(jump)


def spin_lift(patch: FramedPatch, jump_threshold: float = 0.8) -> Tuple[Quaternion, Quaternion]:
    """Factor the frame rotation as x -> qp x conj(qm) with a continuous sign choice.

    The rotation maps the standard basis to (e1, e2, e3, e4).  Raises
    FrameLiftError when no continuous lift exists on the grid (frame branch
    cut), detected by a residual sign jump between neighbors.
    """
    frame = patch.frame  # (..., a, i)
    r = [frame[..., a, :] for a in range(4)]
    # conjugation by qp on imaginary quaternions, reconstructed columnwise
    cols = [-qmul(r[0], qconj(r[k])) for k in (1, 2, 3)]
    M = np.stack([c[..., 1:] for c in cols], axis=-1)  # (..., 3 comps, 3 cols)
    qp = _quat_from_rot3(M)
    qm = qmul(qconj(r[0]), qp)
    qp, qm, jump = _propagate_signs(qp, qm)
    if jump > jump_threshold:
        raise FrameLiftError(
            f"spin lift jumps by {jump:.3f} between neighboring grid points; "
            "the frame field has a branch cut on this grid"
        )
    QP, QM = Quaternion.from_array(qp), Quaternion.from_array(qm)
    # verify the factorization reproduces the frame
    err = 0.0
    for a, ra in enumerate(r):
        back = rotate_vector(QP, QM, Quaternion.from_array(np.broadcast_to(np.eye(4)[a], qp.shape)))
        err = max(err, np.abs(back.data - ra).max())
    if err > 1e-8:
        raise FrameLiftError(f"spin factorization defect {err:.3e}")
    return QP, QM


def restrict_parallel_spinor(patch: FramedPatch, phi0: SpinorPair) -> SpinorField:
    """Restrict an ambient constant spinor to the patch, in the adapted gauge.

    The components are the inverse spin lift applied to phi0, so both half
    norms are constant over the grid.
    """
    qp, qm = spin_lift(patch)
    values = spin4_frame_act(qp.conj(), qm.conj(), phi0)
    return SpinorField(patch=patch, values=values, lam=0.0)


# ---------------------------------------------------------------------------
# covariant derivative and Dirac operator


def _connection_blocks(patch: FramedPatch, axis: int) -> CliffordOrder2:
    om12 = patch.omega12[..., axis]
    om34 = patch.omega34[..., axis]
    p = Quaternion.from_array(0.5 * (om12 + om34)[..., None] * QI.data)
    q = Quaternion.from_array(0.5 * (-om12 + om34)[..., None] * QI.data)
    return CliffordOrder2(p, q)


def coordinate_covariant_derivative(patch: FramedPatch, phi: SpinorPair, axis: int) -> SpinorPair:
    """nabla along the coordinate direction d_u (axis=0) or d_v (axis=1)."""
    h = patch.hu if axis == 0 else patch.hv
    dplus = np.gradient(phi.plus.data, h, axis=axis, edge_order=2)
    dminus = np.gradient(phi.minus.data, h, axis=axis, edge_order=2)
    dphi = SpinorPair(Quaternion.from_array(dplus), Quaternion.from_array(dminus))
    return dphi + _connection_blocks(patch, axis).act(phi)


def covariant_derivative(patch: FramedPatch, phi: SpinorPair, direction: int) -> SpinorPair:
    """nabla along the frame vector e1 (direction=0) or e2 (direction=1)."""
    L = patch.data.frame_coeff
    du = coordinate_covariant_derivative(patch, phi, 0)
    out = du.scale(L[..., direction, 0])
    if direction == 1 or np.any(L[..., direction, 1] != 0):
        dv = coordinate_covariant_derivative(patch, phi, 1)
        out = out + dv.scale(L[..., direction, 1])
    return out


def covariant_derivative_field(sf: SpinorField, direction) -> SpinorPair:
    """Spec-facing wrapper: direction 'e1'/'e2' or 0/1."""
    if isinstance(direction, str):
        direction = {"e1": 0, "e2": 1}[direction]
    return covariant_derivative(sf.patch, sf.values, direction)


def dirac(patch: FramedPatch, phi: SpinorPair) -> SpinorPair:
    """D phi = e1 . nabla_{e1} phi + e2 . nabla_{e2} phi."""
    out = clifford_act(E1, covariant_derivative(patch, phi, 0))
    return out + clifford_act(E2, covariant_derivative(patch, phi, 1))


def dirac_field(sf: SpinorField) -> SpinorPair:
    return dirac(sf.patch, sf.values)


def mean_curvature_quaternion(patch: FramedPatch) -> Quaternion:
    """H as a frame-component quaternion field (normal valued)."""
    return Quaternion.from_array(mean_curvature_frame(patch))


# ---------------------------------------------------------------------------
# residuals of the defining equations


def dirac_residual(
    sf: SpinorField, hvec: Optional[Quaternion] = None, lam: Optional[complex] = None
) -> ResidualReport:
    """Residual of D phi = H . phi - 2 lambda phi."""
    lam = sf.lam if lam is None else lam
    if hvec is None:
        hvec = mean_curvature_quaternion(sf.patch)
    res = dirac_field(sf) - clifford_act(hvec, sf.values) + scale_lam(sf.values, 2 * lam)
    return _report("dirac", sf.patch, _fiber_norms(res))


def gauss_formula_residual(sf: SpinorField) -> Dict[str, ResidualReport]:
    """Residual of nabla_X phi + 1/2 sum_j e_j . B(X, e_j) . phi - lambda X . phi."""
    patch, phi = sf.patch, sf.values
    B = patch.B
    out = {}
    for ix, (name, ex) in enumerate((("e1", E1), ("e2", E2))):
        res = covariant_derivative(patch, phi, ix)
        for j, ej in enumerate((E1, E2)):
            comps = np.zeros(patch.shape + (4,))
            comps[..., 2:] = B[..., ix, j, :]
            bvec = Quaternion.from_array(comps)
            res = res + clifford_act(ej, clifford_act(bvec, phi)).scale(0.5)
        res = res - scale_lam(clifford_act(ex, phi), sf.lam)
        out[name] = _report(f"gauss_formula_{name}", patch, _fiber_norms(res))
    return out


def norm_condition_residual(sf: SpinorField) -> Dict[str, ResidualReport]:
    """Residual of X|phi^+|^2 = 2 Re<lambda X.phi^-, phi^+> and its mirror."""
    patch, phi = sf.patch, sf.values
    plus, minus = half_plus(phi), half_minus(phi)
    out = {}
    for half_name, this, other in (("plus", plus, minus), ("minus", minus, plus)):
        n2 = this.norm_sq()
        worst = np.zeros(patch.shape)
        for ix, ex in enumerate((E1, E2)):
            lhs = patch.frame_deriv(n2, ix)
            rhs = 2.0 * real_inner(scale_lam(clifford_act(ex, other), sf.lam), this)
            worst = np.maximum(worst, np.abs(lhs - rhs))
        out[half_name] = _report(f"norm_condition_{half_name}", patch, worst)
    return out


def curvature_residual(sf: SpinorField) -> ResidualReport:
    """Discrete commutator holonomy vs -K/2 e1.e2.phi - K_N/2 e3.e4.phi."""
    patch, phi = sf.patch, sf.values
    curv = patch.curvature()
    d2 = covariant_derivative(patch, covariant_derivative(patch, phi, 1), 0)
    d1 = covariant_derivative(patch, covariant_derivative(patch, phi, 0), 1)
    om12_frame = patch.data.omega12_frame()
    # [e1, e2] = -omega12(e1) e1 - omega12(e2) e2
    bracket = covariant_derivative(patch, phi, 0).scale(-om12_frame[..., 0]) + covariant_derivative(
        patch, phi, 1
    ).scale(-om12_frame[..., 1])
    lhs = d2 - d1 - bracket
    rhs = clifford_act2(E1, E2, phi).scale(-0.5 * curv.K) + clifford_act2(E3, E4, phi).scale(
        -0.5 * curv.KN
    )
    return _report("spinorial_curvature", patch, _fiber_norms(lhs - rhs))


# ---------------------------------------------------------------------------
# recovery of B and eta


VANISHING_THRESHOLD = 1e-8


def _check_halves(phi: SpinorPair):
    np_ = phi.plus.norm()
    nm = phi.minus.norm()
    if np_.min() < VANISHING_THRESHOLD or nm.min() < VANISHING_THRESHOLD:
        raise QuadrantVanishingError(
            "spinor half-norms must stay above "
            f"{VANISHING_THRESHOLD:g} for curvature recovery (got "
            f"min |phi^+| = {np_.min():.3e}, min |phi^-| = {nm.min():.3e})"
        )


def recover_B(sf: SpinorField) -> np.ndarray:
    """Second fundamental form components from the field (full formula).

    Returns B[i, j, k] on frame slots, symmetric in (i, j) by construction.
    """
    patch, phi = sf.patch, sf.values
    _check_halves(phi)
    plus, minus = half_plus(phi), half_minus(phi)
    wplus = 0.5 / plus.norm_sq()
    wminus = 0.5 / minus.norm_sq()
    grad = [covariant_derivative(patch, phi, i) for i in (0, 1)]
    gplus = [half_plus(g) for g in grad]
    gminus = [half_minus(g) for g in grad]
    tangent = (E1, E2)
    normal = (E3, E4)
    out = np.empty(patch.shape + (2, 2, 2))
    for i, ei in enumerate(tangent):
        for j, ej in enumerate(tangent):
            delta = 1.0 if i == j else 0.0
            mixp = clifford_act(ei, gplus[j]) + clifford_act(ej, gplus[i])
            mixm = clifford_act(ei, gminus[j]) + clifford_act(ej, gminus[i])
            if sf.lam != 0 and delta:
                mixp = mixp + scale_lam(minus, 2 * delta * sf.lam)
                mixm = mixm + scale_lam(plus, 2 * delta * sf.lam)
            for k, xi in enumerate(normal):
                out[..., i, j, k] = wplus * real_inner(mixp, clifford_act(xi, plus)) + wminus * real_inner(
                    mixm, clifford_act(xi, minus)
                )
    return out


def recover_B_simplified(sf: SpinorField) -> np.ndarray:
    """Reduced recovery Re<X . nabla_Y phi, xi . phi> (unit halves, lambda = 0)."""
    patch, phi = sf.patch, sf.values
    grad = [covariant_derivative(patch, phi, i) for i in (0, 1)]
    out = np.empty(patch.shape + (2, 2, 2))
    for i, ei in enumerate((E1, E2)):
        for j in range(2):
            acted = clifford_act(ei, grad[j])
            for k, xi in enumerate((E3, E4)):
                out[..., i, j, k] = real_inner(acted, clifford_act(xi, phi))
    return out


def compute_eta(Bgrid: np.ndarray) -> Tuple[CliffordOrder2, CliffordOrder2]:
    """eta(e_i) = -1/2 sum_j e_j . B(e_j, e_i) as block operators, i = 1, 2."""
    shape = Bgrid.shape[:-3]
    etas = []
    for i in range(2):
        acc = CliffordOrder2.zeros(shape)
        for j in range(2):
            for k in range(2):
                blk = frame_vector_product(j + 1, k + 3)
                coef = -0.5 * Bgrid[..., j, i, k]
                acc = acc + CliffordOrder2(
                    Quaternion.from_array(coef[..., None] * blk.p.data),
                    Quaternion.from_array(coef[..., None] * blk.q.data),
                )
        etas.append(acc)
    return etas[0], etas[1]


def eta_residual(sf: SpinorField, etas=None) -> Dict[str, ResidualReport]:
    """Residual of nabla_X phi = eta(X) . phi + lambda X . phi, X = e1, e2."""
    patch, phi = sf.patch, sf.values
    if etas is None:
        etas = compute_eta(recover_B(sf))
    out = {}
    for ix, (name, ex) in enumerate((("e1", E1), ("e2", E2))):
        res = (
            covariant_derivative(patch, phi, ix)
            - etas[ix].act(phi)
            - scale_lam(clifford_act(ex, phi), sf.lam)
        )
        out[name] = _report(f"eta_{name}", patch, _fiber_norms(res))
    return out


# ---------------------------------------------------------------------------
# bilinear form families


@dataclass
class AFormSuite:
    """Pointwise 2x2 bilinear forms on (e1, e2), with validity masks."""

    forms: Dict[str, np.ndarray]
    quadrant_norms_sq: Dict[str, np.ndarray]
    valid: np.ndarray  # True where all four quadrants are above threshold
    e3_fallback: np.ndarray  # True where |H| was too small to pick e3 = H/|H|
    hnorm: np.ndarray


def a_forms(sf: SpinorField, e3_choice: str = "mean-curvature") -> AFormSuite:
    """Evaluate the F/B/A bilinear form families in the adapted basis.

    e3 is the unit mean-curvature direction where |H| is nonzero, falling
    back to the frame normal e3 elsewhere (reported in the suite).  Points
    where a quadrant part vanishes are flagged invalid rather than limited.
    """
    patch, phi, lam = sf.patch, sf.values, sf.lam
    pp, mm, pm, mp = project_quadrants(phi)
    quads = {"pp": pp, "mm": mm, "pm": pm, "mp": mp}
    nsq = {k: v.norm_sq() for k, v in quads.items()}
    valid = np.ones(patch.shape, dtype=bool)
    for v in nsq.values():
        valid &= v > VANISHING_THRESHOLD**2

    hq = mean_curvature_quaternion(patch)
    hnorm = hq.norm()
    if e3_choice == "mean-curvature":
        fallback = hnorm < 1e-10
        comps = np.where(fallback[..., None], E3.data, hq.data / np.where(fallback, 1.0, hnorm)[..., None])
        e3 = Quaternion.from_array(comps)
    elif e3_choice == "frame":
        e3 = Quaternion.from_array(np.broadcast_to(E3.data, patch.shape + (4,)).copy())
        fallback = np.zeros(patch.shape, dtype=bool)
    else:
        raise ValueError(f"unknown e3_choice {e3_choice!r}")

    grad = [covariant_derivative(patch, phi, i) for i in (0, 1)]
    gq = [project_quadrants(g) for g in grad]
    gq = [{"pp": q[0], "mm": q[1], "pm": q[2], "mp": q[3]} for q in gq]
    ghalf = [
        {"plus": half_plus(g), "minus": half_minus(g)} for g in grad
    ]
    halves = {"plus": half_plus(phi), "minus": half_minus(phi)}

    pairs = {"pp": "mm", "mm": "pp", "pm": "mp", "mp": "pm"}
    lam_partner = {"pp": "mp", "mm": "pm", "pm": "mm", "mp": "pp"}

    tangent = (E1, E2)
    forms: Dict[str, np.ndarray] = {}
    for label, partner in pairs.items():
        Fmat = np.empty(patch.shape + (2, 2))
        Bmat = np.empty(patch.shape + (2, 2))
        for ix in range(2):
            for iy, ey in enumerate(tangent):
                against = clifford_act(ey, clifford_act(e3, quads[partner]))
                Fmat[..., ix, iy] = real_inner(gq[ix][label], against)
                Bmat[..., ix, iy] = -real_inner(
                    scale_lam(clifford_act(tangent[ix], quads[lam_partner[label]]), lam), against
                )
        forms[f"F_{label}"] = Fmat
        forms[f"B_{label}"] = Bmat
        forms[f"A_{label}"] = Fmat + Bmat

    for sign, this, other in (("plus", "plus", "minus"), ("minus", "minus", "plus")):
        Amat = np.empty(patch.shape + (2, 2))
        for ix in range(2):
            lead = ghalf[ix][this] - scale_lam(clifford_act(tangent[ix], halves[other]), lam)
            for iy, ey in enumerate(tangent):
                Amat[..., ix, iy] = real_inner(lead, clifford_act(ey, clifford_act(e3, halves[this])))
        forms[f"A_{sign}"] = Amat

    safe = lambda arr: np.where(arr > VANISHING_THRESHOLD**2, arr, 1.0)
    forms["F_plus"] = forms["A_pp"] / safe(nsq["mm"])[..., None, None] - forms["A_mm"] / safe(nsq["pp"])[..., None, None]
    forms["F_minus"] = forms["A_pm"] / safe(nsq["mp"])[..., None, None] - forms["A_mp"] / safe(nsq["pm"])[..., None, None]

    return AFormSuite(forms=forms, quadrant_norms_sq=nsq, valid=valid, e3_fallback=fallback, hnorm=hnorm)


def a_form_residuals(sf: SpinorField, suite: Optional[AFormSuite] = None) -> Dict[str, ResidualReport]:
    """Residuals of the trace, symmetry, vanishing, and ratio identities (lambda = 0)."""
    patch = sf.patch
    if suite is None:
        suite = a_forms(sf)
    f = suite.forms
    nsq = suite.quadrant_norms_sq
    mask = interior(suite.valid)

    def masked(vals):
        return np.where(mask, interior(vals), 0.0)

    trace = f["F_pp"][..., 0, 0] + f["F_pp"][..., 1, 1] + suite.hnorm * nsq["mm"]
    sym = f["F_pp"][..., 0, 1] - f["F_pp"][..., 1, 0]
    fplus_norm = np.linalg.svd(f["F_plus"], compute_uv=False)[..., 0]
    fminus_norm = np.linalg.svd(f["F_minus"], compute_uv=False)[..., 0]
    plus_sq = nsq["pp"] + nsq["mm"]
    ratio = np.linalg.norm(
        f["A_plus"] / plus_sq[..., None, None]
        - f["A_pp"] / np.where(nsq["mm"] > 0, nsq["mm"], 1.0)[..., None, None],
        axis=(-2, -1),
    )
    shape = patch.shape
    return {
        "trace_F_pp": report_from_values("trace_F_pp", shape, masked(trace)),
        "symmetry_F_pp": report_from_values("symmetry_F_pp", shape, masked(sym)),
        "F_plus": report_from_values("F_plus", shape, masked(fplus_norm)),
        "F_minus": report_from_values("F_minus", shape, masked(fminus_norm)),
        "ratio_A": report_from_values("ratio_A", shape, masked(ratio)),
    }
