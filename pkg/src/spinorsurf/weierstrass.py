"""Quaternionic Weierstrass representation: the 1-form xi, its integration
to an immersion, the verification suite for the reconstruction, classical
holomorphic generators, and the constructive two-step fundamental theorem.

For a field phi = (a, b) in the adapted gauge with unit half norms, the
H-valued 1-form is xi(X) = conj(a) * x * b, where x is X in frame
components under R^4 = H.  It is closed when phi solves the Dirac equation,
and F = integral(xi) reproduces the immersion up to rigid motion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .clifford import SpinorPair, half_minus, half_plus, quat_pairing
from .errors import (
    ClosednessError,
    DegenerateMetricError,
    DegenerateParametrizationError,
    IntegrabilityError,
    NormConditionError,
    PoleError,
)
from .exprparse import compile_expr
from .patch import (
    FramedPatch,
    PatchData,
    interior,
    patch_from_positions,
    structure_residuals,
)
from .quaternion import FRAME_QUATS, I as QI, ONE, Quaternion, qconj, qmul
from .reports import ResidualReport, report_from_values
from .spinorfield import (
    SpinorField,
    compute_eta,
    dirac,
    restrict_parallel_spinor,
)

E1, E2, E3, E4 = FRAME_QUATS

DEFAULT_CLOSEDNESS_BUDGET = 0.5  # on the cell-averaged d(xi); valid fields sit at C*h^2


@dataclass
class QuatOneForm:
    """Discrete H-valued 1-form: values on the coordinate directions."""

    xi_u: Quaternion
    xi_v: Quaternion
    domain: Tuple[float, float, float, float]

    @property
    def shape(self):
        return self.xi_u.shape

    @property
    def hu(self):
        return (self.domain[1] - self.domain[0]) / (self.shape[0] - 1)

    @property
    def hv(self):
        return (self.domain[3] - self.domain[2]) / (self.shape[1] - 1)


@dataclass
class ReconstructedImmersion:
    """Position grid produced by integrating a quaternion 1-form."""

    F: np.ndarray  # (Nu, Nv, 4)
    domain: Tuple[float, float, float, float]
    basepoint: Tuple[int, int]
    base_value: np.ndarray
    provenance: str

    @property
    def us(self):
        return np.linspace(self.domain[0], self.domain[1], self.F.shape[0])

    @property
    def vs(self):
        return np.linspace(self.domain[2], self.domain[3], self.F.shape[1])

    def as_patch(self, frame_policy: str = "seeds", normal_seeds=None) -> FramedPatch:
        return patch_from_positions(
            self.F, self.domain, name=f"reconstructed-{self.provenance}",
            frame_policy=frame_policy, normal_seeds=normal_seeds,
        )


def check_unit_halves(phi: SpinorPair, tol: float = 1e-8):
    dev = max(np.abs(phi.plus.norm() - 1.0).max(), np.abs(phi.minus.norm() - 1.0).max())
    if dev > tol:
        raise NormConditionError(
            f"the 1-form needs unit spinor halves; |phi^+|, |phi^-| deviate by {dev:.3e}"
        )


def xi_on_vector(sf: SpinorField, x: Quaternion) -> Quaternion:
    """xi evaluated on a vector given in frame components."""
    a, b = sf.values.plus, sf.values.minus
    return a.conj() * (x * b)


def xi_form(sf: SpinorField) -> QuatOneForm:
    """The H-valued 1-form on the coordinate directions (d_u, d_v)."""
    check_unit_halves(sf.values)
    M = sf.patch.data.coord_in_frame
    xi = []
    for c in range(2):
        x = Quaternion(M[..., c, 0], M[..., c, 1], 0.0, 0.0)
        xi.append(xi_on_vector(sf, x))
    return QuatOneForm(xi[0], xi[1], sf.patch.domain)


def closedness_residual(xi: QuatOneForm) -> ResidualReport:
    """Cell-averaged exterior derivative: trapezoid loop integral / cell area."""
    hu, hv = xi.hu, xi.hv
    xu, xv = xi.xi_u.data, xi.xi_v.data
    bottom = 0.5 * hu * (xu[:-1, :-1] + xu[1:, :-1])
    top = 0.5 * hu * (xu[:-1, 1:] + xu[1:, 1:])
    left = 0.5 * hv * (xv[:-1, :-1] + xv[:-1, 1:])
    right = 0.5 * hv * (xv[1:, :-1] + xv[1:, 1:])
    loop = bottom + right - top - left
    vals = np.linalg.norm(loop, axis=-1) / (hu * hv)
    nu, nv = xi.shape
    return report_from_values("closedness", (nu, nv), interior(vals))


def integrate_form(
    xi: QuatOneForm,
    basepoint: Tuple[int, int] = (0, 0),
    base_value=None,
    budget: Optional[float] = DEFAULT_CLOSEDNESS_BUDGET,
    provenance: str = "from-spinor",
) -> ReconstructedImmersion:
    """Integrate dF = xi by trapezoid sums along a row-then-columns spanning tree."""
    report = closedness_residual(xi)
    if budget is not None and report.max > budget:
        raise ClosednessError(
            f"closedness residual {report.max:.3e} exceeds budget {budget:.3e}", report
        )
    i0, j0 = basepoint
    nu, nv = xi.shape
    if base_value is None:
        base_value = np.zeros(4)
    base_value = np.asarray(base_value, dtype=float)
    xu, xv = xi.xi_u.data, xi.xi_v.data
    hu, hv = xi.hu, xi.hv

    F = np.empty((nu, nv, 4))
    # base row: integrate in v away from j0
    row = np.empty((nv, 4))
    row[j0] = base_value
    inc_v = 0.5 * hv * (xv[i0, :-1] + xv[i0, 1:])
    for j in range(j0 + 1, nv):
        row[j] = row[j - 1] + inc_v[j - 1]
    for j in range(j0 - 1, -1, -1):
        row[j] = row[j + 1] - inc_v[j]
    F[i0] = row
    # columns: integrate in u away from i0, vectorized across v
    inc_u = 0.5 * hu * (xu[:-1] + xu[1:])
    for i in range(i0 + 1, nu):
        F[i] = F[i - 1] + inc_u[i - 1]
    for i in range(i0 - 1, -1, -1):
        F[i] = F[i + 1] - inc_u[i]
    return ReconstructedImmersion(
        F=F, domain=xi.domain, basepoint=(i0, j0), base_value=base_value, provenance=provenance
    )


def differential_residual(rec: ReconstructedImmersion, xi: QuatOneForm) -> ResidualReport:
    """Residual of dF = xi on the reconstructed grid (finite differences)."""
    hu, hv = xi.hu, xi.hv
    du = np.gradient(rec.F, hu, axis=0, edge_order=2)
    dv = np.gradient(rec.F, hv, axis=1, edge_order=2)
    res = np.maximum(
        np.linalg.norm(du - xi.xi_u.data, axis=-1), np.linalg.norm(dv - xi.xi_v.data, axis=-1)
    )
    return report_from_values("differential", rec.F.shape[:2], interior(res))


def path_difference(xi: QuatOneForm, basepoint=(0, 0)) -> float:
    """Max difference between row-first and column-first integrations."""
    a = integrate_form(xi, basepoint, budget=None).F
    flipped = QuatOneForm(
        Quaternion.from_array(xi.xi_v.data.transpose(1, 0, 2)),
        Quaternion.from_array(xi.xi_u.data.transpose(1, 0, 2)),
        (xi.domain[2], xi.domain[3], xi.domain[0], xi.domain[1]),
    )
    b = integrate_form(flipped, (basepoint[1], basepoint[0]), budget=None).F.transpose(1, 0, 2)
    return float(np.abs(a - b).max())


def dxi_dirac_identity_residual(sf: SpinorField) -> ResidualReport:
    """Residual of d(xi)(e1,e2) = <<e1.e2.D(phi^-), phi^+>> + <<e1.e2.phi^-, D(phi^+)>>."""
    patch = sf.patch
    xi = xi_form(sf)
    W = patch.data.area_element
    dxi = (patch.partial_u(xi.xi_v.data) - patch.partial_v(xi.xi_u.data)) / W[..., None]

    from .clifford import clifford_act2

    phi_plus = half_plus(sf.values)
    phi_minus = half_minus(sf.values)
    d_minus = dirac(patch, phi_minus)  # lands in the plus half
    d_plus = dirac(patch, phi_plus)  # lands in the minus half
    t1 = quat_pairing(clifford_act2(E1, E2, d_minus), phi_plus, "plus")
    t2 = quat_pairing(clifford_act2(E1, E2, phi_minus), d_plus, "minus")
    rhs = t1 + t2
    res = np.linalg.norm(dxi - rhs.data, axis=-1)
    return report_from_values("dxi_identity", patch.shape, interior(res))


# ---------------------------------------------------------------------------
# verification of the reconstruction


def verify_immersion(
    rec: ReconstructedImmersion, source: FramedPatch, sf: SpinorField
) -> Dict[str, ResidualReport]:
    """Four residual families: tangent isometry, normal-bundle isometry,
    second-form preservation, and normal-connection preservation."""
    patch = source
    g = patch.g
    M = patch.data.coord_in_frame
    shape = patch.shape

    xi_t = [xi_on_vector(sf, Quaternion(M[..., c, 0], M[..., c, 1], 0.0, 0.0)) for c in range(2)]
    xi_n = [xi_on_vector(sf, E3), xi_on_vector(sf, E4)]
    xi_frame_t = [xi_on_vector(sf, E1), xi_on_vector(sf, E2)]

    # 1. tangent isometry: <xi(d_c), xi(d_d)> = g_cd
    iso = np.zeros(shape)
    for c in range(2):
        for d in range(2):
            iso = np.maximum(iso, np.abs(xi_t[c].dot(xi_t[d]) - g[..., c, d]))

    # 2. normal-bundle isometry: <xi(e_k), xi(e_l)> = delta, orthogonal to tangents
    niso = np.zeros(shape)
    for k in range(2):
        for l in range(2):
            niso = np.maximum(niso, np.abs(xi_n[k].dot(xi_n[l]) - (1.0 if k == l else 0.0)))
        for c in range(2):
            niso = np.maximum(niso, np.abs(xi_n[k].dot(xi_t[c])))

    # orthonormal normal basis of the image for projections
    n1 = xi_n[0].data
    n1 = n1 / np.linalg.norm(n1, axis=-1)[..., None]
    n2 = xi_n[1].data
    n2 = n2 - np.einsum("...i,...i->...", n2, n1)[..., None] * n1
    n2 = n2 / np.linalg.norm(n2, axis=-1)[..., None]

    def normal_project(w):
        return (
            np.einsum("...i,...i->...", w, n1)[..., None] * n1
            + np.einsum("...i,...i->...", w, n2)[..., None] * n2
        )

    # 3. second form: (d(xi(e_j))(e_i))^N = xi(B(e_i, e_j))
    B = patch.B
    bres = np.zeros(shape)
    for j in range(2):
        dcol = [patch.frame_deriv(xi_frame_t[j].data, i) for i in range(2)]
        for i in range(2):
            bvec = Quaternion(
                np.zeros(shape), np.zeros(shape), B[..., i, j, 0], B[..., i, j, 1]
            )
            expect = xi_on_vector(sf, bvec).data
            res = normal_project(dcol[i]) - expect
            bres = np.maximum(bres, np.linalg.norm(res, axis=-1))

    # 4. normal connection: (d(xi(e3))(e_i))^N = omega34(e_i) xi(e4), likewise e4
    om34 = patch.data.omega34_frame()
    cres = np.zeros(shape)
    for k, sign in ((0, 1.0), (1, -1.0)):
        other = xi_n[1 - k].data
        for i in range(2):
            d = patch.frame_deriv(xi_n[k].data, i)
            expect = sign * om34[..., i][..., None] * other
            cres = np.maximum(cres, np.linalg.norm(normal_project(d) - expect, axis=-1))

    return {
        "tangent_isometry": report_from_values("tangent_isometry", shape, interior(iso)),
        "normal_isometry": report_from_values("normal_isometry", shape, interior(niso)),
        "second_form": report_from_values("second_form", shape, interior(bres)),
        "normal_connection": report_from_values("normal_connection", shape, interior(cres)),
    }


# ---------------------------------------------------------------------------
# rigid alignment (for round trips)


def align_rigid(X: np.ndarray, Y: np.ndarray) -> Tuple[np.ndarray, float]:
    """Best det=+1 rotation+translation of X onto Y; returns (aligned X, max error).

    Solved by SVD of the cross-covariance (polar decomposition); reflections
    are rejected by flipping the smallest singular direction.
    """
    Xf = X.reshape(-1, X.shape[-1])
    Yf = Y.reshape(-1, Y.shape[-1])
    mx = Xf.mean(axis=0)
    my = Yf.mean(axis=0)
    C = (Xf - mx).T @ (Yf - my)
    U, _, Vt = np.linalg.svd(C)
    d = np.sign(np.linalg.det(Vt.T @ U.T))
    D = np.diag([1.0] * (X.shape[-1] - 1) + [d])
    R = Vt.T @ D @ U.T
    aligned = (Xf - mx) @ R.T + my
    err = float(np.abs(aligned - Yf).max())
    return aligned.reshape(X.shape), err


# ---------------------------------------------------------------------------
# classical holomorphic generators


_GL_NODES = 20


def _panel_sum(z0: complex, Z: np.ndarray, fn, panels: int):
    nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
    starts = np.arange(panels) / panels
    t = (starts[:, None] + (nodes[None, :] + 1) / (2 * panels)).ravel()  # (P*Q,)
    w = np.tile(weights / (2 * panels), panels)
    pts = z0 + (Z[..., None] - z0) * t
    vals = fn(pts)
    blowup = ~np.isfinite(vals) | (np.abs(vals) > 1e12)
    if np.any(blowup):
        zb = pts[tuple(np.argwhere(blowup)[0])]
        raise PoleError(f"integrand is singular near z = {zb:.6g}")
    return (Z - z0) * np.einsum("...q,q->...", vals, w), pts, vals


def _segment_quadrature(z0: complex, Z: np.ndarray, fns, panels: Optional[int] = None):
    """Integral over the straight segments z0 -> Z of each fn, Gauss-Legendre.

    Each integral is evaluated twice (P and 2P panels); disagreement flags a
    singular integrand, which is how interior poles are caught even when no
    sample lands on them.
    """
    Z = np.asarray(Z, dtype=complex)
    if panels is None:
        panels = max(1, int(np.ceil(np.abs(Z - z0).max() / 0.3)))
    out = []
    for fn in fns:
        coarse, _, _ = _panel_sum(z0, Z, fn, panels)
        fine, pts, vals = _panel_sum(z0, Z, fn, 2 * panels)
        diff = np.abs(fine - coarse)
        bad = diff > 1e-7 * (1.0 + np.abs(fine))
        if np.any(bad):
            idx = tuple(np.argwhere(bad)[0])
            zb = pts[idx][np.argmax(np.abs(vals[idx]))]
            raise PoleError(f"integrand is singular near z = {zb:.6g}")
        out.append(fine)
    return out


def _holo_grid(domain, resolution):
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    us = np.linspace(domain[0], domain[1], resolution[0])
    vs = np.linspace(domain[2], domain[3], resolution[1])
    U, V = np.meshgrid(us, vs, indexing="ij")
    return U + 1j * V


def classical_weierstrass_r3(
    f_expr: str,
    g_expr: str,
    domain=(-1.0, 1.0, -1.0, 1.0),
    resolution=64,
    basepoint: complex = 0.0,
) -> ReconstructedImmersion:
    """Minimal immersion into R^3 x {0} from two holomorphic functions.

    Integrates (f(1-g^2), i f(1+g^2), 2 f g) dz from the basepoint along
    straight segments with high-order quadrature and takes real parts; the
    basepoint maps to the origin.
    """
    f = compile_expr(f_expr)
    g = compile_expr(g_expr)
    Z = _holo_grid(domain, resolution)
    fns = [
        lambda z: f(z) * (1 - g(z) ** 2),
        lambda z: 1j * f(z) * (1 + g(z) ** 2),
        lambda z: 2 * f(z) * g(z),
    ]
    vals = _segment_quadrature(complex(basepoint), Z, fns)
    F = np.zeros(Z.shape + (4,))
    for k in range(3):
        F[..., k] = vals[k].real
    return ReconstructedImmersion(
        F=F, domain=tuple(domain), basepoint=(0, 0), base_value=F[0, 0].copy(),
        provenance="classical-r3",
    )


def minimal_r4_from_holomorphic(
    psi_exprs,
    domain=(-1.0, 1.0, -1.0, 1.0),
    resolution=64,
    basepoint: complex = 0.0,
) -> Tuple[ReconstructedImmersion, SpinorField]:
    """Immersion F = Re(integral(psi_k dz)) into R^4 plus its adapted spinor field.

    The induced metric must be nondegenerate (checked); the returned field
    is the restriction of a constant ambient spinor to the sampled image.
    """
    if len(psi_exprs) != 4:
        raise ValueError("need exactly four component expressions")
    fns = [compile_expr(e) for e in psi_exprs]
    Z = _holo_grid(domain, resolution)
    vals = _segment_quadrature(complex(basepoint), Z, fns)
    F = np.stack([v.real for v in vals], axis=-1)
    rec = ReconstructedImmersion(
        F=F, domain=tuple(domain), basepoint=(0, 0), base_value=F[0, 0].copy(),
        provenance="classical-r4",
    )
    try:
        patch = rec.as_patch()
    except DegenerateParametrizationError as e:
        raise DegenerateMetricError(f"holomorphic data induce a degenerate metric: {e}") from e
    sf = restrict_parallel_spinor(patch, SpinorPair(ONE, ONE))
    return rec, sf


def holomorphy_defect(psi_exprs, domain=(-1.0, 1.0, -1.0, 1.0), resolution=64) -> ResidualReport:
    """Max Cauchy-Riemann residual of the four component functions on the grid."""
    Z = _holo_grid(domain, resolution)
    hu = (domain[1] - domain[0]) / (Z.shape[0] - 1)
    hv = (domain[3] - domain[2]) / (Z.shape[1] - 1)
    worst = np.zeros(Z.shape)
    for e in psi_exprs:
        vals = compile_expr(e)(Z)
        du = np.gradient(vals, hu, axis=0, edge_order=2)
        dv = np.gradient(vals, hv, axis=1, edge_order=2)
        worst = np.maximum(worst, np.abs(du + 1j * dv))  # d/dx + i d/dy = 0 for holomorphic
    return report_from_values("cauchy_riemann", Z.shape, interior(worst))


# ---------------------------------------------------------------------------
# two-step constructive integration


def rk4_left_mul_line(y0: np.ndarray, coeffs: np.ndarray, h: float) -> np.ndarray:
    """March dy/dt = c(t) * y (quaternion left multiplication) along nodes.

    coeffs has shape (N, ..., 4) giving c at the nodes; half-step values use
    endpoint averages.  Returns y at all N nodes, y[0] = y0.
    """
    n = coeffs.shape[0]
    y = np.empty_like(coeffs)
    y[0] = y0
    for k in range(n - 1):
        c0 = coeffs[k]
        c1 = coeffs[k + 1]
        cm = 0.5 * (c0 + c1)
        cur = y[k]
        k1 = qmul(c0, cur)
        k2 = qmul(cm, cur + 0.5 * h * k1)
        k3 = qmul(cm, cur + 0.5 * h * k2)
        k4 = qmul(c1, cur + h * k3)
        y[k + 1] = cur + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def _rk4_quaternion_steps(phi_start: SpinorPair, p_line, q_line, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """March d(a)/dt = p(t)*a, d(b)/dt = q(t)*b along one line of nodes.

    Half norms are reprojected after the march (the exact flow preserves
    them, and the unit-norm contract downstream is strict).
    """
    a = rk4_left_mul_line(phi_start.plus.data, p_line, h)
    b = rk4_left_mul_line(phi_start.minus.data, q_line, h)
    for comp in (a, b):
        n0 = np.linalg.norm(comp[0], axis=-1, keepdims=True)
        cur = np.linalg.norm(comp, axis=-1, keepdims=True)
        comp *= np.where(cur > 1e-300, n0 / np.maximum(cur, 1e-300), 1.0)
    return a, b


def _parallel_transport_blocks(data: PatchData):
    """Per-direction block coefficients of d(phi) = Omega_c phi for step one."""
    etas = compute_eta(data.B)
    M = data.coord_in_frame
    out = []
    for c in range(2):
        om = 0.5 * (data.omega12[..., c] + data.omega34[..., c])
        om_m = 0.5 * (-data.omega12[..., c] + data.omega34[..., c])
        p = -om[..., None] * QI.data + (
            M[..., c, 0, None] * etas[0].p.data + M[..., c, 1, None] * etas[1].p.data
        )
        q = -om_m[..., None] * QI.data + (
            M[..., c, 0, None] * etas[0].q.data + M[..., c, 1, None] * etas[1].q.data
        )
        out.append((p, q))
    return out


def solve_connection_field(
    data: PatchData, phi0: SpinorPair, basepoint: Tuple[int, int] = (0, 0)
) -> SpinorPair:
    """Integrate nabla phi = eta(X) . phi over the grid from phi0 at the basepoint."""
    (pu, qu), (pv, qv) = _parallel_transport_blocks(data)
    i0, j0 = basepoint
    nu, nv = data.shape

    # base row: march in v (forward and backward)
    a_row = np.empty((nv, 4))
    b_row = np.empty((nv, 4))
    fwd_a, fwd_b = _rk4_quaternion_steps(phi0, pv[i0, j0:], qv[i0, j0:], data.hv)
    a_row[j0:], b_row[j0:] = fwd_a, fwd_b
    if j0 > 0:
        back_a, back_b = _rk4_quaternion_steps(
            phi0, pv[i0, j0::-1], qv[i0, j0::-1], -data.hv
        )
        a_row[j0::-1], b_row[j0::-1] = back_a, back_b

    start_row = SpinorPair(Quaternion.from_array(a_row), Quaternion.from_array(b_row))
    a = np.empty((nu, nv, 4))
    b = np.empty((nu, nv, 4))
    fa, fb = _rk4_quaternion_steps(start_row, pu[i0:], qu[i0:], data.hu)
    a[i0:], b[i0:] = fa, fb
    if i0 > 0:
        ba, bb = _rk4_quaternion_steps(start_row, pu[i0::-1], qu[i0::-1], -data.hu)
        a[i0::-1], b[i0::-1] = ba, bb
    return SpinorPair(Quaternion.from_array(a), Quaternion.from_array(b))


def two_step_integration(
    data: PatchData,
    phi0: SpinorPair,
    basepoint: Tuple[int, int] = (0, 0),
    base_value=None,
    integrability_budget: Optional[float] = None,
    closedness_budget: Optional[float] = DEFAULT_CLOSEDNESS_BUDGET,
) -> Tuple[SpinorField, ReconstructedImmersion]:
    """Reconstruct a surface from (metric, connection, second form) data.

    Step one integrates the connection-with-eta system for a spinor field;
    step two integrates the quaternionic 1-form of that field.  The data
    must satisfy the structure equations (gated by structure_residuals);
    different unit initial spinors give reconstructions differing by rigid
    motion only.
    """
    if integrability_budget is None:
        h = max(data.hu, data.hv)
        integrability_budget = max(20.0 * h * h, 1e-8)
    reps = structure_residuals(data, c=0.0)
    worst = max(r.max for r in reps.values())
    if worst > integrability_budget:
        raise IntegrabilityError(
            f"structure residuals up to {worst:.3e} exceed the integrability "
            f"budget {integrability_budget:.3e}",
            reps,
        )
    values = solve_connection_field(data, phi0, basepoint)
    sf = SpinorField(patch=_data_patch_stub(data), values=values, lam=0.0)
    xi = xi_form(sf)
    rec = integrate_form(
        xi, basepoint=basepoint, base_value=base_value, budget=closedness_budget,
        provenance="two-step",
    )
    return sf, rec


def _data_patch_stub(data: PatchData) -> FramedPatch:
    """A frameless patch carrier so spinor-field operations can run on bare data.

    Positions and ambient frames are unknown before integration; operations
    that need them (restriction, mean curvature) are not used on this stub.
    """
    nu, nv = data.shape
    us = np.linspace(data.domain[0], data.domain[1], nu)
    vs = np.linspace(data.domain[2], data.domain[3], nv)
    return FramedPatch(
        name="prescribed-data",
        mode="data",
        domain=data.domain,
        us=us,
        vs=vs,
        F=np.zeros((nu, nv, 4)),
        frame=np.broadcast_to(np.eye(4), (nu, nv, 4, 4)).copy(),
        data=data,
        frame_policy="data",
    )
