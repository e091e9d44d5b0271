"""Grid-sampled immersed surface patches in R^4 with adapted frames.

A `FramedPatch` samples an immersion F(u, v) on a rectangular grid and
carries an adapted orthonormal frame (e1, e2 tangent; e3, e4 normal), the
induced metric, the connection coefficients omega12 / omega34 on the
coordinate directions, and the second fundamental form in frame components.

Frame construction: (e1, e2) by Gram-Schmidt on (F_u, F_v); e3 from the
first member of a fixed list of ambient seed vectors whose normal projection
stays bounded away from zero over the whole grid (a global criterion, so the
frame stays smooth); e4 as the Hodge dual of e1 ^ e2 ^ e3, which makes
det(e1, e2, e3, e4) = +1 automatically.  Alternative frame policies pin e3
to the hyperplane normal ("r3") or to the position vector on the unit
3-sphere ("s3") for the codimension-one reductions.

Derivatives are 2nd-order central differences inside and one-sided
2nd-order at the boundary; residual statistics are reported over interior
points only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import (
    DegenerateParametrizationError,
    FrameDegeneracyError,
    ValidationError,
)
from .reports import ResidualReport, report_from_values
from .surfaces import analytic_surface, default_domain

DEFAULT_SEEDS = (
    np.array([0.0, 0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, 0.0, 1.0]),
    np.array([1.0, 0.0, 0.0, 0.0]),
    np.array([0.0, 1.0, 0.0, 0.0]),
)
SEED_MIN_PROJECTION = 0.1


def interior(a: np.ndarray, margin: int = 3) -> np.ndarray:
    """Interior band of a grid array.

    Residual statistics are taken here: nested finite-difference stencils
    switch from central to one-sided near the boundary, and differencing
    across that transition costs one order of accuracy, so the outermost
    rings are excluded from reports.
    """
    m = margin
    return a[m:-m, m:-m]


@dataclass
class PatchData:
    """Intrinsic + normal-bundle data of a patch: enough to reconstruct it.

    Metric on coordinates, connection coefficients on (du, dv), and second
    fundamental form in adapted-frame components B[i, j, k] (i, j tangent
    slots, k over (e3, e4)).
    """

    domain: Tuple[float, float, float, float]
    shape: Tuple[int, int]
    g: np.ndarray  # (Nu, Nv, 2, 2)
    omega12: np.ndarray  # (Nu, Nv, 2)
    omega34: np.ndarray  # (Nu, Nv, 2)
    B: np.ndarray  # (Nu, Nv, 2, 2, 2)

    @property
    def hu(self) -> float:
        u0, u1, _, _ = self.domain
        return (u1 - u0) / (self.shape[0] - 1)

    @property
    def hv(self) -> float:
        _, _, v0, v1 = self.domain
        return (v1 - v0) / (self.shape[1] - 1)

    def partial_u(self, f: np.ndarray) -> np.ndarray:
        return np.gradient(f, self.hu, axis=0, edge_order=2)

    def partial_v(self, f: np.ndarray) -> np.ndarray:
        return np.gradient(f, self.hv, axis=1, edge_order=2)

    def coordinate_partials(self, f: np.ndarray):
        return self.partial_u(f), self.partial_v(f)

    @property
    def frame_coeff(self) -> np.ndarray:
        """L[i, c]: tangent frame vectors as combinations of (d_u, d_v)."""
        E = self.g[..., 0, 0]
        F = self.g[..., 0, 1]
        G = self.g[..., 1, 1]
        W = np.sqrt(np.maximum(E * G - F**2, 0.0))
        L = np.zeros(self.g.shape)
        sqrtE = np.sqrt(E)
        L[..., 0, 0] = 1.0 / sqrtE
        L[..., 1, 0] = -F / (sqrtE * W)
        L[..., 1, 1] = sqrtE / W
        return L

    @property
    def coord_in_frame(self) -> np.ndarray:
        """M[c, i]: coordinate vectors in frame components (inverse of L)."""
        E = self.g[..., 0, 0]
        F = self.g[..., 0, 1]
        G = self.g[..., 1, 1]
        W = np.sqrt(np.maximum(E * G - F**2, 0.0))
        sqrtE = np.sqrt(E)
        M = np.zeros(self.g.shape)
        M[..., 0, 0] = sqrtE
        M[..., 1, 0] = F / sqrtE
        M[..., 1, 1] = W / sqrtE
        return M

    @property
    def area_element(self) -> np.ndarray:
        g = self.g
        return np.sqrt(np.maximum(g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] ** 2, 0.0))

    def frame_deriv(self, f: np.ndarray, i: int) -> np.ndarray:
        """Directional derivative of a grid function along frame vector e_{i+1}."""
        fu, fv = self.coordinate_partials(f)
        L = self.frame_coeff
        extra = f.ndim - 2
        sl = (...,) + (None,) * extra
        return L[..., i, 0][sl] * fu + L[..., i, 1][sl] * fv

    def omega12_frame(self) -> np.ndarray:
        """omega12 evaluated on (e1, e2) instead of (du, dv)."""
        L = self.frame_coeff
        return np.einsum("...ic,...c->...i", L, self.omega12)

    def omega34_frame(self) -> np.ndarray:
        L = self.frame_coeff
        return np.einsum("...ic,...c->...i", L, self.omega34)


@dataclass
class FramedPatch:
    name: str
    mode: str
    domain: Tuple[float, float, float, float]
    us: np.ndarray
    vs: np.ndarray
    F: np.ndarray  # (Nu, Nv, 4)
    frame: np.ndarray  # (Nu, Nv, 4, 4): frame[a] = e_{a+1} in ambient components
    data: PatchData
    frame_policy: str = "seeds"
    seed_used: Optional[np.ndarray] = None
    _curvature: Optional["CurvatureData"] = field(default=None, repr=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def hu(self) -> float:
        return self.data.hu

    @property
    def hv(self) -> float:
        return self.data.hv

    @property
    def g(self) -> np.ndarray:
        return self.data.g

    @property
    def B(self) -> np.ndarray:
        return self.data.B

    @property
    def omega12(self) -> np.ndarray:
        return self.data.omega12

    @property
    def omega34(self) -> np.ndarray:
        return self.data.omega34

    def partial_u(self, f):
        return self.data.partial_u(f)

    def partial_v(self, f):
        return self.data.partial_v(f)

    def frame_deriv(self, f, i):
        return self.data.frame_deriv(f, i)

    def ambient_to_frame(self, w: np.ndarray) -> np.ndarray:
        """Components of ambient vectors w (..., 4) in the adapted frame."""
        return np.einsum("...ai,...i->...a", self.frame, w)

    def frame_to_ambient(self, comps: np.ndarray) -> np.ndarray:
        return np.einsum("...ai,...a->...i", self.frame, comps)

    def curvature(self) -> "CurvatureData":
        if self._curvature is None:
            self._curvature = _curvature_data(self)
        return self._curvature

    def structure_residuals(self, c: float = 0.0) -> Dict[str, ResidualReport]:
        return structure_residuals(self.data, c=c, K=self.curvature().K, KN=self.curvature().KN)


@dataclass
class CurvatureData:
    K: np.ndarray
    KN: np.ndarray
    Hvec: np.ndarray  # ambient components (Nu, Nv, 4)


# ---------------------------------------------------------------------------
# construction


def _grid(domain, resolution):
    u0, u1, v0, v1 = domain
    nu, nv = resolution
    us = np.linspace(u0, u1, nu)
    vs = np.linspace(v0, v1, nv)
    return us, vs, np.meshgrid(us, vs, indexing="ij")


def _validate(domain, resolution):
    u0, u1, v0, v1 = domain
    nu, nv = resolution
    if nu < 8 or nv < 8:
        raise ValidationError(f"resolution must be at least 8x8, got {nu}x{nv}")
    if not (u1 > u0 and v1 > v0):
        raise ValidationError(f"degenerate domain {domain}")


def _tangent_frame(Fu, Fv, us, vs):
    E = np.einsum("...i,...i->...", Fu, Fu)
    Ff = np.einsum("...i,...i->...", Fu, Fv)
    G = np.einsum("...i,...i->...", Fv, Fv)
    det = E * G - Ff**2
    scale = np.maximum(E, G)
    bad = det <= 1e-12 * np.maximum(scale**2, 1e-300)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise DegenerateParametrizationError(
            f"rank of dF < 2 at grid point ({i}, {j}), (u, v) = ({us[i]:.6g}, {vs[j]:.6g})"
        )
    e1 = Fu / np.sqrt(E)[..., None]
    w2 = Fv - (Ff / E)[..., None] * Fu
    e2 = w2 / np.linalg.norm(w2, axis=-1)[..., None]
    g = np.empty(E.shape + (2, 2))
    g[..., 0, 0] = E
    g[..., 0, 1] = g[..., 1, 0] = Ff
    g[..., 1, 1] = G
    return e1, e2, g


def _project_out(w, basis):
    for b in basis:
        w = w - np.einsum("...i,...i->...", w, b)[..., None] * b
    return w


def _hodge_complement(e1, e2, e3):
    """Unit e4 with det(e1, e2, e3, e4) = +1."""
    rows = np.stack([e1, e2, e3], axis=-2)  # (..., 3, 4)
    e4 = np.empty(e1.shape)
    cols = np.arange(4)
    for l in range(4):
        keep = cols[cols != l]
        minor = np.linalg.det(rows[..., keep])
        e4[..., l] = (-1.0) ** (l + 1) * minor
    return e4 / np.linalg.norm(e4, axis=-1)[..., None]


def _normal_frame(e1, e2, F, frame_policy, normal_seeds, tol=1e-8):
    if frame_policy == "seeds":
        seeds = DEFAULT_SEEDS if normal_seeds is None else [np.asarray(s, float) for s in normal_seeds]
        for seed in seeds:
            w = _project_out(np.broadcast_to(seed, e1.shape).copy(), (e1, e2))
            norms = np.linalg.norm(w, axis=-1)
            if norms.min() > SEED_MIN_PROJECTION:
                e3 = w / norms[..., None]
                return e3, seed
        raise FrameDegeneracyError(
            "no seed vector keeps a bounded normal projection over the grid; "
            "shrink the domain or pass explicit normal_seeds"
        )
    if frame_policy == "r3":
        e3 = np.broadcast_to(np.array([0.0, 0.0, 0.0, 1.0]), e1.shape).copy()
        for t in (e1, e2):
            if np.abs(np.einsum("...i,...i->...", e3, t)).max() > tol:
                raise ValidationError("frame policy 'r3' needs a surface inside the x4=0 hyperplane")
        return e3, None
    if frame_policy == "s3":
        r = np.linalg.norm(F, axis=-1)
        if np.abs(r - 1.0).max() > tol:
            raise ValidationError("frame policy 's3' needs a surface inside the unit 3-sphere")
        e3 = F / r[..., None]
        for t in (e1, e2):
            if np.abs(np.einsum("...i,...i->...", e3, t)).max() > tol:
                raise ValidationError("position vector is not normal; not a 3-sphere surface")
        return e3, None
    raise ValidationError(f"unknown frame policy {frame_policy!r}")


def _second_form(second, e3, e4, g):
    # normal components of coordinate second derivatives, then frame slots
    N2 = np.stack(
        [np.einsum("...cdi,...i->...cd", second, e3), np.einsum("...cdi,...i->...cd", second, e4)],
        axis=-1,
    )
    E = g[..., 0, 0]
    Ff = g[..., 0, 1]
    G = g[..., 1, 1]
    W = np.sqrt(E * G - Ff**2)
    sqrtE = np.sqrt(E)
    L = np.zeros(g.shape)
    L[..., 0, 0] = 1.0 / sqrtE
    L[..., 1, 0] = -Ff / (sqrtE * W)
    L[..., 1, 1] = sqrtE / W
    return np.einsum("...ic,...jd,...cdk->...ijk", L, L, N2)


def _assemble(
    name,
    mode,
    domain,
    us,
    vs,
    F,
    Fu,
    Fv,
    second,
    omega12,
    frame_policy,
    normal_seeds,
) -> FramedPatch:
    shape = (len(us), len(vs))
    hu = (domain[1] - domain[0]) / (shape[0] - 1)
    hv = (domain[3] - domain[2]) / (shape[1] - 1)

    e1, e2, g = _tangent_frame(Fu, Fv, us, vs)
    # the policy checks admit the finite-difference drift of sampled tangents
    policy_tol = max(1e-8, 5.0 * max(hu, hv) ** 2)
    e3, seed = _normal_frame(e1, e2, F, frame_policy, normal_seeds, tol=policy_tol)
    if frame_policy in ("r3", "s3"):
        # e3 is pinned exactly; push the FD drift of sampled tangents out of
        # the frame so it is orthonormal to machine precision
        e1 = e1 - np.einsum("...i,...i->...", e1, e3)[..., None] * e3
        e1 = e1 / np.linalg.norm(e1, axis=-1)[..., None]
        e2 = _project_out(e2, (e3, e1))
        e2 = e2 / np.linalg.norm(e2, axis=-1)[..., None]
    e4 = _hodge_complement(e1, e2, e3)
    frame = np.stack([e1, e2, e3, e4], axis=-2)

    gram = np.einsum("...ai,...bi->...ab", frame, frame)
    defect = np.abs(gram - np.eye(4)).max()
    if defect > policy_tol:
        raise FrameDegeneracyError(f"frame orthonormality defect {defect:.3e}")

    if omega12 is None:
        de1u = np.gradient(e1, hu, axis=0, edge_order=2)
        de1v = np.gradient(e1, hv, axis=1, edge_order=2)
        omega12 = np.stack(
            [np.einsum("...i,...i->...", de1u, e2), np.einsum("...i,...i->...", de1v, e2)],
            axis=-1,
        )
    if frame_policy in ("r3", "s3"):
        # (nu, N) are parallel sections of the normal bundle in these gauges,
        # so the normal connection vanishes identically
        omega34 = np.zeros(shape + (2,))
    else:
        de3u = np.gradient(e3, hu, axis=0, edge_order=2)
        de3v = np.gradient(e3, hv, axis=1, edge_order=2)
        omega34 = np.stack(
            [np.einsum("...i,...i->...", de3u, e4), np.einsum("...i,...i->...", de3v, e4)],
            axis=-1,
        )

    B = _second_form(second, e3, e4, g)
    data = PatchData(domain=tuple(domain), shape=shape, g=g, omega12=omega12, omega34=omega34, B=B)
    return FramedPatch(
        name=name,
        mode=mode,
        domain=tuple(domain),
        us=us,
        vs=vs,
        F=F,
        frame=frame,
        data=data,
        frame_policy=frame_policy,
        seed_used=seed,
    )


def build_patch(
    name: str,
    domain: Optional[Tuple[float, float, float, float]] = None,
    resolution=64,
    mode: str = "analytic",
    params: Optional[dict] = None,
    frame_policy: str = "seeds",
    normal_seeds=None,
) -> FramedPatch:
    """Sample a catalog surface and build its adapted framed patch."""
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    surf = analytic_surface(name, params)
    if domain is None:
        domain = surf.default_domain
    _validate(domain, resolution)
    us, vs, (U, V) = _grid(domain, resolution)
    F = surf.position(U, V)

    if mode == "analytic":
        Fu = surf.d1["u"](U, V)
        Fv = surf.d1["v"](U, V)
        second = np.empty(U.shape + (2, 2, 4))
        second[..., 0, 0, :] = surf.d2["uu"](U, V)
        second[..., 0, 1, :] = second[..., 1, 0, :] = surf.d2["uv"](U, V)
        second[..., 1, 1, :] = surf.d2["vv"](U, V)
        omega12 = surf.omega12(U, V)
    elif mode == "sampled":
        hu = (domain[1] - domain[0]) / (resolution[0] - 1)
        hv = (domain[3] - domain[2]) / (resolution[1] - 1)
        Fu = np.gradient(F, hu, axis=0, edge_order=2)
        Fv = np.gradient(F, hv, axis=1, edge_order=2)
        second = np.empty(U.shape + (2, 2, 4))
        second[..., 0, 0, :] = np.gradient(Fu, hu, axis=0, edge_order=2)
        Fuv = np.gradient(Fu, hv, axis=1, edge_order=2)
        second[..., 0, 1, :] = second[..., 1, 0, :] = Fuv
        second[..., 1, 1, :] = np.gradient(Fv, hv, axis=1, edge_order=2)
        omega12 = None
    else:
        raise ValidationError(f"unknown mode {mode!r}")

    patch = _assemble(
        name, mode, domain, us, vs, F, Fu, Fv, second, omega12, frame_policy, normal_seeds
    )
    if mode == "analytic":
        patch._analytic_K = surf.gauss_curvature(U, V)  # exact Gauss curvature
    return patch


def patch_from_positions(
    F: np.ndarray,
    domain: Tuple[float, float, float, float],
    name: str = "sampled",
    frame_policy: str = "seeds",
    normal_seeds=None,
) -> FramedPatch:
    """Build a sampled-mode patch from a raw (Nu, Nv, 4) position grid."""
    shape = F.shape[:2]
    _validate(domain, shape)
    us = np.linspace(domain[0], domain[1], shape[0])
    vs = np.linspace(domain[2], domain[3], shape[1])
    hu = (domain[1] - domain[0]) / (shape[0] - 1)
    hv = (domain[3] - domain[2]) / (shape[1] - 1)
    Fu = np.gradient(F, hu, axis=0, edge_order=2)
    Fv = np.gradient(F, hv, axis=1, edge_order=2)
    second = np.empty(shape + (2, 2, 4))
    second[..., 0, 0, :] = np.gradient(Fu, hu, axis=0, edge_order=2)
    Fuv = np.gradient(Fu, hv, axis=1, edge_order=2)
    second[..., 0, 1, :] = second[..., 1, 0, :] = Fuv
    second[..., 1, 1, :] = np.gradient(Fv, hv, axis=1, edge_order=2)
    return _assemble(
        name, "sampled", domain, us, vs, F, Fu, Fv, second, None, frame_policy, normal_seeds
    )


def rotated_patch(patch: FramedPatch, qp, qm) -> FramedPatch:
    """Apply the ambient rotation x -> qp * x * conj(qm) to a patch.

    Positions and frame vectors rotate; all frame-component data (metric,
    connection, second form) are rotation invariants and carry over.
    """
    from .quaternion import Quaternion, qconj, qmul

    def rot(arr):
        return qmul(qmul(qp.data, arr), qconj(qm.data))

    out = FramedPatch(
        name=patch.name + "-rotated",
        mode=patch.mode,
        domain=patch.domain,
        us=patch.us,
        vs=patch.vs,
        F=rot(patch.F),
        frame=np.stack([rot(patch.frame[..., a, :]) for a in range(4)], axis=-2),
        data=patch.data,
        frame_policy=patch.frame_policy,
        seed_used=None,
    )
    if hasattr(patch, "_analytic_K"):
        out._analytic_K = patch._analytic_K
    return out


# ---------------------------------------------------------------------------
# curvature and structure equations


def brioschi_gauss_curvature(data: PatchData) -> np.ndarray:
    """Gauss curvature from the metric alone (Brioschi formula, FD derivatives)."""
    g = data.g
    E, Ff, G = g[..., 0, 0], g[..., 0, 1], g[..., 1, 1]
    Eu, Ev = data.coordinate_partials(E)
    Gu, Gv = data.coordinate_partials(G)
    Fu_, Fv_ = data.coordinate_partials(Ff)
    Evv = data.partial_v(Ev)
    Guu = data.partial_u(Gu)
    Fuv = data.partial_v(Fu_)
    return _brioschi_from_derivs(E, Ff, G, Eu, Ev, Gu, Gv, Fu_, Fv_, Evv, Guu, Fuv)


def _brioschi_from_derivs(E, Ff, G, Eu, Ev, Gu, Gv, Fu_, Fv_, Evv, Guu, Fuv):
    z = np.zeros_like(E)
    m1 = np.stack(
        [
            np.stack([-Evv / 2 + Fuv - Guu / 2, Eu / 2, Fu_ - Ev / 2], axis=-1),
            np.stack([Fv_ - Gu / 2, E, Ff], axis=-1),
            np.stack([Gv / 2, Ff, G], axis=-1),
        ],
        axis=-2,
    )
    m2 = np.stack(
        [
            np.stack([z, Ev / 2, Gu / 2], axis=-1),
            np.stack([Ev / 2, E, Ff], axis=-1),
            np.stack([Gu / 2, Ff, G], axis=-1),
        ],
        axis=-2,
    )
    det = E * G - Ff**2
    return (np.linalg.det(m1) - np.linalg.det(m2)) / det**2


def normal_curvature(data: PatchData) -> np.ndarray:
    """Curvature of the normal connection, K_N = -d(omega34)(e1, e2).

    The sign makes the Ricci residual K_N + <(S3 S4 - S4 S3) e1, e2> vanish
    on immersed surfaces and matches the -K_N/2 e3.e4 term of the spinorial
    curvature identity (flat ambient space gives d(omega34)(e1, e2) =
    +<(S3 S4 - S4 S3) e1, e2> directly).
    """
    om_u = data.omega34[..., 0]
    om_v = data.omega34[..., 1]
    return -(data.partial_u(om_v) - data.partial_v(om_u)) / data.area_element


def _curvature_data(patch: FramedPatch) -> CurvatureData:
    K = getattr(patch, "_analytic_K", None)
    if K is None:
        K = brioschi_gauss_curvature(patch.data)
    KN = normal_curvature(patch.data)
    B = patch.B
    h_frame = 0.5 * (B[..., 0, 0, :] + B[..., 1, 1, :])  # components on (e3, e4)
    Hvec = (
        h_frame[..., 0][..., None] * patch.frame[..., 2, :]
        + h_frame[..., 1][..., None] * patch.frame[..., 3, :]
    )
    return CurvatureData(K=K, KN=KN, Hvec=Hvec)


def mean_curvature_vector(patch: FramedPatch) -> np.ndarray:
    """Mean curvature vector (half the trace of B) in ambient components."""
    return patch.curvature().Hvec


def mean_curvature_frame(patch: FramedPatch) -> np.ndarray:
    """H in adapted-frame components (first two entries are zero)."""
    B = patch.B
    h = 0.5 * (B[..., 0, 0, :] + B[..., 1, 1, :])
    out = np.zeros(patch.shape + (4,))
    out[..., 2:] = h
    return out


def shape_operator(patch: FramedPatch, normal_index: int) -> np.ndarray:
    """Shape operator for e3 (normal_index=3) or e4 (=4) in the frame basis.

    With an orthonormal tangent frame the matrix of S coincides with the
    matrix of B-components for that normal.
    """
    if normal_index not in (3, 4):
        raise ValidationError("normal_index must be 3 or 4")
    return patch.B[..., normal_index - 3]


def structure_residuals(
    data: PatchData,
    c: float = 0.0,
    K: Optional[np.ndarray] = None,
    KN: Optional[np.ndarray] = None,
) -> Dict[str, ResidualReport]:
    """Gauss / Ricci / Codazzi equation residuals over interior points."""
    if K is None:
        K = brioschi_gauss_curvature(data)
    if KN is None:
        KN = normal_curvature(data)
    B = data.B
    shape = data.shape

    inner_1122 = np.einsum("...k,...k->...", B[..., 0, 0, :], B[..., 1, 1, :])
    norm12_sq = np.einsum("...k,...k->...", B[..., 0, 1, :], B[..., 0, 1, :])
    gauss = K - inner_1122 + norm12_sq - c

    S3 = B[..., 0]
    S4 = B[..., 1]
    comm = np.einsum("...ij,...jk->...ik", S3, S4) - np.einsum("...ij,...jk->...ik", S4, S3)
    ricci = KN + comm[..., 1, 0]

    codazzi = _codazzi_defects(data)

    return {
        "gauss": report_from_values("gauss", shape, interior(gauss)),
        "ricci": report_from_values("ricci", shape, interior(ricci)),
        "codazzi_1": report_from_values("codazzi_1", shape, interior(codazzi[0])),
        "codazzi_2": report_from_values("codazzi_2", shape, interior(codazzi[1])),
    }


def _codazzi_defects(data: PatchData):
    """E-norm of (nabla^N_{e1} B)(e2, Z) - (nabla^N_{e2} B)(e1, Z), Z = e1, e2."""
    B = data.B
    om12 = data.omega12_frame()  # on (e1, e2)
    om34 = data.omega34_frame()

    dB = np.stack([data.frame_deriv(B, 0), data.frame_deriv(B, 1)], axis=-4)
    # dB[..., x, i, j, k] = e_{x+1}(B^k(e_i, e_j))

    def covB(x, i, j, k):
        # (nabla^N_{e_x} B)(e_i, e_j) k-component, frame indices 0-based
        kk = 1 - k
        sign = 1.0 if k == 1 else -1.0  # omega_{43} = -omega34, omega_{34} = +omega34
        val = dB[..., x, i, j, k] + B[..., i, j, kk] * sign * om34[..., x]
        # connection corrections: nabla_{e_x} e_1 = om12(e_x) e_2, nabla_{e_x} e_2 = -om12(e_x) e_1
        for slot, idx in ((0, i), (1, j)):
            other = 1 - idx
            coef = om12[..., x] * (1.0 if idx == 0 else -1.0)
            repl = [i, j]
            repl[slot] = other
            val = val - coef * B[..., repl[0], repl[1], k]
        return val

    defects = []
    for Z in (0, 1):
        comps = [covB(0, 1, Z, k) - covB(1, 0, Z, k) for k in (0, 1)]
        defects.append(np.sqrt(comps[0] ** 2 + comps[1] ** 2))
    return defects


# ---------------------------------------------------------------------------
# exports


def export_csv(path, us, vs, F) -> None:
    """Write a u,v,x1,x2,x3,x4 CSV of a position grid."""
    nu, nv = F.shape[:2]
    with open(path, "w") as fh:
        fh.write("u,v,x1,x2,x3,x4\n")
        for i in range(nu):
            for j in range(nv):
                x = F[i, j]
                fh.write(f"{us[i]:.17g},{vs[j]:.17g},{x[0]:.17g},{x[1]:.17g},{x[2]:.17g},{x[3]:.17g}\n")


def export_obj(path, F, coords=(0, 1, 2)) -> None:
    """Write an OBJ mesh of three chosen coordinates of a position grid."""
    if len(coords) != 3:
        raise ValidationError("obj export needs exactly three coordinate indices")
    nu, nv = F.shape[:2]
    with open(path, "w") as fh:
        for i in range(nu):
            for j in range(nv):
                x = F[i, j]
                fh.write(f"v {x[coords[0]]:.12g} {x[coords[1]]:.12g} {x[coords[2]]:.12g}\n")
        for i in range(nu - 1):
            for j in range(nv - 1):
                a = i * nv + j + 1
                b = a + 1
                cidx = a + nv
                d = cidx + 1
                fh.write(f"f {a} {b} {d}\n")
                fh.write(f"f {a} {d} {cidx}\n")
