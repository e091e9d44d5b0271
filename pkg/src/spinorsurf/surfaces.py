"""Built-in surface catalog with exact derivatives via sympy.

Each catalog entry is a closed-form immersion F(u, v) into R^4.  The
analytic machinery lambdifies F, its partials up to second order, the
induced metric with its derivatives, the Gauss curvature, and the
tangent-frame connection coefficients, so analytic-mode patches carry
pointwise-exact first/second order data.

Default domains are chosen so the fixed-seed normal frames stay smooth
and nondegenerate (no seed direction falls into the tangent plane).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import sympy as sp

u, v = sp.symbols("u v", real=True)


@dataclass(frozen=True)
class SurfaceDef:
    name: str
    components: Tuple[sp.Expr, sp.Expr, sp.Expr, sp.Expr]
    default_domain: Tuple[float, float, float, float]
    description: str = ""


def _catalog(params: Dict[str, float]) -> Dict[str, SurfaceDef]:
    r = sp.Float(params.get("radius", 1.0))
    return {
        "plane": SurfaceDef(
            "plane", (u, v, sp.Integer(0), sp.Integer(0)), (0.0, 1.0, 0.0, 1.0), "flat plane"
        ),
        "sphere": SurfaceDef(
            "sphere",
            (r * sp.sin(u) * sp.cos(v), r * sp.sin(u) * sp.sin(v), r * sp.cos(u), sp.Integer(0)),
            (0.55, 1.30, 0.2, 1.4),
            "round sphere of radius r in R^3 x {0}, spherical coordinates (u=polar); "
            "the domain keeps clear of the pole (stiff 1/sin factors) and of the "
            "equator (where the fixed-seed normal frame degenerates)",
        ),
        "catenoid": SurfaceDef(
            "catenoid",
            (sp.cosh(v) * sp.cos(u), sp.cosh(v) * sp.sin(u), v, sp.Integer(0)),
            (-1.0, 1.0, -0.8, 0.8),
            "catenoid in R^3 x {0}; the angular range stays clear of u = pi/2 "
            "where the fixed-seed normal frame would degenerate",
        ),
        "enneper": SurfaceDef(
            "enneper",
            (
                u - u**3 / 3 + u * v**2,
                -(v - v**3 / 3 + v * u**2),
                u**2 - v**2,
                sp.Integer(0),
            ),
            (-0.6, 0.6, -0.6, 0.6),
            "Enneper surface in R^3 x {0}",
        ),
        "clifford-torus": SurfaceDef(
            "clifford-torus",
            (
                sp.cos(u) / sp.sqrt(2),
                sp.sin(u) / sp.sqrt(2),
                sp.cos(v) / sp.sqrt(2),
                sp.sin(v) / sp.sqrt(2),
            ),
            (0.2, 1.2, 0.2, 1.2),
            "flat torus in the unit 3-sphere",
        ),
        "holomorphic-graph": SurfaceDef(
            "holomorphic-graph",
            (u, v, u**2 - v**2, 2 * u * v),
            (-0.8, 0.8, -0.8, 0.8),
            "graph of z -> (z, z^2) in C^2 = R^4",
        ),
    }


SURFACE_NAMES = tuple(_catalog({}).keys())


def _lambdify_vec(exprs) -> Callable:
    fns = [sp.lambdify((u, v), e, modules="numpy") for e in exprs]

    def call(U, V):
        U = np.asarray(U, dtype=float)
        V = np.asarray(V, dtype=float)
        out = np.empty(U.shape + (len(fns),))
        for k, f in enumerate(fns):
            out[..., k] = np.broadcast_to(f(U, V), U.shape)
        return out

    return call


def _lambdify_scalar(expr) -> Callable:
    f = sp.lambdify((u, v), expr, modules="numpy")

    def call(U, V):
        U = np.asarray(U, dtype=float)
        return np.broadcast_to(f(U, np.asarray(V, dtype=float)), U.shape).astype(float)

    return call


@dataclass
class AnalyticSurface:
    """Lambdified exact geometry of one catalog surface."""

    name: str
    default_domain: Tuple[float, float, float, float]
    position: Callable
    d1: Dict[str, Callable]  # Fu, Fv
    d2: Dict[str, Callable]  # Fuu, Fuv, Fvv
    metric: Dict[str, Callable]  # E, F, G
    gauss_curvature: Callable
    omega12: Callable  # (U, V) -> (..., 2) values on (du, dv)
    sym: SurfaceDef = field(repr=False, default=None)


def _christoffel(Ee, Fe, Ge):
    gmat = sp.Matrix([[Ee, Fe], [Fe, Ge]])
    ginv = gmat.inv()
    coords = (u, v)
    gamma = {}
    for k in range(2):
        for i in range(2):
            for j in range(2):
                s = 0
                for l in range(2):
                    s += ginv[k, l] * (
                        sp.diff(gmat[j, l], coords[i])
                        + sp.diff(gmat[i, l], coords[j])
                        - sp.diff(gmat[i, j], coords[l])
                    )
                gamma[(k, i, j)] = sp.simplify(s / 2)
    return gamma


def _brioschi(Ee, Fe, Ge):
    Eu, Ev = sp.diff(Ee, u), sp.diff(Ee, v)
    Gu, Gv = sp.diff(Ge, u), sp.diff(Ge, v)
    Fu_, Fv_ = sp.diff(Fe, u), sp.diff(Fe, v)
    Evv, Guu, Fuv = sp.diff(Ee, v, 2), sp.diff(Ge, u, 2), sp.diff(Fe, u, v)
    m1 = sp.Matrix(
        [
            [-Evv / 2 + Fuv - Guu / 2, Eu / 2, Fu_ - Ev / 2],
            [Fv_ - Gu / 2, Ee, Fe],
            [Gv / 2, Fe, Ge],
        ]
    )
    m2 = sp.Matrix([[0, Ev / 2, Gu / 2], [Ev / 2, Ee, Fe], [Gu / 2, Fe, Ge]])
    det = Ee * Ge - Fe**2
    return sp.simplify((m1.det() - m2.det()) / det**2)


_ANALYTIC_CACHE: Dict[tuple, AnalyticSurface] = {}


def analytic_surface(name: str, params: Optional[Dict[str, float]] = None) -> AnalyticSurface:
    params = dict(params or {})
    key = (name, tuple(sorted(params.items())))
    if key in _ANALYTIC_CACHE:
        return _ANALYTIC_CACHE[key]
    cat = _catalog(params)
    if name not in cat:
        raise KeyError(f"unknown surface {name!r}; available: {', '.join(sorted(cat))}")
    sdef = cat[name]
    F = sp.Matrix(sdef.components)
    Fu = F.diff(u)
    Fv = F.diff(v)
    Ee = sp.simplify(Fu.dot(Fu))
    Fe = sp.simplify(Fu.dot(Fv))
    Ge = sp.simplify(Fv.dot(Fv))
    W = sp.sqrt(Ee * Ge - Fe**2)
    gamma = _christoffel(Ee, Fe, Ge)
    # connection form of the Gram-Schmidt tangent frame on (du, dv):
    # omega12(d_c) = Gamma^v_{c,u} * W / E
    om12_u = sp.simplify(gamma[(1, 0, 0)] * W / Ee)
    om12_v = sp.simplify(gamma[(1, 1, 0)] * W / Ee)
    K = _brioschi(Ee, Fe, Ge)

    surf = AnalyticSurface(
        name=name,
        default_domain=sdef.default_domain,
        position=_lambdify_vec(list(F)),
        d1={"u": _lambdify_vec(list(Fu)), "v": _lambdify_vec(list(Fv))},
        d2={
            "uu": _lambdify_vec(list(F.diff(u, 2))),
            "uv": _lambdify_vec(list(F.diff(u).diff(v))),
            "vv": _lambdify_vec(list(F.diff(v, 2))),
        },
        metric={
            "E": _lambdify_scalar(Ee),
            "F": _lambdify_scalar(Fe),
            "G": _lambdify_scalar(Ge),
        },
        gauss_curvature=_lambdify_scalar(K),
        omega12=lambda U, V, fu=_lambdify_scalar(om12_u), fv=_lambdify_scalar(om12_v): np.stack(
            [fu(U, V), fv(U, V)], axis=-1
        ),
        sym=sdef,
    )
    _ANALYTIC_CACHE[key] = surf
    return surf


def default_domain(name: str) -> Tuple[float, float, float, float]:
    return _catalog({})[name].default_domain
