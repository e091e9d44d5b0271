"""The H(2) spinor model of the rank-4 Clifford algebra.

Spinors live in H (+) H.  A vector x of R^4 = H acts by

    x . (a, b) = (x*b, -conj(x)*a),

which squares to -|x|^2 and makes the volume element
omega4 = -e1.e2.e3.e4 act as +1 on the first summand and -1 on the second.
Spin(4) is realized as pairs of unit quaternions acting by left
multiplication on the two summands, equivariantly with the vector rotation
x -> qp * x * conj(qm).

The complex structure on spinors is right multiplication by I; the hermitian
product is the span{1, I}-component of conj(second)*first, summed over the
two halves.  It is C-linear in the first argument and C-antilinear in the
second, with Clifford multiplication antihermitian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quaternion import Quaternion, qconj, qmul


@dataclass(frozen=True)
class SpinorPair:
    """One spinor (or a grid of them): plus half and minus half in H."""

    plus: Quaternion
    minus: Quaternion

    @classmethod
    def zeros(cls, shape=()) -> "SpinorPair":
        return cls(Quaternion.zeros(shape), Quaternion.zeros(shape))

    def __add__(self, other: "SpinorPair") -> "SpinorPair":
        return SpinorPair(self.plus + other.plus, self.minus + other.minus)

    def __sub__(self, other: "SpinorPair") -> "SpinorPair":
        return SpinorPair(self.plus - other.plus, self.minus - other.minus)

    def __neg__(self) -> "SpinorPair":
        return SpinorPair(-self.plus, -self.minus)

    def scale(self, s) -> "SpinorPair":
        """Multiply by a real scalar (or scalar grid)."""
        return SpinorPair(s * self.plus, s * self.minus)

    def times_i(self) -> "SpinorPair":
        """The complex structure: right multiplication by I on both halves."""
        from .quaternion import I

        return SpinorPair(self.plus * I, self.minus * I)

    def scale_complex(self, lam: complex) -> "SpinorPair":
        """Multiply by a complex scalar via the right-I complex structure."""
        from .quaternion import I, ONE

        factor = float(lam.real) * ONE + float(lam.imag) * I
        return self.right_mul(factor, factor)

    def right_mul(self, cp: Quaternion, cm: Quaternion) -> "SpinorPair":
        """Right multiplication (a, b) -> (a*cp, b*cm); commutes with Clifford action."""
        return SpinorPair(self.plus * cp, self.minus * cm)

    def norm_sq(self):
        return self.plus.norm_sq() + self.minus.norm_sq()

    def norm(self):
        return np.sqrt(self.norm_sq())

    def max_abs(self):
        return max(self.plus.max_abs(), self.minus.max_abs())

    def __getitem__(self, idx) -> "SpinorPair":
        return SpinorPair(self.plus[idx], self.minus[idx])

    @property
    def shape(self):
        return self.plus.shape


def clifford_act(x: Quaternion, phi: SpinorPair) -> SpinorPair:
    """Clifford action of the vector x (frame components as a quaternion)."""
    return SpinorPair(x * phi.minus, -(x.conj() * phi.plus))


def clifford_act2(x: Quaternion, y: Quaternion, phi: SpinorPair) -> SpinorPair:
    """x . y . phi (apply y first)."""
    return clifford_act(x, clifford_act(y, phi))


def omega4(phi: SpinorPair) -> SpinorPair:
    """Volume element -e1.e2.e3.e4; equals +1 on plus half, -1 on minus half."""
    from .quaternion import FRAME_QUATS

    e1, e2, e3, e4 = FRAME_QUATS
    out = clifford_act(e1, clifford_act(e2, clifford_act(e3, clifford_act(e4, phi))))
    return -out


def _tangent_volume(phi: SpinorPair) -> SpinorPair:
    from .quaternion import FRAME_QUATS

    return clifford_act2(FRAME_QUATS[0], FRAME_QUATS[1], phi)


def _normal_volume(phi: SpinorPair) -> SpinorPair:
    from .quaternion import FRAME_QUATS

    return clifford_act2(FRAME_QUATS[2], FRAME_QUATS[3], phi)


def _eigenproject(op, phi: SpinorPair, sign: float) -> SpinorPair:
    # Projector onto the (sign*i)-eigenspace of a C-linear operator with
    # op^2 = -1: P = (1 - sign * i o op) / 2, with i the right-I structure.
    return (phi - op(phi).times_i().scale(sign)).scale(0.5)


def project_quadrants(phi: SpinorPair):
    """Split phi into (pp, mm, pm, mp) quadrant parts.

    The first label is the eigenvalue sign of the tangent area element
    e1.e2 (acting as +/- i), the second that of the normal area element
    e3.e4.  The parts are built from the eigenprojectors of the actual
    Clifford operators rather than from hard-coded component spans.
    """
    m_plus = _eigenproject(_tangent_volume, phi, +1.0)
    m_minus = phi - m_plus
    pp = _eigenproject(_normal_volume, m_plus, +1.0)
    pm = m_plus - pp
    mp = _eigenproject(_normal_volume, m_minus, +1.0)
    mm = m_minus - mp
    return pp, mm, pm, mp


def half_plus(phi: SpinorPair) -> SpinorPair:
    """Projection onto the +1 eigenspace of omega4 (the plus half)."""
    return SpinorPair(phi.plus, Quaternion.zeros(phi.plus.shape))


def half_minus(phi: SpinorPair) -> SpinorPair:
    return SpinorPair(Quaternion.zeros(phi.minus.shape), phi.minus)


def _complex_component(q: Quaternion):
    """span{1, I}-component of a quaternion as a complex array."""
    return q.w + 1j * q.x


def herm_inner(phi: SpinorPair, psi: SpinorPair):
    """Hermitian product; C-linear in phi, C-antilinear in psi."""
    return _complex_component(psi.plus.conj() * phi.plus) + _complex_component(
        psi.minus.conj() * phi.minus
    )


def real_inner(phi: SpinorPair, psi: SpinorPair):
    """Real part of the hermitian product (the real scalar product)."""
    return phi.plus.dot(psi.plus) + phi.minus.dot(psi.minus)


def quat_pairing(phi: SpinorPair, psi: SpinorPair, half: str = "plus") -> Quaternion:
    """Quaternion-valued pairing conj([psi_half]) * [phi_half]."""
    if half == "plus":
        return psi.plus.conj() * phi.plus
    if half == "minus":
        return psi.minus.conj() * phi.minus
    raise ValueError(f"half must be 'plus' or 'minus', got {half!r}")


class NonUnitSpinError(ValueError):
    """A Spin(4) element was given with non-unit quaternion factors."""


def spin4_frame_act(qp: Quaternion, qm: Quaternion, phi: SpinorPair, tol: float = 1e-9) -> SpinorPair:
    """Spin(4) action (a, b) -> (qp*a, qm*b) for unit quaternions qp, qm.

    Equivariant with the vector rotation x -> qp * x * conj(qm).
    """
    if np.any(np.abs(qp.norm() - 1.0) > tol) or np.any(np.abs(qm.norm() - 1.0) > tol):
        raise NonUnitSpinError("spin element factors must be unit quaternions")
    return SpinorPair(qp * phi.plus, qm * phi.minus)


def rotate_vector(qp: Quaternion, qm: Quaternion, x: Quaternion) -> Quaternion:
    """The SO(4) rotation x -> qp * x * conj(qm) covered by (qp, qm)."""
    return qp * x * qm.conj()


@dataclass(frozen=True)
class CliffordOrder2:
    """Even, order-<=2 Clifford element acting block-diagonally as (p, q).

    Products of two orthogonal vectors land here with p, q purely imaginary;
    scalars appear as real parts (e.g. x.x = -|x|^2).
    """

    p: Quaternion
    q: Quaternion

    @classmethod
    def zeros(cls, shape=()) -> "CliffordOrder2":
        return cls(Quaternion.zeros(shape), Quaternion.zeros(shape))

    @classmethod
    def from_vector_product(cls, x: Quaternion, y: Quaternion) -> "CliffordOrder2":
        """The composition x . y as a block-diagonal operator."""
        return cls(-(x * y.conj()), -(x.conj() * y))

    def act(self, phi: SpinorPair) -> SpinorPair:
        return SpinorPair(self.p * phi.plus, self.q * phi.minus)

    def __add__(self, other: "CliffordOrder2") -> "CliffordOrder2":
        return CliffordOrder2(self.p + other.p, self.q + other.q)

    def __sub__(self, other: "CliffordOrder2") -> "CliffordOrder2":
        return CliffordOrder2(self.p - other.p, self.q - other.q)

    def __neg__(self) -> "CliffordOrder2":
        return CliffordOrder2(-self.p, -self.q)

    def scale(self, s) -> "CliffordOrder2":
        return CliffordOrder2(s * self.p, s * self.q)

    def operator_norm(self):
        """Sup of |T phi| over unit spinors; equals max(|p|, |q|)."""
        return np.maximum(self.p.norm(), self.q.norm())

    def commutator_vector(self, x: Quaternion) -> Quaternion:
        """x . T - T . x as a vector of R^4 (valid for order-2 T)."""
        return x * self.q - self.p * x


def frame_vector_product(i: int, j: int) -> CliffordOrder2:
    """e_i . e_j as a block operator, frame indices in 1..4."""
    from .quaternion import FRAME_QUATS

    return CliffordOrder2.from_vector_product(FRAME_QUATS[i - 1], FRAME_QUATS[j - 1])
