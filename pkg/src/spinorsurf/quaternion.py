"""Quaternion arithmetic over numpy arrays.

A `Quaternion` wraps an ndarray whose last axis has length 4 and holds the
components (w, x, y, z) along (1, I, J, K).  All operations broadcast, so a
single instance can represent one quaternion or a whole grid of them.
R^4 is identified with H by (x1, x2, x3, x4) <-> x1*1 + x2*I + x3*J + x4*K.
"""

from __future__ import annotations

import numpy as np


class Quaternion:
    """Quaternion (or broadcastable array of quaternions) in H."""

    __slots__ = ("data",)

    # keep ndarray * Quaternion from being swallowed by numpy broadcasting
    __array_ufunc__ = None

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        w, x, y, z = np.broadcast_arrays(
            np.asarray(w, dtype=float),
            np.asarray(x, dtype=float),
            np.asarray(y, dtype=float),
            np.asarray(z, dtype=float),
        )
        self.data = np.stack([w, x, y, z], axis=-1)

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        arr = np.asarray(arr, dtype=float)
        if arr.shape[-1] != 4:
            raise ValueError(f"last axis must have length 4, got shape {arr.shape}")
        q = cls.__new__(cls)
        q.data = arr
        return q

    @classmethod
    def zeros(cls, shape=()) -> "Quaternion":
        return cls.from_array(np.zeros(tuple(np.atleast_1d(shape)) + (4,)))

    # -- component access -------------------------------------------------
    @property
    def w(self):
        return self.data[..., 0]

    @property
    def x(self):
        return self.data[..., 1]

    @property
    def y(self):
        return self.data[..., 2]

    @property
    def z(self):
        return self.data[..., 3]

    @property
    def shape(self):
        return self.data.shape[:-1]

    def __getitem__(self, idx) -> "Quaternion":
        return Quaternion.from_array(self.data[idx])

    def copy(self) -> "Quaternion":
        return Quaternion.from_array(self.data.copy())

    # -- ring operations ---------------------------------------------------
    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.data + other.data)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.data - other.data)

    def __neg__(self) -> "Quaternion":
        return Quaternion.from_array(-self.data)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.data, other.data))
        return Quaternion.from_array(self.data * np.asarray(other)[..., None])

    def __rmul__(self, other):
        # real scalars commute; quaternion*quaternion goes through __mul__
        return Quaternion.from_array(self.data * np.asarray(other)[..., None])

    def __truediv__(self, other):
        return Quaternion.from_array(self.data / np.asarray(other)[..., None])

    def conj(self) -> "Quaternion":
        out = self.data.copy()
        out[..., 1:] *= -1.0
        return Quaternion.from_array(out)

    def norm_sq(self):
        return (self.data ** 2).sum(axis=-1)

    def norm(self):
        return np.sqrt(self.norm_sq())

    def inverse(self) -> "Quaternion":
        return Quaternion.from_array(self.conj().data / self.norm_sq()[..., None])

    def normalized(self) -> "Quaternion":
        return Quaternion.from_array(self.data / self.norm()[..., None])

    def dot(self, other: "Quaternion"):
        """Euclidean inner product of R^4 = H (the 1-component of conj(other)*self)."""
        return (self.data * other.data).sum(axis=-1)

    def allclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(self.data - other.data) <= tol))

    def max_abs(self):
        return np.abs(self.data).max()

    def __repr__(self):
        if self.shape == ():
            w, x, y, z = self.data
            return f"Quaternion({w:.6g}, {x:.6g}, {y:.6g}, {z:.6g})"
        return f"Quaternion(shape={self.shape})"


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product on raw (...,4) arrays; broadcasts."""
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    out = a.copy()
    out[..., 1:] *= -1.0
    return out


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)

# Orthonormal frame vectors as quaternions under the R^4 = H identification:
# e1 <-> 1, e2 <-> I, e3 <-> J, e4 <-> K.
FRAME_QUATS = (ONE, I, J, K)


def vector4(components) -> Quaternion:
    """Vector of R^4 in frame components (e1, e2, e3, e4) as a quaternion.

    `components` is array-like with last axis of length 4.
    """
    return Quaternion.from_array(np.asarray(components, dtype=float))


def random_quaternion(rng: np.random.Generator, shape=(), scale: float = 1.0) -> Quaternion:
    return Quaternion.from_array(rng.normal(size=tuple(np.atleast_1d(shape)) + (4,)) * scale)


def random_unit_quaternion(rng: np.random.Generator, shape=()) -> Quaternion:
    q = random_quaternion(rng, shape)
    return q.normalized()
