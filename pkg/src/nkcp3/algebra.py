"""Quaternions, the C^4 = H^2 identification and the Hopf-fibration helpers.

Conventions fixed for the whole package:

* Points of CP^3 are unit vectors p in C^4; the Hopf fiber is {e^{it} p}.
* Quaternions act on H^2 from the left.  Complex scalar multiplication by i
  on C^4 is left multiplication by i, and left multiplication by j is the
  antilinear map ``j v = OMEGA @ conj(v)`` with OMEGA the standard
  symplectic form.  Sp(2) = U(4) ∩ Sp(4, C) is exactly the group commuting
  with this j.
* The matching identification is (z1, z2, z3, z4) -> (z1 - z3 j, z2 - z4 j).

All vector helpers work on numpy arrays and on :class:`~nkcp3.jets.Jet`
values alike; the C^4 components sit on the last axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

OMEGA = np.array(
    [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=complex
)


# quaternions ---------------------------------------------------------------


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        w, x, y, z = (float(t) for t in a)
        return cls(w, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.as_array() - other.as_array())

    def __neg__(self) -> "Quaternion":
        return Quaternion.from_array(-self.as_array())

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion.from_array(self.as_array() * float(other))

    __rmul__ = __mul__

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def inverse(self) -> "Quaternion":
        return self.conj() * (1.0 / self.norm() ** 2)

    def as_complex_pair(self) -> tuple[complex, complex]:
        """q = a + b j with a, b complex."""
        return complex(self.w, self.x), complex(self.y, self.z)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def quat_matrix(q: Quaternion) -> np.ndarray:
    """Real 4x4 matrix of left multiplication by q."""
    w, x, y, z = q.w, q.x, q.y, q.z
    return np.array([[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]])


def identify_c4_h2(v) -> tuple[Quaternion, Quaternion]:
    z1, z2, z3, z4 = (complex(t) for t in v)
    return (
        Quaternion(z1.real, z1.imag, -z3.real, -z3.imag),
        Quaternion(z2.real, z2.imag, -z4.real, -z4.imag),
    )


def identify_h2_c4(q1: Quaternion, q2: Quaternion) -> np.ndarray:
    return np.array(
        [complex(q1.w, q1.x), complex(q2.w, q2.x), -complex(q1.y, q1.z), -complex(q2.y, q2.z)]
    )


def quat_act(q: Quaternion, v):
    """Left action of a quaternion on C^4 = H^2 (works on jets)."""
    out = v * q.w
    if q.x:
        out = out + (1j * q.x) * v
    if q.y or q.z:
        jv = jvec(v)
        out = out + jv * q.y + (1j * q.z) * jv
    return out


# C^4 vector helpers (arrays or jets) ----------------------------------------


def jvec(v):
    return v.conj() @ OMEGA.T


def kvec(v):
    return 1j * jvec(v)


def rdot(a, b):
    """Real (Euclidean R^8) inner product over the last axis."""
    return (a.conj() * b).real.sum(-1)


def _bc(s):
    # scalar per batch point -> broadcast over the C^4 axis
    return s[..., None]


def horizontal(p, x):
    """Component of x orthogonal to p and i p (p a unit vector)."""
    ip = 1j * p
    return x - _bc(rdot(x, p)) * p - _bc(rdot(x, ip)) * ip


def vertical_rate(p, x):
    """<x, i p>: the fiber-direction component of a velocity x at p."""
    return rdot(x, 1j * p)


def normalize(x):
    from .jets import sqrt

    return x / _bc(sqrt(rdot(x, x)))


# customary torus coordinates ----------------------------------------------------
#
# The tori (and their orbit generators) are written in coordinates where the
# quaternionic pairing is (1,2), (3,4) and the complex structure is the
# conjugate one.  z -> conj(z1, z3, z2, z4) carries them to the conventions
# above; it fixes p0 = (1, 0, 0, 0).

SWAP23 = np.eye(4)[[0, 2, 1, 3]].astype(complex)


def customary_to_package(v):
    """Map a vector (array or jet, C^4 on the last axis) from the customary torus coordinates."""
    return v.conj() @ SWAP23.T


def customary_to_package_matrix(a) -> np.ndarray:
    """The same change of coordinates acting on a generator: A -> conj(S A S^T)."""
    return np.conj(SWAP23 @ np.asarray(a, dtype=complex) @ SWAP23.T)


# matrices --------------------------------------------------------------------


def expm(a, t: float = 1.0) -> np.ndarray:
    """Matrix exponential of t * a."""
    return scipy.linalg.expm(t * np.asarray(a, dtype=complex))


def is_sp2(a, tol: float = 1e-12) -> bool:
    """Membership of a 4x4 matrix in the Lie algebra sp(2)."""
    a = np.asarray(a)
    return bool(
        np.abs(a + a.conj().T).max() <= tol and np.abs(a.T @ OMEGA + OMEGA @ a).max() <= tol
    )


def is_Sp2(u, tol: float = 1e-12) -> bool:
    """Membership of a 4x4 matrix in the group Sp(2)."""
    u = np.asarray(u)
    eye = np.eye(4)
    return bool(
        np.abs(u.conj().T @ u - eye).max() <= tol and np.abs(u.T @ OMEGA @ u - OMEGA).max() <= tol
    )
