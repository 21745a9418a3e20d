"""Exact unit quaternions, the S^3 x S^3 action on R^4, and fixed sets.

A rotation of R^4 is carried as a pair of unit quaternions ``(l, r)``
acting by ``x -> l * x * r^-1``; the pair and its negation give the same
rotation, and :class:`RotationClass` picks a sign-normalized
representative so rotation equality is plain representative equality.
Fixed sets are computed as the exact kernel of the 4x4 linear map
``x -> l*x - x*r``, independently of the cheap real-part test used by the
free-action criterion, so the two can cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import cyclotomic as cy
from . import linalg
from .errors import InternalInconsistency


def _unify4(coords):
    coords = [
        c if isinstance(c, cy.ExactScalar) else cy.rational(c) for c in coords
    ]
    return tuple(cy.unify_conductor(coords))


class UnitQuaternion:
    """Quaternion with ExactScalar coordinates and exact unit norm."""

    __slots__ = ("coords", "_hash", "_circle")

    def __init__(self, a, b, c, d, check=True):
        self.coords = _unify4((a, b, c, d))
        self._hash = None
        self._circle = None
        if check and not self.norm_squared().__eq__(1):
            raise ValueError(f"quaternion is not a unit: {self.coords}")

    @classmethod
    def _raw(cls, coords):
        q = object.__new__(cls)
        q.coords = coords
        q._hash = None
        q._circle = None
        return q

    def norm_squared(self):
        a, b, c, d = self.coords
        return a * a + b * b + c * c + d * d

    @property
    def conductor(self):
        return self.coords[0].conductor

    def real_part(self):
        return self.coords[0]

    def __mul__(self, other):
        if not isinstance(other, UnitQuaternion):
            return NotImplemented
        a1, b1, c1, d1 = self.coords
        if self.coords[0].conductor != other.coords[0].conductor:
            l = math.lcm(self.coords[0].conductor, other.coords[0].conductor)
            a1, b1, c1, d1 = (x.lift(l) for x in self.coords)
            a2, b2, c2, d2 = (x.lift(l) for x in other.coords)
        else:
            a2, b2, c2, d2 = other.coords
        if self.is_circle_factor() and other.is_circle_factor():
            # complex multiplication in the e^{i phi} circle
            return UnitQuaternion._raw(
                (a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, c1, d1)
            )
        return UnitQuaternion._raw(
            (
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            )
        )

    def conjugate(self):
        a, b, c, d = self.coords
        return UnitQuaternion._raw((a, -b, -c, -d))

    inverse = conjugate  # unit quaternions only

    def __neg__(self):
        return UnitQuaternion._raw(tuple(-x for x in self.coords))

    def lift(self, conductor):
        return UnitQuaternion._raw(tuple(x.lift(conductor) for x in self.coords))

    def is_real(self):
        return self.coords[1].is_zero() and self.coords[2].is_zero() and self.coords[3].is_zero()

    def is_circle_factor(self):
        """True when the quaternion lies in the e^{i*phi} circle (no j,k part)."""
        if self._circle is None:
            self._circle = self.coords[2].is_zero() and self.coords[3].is_zero()
        return self._circle

    def __eq__(self, other):
        if not isinstance(other, UnitQuaternion):
            return NotImplemented
        return all(x == y for x, y in zip(self.coords, other.coords))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.coords))
        return self._hash

    def to_floats(self):
        return tuple(x.to_float() for x in self.coords)

    def __repr__(self):
        return "Quat(%s)" % ", ".join(repr(x) for x in self.coords)


def quat(a=0, b=0, c=0, d=0, check=True):
    return UnitQuaternion(a, b, c, d, check=check)


def quat_one():
    return quat(1, 0, 0, 0, check=False)


def quat_i():
    return quat(0, 1, 0, 0, check=False)


def quat_j():
    return quat(0, 0, 1, 0, check=False)


def quat_k():
    return quat(0, 0, 0, 1, check=False)


def circle_quaternion(num, den):
    """The unit quaternion cos(2*pi*num/den) + i*sin(2*pi*num/den)."""
    c = cy.cos_tau(num, den)
    s = cy.sin_tau(num, den)
    return UnitQuaternion(c, s, 0, 0, check=False)


class Spin4Element:
    """Pair of unit quaternions acting on R^4 by x -> left * x * right^-1."""

    __slots__ = ("left", "right", "_hash")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self._hash = None

    def __mul__(self, other):
        if not isinstance(other, Spin4Element):
            return NotImplemented
        return Spin4Element(self.left * other.left, self.right * other.right)

    def inverse(self):
        return Spin4Element(self.left.inverse(), self.right.inverse())

    def __neg__(self):
        return Spin4Element(-self.left, -self.right)

    def apply(self, x):
        """Image of the quaternion x under the rotation."""
        return self.left * x * self.right.inverse()

    def lift(self, conductor):
        return Spin4Element(self.left.lift(conductor), self.right.lift(conductor))

    def conductor(self):
        return math.lcm(
            *(x.conductor for x in self.left.coords + self.right.coords)
        )

    def is_identity(self):
        one = quat_one()
        return self.left == one and self.right == one

    def __eq__(self, other):
        if not isinstance(other, Spin4Element):
            return NotImplemented
        return self.left == other.left and self.right == other.right

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.left, self.right))
        return self._hash

    def __repr__(self):
        return f"Spin4({self.left!r}, {self.right!r})"


def spin_identity():
    return Spin4Element(quat_one(), quat_one())


class RotationClass:
    """SO(4) element: a Spin(4) pair up to simultaneous sign flip.

    The stored representative flips signs so that the first coordinate of
    the left factor with nonzero canonical form is positive (the left
    factor of a unit pair always has one, so the right factor is only a
    defensive fallback).
    """

    __slots__ = ("rep", "_hash")

    def __init__(self, element):
        self.rep = self._normalize(element)
        self._hash = None

    @staticmethod
    def _normalize(element):
        for scalar in element.left.coords + element.right.coords:
            s = scalar.sign()
            if s < 0:
                return -element
            if s > 0:
                return element
        raise InternalInconsistency("sign-normalizing a zero pair")

    def __mul__(self, other):
        if not isinstance(other, RotationClass):
            return NotImplemented
        return RotationClass(self.rep * other.rep)

    def inverse(self):
        return RotationClass(self.rep.inverse())

    def lift(self, conductor):
        return RotationClass(self.rep.lift(conductor))

    def conductor(self):
        return self.rep.conductor()

    def is_identity(self):
        return self.rep.is_identity()

    def apply(self, x):
        return self.rep.apply(x)

    def __eq__(self, other):
        if not isinstance(other, RotationClass):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rep)
        return self._hash

    def __repr__(self):
        return f"RotationClass({self.rep!r})"


# -- fixed sets -----------------------------------------------------------------


@dataclass(frozen=True)
class FixedSet:
    """Fixed points of a rotation of S^3: nothing, one circle, or everything.

    For a circle, ``basis`` holds two exact pairwise-orthogonal vectors in
    R^4 spanning the fixed 2-plane, each exactly fixed by the rotation.
    They are content-reduced rather than unit length: exact normalization
    can require square roots that leave every cyclotomic field.
    """

    kind: str  # "empty" | "circle" | "all"
    basis: tuple = ()

    def dimension(self):
        return {"empty": 0, "circle": 2, "all": 4}[self.kind]


def _left_mult_matrix(q):
    a, b, c, d = q.coords
    return [
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ]


def _right_mult_matrix(q):
    a, b, c, d = q.coords
    return [
        [a, -b, -c, -d],
        [b, a, d, -c],
        [c, -d, a, b],
        [d, c, -b, a],
    ]


def _content_reduce(vec):
    nums = []
    dens = []
    for scalar in vec:
        for _, coeff in scalar.canonical():
            nums.append(coeff.numerator)
            dens.append(coeff.denominator)
    if not nums:
        return vec
    content = Fraction(math.gcd(*nums), math.lcm(*dens))
    vec = tuple(s * (1 / content) for s in vec)
    for scalar in vec:
        s = scalar.sign()
        if s:
            return vec if s > 0 else tuple(-x for x in vec)
    return vec


def fixed_set(rotation):
    """Exact fixed set via the kernel of x -> q1*x - x*q2 on R^4."""
    element = rotation.rep if isinstance(rotation, RotationClass) else rotation
    q1, q2 = element.left, element.right
    l = math.lcm(q1.conductor, q2.conductor)
    q1 = UnitQuaternion._raw(tuple(x.lift(l) for x in q1.coords))
    q2 = UnitQuaternion._raw(tuple(x.lift(l) for x in q2.coords))
    lm = _left_mult_matrix(q1)
    rm = _right_mult_matrix(q2)
    m = [[lm[i][j] - rm[i][j] for j in range(4)] for i in range(4)]
    basis = linalg.kernel(m, 4)
    dim = len(basis)
    if dim == 0:
        return FixedSet("empty")
    if dim == 4:
        return FixedSet("all")
    if dim != 2:
        raise InternalInconsistency(f"fixed-set dimension {dim} is impossible")
    v1, v2 = basis
    dot11 = sum((a * a for a in v1), cy.zero(l))
    dot12 = sum((a * b for a, b in zip(v1, v2)), cy.zero(l))
    w2 = tuple(dot11 * b - dot12 * a for a, b in zip(v1, v2))
    return FixedSet("circle", (_content_reduce(v1), _content_reduce(w2)))


def has_fixed_points(rotation):
    """Cheap independent criterion: fixed vectors exist iff Re(q1) == Re(q2)."""
    element = rotation.rep if isinstance(rotation, RotationClass) else rotation
    return element.left.real_part() == element.right.real_part()
