"""Exact arithmetic in the dihedral group of order 2n (n odd) and its
permutation action on the sheets of the irregular dihedral cover.

The group is presented as  < s, t | s^n = t^2 = 1, t s t = s^{-1} >  and every
element is either a rotation s^a or a reflection t s^a.  Multiplication
follows from the relations:

    s^a s^b         = s^{a+b}
    (t s^a)(s^b)    = t s^{a+b}
    (s^a)(t s^b)    = t s^{b-a}
    (t s^a)(t s^b)  = s^{b-a}

As permutations of the sheets {1, ..., n} the generators act by

    t : i -> 2 - i   (mod n, representatives 1..n)
    s : i -> i + 1

and a reflection t s^a acts by i -> (2 - i) + a, i.e. t first, then s^a.
With this convention acting by a product g*h applies the *left* factor
first:  (g*h)(i) = h(g(i)).  This matches the usual composition of path
lifts in a covering space (concatenate paths left to right) and is pinned
by the block-permutation test for n = 7.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class ContextMismatchError(ValueError):
    """Raised when elements of different dihedral groups are combined."""


@dataclass(frozen=True)
class DihedralElement:
    """An element of the dihedral group of order 2n, n odd.

    ``refl`` is True for reflections t s^rot, False for rotations s^rot.
    ``rot`` is always normalized into {0, ..., n-1}.
    """

    n: int
    refl: bool
    rot: int

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError("n must be odd and at least 3, got %r" % (self.n,))
        object.__setattr__(self, "rot", self.rot % self.n)

    # -- basic structure -------------------------------------------------

    def _require_same_group(self, other):
        if not isinstance(other, DihedralElement):
            raise TypeError("expected a DihedralElement, got %r" % (other,))
        if self.n != other.n:
            raise ContextMismatchError(
                "cannot combine elements of D_%d and D_%d" % (2 * self.n, 2 * other.n)
            )

    def __mul__(self, other):
        return dihedral_mul(self, other)

    def inverse(self):
        if self.refl:
            return self  # reflections are involutions
        return DihedralElement(self.n, False, -self.rot)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = identity(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate_by(self, g, sign=1):
        """Return g^sign * self * g^-sign (the Wirtinger update rule)."""
        self._require_same_group(g)
        gs = g if sign >= 0 else g.inverse()
        return gs * self * gs.inverse()

    @property
    def is_identity(self):
        return not self.refl and self.rot == 0

    @property
    def is_rotation(self):
        return not self.refl

    @property
    def order(self):
        if self.refl:
            return 2
        if self.rot == 0:
            return 1
        return self.n // gcd(self.rot, self.n)

    # -- textual form ----------------------------------------------------

    def __str__(self):
        if self.refl:
            return "t" if self.rot == 0 else "t s^%d" % self.rot
        if self.rot == 0:
            return "1"
        if self.rot == 1:
            return "s"
        return "s^%d" % self.rot

    def __repr__(self):
        return "DihedralElement(n=%d, %s)" % (self.n, str(self))


def identity(n):
    return DihedralElement(n, False, 0)


def rotation(n, a):
    return DihedralElement(n, False, a)


def reflection(n, a=0):
    return DihedralElement(n, True, a)


def dihedral_mul(a, b):
    """Product a*b under s^n = t^2 = 1, t s t = s^{-1}."""
    a._require_same_group(b)
    n = a.n
    if not a.refl and not b.refl:
        return DihedralElement(n, False, a.rot + b.rot)
    if a.refl and not b.refl:
        return DihedralElement(n, True, a.rot + b.rot)
    if not a.refl and b.refl:
        return DihedralElement(n, True, b.rot - a.rot)
    return DihedralElement(n, False, b.rot - a.rot)


def parse_element(text, n):
    """Parse the textual forms "1", "s", "s^3", "t", "t s^2", "ts^2", "s^-1".

    Whitespace and a ``*`` between t and the s-power are tolerated.
    """
    s = text.strip().replace("*", " ")
    if s in ("1", "e", ""):
        return identity(n)
    refl = False
    if s.startswith("t"):
        refl = True
        s = s[1:].strip()
    if not s:
        return DihedralElement(n, refl, 0)
    if not s.startswith("s"):
        raise ValueError("cannot parse dihedral element %r" % (text,))
    s = s[1:].strip()
    if not s:
        rot = 1
    elif s.startswith("^"):
        try:
            rot = int(s[1:].strip())
        except ValueError:
            raise ValueError("cannot parse dihedral element %r" % (text,)) from None
    else:
        raise ValueError("cannot parse dihedral element %r" % (text,))
    return DihedralElement(n, refl, rot)


def vertex_action(g, i):
    """The image of sheet i in {1, ..., n} under the element g.

    Rotations act by i -> i + rot; reflections t s^a by i -> (2 - i) + a.
    Acting by a product applies the left factor first:
    vertex_action(g * h, i) == vertex_action(h, vertex_action(g, i)).
    """
    n = g.n
    if not 1 <= i <= n:
        raise ValueError("vertex %r out of range 1..%d" % (i, n))
    j = (2 - i + g.rot) if g.refl else (i + g.rot)
    return (j - 1) % n + 1


def vertex_orbit_of_t(i, n):
    """The orbit {i, n+2-i} of sheet i under t (vertex 1 is fixed)."""
    j = (2 - i - 1) % n + 1
    return frozenset((i, j))


def generates_full_group(labels):
    """True iff the given set of elements generates the whole group.

    For a set of reflections t s^{a_i} this is the classical criterion
    gcd({a_i - a_j} u {n}) = 1; rotations contribute their own exponents
    to the gcd, and at least one reflection is required.
    """
    labels = list(labels)
    if not labels:
        raise ValueError("empty generating set")
    n = labels[0].n
    for g in labels:
        labels[0]._require_same_group(g)
    refl_exponents = [g.rot for g in labels if g.refl]
    rot_exponents = [g.rot for g in labels if not g.refl]
    if not refl_exponents:
        return False
    d = n
    base = refl_exponents[0]
    for a in refl_exponents[1:]:
        d = gcd(d, a - base)
    for r in rot_exponents:
        d = gcd(d, r)
    return d == 1
