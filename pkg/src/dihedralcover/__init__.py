"""dihedral-cover: computations with dihedrally coloured knots.

Two pipelines are provided, both driven by exact integer arithmetic:

* genus reduction of coloured Seifert-surface data to a genus-one normal
  form, computing the coloured untying invariant;
* untying a coloured knot into a separated surgery presentation and
  lifting it to a surgery presentation of the irregular dihedral branched
  cover, with first-homology verification.
"""

__version__ = "0.1.0"

from .algebra import DihedralElement, identity, rotation, reflection  # noqa: F401
