"""Fox colourings of knot diagrams by dihedral reflections.

A colouring assigns to each arc an exponent c so that the arc label is
the reflection t s^c.  At every crossing the three exponents satisfy

    (outgoing) + (incoming) = 2 * (over)   (mod n),

which is the labelling rule written additively; the crossing sign drops
out because conjugating one reflection by another is sign-independent.
Solutions are found exactly by putting the relation matrix in Smith
normal form over the integers and enumerating the kernel mod n.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .algebra import reflection
from .diagram import ColouredDiagram, OVER, UNDER, _crossing_map
from .homology import smith_normal_form


@dataclass(frozen=True)
class FoxColouring:
    """Arc exponents of one colouring, shaped like the diagram's labels."""

    n: int
    colours: tuple[tuple[int, ...], ...]

    def label(self, component: int, arc: int):
        return reflection(self.n, self.colours[component][arc])

    def all_colours(self) -> list[int]:
        return [c for comp in self.colours for c in comp]

    @property
    def is_trivial(self) -> bool:
        return len(set(self.all_colours())) <= 1


def is_surjective(colouring: FoxColouring) -> bool:
    """Whether the reflections t s^c generate the full dihedral group."""
    cols = colouring.all_colours()
    g = colouring.n
    for c in cols[1:]:
        g = gcd(g, c - cols[0])
    return g == 1


def _arc_offsets(d: ColouredDiagram) -> list[int]:
    offsets, total = [], 0
    for comp in d.components:
        offsets.append(total)
        total += comp.num_arcs
    return offsets + [total]


def colouring_relations(d: ColouredDiagram) -> list[list[int]]:
    """Integer relation matrix of the Fox colouring system, one row per
    under event, columns indexed by arcs in component order."""
    offsets = _arc_offsets(d)
    cmap = _crossing_map(d)
    rows = []
    for ci, comp in enumerate(d.components):
        for pos, ev in enumerate(comp.events):
            if ev.role != UNDER:
                continue
            oc, op = cmap[ev.crossing][OVER]
            row = [0] * offsets[-1]
            row[offsets[ci] + comp.arc_arriving(pos)] += 1
            row[offsets[ci] + comp.arc_leaving(pos)] += 1
            over_arc = d.components[oc].arc_leaving(op)
            row[offsets[oc] + over_arc] -= 2
            rows.append(row)
    return rows


def solve_colourings(d: ColouredDiagram, n: int | None = None, *,
                     surjective_only: bool = False,
                     up_to_translation: bool = False,
                     limit: int = 500_000) -> list[FoxColouring]:
    """All Fox colourings of the diagram mod n, exactly.

    The kernel of the relation matrix mod n is parametrised through the
    Smith normal form U R V = D: solutions are x = V y with d_i y_i = 0
    mod n, so y_i runs over the gcd(d_i, n) multiples of n/gcd(d_i, n).
    Results are returned in a deterministic order; with surjective_only
    the non-surjective ones (including all trivial colourings) are
    dropped.  Conjugating every label by s shifts all exponents by 2,
    which for odd n generates every translation c -> c + k; passing
    up_to_translation keeps one representative per translation orbit
    (the one whose first arc has colour 0).
    """
    n = d.n if n is None else n
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and at least 3, got {n}")
    offsets = _arc_offsets(d)
    num_arcs = offsets[-1]
    rows = colouring_relations(d)
    if not rows:
        rows = [[0] * num_arcs]

    _, dmat, v = smith_normal_form(rows)
    diag = [dmat[i][i] for i in range(min(len(dmat), len(dmat[0])))]
    diag += [0] * (num_arcs - len(diag))

    counts = [gcd(di, n) if di else n for di in diag]
    total = 1
    for c in counts:
        total *= c
        if total > limit:
            raise ValueError(
                f"more than {limit} colourings; raise the limit to enumerate")

    out = []
    y = [0] * num_arcs
    steps = [n // c for c in counts]

    def emit():
        x = [sum(v[i][j] * y[j] for j in range(num_arcs)) % n
             for i in range(num_arcs)]
        shaped = []
        for ci, comp in enumerate(d.components):
            shaped.append(tuple(x[offsets[ci]:offsets[ci] + comp.num_arcs]))
        if up_to_translation and shaped and shaped[0][0] != 0:
            return
        col = FoxColouring(n, tuple(shaped))
        if not surjective_only or is_surjective(col):
            out.append(col)

    def rec(i):
        if i == num_arcs:
            emit()
            return
        for j in range(counts[i]):
            y[i] = j * steps[i]
            rec(i + 1)
        y[i] = 0

    rec(0)
    out.sort(key=lambda c: c.colours)
    return out


def to_dihedral(d: ColouredDiagram, colouring: FoxColouring) -> ColouredDiagram:
    """Copy of the diagram with arc labels replaced by the colouring's
    reflections."""
    new = d.copy()
    for ci, comp in enumerate(new.components):
        comp.labels = [colouring.label(ci, j) for j in range(comp.num_arcs)]
    return new
