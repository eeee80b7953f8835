"""Lift a separated surgery presentation to the branched covering space.

The cover has one sheet per vertex 1..n.  Each kernel circle lifts to n
copies; which sheet a copy occupies at any point of the circle is read
off by running the circle's monodromy word through the vertex action.
Two lifted strands cross exactly where the base strands cross on equal
sheets, so the lifted linking matrix is a signed census of sheet
coincidences.  The distinguished circle has a meridian of order n and
lifts to a single n-fold winding of framing k; the branch curve lifts to
(n+1)/2 curves, one per vertex orbit of t, which are marked but never
surgered.  The sheet-to-sheet gluing over the branch disc is carried by
a chain of zero-framed scaffold circles threaded by every lift that
changes sheet there.

The half-twist braid description of the covers of odd pretzel knots is
emitted symbolically: a block permutation and a word of nested
half-twist tokens.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import reflection, rotation, vertex_action
from .diagram import (BRANCH, OVER, SURGERY, UNDER, ColouredDiagram,
                      _crossing_map, linking_number, writhe)
from .errors import DiagramStructureError
from .untying import SeparatedPresentation, validate_presentation


@dataclass(frozen=True)
class LiftedComponent:
    """One surgery curve of the covering presentation.

    ``origin`` is (base component name, lift index); scaffold curves have
    no base component and carry lift index 0.
    """
    origin: tuple[str, int]
    framing: int


@dataclass(frozen=True)
class LiftedPresentation:
    """Surgery presentation of the irregular dihedral branched cover.

    ``components`` starts with the single lift of the distinguished
    circle (framing k), then the (n-1)/2 zero-framed scaffold chain
    curves, then n lifts of each kernel circle in base order.
    ``linking`` is the symmetric linking matrix over those components
    with framings on the diagonal; H1 of the cover is its cokernel.
    ``branch_linking`` has one row per branch curve; branch curves are
    pairwise unlinked and never enter ``linking``.
    """
    n: int
    k: int
    components: tuple[LiftedComponent, ...]
    linking: tuple[tuple[int, ...], ...]
    branch_names: tuple[str, ...]
    branch_linking: tuple[tuple[int, ...], ...]

    @property
    def c1_index(self) -> int:
        """Index of the lift of the distinguished circle."""
        return 0

    @property
    def chain_indices(self) -> tuple[int, ...]:
        """Indices of the zero-framed scaffold chain."""
        return tuple(range(1, 1 + (self.n - 1) // 2))


def _orbit(v: int, n: int) -> int:
    """Branch-curve index of sheet v: vertex 1 is its own orbit, the
    others pair v with n + 2 - v."""
    return min(v, n + 2 - v)


def _chain_side(v: int, n: int) -> int:
    """Which way a sheet change at v threads its scaffold curve: 0 on
    the fixed sheet, opposite signs on the two halves of an orbit."""
    if v == 1:
        return 0
    return 1 if v <= (n + 1) // 2 else -1


def _sheet_walk(comp, i: int, n: int, ci_u: int, ci_c: int, cmap):
    """Sheets occupied by lift i at every event of a kernel circle.

    Passing under the branch curve applies t, passing under the
    distinguished circle applies s^sign; the recorded sheet at such an
    event is the one after the change.  Returns (sheets, transitions)
    where transitions lists (sheet before, sign) of each branch-disc
    pass.
    """
    v = i
    sheets: list[int] = []
    transitions: list[tuple[int, int]] = []
    for ev in comp.events:
        if ev.role == UNDER:
            oc = cmap[ev.crossing][OVER][0]
            if oc == ci_u:
                transitions.append((v, ev.sign))
                v = vertex_action(reflection(n, 0), v)
                sheets.append(v)
                continue
            if oc == ci_c:
                v = vertex_action(rotation(n, ev.sign), v)
                sheets.append(v)
                continue
        sheets.append(v)
    if v != i:
        raise DiagramStructureError(
            f"monodromy of {comp.name!r} does not return lift {i} to its "
            "starting sheet")
    return sheets, transitions


def _halved(raw: int, what: str) -> int:
    if raw % 2:
        raise DiagramStructureError(
            f"odd sheet-coincidence count for {what}; the lifted strands "
            "do not close up")
    return raw // 2


def lift(sp: SeparatedPresentation) -> LiftedPresentation:
    """Lift every curve of a separated presentation to the cover.

    Kernel circles produce n lifts each, with pairwise linking numbers
    summed over sheet-coincident base crossings and framings carried
    over plus the sheet-coincident self-crossings.  The distinguished
    circle contributes a single component of framing k whose linking
    with any kernel lift equals the base linking number.  Scaffold chain
    curves pick up one signed pass from every sheet change over the
    branch disc.
    """
    report = validate_presentation(sp)
    if not report.ok:
        raise DiagramStructureError(
            "cannot lift an invalid presentation:\n  "
            + "\n  ".join(report.lines()))
    d = sp.diagram
    n, k = sp.n, sp.k
    ci_u = next(i for i, c in enumerate(d.components) if c.kind == BRANCH)
    ci_c = d.resolve("C1")
    kernel = [i for i, c in enumerate(d.components)
              if c.kind == SURGERY and i != ci_c]
    cmap = _crossing_map(d)

    num_chain = (n - 1) // 2
    offset = {ci: 1 + num_chain + p * n for p, ci in enumerate(kernel)}
    size = 1 + num_chain + n * len(kernel)

    components = [LiftedComponent(
        (d.components[ci_c].name or "C1", 1), k)]
    for o in range(2, 2 + num_chain):
        components.append(LiftedComponent((f"E{o}", 0), 0))

    sheets: dict[int, list[list[int]]] = {}
    transitions: dict[int, list[list[tuple[int, int]]]] = {}
    for ci in kernel:
        comp = d.components[ci]
        per_lift = [_sheet_walk(comp, i, n, ci_u, ci_c, cmap)
                    for i in range(1, n + 1)]
        sheets[ci] = [s for s, _ in per_lift]
        transitions[ci] = [t for _, t in per_lift]

    linking = [[0] * size for _ in range(size)]
    linking[0][0] = k

    raw = [[0] * size for _ in range(size)]
    for rec in cmap.values():
        (oc, op), (uc, up) = rec[OVER], rec[UNDER]
        if oc not in sheets or uc not in sheets:
            continue
        sign = d.components[oc].events[op].sign
        for i in range(n):
            a = offset[oc] + i
            sheet_over = sheets[oc][i][op]
            for j in range(n):
                if oc == uc and i == j:
                    continue
                if sheet_over == sheets[uc][j][up]:
                    b = offset[uc] + j
                    raw[a][b] += sign
                    raw[b][a] += sign

    for ci in kernel:
        comp = d.components[ci]
        name = comp.name or f"component {ci}"
        base_frame = comp.framing - writhe(d, ci)
        lk_c1 = linking_number(d, ci, ci_c)
        self_crossings = [
            (rec[OVER][1], rec[UNDER][1],
             d.components[ci].events[rec[OVER][1]].sign)
            for rec in cmap.values()
            if rec[OVER][0] == ci and rec[UNDER][0] == ci]
        for i in range(n):
            a = offset[ci] + i
            kink = sum(sign for op, up, sign in self_crossings
                       if sheets[ci][i][op] == sheets[ci][i][up])
            components.append(LiftedComponent((name, i + 1),
                                              base_frame + kink))
            linking[a][a] = base_frame + kink
            linking[a][0] = linking[0][a] = lk_c1
            for v_before, sign in transitions[ci][i]:
                side = _chain_side(v_before, n)
                if side:
                    e = _orbit(v_before, n) - 1  # chain E_o sits at o - 1
                    linking[a][e] += sign * side
                    linking[e][a] += sign * side

    first_lift = 1 + num_chain
    for a in range(first_lift, size):
        for b in range(a + 1, size):
            if raw[a][b]:
                linking[a][b] = linking[b][a] = _halved(
                    raw[a][b], "a pair of kernel lifts")

    num_branch = (n + 1) // 2
    branch_names = tuple(f"U~{o}" for o in range(1, num_branch + 1))
    branch_raw = [[0] * size for _ in range(num_branch)]
    for rec in cmap.values():
        (oc, op), (uc, up) = rec[OVER], rec[UNDER]
        if oc == ci_u and uc in sheets:
            sign = d.components[oc].events[op].sign
            for i in range(n):
                branch_raw[_orbit(sheets[uc][i][up], n) - 1][
                    offset[uc] + i] += sign
        elif uc == ci_u and oc in sheets:
            sign = d.components[oc].events[op].sign
            for i in range(n):
                branch_raw[_orbit(sheets[oc][i][op], n) - 1][
                    offset[oc] + i] += sign
    branch_linking = tuple(
        tuple(_halved(branch_raw[o][b], f"branch curve {o + 1}")
              for b in range(size))
        for o in range(num_branch))

    return LiftedPresentation(
        n=n, k=k,
        components=tuple(components),
        linking=tuple(tuple(row) for row in linking),
        branch_names=branch_names,
        branch_linking=branch_linking,
    )


# ---------------------------------------------------------------------------
# pretzel covers, symbolically


def pretzel_block_permutation(n: int) -> tuple[int, ...]:
    """The order the blocks are visited when the cover of an odd pretzel
    is straightened into a path.

    Starting from vertex 1, alternately follow the ts-edge and the
    t-edge until reaching the vertex fixed by ts; entry i (1-based) is
    one plus the position of vertex i along that path.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"need odd n >= 3, got {n}")
    path = [1]
    v = 1
    use_ts = True
    fixed = (n + 3) // 2
    while v != fixed:
        v = vertex_action(reflection(n, 1 if use_ts else 0), v)
        use_ts = not use_ts
        if v in path:
            raise AssertionError("block walk revisited a vertex")
        path.append(v)
    if len(path) != n:
        raise AssertionError("block walk did not cover every vertex")
    tau = [0] * n
    for pos, vertex in enumerate(path):
        tau[vertex - 1] = pos + 1
    return tuple(tau)


@dataclass(frozen=True)
class HalfTwist:
    """A clockwise half twist of the strands indexed lo..hi."""
    lo: int
    hi: int

    def __str__(self) -> str:
        return f"X[{self.lo},{self.hi}]"


def pretzel_strand_indices(n: int) -> tuple[int, ...]:
    """Strand index set for the pretzel cover braid: -(n+1)..(n+1)
    without 0, giving 2(n+1) strands."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"need odd n >= 3, got {n}")
    return tuple(i for i in range(-(n + 1), n + 2) if i != 0)


def pretzel_cover_braid(n: int) -> tuple[HalfTwist, ...]:
    """The braid of nested half twists closing up to the cover of an odd
    pretzel knot: X[-n,n] X[-n+1,n-1] ... X[-1,1] on 2(n+1) strands."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"need odd n >= 3, got {n}")
    return tuple(HalfTwist(-m, m) for m in range(n, 0, -1))
