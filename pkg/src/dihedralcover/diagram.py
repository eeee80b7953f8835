"""Combinatorial coloured link diagrams and surgery moves on them.

A diagram is stored as a collection of closed oriented components, each a
cyclic list of crossing events.  An event records the crossing it belongs
to, whether this strand passes over or under, and the local sign of the
crossing.  Every crossing id must occur exactly twice in the whole
diagram, once with role "over" and once with role "under", and both
events carry the same sign.

Arcs and labels
---------------
An arc is a maximal run of the strand that stays on top; arcs end where
the strand passes under a crossing.  If a component has m under events at
positions u_0 < u_1 < ... < u_{m-1} in its event list, then arc j starts
immediately after u_j and ends at u_{(j+1) mod m}.  A component with no
under events is a single arc.  ``labels[j]`` is the group label of arc j,
so ``labels[-1]`` is the label of the arc containing the start of the
event list (the basepoint arc).

The labelling rule at an under event with sign ``s`` and over-strand
label ``g`` is

    (outgoing arc) = g^s * (incoming arc) * g^-s .

Reading the over labels along a component gives the longitude word; for a
surgery component with stored framing ``f``, basepoint label ``b`` and
writhe ``w`` the diagram is consistent iff

    W * b^(f - w) = 1,  W = product of g_i^{s_i} over its under events,

i.e. the representation kills f*meridian + 0-framed longitude.

Crossing-change circles
-----------------------
``crossing_change_surgery`` replaces a crossing by the opposite one and
records the change as a +/-1 framed unknotted circle around the two
strands.  The two possible local pictures (circle meeting the strands
coherently or incoherently) give circles with linking number +/-2 or 0
with the modified component; the incoherent picture is the default since
downstream constructions need linking number zero.  The labels of the two
circle arcs are forced, up to the usual two-fold ambiguity, by the
labelling rule, and the stored framing is minus the handedness of the
inserted twist.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

from .algebra import DihedralElement, generates_full_group, identity
from .errors import DiagramStructureError, IllegalMoveError

OVER = "over"
UNDER = "under"

KNOT = "knot"
SURGERY = "surgery"
BRANCH = "branch"

_KINDS = (KNOT, SURGERY, BRANCH)


@dataclass(frozen=True)
class Event:
    """One visit of a strand to a crossing."""

    crossing: str
    role: str
    sign: int


@dataclass
class Component:
    """A closed strand: cyclic event list plus one label per arc."""

    kind: str
    events: list[Event]
    labels: list[DihedralElement]
    framing: int | None = None
    name: str = ""

    def copy(self) -> "Component":
        return Component(self.kind, list(self.events), list(self.labels),
                         self.framing, self.name)

    def under_positions(self) -> list[int]:
        return [i for i, e in enumerate(self.events) if e.role == UNDER]

    @property
    def num_arcs(self) -> int:
        return max(1, len(self.under_positions()))

    def arc_leaving(self, pos: int) -> int:
        """Index of the arc the strand is on just after the event at pos."""
        unders = self.under_positions()
        if not unders:
            return 0
        if self.events[pos].role == UNDER:
            return unders.index(pos)
        return (bisect_left(unders, pos) - 1) % len(unders)

    def arc_arriving(self, pos: int) -> int:
        """Index of the arc the strand is on just before the event at pos."""
        unders = self.under_positions()
        if not unders:
            return 0
        if self.events[pos].role == UNDER:
            return (unders.index(pos) - 1) % len(unders)
        return self.arc_leaving(pos)

    @property
    def basepoint_label(self) -> DihedralElement:
        return self.labels[-1]


@dataclass
class ColouredDiagram:
    """A labelled diagram of knot, surgery and branch components."""

    n: int
    components: list[Component] = field(default_factory=list)

    def copy(self) -> "ColouredDiagram":
        return ColouredDiagram(self.n, [c.copy() for c in self.components])

    def resolve(self, which: int | str) -> int:
        if isinstance(which, int):
            if not 0 <= which < len(self.components):
                raise IndexError(f"no component {which}")
            return which
        for i, c in enumerate(self.components):
            if c.name == which:
                return i
        raise KeyError(f"no component named {which!r}")

    def component_names(self) -> list[str]:
        return [c.name for c in self.components]


def _crossing_map(d: ColouredDiagram) -> dict[str, dict[str, tuple[int, int]]]:
    """Map crossing id -> {role: (component index, event position)}.

    Raises DiagramStructureError if some crossing is not visited exactly
    once as over and once as under with matching signs.
    """
    seen: dict[str, dict[str, tuple[int, int]]] = {}
    signs: dict[str, set[int]] = {}
    for ci, comp in enumerate(d.components):
        for pos, ev in enumerate(comp.events):
            rec = seen.setdefault(ev.crossing, {})
            if ev.role in rec:
                raise DiagramStructureError(
                    f"crossing {ev.crossing!r}: duplicate {ev.role} event")
            rec[ev.role] = (ci, pos)
            signs.setdefault(ev.crossing, set()).add(ev.sign)
    for cid, rec in seen.items():
        if set(rec) != {OVER, UNDER}:
            raise DiagramStructureError(
                f"crossing {cid!r}: needs one over and one under event")
        if len(signs[cid]) != 1:
            raise DiagramStructureError(
                f"crossing {cid!r}: the two events disagree on the sign")
    return seen


def over_label(d: ColouredDiagram, cid: str,
               cmap: dict | None = None) -> DihedralElement:
    """Label of the over strand at the given crossing."""
    cmap = cmap if cmap is not None else _crossing_map(d)
    ci, pos = cmap[cid][OVER]
    comp = d.components[ci]
    return comp.labels[comp.arc_leaving(pos)]


def writhe(d: ColouredDiagram, which: int | str) -> int:
    """Signed count of self-crossings of one component."""
    ci = d.resolve(which)
    cmap = _crossing_map(d)
    total = 0
    for rec in cmap.values():
        if rec[OVER][0] == ci and rec[UNDER][0] == ci:
            oc, op = rec[OVER]
            total += d.components[oc].events[op].sign
    return total


def linking_number(d: ColouredDiagram, a: int | str, b: int | str) -> int:
    """Linking number of two components; the writhe when a == b."""
    ia, ib = d.resolve(a), d.resolve(b)
    if ia == ib:
        return writhe(d, ia)
    cmap = _crossing_map(d)
    total = 0
    for rec in cmap.values():
        if {rec[OVER][0], rec[UNDER][0]} == {ia, ib}:
            oc, op = rec[OVER]
            total += d.components[oc].events[op].sign
    if total % 2:
        raise DiagramStructureError(
            "odd signed crossing count between two components")
    return total // 2


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.where}: {self.message}"


@dataclass
class ValidationReport:
    n: int
    violations: list[Violation]
    surjective: bool

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        if self.ok:
            return ["ok"]
        return [str(v) for v in self.violations]


def validate(d: ColouredDiagram) -> ValidationReport:
    """Check structural and labelling consistency of a diagram.

    Verifies: the crossing pairing, one label per arc in the right group,
    the labelling rule at every under event, reflection labels on knot
    and branch components, integer framings on surgery components only,
    and the framing relation W * b^(f-w) = 1 on every surgery component.
    Also reports whether all labels together generate the full group.
    """
    bad: list[Violation] = []

    if d.n < 3 or d.n % 2 == 0:
        bad.append(Violation("context", "diagram",
                             f"n must be odd and at least 3, got {d.n}"))

    names = [c.name for c in d.components if c.name]
    for name in set(names):
        if names.count(name) > 1:
            bad.append(Violation("names", name, "duplicate component name"))

    for ci, comp in enumerate(d.components):
        where = comp.name or f"component {ci}"
        if comp.kind not in _KINDS:
            bad.append(Violation("kind", where, f"unknown kind {comp.kind!r}"))
        if comp.kind == SURGERY:
            if not isinstance(comp.framing, int):
                bad.append(Violation("framing", where,
                                     "surgery component needs an integer framing"))
        elif comp.framing is not None:
            bad.append(Violation("framing", where,
                                 f"{comp.kind} component must not carry a framing"))
        for ev in comp.events:
            if ev.role not in (OVER, UNDER) or ev.sign not in (1, -1):
                bad.append(Violation("event", where, f"malformed event {ev}"))
        if len(comp.labels) != comp.num_arcs:
            bad.append(Violation("arcs", where,
                                 f"{comp.num_arcs} arcs but {len(comp.labels)} labels"))
            continue
        for g in comp.labels:
            if g.n != d.n:
                bad.append(Violation("context", where,
                                     f"label {g} lives in D_2*{g.n}, diagram has n={d.n}"))
        if comp.kind in (KNOT, BRANCH):
            for j, g in enumerate(comp.labels):
                if not g.refl:
                    bad.append(Violation("reflection", where,
                                         f"arc {j} label {g} is not a reflection"))

    if bad:
        return ValidationReport(d.n, bad, False)

    try:
        cmap = _crossing_map(d)
    except DiagramStructureError as exc:
        bad.append(Violation("crossing", "diagram", str(exc)))
        return ValidationReport(d.n, bad, False)

    for ci, comp in enumerate(d.components):
        where = comp.name or f"component {ci}"
        for pos, ev in enumerate(comp.events):
            if ev.role != UNDER:
                continue
            g = over_label(d, ev.crossing, cmap)
            incoming = comp.labels[comp.arc_arriving(pos)]
            outgoing = comp.labels[comp.arc_leaving(pos)]
            expected = incoming.conjugate_by(g, ev.sign)
            if outgoing != expected:
                bad.append(Violation(
                    "wirtinger", where,
                    f"crossing {ev.crossing!r}: arc label {outgoing} should be "
                    f"{expected} (= {g}^{ev.sign:+d} {incoming} {g}^{-ev.sign:+d})"))

    for ci, comp in enumerate(d.components):
        if comp.kind != SURGERY:
            continue
        where = comp.name or f"component {ci}"
        word = identity(d.n)
        for pos, ev in enumerate(comp.events):
            if ev.role == UNDER:
                word = word * over_label(d, ev.crossing, cmap) ** ev.sign
        w = writhe(d, ci)
        total = word * comp.basepoint_label ** (comp.framing - w)
        if not total.is_identity:
            bad.append(Violation(
                "framing-word", where,
                f"longitude word gives {total}, not the identity "
                f"(framing {comp.framing}, writhe {w})"))

    surjective = False
    all_labels = [g for comp in d.components for g in comp.labels]
    if all_labels:
        surjective = generates_full_group(all_labels)

    return ValidationReport(d.n, bad, surjective)


# ---------------------------------------------------------------------------
# crossing-change surgery


def _fresh_name(d: ColouredDiagram, base: str) -> str:
    taken = set(d.component_names())
    name = base
    while name in taken:
        name += "'"
    return name


def _fresh_crossing_ids(d: ColouredDiagram, base: str,
                        tags: list[str]) -> list[str]:
    taken = {ev.crossing for c in d.components for ev in c.events}
    out = []
    for tag in tags:
        cid = f"{base}.{tag}"
        while cid in taken:
            cid += "'"
        taken.add(cid)
        out.append(cid)
    return out


def _solve_ring_labels(n, g1, g2, sigma_v, sigma_o, o_under_first,
                       framing, preferred):
    """Pick labels (arc_a, arc_b) for a crossing-change circle.

    arc_b is the basepoint arc of the circle, arc_a the other one.  The
    labelling rule at the circle's two under events and the framing
    relation pin the pair down; we scan the group for solutions and keep
    the preferred closed form when it qualifies.  ``o_under_first`` says
    whether the second strand dives under the circle before crossing over
    it, in which case its label at the over crossing is already
    conjugated.
    """
    solutions = []
    candidates = [DihedralElement(n, False, r) for r in range(n)]
    candidates += [DihedralElement(n, True, r) for r in range(n)]
    for beta in candidates:
        arc_a = beta.conjugate_by(g1, sigma_v)
        g2_here = g2.conjugate_by(beta, sigma_o) if o_under_first else g2
        if beta != arc_a.conjugate_by(g2_here, sigma_o):
            continue
        word = (g1 ** sigma_v) * (g2_here ** sigma_o)
        if not (word * beta ** framing).is_identity:
            continue
        solutions.append((arc_a, beta))
    if not solutions:
        raise IllegalMoveError(
            "no consistent labelling for the crossing-change circle "
            "in this orientation configuration")
    for pair in solutions:
        if pair[1] == preferred:
            return pair
    return solutions[0]


def crossing_change_surgery(d: ColouredDiagram, crossing_id: str,
                            direction: int | None = None, *,
                            antiparallel: bool = True,
                            name: str | None = None) -> ColouredDiagram:
    """Reverse one crossing and insert the recording surgery circle.

    The crossing with the given id changes sign; a new unknotted surgery
    component encircling the two strands is appended, framed with minus
    the handedness of the inserted twist.  With ``antiparallel`` (the
    default) the circle has linking number 0 with each strand; otherwise
    +/-2 in total.  ``direction`` is the handedness of the twist that
    performs the change; only one value works for a given crossing and
    placement, so passing the other raises IllegalMoveError.  Labels away
    from the crossing are recomputed by propagation; the result should be
    re-validated by the caller.
    """
    cmap = _crossing_map(d)
    if crossing_id not in cmap:
        raise IllegalMoveError(f"no crossing {crossing_id!r} in the diagram")
    ci_o, po = cmap[crossing_id][OVER]
    ci_u, pu = cmap[crossing_id][UNDER]
    eps = d.components[ci_o].events[po].sign

    required = eps if antiparallel else -eps
    if direction is None:
        direction = required
    elif direction != required:
        raise IllegalMoveError(
            f"direction {direction:+d} does not reverse crossing "
            f"{crossing_id!r} with this placement; need {required:+d}")
    ring_framing = -direction

    over_comp = d.components[ci_o]
    under_comp = d.components[ci_u]
    g1 = over_comp.labels[over_comp.arc_leaving(po)]
    g2 = under_comp.labels[under_comp.arc_arriving(pu)]

    new = d.copy()
    ring_name = _fresh_name(new, name if name is not None else f"ring:{crossing_id}")
    c_vo, c_vu, c_oo, c_ou = _fresh_crossing_ids(
        new, ring_name, ["Vo", "Vu", "Oo", "Ou"])

    if antiparallel:
        sigma_v, sigma_o = eps, -eps
        o_under_first = True
        v_insert = [Event(c_vo, OVER, sigma_v), Event(c_vu, UNDER, sigma_v)]
        o_insert = [Event(c_ou, UNDER, sigma_o), Event(c_oo, OVER, sigma_o)]
        o_at = pu + 1
        if eps > 0:
            preferred = g2.inverse() * g1
        else:
            preferred = (g2 * g1).inverse()
    else:
        sigma_v = sigma_o = 1
        o_under_first = False
        v_insert = [Event(c_vo, OVER, sigma_v), Event(c_vu, UNDER, sigma_v)]
        o_insert = [Event(c_oo, OVER, sigma_o), Event(c_ou, UNDER, sigma_o)]
        o_at = pu
        if eps > 0:
            preferred = (g1 * g2).inverse()
        else:
            preferred = g1 * g2

    arc_a, arc_b = _solve_ring_labels(
        d.n, g1, g2, sigma_v, sigma_o, o_under_first, ring_framing, preferred)

    # flip the crossing itself
    flipped = Event(crossing_id, UNDER, -eps)
    flipped_other = Event(crossing_id, OVER, -eps)

    vc = new.components[ci_o]
    uc = new.components[ci_u]
    if ci_o == ci_u:
        comp = vc
        evs = list(comp.events)
        evs[po] = flipped
        evs[pu] = flipped_other
        # on an index tie the circle events exiting the crossing must end
        # up before the ones re-entering it, so insert the latter first
        for at, _prio, chunk in sorted(
                [(po, 1, v_insert), (o_at, 0, o_insert)], reverse=True):
            evs[at:at] = chunk
        comp.events = evs
        v_entry = po + (len(o_insert) if pu < po else 0)
        o_entry = pu + (len(v_insert) if po < pu else 0)
    else:
        evs = list(vc.events)
        evs[po] = flipped
        evs[po:po] = v_insert
        vc.events = evs
        v_entry = po
        evs = list(uc.events)
        evs[pu] = flipped_other
        evs[o_at:o_at] = o_insert
        uc.events = evs
        o_entry = pu

    ring = Component(SURGERY,
                     [Event(c_ou, OVER, sigma_o), Event(c_vu, OVER, sigma_v),
                      Event(c_vo, UNDER, sigma_v), Event(c_oo, UNDER, sigma_o)],
                     [arc_a, arc_b], framing=ring_framing, name=ring_name)
    new.components.append(ring)

    # v_entry sits on the circle's first over event on the reversed-over
    # strand, o_entry on the first event of the region along the other
    # strand; the arcs containing them keep the old incoming labels and
    # seed the relabelling.
    seeds = {(len(new.components) - 1, 0): arc_a,
             (len(new.components) - 1, 1): arc_b,
             (ci_o, vc.arc_leaving(v_entry)): g1,
             (ci_u, uc.arc_leaving(o_entry)): g2}

    _repropagate_labels(new, {ci_o, ci_u}, seeds)
    return new


def _repropagate_labels(d: ColouredDiagram, touched: set[int],
                        seeds: dict[tuple[int, int], DihedralElement]) -> None:
    """Recompute arc labels of the touched components from seed arcs.

    Labels on untouched components are kept.  Touched components start
    from their seed arcs (plus stale values as provisional fill) and the
    labelling rule is swept to a fixpoint; the caller validates the
    result.
    """
    cmap = _crossing_map(d)
    known: list[list[DihedralElement | None]] = []
    for ci, comp in enumerate(d.components):
        if ci in touched:
            fill: list[DihedralElement | None] = [None] * comp.num_arcs
            for j in range(min(len(comp.labels), comp.num_arcs)):
                fill[j] = comp.labels[j]
            known.append(fill)
        else:
            known.append(list(comp.labels))
    for (ci, aj), g in seeds.items():
        known[ci][aj] = g

    fixed = set(seeds)
    for ci in range(len(d.components)):
        if ci not in touched:
            fixed.update((ci, j) for j in range(len(known[ci])))

    for _ in range(3 + len(d.components)):
        changed = False
        for ci, comp in enumerate(d.components):
            for pos, ev in enumerate(comp.events):
                if ev.role != UNDER:
                    continue
                oc, op = cmap[ev.crossing][OVER]
                g = known[oc][d.components[oc].arc_leaving(op)]
                if g is None:
                    continue
                src = known[ci][comp.arc_arriving(pos)]
                if src is None:
                    continue
                out_arc = comp.arc_leaving(pos)
                if (ci, out_arc) in fixed:
                    continue
                value = src.conjugate_by(g, ev.sign)
                if known[ci][out_arc] != value:
                    known[ci][out_arc] = value
                    changed = True
        if not changed:
            break

    for ci in touched:
        comp = d.components[ci]
        labels = known[ci]
        if any(g is None for g in labels):
            raise DiagramStructureError(
                f"could not propagate labels on component {ci}")
        comp.labels = labels  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# descending projections


def descending_unknotting(d: ColouredDiagram,
                          which: int | str = 0) -> list[str]:
    """Self-crossings to reverse so the component becomes descending.

    Walk the component from its basepoint; every self-crossing first met
    on the under strand must be reversed for the strand to always cross
    over on first visit, after which the component is an unknot.  Returns
    the crossing ids in the order encountered.
    """
    ci = d.resolve(which)
    comp = d.components[ci]
    cmap = _crossing_map(d)
    flips: list[str] = []
    seen: set[str] = set()
    for ev in comp.events:
        rec = cmap[ev.crossing]
        if rec[OVER][0] != ci or rec[UNDER][0] != ci:
            continue
        if ev.crossing in seen:
            continue
        seen.add(ev.crossing)
        if ev.role == UNDER:
            flips.append(ev.crossing)
    return flips
