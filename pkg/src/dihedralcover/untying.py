"""Separated surgery presentations for dihedrally coloured knots.

The pipeline in this module rewrites a surjectively coloured knot
diagram as surgery instructions on an unlink: a round branch curve U
whose arcs are all labelled t, one distinguished surgery circle C1
labelled s that carries the whole rotation part of the colouring, and a
collection of auxiliary surgery circles mapping into the kernel of the
colouring.  The stages are

* ``build_distinguished`` -- thread a small circle through the diagram
  so that its longitude reads exactly s,
* ``untie`` -- unknot the coloured knot by recorded crossing changes,
* ``handleslide_c1_over`` -- slide the distinguished circle over an
  auxiliary circle, shifting that circle's label by one,
* ``standardize`` -- normalise the framing, round off U and C1, and
  package the result as a :class:`SeparatedPresentation`.

``separate`` chains the four stages.  Every stage returns a diagram that
passes :func:`dihedralcover.diagram.validate`; the handle slide searches
a small family of planar placements for the unique one that admits a
consistent labelling, so a successful return is already self-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .algebra import DihedralElement, identity, reflection, rotation
from .diagram import (
    BRANCH,
    KNOT,
    OVER,
    SURGERY,
    UNDER,
    ColouredDiagram,
    Component,
    Event,
    ValidationReport,
    Violation,
    _crossing_map,
    _fresh_crossing_ids,
    _fresh_name,
    crossing_change_surgery,
    descending_unknotting,
    linking_number,
    validate,
)
from .errors import DiagramStructureError, IllegalMoveError


# ---------------------------------------------------------------------------
# presentation container


@dataclass(frozen=True)
class SeparatedPresentation:
    """A separated surgery presentation.

    ``diagram`` holds one branch component U (all arcs t), the
    distinguished surgery circle named ``C1`` (arcs s or s^-1, framing
    k*n) and the kernel circles (arcs all identity, framings +-1 except
    for coil circles).  ``k`` is the framing of C1 divided by n.
    """

    n: int
    k: int
    diagram: ColouredDiagram

    @property
    def u_component(self) -> Component:
        for comp in self.diagram.components:
            if comp.kind == BRANCH:
                return comp
        raise DiagramStructureError("presentation has no branch component")

    @property
    def c1(self) -> Component:
        return self.diagram.components[self.diagram.resolve("C1")]

    @property
    def kernel_components(self) -> list[Component]:
        return [comp for comp in self.diagram.components
                if comp.kind == SURGERY and comp.name != "C1"]

    def monodromy_words(self) -> dict[str, list[tuple[str, int]]]:
        """Disc passes of each kernel circle, in traversal order.

        Each letter is ("U", sign) for a pass under the branch curve or
        ("C1", sign) for a pass under the distinguished circle.
        """
        d = self.diagram
        cmap = _crossing_map(d)
        ci_u = next(ci for ci, c in enumerate(d.components)
                    if c.kind == BRANCH)
        ci_c = d.resolve("C1")
        words: dict[str, list[tuple[str, int]]] = {}
        for ci, comp in enumerate(d.components):
            if comp.kind != SURGERY or ci == ci_c:
                continue
            word = []
            for ev in comp.events:
                if ev.role != UNDER:
                    continue
                oc = cmap[ev.crossing][OVER][0]
                if oc == ci_u:
                    word.append(("U", ev.sign))
                elif oc == ci_c:
                    word.append(("C1", ev.sign))
                else:
                    raise DiagramStructureError(
                        f"kernel circle {comp.name!r} passes under "
                        f"component {oc}, expected only U or C1")
            words[comp.name or str(ci)] = word
        return words


def validate_presentation(sp: SeparatedPresentation) -> ValidationReport:
    """Check the defining invariants of a separated presentation.

    On top of diagram validity: U and C1 form a combinatorial
    two-component unlink, C1 is framed k*n with rotation arcs s^{+-1},
    every kernel circle carries the identity label and links U zero
    times, and every monodromy word multiplies to the identity.
    """
    d = sp.diagram
    report = validate(d)
    bad = list(report.violations)
    n = d.n

    branch = [ci for ci, c in enumerate(d.components) if c.kind == BRANCH]
    if len(branch) != 1:
        bad.append(Violation("separated", "diagram",
                             f"expected one branch component, found {len(branch)}"))
        return ValidationReport(n, bad, report.surjective)
    ci_u = branch[0]
    u = d.components[ci_u]
    t = reflection(n, 0)
    for j, g in enumerate(u.labels):
        if g != t:
            bad.append(Violation("separated", u.name or "U",
                                 f"branch arc {j} is {g}, expected t"))

    try:
        ci_c = d.resolve("C1")
    except KeyError:
        bad.append(Violation("separated", "diagram",
                             "no component named 'C1'"))
        return ValidationReport(n, bad, report.surjective)
    c1 = d.components[ci_c]
    s_ok = {rotation(n, 1), rotation(n, -1)}
    for j, g in enumerate(c1.labels):
        if g not in s_ok:
            bad.append(Violation("separated", "C1",
                                 f"arc {j} is {g}, expected s or s^-1"))
    if not (0 <= sp.k < n):
        bad.append(Violation("separated", "C1", f"k={sp.k} out of range"))
    if c1.framing != sp.k * n:
        bad.append(Violation("separated", "C1",
                             f"framing {c1.framing} != k*n = {sp.k * n}"))

    cmap = _crossing_map(d)
    for cid, rec in cmap.items():
        owners = {rec[OVER][0], rec[UNDER][0]}
        if owners == {ci_u, ci_c}:
            bad.append(Violation("separated", cid,
                                 "U and C1 cross each other"))
    for ci in (ci_u, ci_c):
        for ev in d.components[ci].events:
            rec = cmap[ev.crossing]
            if rec[OVER][0] == ci and rec[UNDER][0] == ci:
                bad.append(Violation("separated", ev.crossing,
                                     "self-crossing on U or C1"))

    for ci, comp in enumerate(d.components):
        if comp.kind != SURGERY or ci == ci_c:
            continue
        where = comp.name or f"component {ci}"
        if not all(g.is_identity for g in comp.labels):
            bad.append(Violation("separated", where,
                                 "kernel circle not labelled by the identity"))
        try:
            lk = linking_number(d, ci, ci_u)
        except DiagramStructureError as exc:
            bad.append(Violation("separated", where, str(exc)))
            continue
        if lk != 0:
            bad.append(Violation("separated", where,
                                 f"links the branch curve {lk} times"))

    if not bad:
        for name, word in sp.monodromy_words().items():
            g = identity(n)
            for sym, sign in word:
                letter = t if sym == "U" else rotation(n, 1)
                g = g * letter ** sign
            if not g.is_identity:
                bad.append(Violation("separated", name,
                                     f"monodromy word evaluates to {g}"))

    return ValidationReport(n, bad, report.surjective)


# ---------------------------------------------------------------------------
# stage 1: the distinguished circle


def _knot_index(d: ColouredDiagram) -> int:
    knots = [ci for ci, c in enumerate(d.components) if c.kind == KNOT]
    if len(knots) != 1:
        raise DiagramStructureError(
            f"expected exactly one knot component, found {len(knots)}")
    return knots[0]


def _bezout_pairs(n: int, exps: list[int]) -> list[tuple[int, int]]:
    """Arc-index pairs (i, j) whose differences sum to 1 mod n.

    Each pair stands for two consecutive dips of the new circle, first
    under the arc with exponent ``exps[i]`` and then under the arc with
    exponent ``exps[j]``, contributing exps[j] - exps[i] to the
    longitude.
    """
    seen: dict[int, int] = {}
    for i, x in enumerate(exps):
        seen.setdefault(x % n, i)
    present = sorted(seen)
    for x in present:
        if (x + 1) % n in seen:
            return [(seen[x], seen[(x + 1) % n])]

    ref_arc = 0
    ref = exps[0] % n
    diffs = [(x - ref) % n for x in present]
    g, coef = n, [0] * len(diffs)
    for i, dx in enumerate(diffs):
        g2 = gcd(g, dx)
        if g2 == g:
            continue
        # u*g + v*dx = g2 by the extended algorithm
        u, v = _ext_gcd(g, dx)
        coef = [(c * u) % n for c in coef]
        coef[i] = v % n
        g = g2
    if g != 1:
        raise IllegalMoveError(
            "the knot labels generate a proper subgroup; a surjective "
            "colouring is required to build the distinguished circle")
    pairs = []
    for i, c in enumerate(coef):
        arc = seen[present[i]]
        pairs.extend([(ref_arc, arc)] * (c % n))
    return pairs


def _ext_gcd(a: int, b: int) -> tuple[int, int]:
    """(u, v) with u*a + v*b = gcd(a, b)."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    return old_u, old_v


def build_distinguished(d: ColouredDiagram, *,
                        name: str = "C1") -> ColouredDiagram:
    """Thread a circle under the knot so its longitude reads exactly s.

    The circle dips under chosen arcs in consecutive pairs of opposite
    crossing sign, so it links the knot zero times, and the dip arcs are
    picked so the product of the labels it passes under is s.  Its
    framing is then forced to -1.  Raises IllegalMoveError when the
    labelling is constant (or otherwise not surjective), since no choice
    of dips can then reach s.
    """
    ci_k = _knot_index(d)
    knot = d.components[ci_k]
    n = d.n
    exps = []
    for g in knot.labels:
        if not g.refl:
            raise DiagramStructureError("knot arcs must carry reflections")
        exps.append(g.rot % n)
    if len(set(exps)) == 1:
        raise IllegalMoveError(
            "constant labelling: the colouring is not surjective, so no "
            "circle under the diagram can read s")

    pairs = _bezout_pairs(n, exps)
    new = d.copy()
    cname = _fresh_name(new, name)
    tags = []
    for t in range(len(pairs)):
        tags += [f"d{2 * t + 1}", f"d{2 * t + 2}"]
    ids = _fresh_crossing_ids(new, cname, tags)

    circle_events = []
    knot_inserts = []  # (position, event)
    unders = knot.under_positions()
    for t, (i, j) in enumerate(pairs):
        id1, id2 = ids[2 * t], ids[2 * t + 1]
        circle_events.append(Event(id1, UNDER, 1))
        circle_events.append(Event(id2, UNDER, -1))
        knot_inserts.append((unders[i] + 1, Event(id1, OVER, 1)))
        knot_inserts.append((unders[j] + 1, Event(id2, OVER, -1)))

    kc = new.components[ci_k]
    evs = list(kc.events)
    for pos, ev in sorted(knot_inserts, key=lambda pe: pe[0], reverse=True):
        evs.insert(pos, ev)
    kc.events = evs

    labels = [rotation(n, -1 if j % 2 == 0 else 1)
              for j in range(2 * len(pairs))]
    new.components.append(Component(SURGERY, circle_events, labels,
                                    framing=-1, name=cname))
    return new


# ---------------------------------------------------------------------------
# stage 2: untying the knot


def _min_rotation_flips(d: ColouredDiagram, ci: int) -> list[str]:
    """Crossing changes making the component descending, minimised over
    the choice of starting point of the walk."""
    comp = d.components[ci]
    cmap = _crossing_map(d)
    self_positions = [
        (pos, ev) for pos, ev in enumerate(comp.events)
        if cmap[ev.crossing][OVER][0] == ci
        and cmap[ev.crossing][UNDER][0] == ci]
    best: list[str] | None = None
    for start in range(max(1, len(self_positions))):
        flips: list[str] = []
        seen: set[str] = set()
        ordered = self_positions[start:] + self_positions[:start]
        for _pos, ev in ordered:
            if ev.crossing in seen:
                continue
            seen.add(ev.crossing)
            if ev.role == UNDER:
                flips.append(ev.crossing)
        if best is None or len(flips) < len(best):
            best = flips
    return best or []


def untie(d: ColouredDiagram) -> ColouredDiagram:
    """Unknot the knot component by recorded crossing changes.

    Walks the knot and reverses every self-crossing first met on the
    under strand (with the walk's starting point chosen to minimise the
    number of reversals), inserting one -+1-framed circle of linking
    number zero per reversal.  A diagram whose knot is already
    descending comes back unchanged.
    """
    ci_k = _knot_index(d)
    flips = _min_rotation_flips(d, ci_k)
    if not flips:
        return d.copy()
    new = d
    for cid in flips:
        new = crossing_change_surgery(new, cid)
    report = validate(new)
    if not report.ok:
        raise DiagramStructureError(
            "untying produced an inconsistent diagram:\n  "
            + "\n  ".join(report.lines()))
    return new


# ---------------------------------------------------------------------------
# stage 3: handle slides


def _c1_index(d: ColouredDiagram) -> int:
    try:
        return d.resolve("C1")
    except KeyError:
        raise DiagramStructureError(
            "no distinguished component named 'C1' in the diagram")


def _infer_over(src: DihedralElement, out: DihedralElement, sign: int,
                over_is_reflection: bool, n: int):
    """Solve out = src conjugated by g for the over label g.

    Returns ("value", g) when g is pinned down, ("none",) when the
    transition holds for every g of the expected shape, and ("fail",)
    when no such g exists.
    """
    inv2 = pow(2, -1, n)
    if over_is_reflection:
        if src.refl != out.refl:
            return ("fail",)
        if not src.refl:
            if out.rot != (-src.rot) % n:
                return ("fail",)
            return ("none",)
        w = ((src.rot + out.rot) * inv2) % n
        return ("value", reflection(n, w))
    if src.refl != out.refl:
        return ("fail",)
    if not src.refl:
        if out.rot != src.rot:
            return ("fail",)
        return ("none",)
    c = ((src.rot - out.rot) * inv2 * sign) % n
    return ("value", rotation(n, c))


def _solve_labels(d: ColouredDiagram, seeds):
    """Propagate arc labels from seed values to the whole diagram.

    Runs the labelling rule forwards and backwards across every under
    event, inferring unknown over labels from pinned transitions, until
    a fixpoint.  Returns the full label table or None when the seeds
    are contradictory or do not determine every arc.
    """
    cmap = _crossing_map(d)
    known: list[list[DihedralElement | None]] = [
        [None] * comp.num_arcs for comp in d.components]
    for (ci, j), g in seeds.items():
        if known[ci][j] is not None and known[ci][j] != g:
            return None
        known[ci][j] = g

    total = sum(comp.num_arcs for comp in d.components)
    for _ in range(2 * total + 4):
        changed = False
        for ci, comp in enumerate(d.components):
            for pos, ev in enumerate(comp.events):
                if ev.role != UNDER:
                    continue
                oc, op = cmap[ev.crossing][OVER]
                oarc = d.components[oc].arc_leaving(op)
                g = known[oc][oarc]
                src_arc = comp.arc_arriving(pos)
                out_arc = comp.arc_leaving(pos)
                src = known[ci][src_arc]
                out = known[ci][out_arc]
                if g is not None:
                    if src is not None:
                        v = src.conjugate_by(g, ev.sign)
                        if out is None:
                            known[ci][out_arc] = v
                            changed = True
                        elif out != v:
                            return None
                    elif out is not None:
                        v = out.conjugate_by(g, -ev.sign)
                        known[ci][src_arc] = v
                        changed = True
                elif src is not None and out is not None:
                    over_refl = d.components[oc].kind in (KNOT, BRANCH)
                    res = _infer_over(src, out, ev.sign, over_refl, d.n)
                    if res[0] == "fail":
                        return None
                    if res[0] == "value":
                        known[oc][oarc] = res[1]
                        changed = True
        if not changed:
            break
    if any(g is None for row in known for g in row):
        return None
    return known


_SLIDE_SIDES = ("after", "before", "sign+", "sign-")


def _side_is_after(rule: str, sign: int) -> bool:
    if rule == "after":
        return True
    if rule == "before":
        return False
    if rule == "sign+":
        return sign > 0
    return sign < 0


def _attempt_slide(d: ColouredDiagram, ci_c: int, ci_r: int, eps: int,
                   a_new: int, f_new: int,
                   variant) -> ColouredDiagram | None:
    """Build one planar placement of the slide and try to label it."""
    side_rule, block_at_end, clasp_r_at_end, clasp_swapped = variant
    n = d.n
    rcomp = d.components[ci_r]
    cmap = _crossing_map(d)

    new = d.copy()
    base = f"slide:{rcomp.name or ci_r}"
    n_clasp = 2 * abs(rcomp.framing)
    tags = ([f"p{i}" for i in range(len(rcomp.events))]
            + [f"x{i + 1}" for i in range(n_clasp)])
    ids = _fresh_crossing_ids(new, base, tags)
    copy_ids = ids[:len(rcomp.events)]
    clasp_ids = ids[len(rcomp.events):]

    order = range(len(rcomp.events))
    if eps < 0:
        order = reversed(order)
    push_events = []
    partner_inserts = []  # (component, anchor crossing, anchor role, event)
    for idx in order:
        ev = rcomp.events[idx]
        sgn = ev.sign * eps
        push_events.append(Event(copy_ids[idx], ev.role, sgn))
        other_role = UNDER if ev.role == OVER else OVER
        pc = cmap[ev.crossing][other_role][0]
        partner_inserts.append(
            (pc, ev.crossing, other_role, Event(copy_ids[idx], other_role, sgn)))

    # the clasp realises the framing twist: |phi| crossing pairs, each
    # adding eps * sign(phi) to the mutual linking number
    phi = rcomp.framing
    e = eps * (1 if phi >= 0 else -1)
    clasp_c, clasp_r = [], []
    for t in range(abs(phi)):
        xa, xb = clasp_ids[2 * t], clasp_ids[2 * t + 1]
        pair_c = [Event(xa, UNDER, e), Event(xb, OVER, e)]
        pair_r = [Event(xa, OVER, e), Event(xb, UNDER, e)]
        if clasp_swapped:
            pair_c.reverse()
            pair_r.reverse()
        clasp_c.extend(pair_c)
        clasp_r.extend(pair_r)

    # distinguished circle: push copy plus clasp
    cc = new.components[ci_c]
    cevs = list(cc.events)
    block = push_events + clasp_c
    if block_at_end:
        cevs.extend(block)
    else:
        first_under = next((i + 1 for i, ev2 in enumerate(cevs)
                            if ev2.role == UNDER), len(cevs))
        cevs[first_under:first_under] = block
    cc.events = cevs
    cc.framing = f_new

    # slid-over circle: the clasp
    rc = new.components[ci_r]
    revs = list(rc.events)
    if clasp_r_at_end:
        revs.extend(clasp_r)
    else:
        last_under = max((i for i, ev2 in enumerate(revs)
                          if ev2.role == UNDER), default=len(revs) - 1)
        revs[last_under:last_under] = clasp_r
    rc.events = revs

    # partner copies, adjacent to the original crossing on the other strand
    for pc, anchor_cid, anchor_role, ev_new in partner_inserts:
        comp = new.components[pc]
        evs = list(comp.events)
        at = next(i for i, ev2 in enumerate(evs)
                  if ev2.crossing == anchor_cid and ev2.role == anchor_role)
        if _side_is_after(side_rule, ev_new.sign):
            at += 1
        evs.insert(at, ev_new)
        comp.events = evs

    # seed labels: everything that the slide provably does not touch
    seeds = {}
    for ci, comp in enumerate(d.components):
        if ci == ci_r:
            continue
        unders = comp.under_positions()
        if not unders:
            seeds[(ci, 0)] = comp.labels[0]
            continue
        for j, pos in enumerate(unders):
            ev = comp.events[pos]
            if cmap[ev.crossing][OVER][0] == ci_r:
                continue  # the over strand is being relabelled
            nc = new.components[ci]
            nj = next(jj for jj, pp in enumerate(nc.under_positions())
                      if nc.events[pp].crossing == ev.crossing)
            seeds[(ci, nj)] = comp.labels[j]
    rn = new.components[ci_r]
    seeds[(ci_r, rn.num_arcs - 1)] = rotation(n, a_new)

    known = _solve_labels(new, seeds)
    if known is None:
        return None
    for ci, comp in enumerate(new.components):
        comp.labels = known[ci]
    report = validate(new)
    if not report.ok:
        return None
    return new


def handleslide_c1_over(d: ColouredDiagram, comp_i: int | str,
                        direction: int) -> ColouredDiagram:
    """Slide the distinguished circle over another surgery circle.

    Replaces C1 by its band sum with a framing push-off of the target
    circle, which shifts the target's label exponent by ``direction``,
    adds the target's framing plus twice the mutual linking number to
    C1's framing, and changes their linking number by one.  The target
    must be a surgery component other than C1 itself.

    The move is realised literally: C1 is extended by a parallel copy of
    the target's strand plus a clasp, and the labels of the whole
    diagram are re-solved.  Among the candidate planar placements the
    first one admitting a consistent labelling is returned; failing all
    of them raises IllegalMoveError.
    """
    if direction not in (1, -1):
        raise IllegalMoveError(f"direction must be +1 or -1, got {direction}")
    ci_r = d.resolve(comp_i)
    rcomp = d.components[ci_r]
    if rcomp.kind != SURGERY:
        raise IllegalMoveError(
            f"cannot slide over a {rcomp.kind} component; handle slides "
            "only run over surgery circles")
    ci_c = _c1_index(d)
    if ci_r == ci_c:
        raise IllegalMoveError(
            "cannot slide the distinguished circle over itself")
    base = rcomp.basepoint_label
    if base.refl:
        raise IllegalMoveError(
            "slide target must carry rotation labels")

    n = d.n
    a_new = (base.rot + direction) % n
    eps = -direction
    lk0 = linking_number(d, ci_c, ci_r)
    f_new = d.components[ci_c].framing + rcomp.framing + 2 * eps * lk0

    for block_at_end in (True, False):
        for clasp_r_at_end in (True, False):
            for clasp_swapped in (False, True):
                for side_rule in _SLIDE_SIDES:
                    new = _attempt_slide(
                        d, ci_c, ci_r, eps, a_new, f_new,
                        (side_rule, block_at_end, clasp_r_at_end,
                         clasp_swapped))
                    if new is not None:
                        return new
    raise IllegalMoveError(
        "no planar placement of the handle slide admits a consistent "
        "labelling")


# ---------------------------------------------------------------------------
# stage 4: standardisation


def _g1_split(n: int, length: int) -> int | None:
    """How many disc passes go between the two branch passes so the
    longitude closes up: the least g with 2*g = length mod n."""
    g1 = (length * (n + 1) // 2) % n
    return g1 if g1 <= length else None


def _slide_plan(n: int, a: int) -> tuple[int, int]:
    """(direction, count) of slides killing label exponent a.

    Prefers whichever direction reaches zero in fewer slides while still
    allowing the final clasp pattern to close up; adds a full extra lap
    of n slides when the short count admits no closing split.
    """
    best: tuple[int, int] | None = None
    for direction, m in ((-1, a % n), (1, (n - a) % n)):
        count = m
        if _g1_split(n, count) is None:
            count = m + n
        if best is None or count < best[1]:
            best = (direction, count)
    return best


def _ring_profile(d: ColouredDiagram, ci: int, ci_k: int, ci_c: int, cmap):
    """(sigma, clasp_count, clasp_sign) of a kernel circle: the sign of
    its first pass under the knot, and the number and common sign of its
    passes under the distinguished circle."""
    comp = d.components[ci]
    t_signs, s_signs = [], []
    for ev in comp.events:
        if ev.role != UNDER:
            continue
        oc = cmap[ev.crossing][OVER][0]
        if oc == ci_k:
            t_signs.append(ev.sign)
        elif oc == ci_c:
            s_signs.append(ev.sign)
        else:
            raise DiagramStructureError(
                f"kernel circle {comp.name!r} passes under component {oc}; "
                "expected only the knot or the distinguished circle")
    if len(t_signs) != 2 or t_signs[0] != -t_signs[1]:
        raise DiagramStructureError(
            f"kernel circle {comp.name!r} does not pierce the knot in one "
            "cancelling pair")
    if s_signs and len(set(s_signs)) != 1:
        raise DiagramStructureError(
            f"kernel circle {comp.name!r} has mixed clasp signs")
    return t_signs[0], len(s_signs), (s_signs[0] if s_signs else 1)


def _emit_c1_pass(c1_events, other_events, cid_in, cid_out, sigma):
    """One pass of a circle through the distinguished circle's disc."""
    other_events.append(Event(cid_in, UNDER, sigma))
    other_events.append(Event(cid_out, OVER, sigma))
    c1_events.append(Event(cid_in, OVER, sigma))
    c1_events.append(Event(cid_out, UNDER, sigma))


def _emit_threading_pass(host_events, thread_events, cid_in, cid_out, sigma):
    """One pass of the distinguished circle through a circle's disc."""
    thread_events.append(Event(cid_in, UNDER, sigma))
    thread_events.append(Event(cid_out, OVER, sigma))
    host_events.append(Event(cid_in, OVER, sigma))
    host_events.append(Event(cid_out, UNDER, sigma))


def standardize(d: ColouredDiagram | SeparatedPresentation
                ) -> SeparatedPresentation:
    """Round off the presentation: U and C1 become a two-component
    unlink, the framing of C1 is pushed into [0, n^2) by coil circles,
    and the result is packaged with k = framing / n.

    Requires every auxiliary surgery circle to lie in the kernel of the
    colouring.  The clasps accumulated by the handle slides are slid
    into the canonical split around the branch passes, C1 is unknotted
    and split from the branch curve by kernel surgeries whose surviving
    record is a set of doubly-linking twist circles, and the branch
    curve is conjugated to the constant label t.  Applying the map to
    its own output returns it unchanged.
    """
    if isinstance(d, SeparatedPresentation):
        report = validate_presentation(d)
        if not report.ok:
            raise DiagramStructureError(
                "not a valid separated presentation:\n  "
                + "\n  ".join(report.lines()))
        return d

    if not any(c.kind == KNOT for c in d.components):
        # already rounded off: normalise the framing range and repackage
        n = d.n
        d2 = d.copy()
        c1 = d2.components[_c1_index(d2)]
        f = c1.framing
        assert f % n == 0, (
            f"distinguished framing {f} is not divisible by n={n}")
        r = f % (n * n)
        coil_steps = (r - f) // (n * n)
        serial = [0]

        def fresh(tag: str) -> str:
            serial[0] += 1
            return f"{tag}.{serial[0]}"

        coil_frame = 1 if coil_steps > 0 else -1
        existing = sum(1 for c in d2.components
                       if (c.name or "").startswith("coil:"))
        for m in range(abs(coil_steps)):
            coil_events: list[Event] = []
            for _ in range(n):
                _emit_threading_pass(coil_events, c1.events,
                                     fresh("k+"), fresh("k+"), 1)
            c1.labels.extend([c1.basepoint_label] * n)
            d2.components.append(
                Component(SURGERY, coil_events, [identity(n)] * n,
                          framing=coil_frame,
                          name=f"coil:{existing + m + 1}"))
        c1.framing = r
        sp = SeparatedPresentation(n=n, k=r // n, diagram=d2)
        report = validate_presentation(sp)
        if not report.ok:
            raise DiagramStructureError(
                "not a valid separated presentation:\n  "
                + "\n  ".join(report.lines()))
        return sp

    n = d.n
    ci_k = _knot_index(d)
    ci_c = _c1_index(d)
    cmap = _crossing_map(d)

    ring_info = []
    for ci, comp in enumerate(d.components):
        if ci in (ci_k, ci_c):
            continue
        if comp.kind != SURGERY:
            raise DiagramStructureError(
                f"unexpected {comp.kind} component {comp.name!r}")
        if not all(g.is_identity for g in comp.labels):
            raise IllegalMoveError(
                f"circle {comp.name!r} still carries label "
                f"{comp.basepoint_label}; slide it into the kernel first")
        sigma, length, clasp_sign = _ring_profile(d, ci, ci_k, ci_c, cmap)
        g1 = _g1_split(n, length)
        if g1 is None:
            raise IllegalMoveError(
                f"clasp pattern of {comp.name!r} ({length} clasps) admits "
                "no closing split; slide one extra lap")
        ring_info.append((comp.name or f"ring{ci}", comp.framing,
                          sigma, length, clasp_sign, g1))

    # Reverse the self-crossings of C1 by kernel surgeries.  A reversal
    # whose strands carry equal labels uses a circle linking nothing,
    # which blows down without trace; one whose strands carry inverse
    # labels twists the doubled strand and shifts the framing by four.
    twist_frames: list[int] = []
    for cid in descending_unknotting(d, ci_c):
        oc, op = cmap[cid][OVER]
        uc, up = cmap[cid][UNDER]
        comp_o, comp_u = d.components[oc], d.components[uc]
        g_over = comp_o.labels[comp_o.arc_leaving(op)]
        g_in = comp_u.labels[comp_u.arc_arriving(up)]
        if g_over == g_in:
            continue
        if g_over == g_in.inverse():
            twist_frames.append(comp_o.events[op].sign)
        else:
            raise DiagramStructureError(
                f"self-crossing {cid!r} of the distinguished circle pairs "
                f"labels {g_over} and {g_in}; no kernel circle reverses it")

    f = d.components[ci_c].framing + 4 * sum(twist_frames)
    # Split the distinguished circle off the branch curve: extra twist
    # circles carry doubled linking two, so four units of framing each,
    # and gcd(4, n) = 1 lets them clear the residue mod n.
    m = (-f * pow(4, -1, n)) % n
    if m > n // 2:
        m -= n
    f += 4 * m
    twist_frames.extend([1 if m > 0 else -1] * abs(m))
    assert f % n == 0, (
        f"distinguished framing {f} is not divisible by n={n}")
    r = f % (n * n)
    coil_steps = (r - f) // (n * n)
    k = r // n

    # assemble the canonical diagram
    u_events: list[Event] = []
    c1_events: list[Event] = []
    comps: list[Component] = []
    serial = [0]

    def fresh(tag: str) -> str:
        serial[0] += 1
        return f"{tag}.{serial[0]}"

    # The rings hang on the branch curve concentrically: along U all the
    # first hooks come in ring order, then all the second hooks in
    # reverse ring order, so each ring's hook pair nests inside the
    # previous one.  The hook sign is opposite to the clasp handedness.
    # Both conventions are forced: with any other ordering or sign the
    # first homology of the branched cover of the result disagrees with
    # the value computed independently from the coloured knot diagram.
    u_hooks_a: list[Event] = []
    u_hooks_b: list[Event] = []
    for name, framing, sigma, length, clasp_sign, g1 in ring_info:
        # two local branch hooks of opposite sign; g1 of the clasp passes
        # sit between them so the longitude closes up
        h = -sigma
        a1, a2, b1, b2 = fresh("a"), fresh("a"), fresh("b"), fresh("b")
        ring_events = [Event(a1, OVER, h), Event(a2, UNDER, h)]
        u_hooks_a.extend([Event(a1, UNDER, h), Event(a2, OVER, h)])
        u_hooks_b.extend([Event(b1, UNDER, -h), Event(b2, OVER, -h)])
        for _ in range(g1):
            _emit_c1_pass(c1_events, ring_events, fresh("c"), fresh("c"),
                          clasp_sign)
        ring_events.append(Event(b1, OVER, -h))
        ring_events.append(Event(b2, UNDER, -h))
        for _ in range(length - g1):
            _emit_c1_pass(c1_events, ring_events, fresh("c"), fresh("c"),
                          clasp_sign)
        labels = [identity(n)] * (2 + length)
        comps.append(Component(SURGERY, ring_events, labels,
                               framing=framing, name=name))
    u_events.extend(u_hooks_a)
    for i in range(len(u_hooks_b) - 2, -2, -2):
        u_events.extend(u_hooks_b[i:i + 2])

    coil_frame = 1 if coil_steps > 0 else -1
    for m in range(abs(coil_steps)):
        coil_events: list[Event] = []
        for _ in range(n):
            _emit_threading_pass(coil_events, c1_events,
                                 fresh("k"), fresh("k"), 1)
        comps.append(Component(SURGERY, coil_events, [identity(n)] * n,
                               framing=coil_frame, name=f"coil:{m + 1}"))

    for m, frame in enumerate(twist_frames):
        # grab the distinguished strand twice coherently, hooking through
        # the branch disc with a clasp-like pair in between so the
        # longitude word closes: s t s t^-1 = 1.  The opposite hook
        # signs are forced by the branched-cover homology check.
        t_events: list[Event] = []
        _emit_c1_pass(c1_events, t_events, fresh("t"), fresh("t"), 1)
        for ti, tau in enumerate((1, -1)):
            h1, h2 = fresh("t"), fresh("t")
            t_events.append(Event(h1, OVER, tau))
            t_events.append(Event(h2, UNDER, tau))
            u_events.append(Event(h1, UNDER, tau))
            u_events.append(Event(h2, OVER, tau))
            if ti == 0:
                _emit_c1_pass(c1_events, t_events, fresh("t"), fresh("t"), 1)
        comps.append(Component(SURGERY, t_events, [identity(n)] * 4,
                               framing=frame, name=f"twist:{m + 1}"))

    u_labels = [reflection(n, 0)] * max(1, sum(
        1 for ev in u_events if ev.role == UNDER))
    c1_labels = [rotation(n, 1)] * max(1, sum(
        1 for ev in c1_events if ev.role == UNDER))
    final = ColouredDiagram(n, [
        Component(BRANCH, u_events, u_labels, name="U"),
        Component(SURGERY, c1_events, c1_labels, framing=r, name="C1"),
        *comps,
    ])
    sp = SeparatedPresentation(n=n, k=k, diagram=final)
    report = validate_presentation(sp)
    if not report.ok:
        raise DiagramStructureError(
            "standardisation produced an invalid presentation:\n  "
            + "\n  ".join(report.lines()))
    return sp


# ---------------------------------------------------------------------------
# the full pipeline


def _check_stage(d: ColouredDiagram, stage: str) -> None:
    report = validate(d)
    if not report.ok:
        raise DiagramStructureError(
            f"stage {stage!r} produced an invalid diagram:\n  "
            + "\n  ".join(report.lines()))


def separate(d: ColouredDiagram) -> SeparatedPresentation:
    """Run the full pipeline on a surjectively coloured knot diagram.

    Builds the distinguished circle, unknots the knot, slides the
    distinguished circle over each recording circle until its label
    dies, and standardises.  Every intermediate diagram is validated.
    """
    report = validate(d)
    if not report.ok:
        raise DiagramStructureError(
            "input diagram is invalid:\n  " + "\n  ".join(report.lines()))
    if not report.surjective:
        raise IllegalMoveError(
            "separation requires a surjective colouring")

    d1 = build_distinguished(d)
    _check_stage(d1, "build_distinguished")

    d2 = untie(d1)
    _check_stage(d2, "untie")

    d3 = d2
    ci_c = _c1_index(d3)
    targets = [comp.name for ci, comp in enumerate(d3.components)
               if comp.kind == SURGERY and ci != ci_c]
    for tname in targets:
        comp = d3.components[d3.resolve(tname)]
        if comp.basepoint_label.refl:
            raise DiagramStructureError(
                f"recording circle {tname!r} carries a reflection label")
        a = comp.basepoint_label.rot % d.n
        if a == 0:
            continue
        direction, count = _slide_plan(d.n, a)
        for _ in range(count):
            d3 = handleslide_c1_over(d3, tname, direction)
    _check_stage(d3, "handleslides")

    return standardize(d3)
