"""Reference diagrams: braid closures, 4-plat closures and a small
corpus of two-bridge knots.

Diagrams are produced by walking a braid word downwards while
propagating Fox colours, then closing up either by the trace closure
(tops joined to bottoms position by position) or by plat caps on four
strands.  In a plat closure half the strands are traversed upwards, so
the stored blackboard signs are corrected by the product of the two
strand directions at each crossing.

The two-bridge corpus lists each knot by its even continued fraction
[2a_1, 2a_2, ...]; the corresponding chain-of-clasps Seifert surface has
genus len/2 and Seifert matrix with band framings a_i on the diagonal
and a single 1 under it per adjacent pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import reflection
from .diagram import KNOT, OVER, UNDER, ColouredDiagram, Component, Event
from .errors import DiagramStructureError


@dataclass(frozen=True)
class _Pass:
    crossing: str
    role: str
    base_sign: int
    colour_in: int
    colour_out: int
    over_slot: int
    under_slot: int


def _run_braid(word, k, n, top_colours):
    """Walk a braid word; returns per-strand pass lists and bottom state.

    Strand slots are numbered by their top position (0-based).  The
    bottom state is a list of (slot, colour) per position.  Letter i > 0
    crosses position i over position i+1; i < 0 crosses it under.
    """
    if len(top_colours) != k:
        raise ValueError("need one top colour per strand")
    paths: list[list[_Pass]] = [[] for _ in range(k)]
    state = [(s, top_colours[s] % n) for s in range(k)]
    for idx, letter in enumerate(word):
        if letter == 0 or abs(letter) >= k:
            raise ValueError(f"bad braid letter {letter} for {k} strands")
        i = abs(letter) - 1
        cid = f"x{idx}"
        base = 1 if letter > 0 else -1
        sa, ca = state[i]
        sb, cb = state[i + 1]
        if letter > 0:
            over_slot, over_col, under_slot, under_col = sa, ca, sb, cb
        else:
            over_slot, over_col, under_slot, under_col = sb, cb, sa, ca
        new_col = (2 * over_col - under_col) % n
        paths[over_slot].append(
            _Pass(cid, OVER, base, over_col, over_col, over_slot, under_slot))
        paths[under_slot].append(
            _Pass(cid, UNDER, base, under_col, new_col, over_slot, under_slot))
        if letter > 0:
            state[i], state[i + 1] = (sb, new_col), (sa, ca)
        else:
            state[i], state[i + 1] = (sb, cb), (sa, new_col)
    return paths, state


def braid_closure_diagram(word, n, top_colours, *, strands=None,
                          kind=KNOT, name="K"):
    """Trace closure of a coloured braid word.

    Raises DiagramStructureError when the top colours do not propagate
    to themselves around the closure.  Multi-component closures give one
    component per cycle, named name0, name1, ...
    """
    k = strands if strands is not None else max(abs(x) for x in word) + 1
    paths, bottom = _run_braid(word, k, n, top_colours)
    for p, (_slot, col) in enumerate(bottom):
        if col != top_colours[p] % n:
            raise DiagramStructureError(
                f"colours do not close around the braid at position {p + 1}: "
                f"{col} arrives where {top_colours[p] % n} starts")
    bottom_pos_of = {slot: p for p, (slot, _col) in enumerate(bottom)}

    comps = []
    used: set[int] = set()
    for start in range(k):
        if start in used:
            continue
        cycle = []
        s = start
        while True:
            used.add(s)
            cycle.append(s)
            s = bottom_pos_of[s]
            if s == start:
                break
        events, under_cols = [], []
        for s in cycle:
            for ps in paths[s]:
                events.append(Event(ps.crossing, ps.role, ps.base_sign))
                if ps.role == UNDER:
                    under_cols.append(ps.colour_out)
        if under_cols:
            labels = [reflection(n, c) for c in under_cols]
        else:
            labels = [reflection(n, top_colours[start] % n)]
        comps.append(Component(kind, events, labels, name=name))
    if len(comps) > 1:
        for i, comp in enumerate(comps):
            comp.name = f"{name}{i}"
    return ColouredDiagram(n, comps)


_PARTNER = {0: 1, 1: 0, 2: 3, 3: 2}


def plat_closure_diagram(word, n, a, b, *, name="K"):
    """Plat closure of a 4-strand braid with bridge colours a and b.

    The top caps join positions (1,2) and (3,4) and carry the two bridge
    colours; the bottom caps must close both the strands and the
    colours, otherwise DiagramStructureError is raised.  Only knot (one
    component) closures are supported.
    """
    top = (a % n, a % n, b % n, b % n)
    paths, bottom = _run_braid(word, 4, n, top)
    if bottom[0][1] != bottom[1][1] or bottom[2][1] != bottom[3][1]:
        raise DiagramStructureError(
            "plat colours do not agree across the bottom caps: "
            f"{[c for _s, c in bottom]}")
    bottom_pos_of = {slot: p for p, (slot, _col) in enumerate(bottom)}

    order: list[tuple[int, int]] = []
    dir_of: dict[int, int] = {}
    slot, direction = 0, 1
    while True:
        order.append((slot, direction))
        dir_of[slot] = direction
        if direction > 0:
            q = _PARTNER[bottom_pos_of[slot]]
            slot = bottom[q][0]
            direction = -1
        else:
            slot = _PARTNER[slot]
            direction = 1
        if (slot, direction) == (0, 1):
            break
        if len(order) > 4:
            raise DiagramStructureError("plat walk does not close")
    if len(order) != 4:
        raise DiagramStructureError("plat closure is a link, not a knot")

    events, under_cols = [], []
    for slot, direction in order:
        seq = paths[slot] if direction > 0 else reversed(paths[slot])
        for ps in seq:
            sign = ps.base_sign * dir_of[ps.over_slot] * dir_of[ps.under_slot]
            events.append(Event(ps.crossing, ps.role, sign))
            if ps.role == UNDER:
                under_cols.append(ps.colour_out if direction > 0
                                  else ps.colour_in)
    if under_cols:
        labels = [reflection(n, c) for c in under_cols]
    else:
        labels = [reflection(n, a % n)]
    return ColouredDiagram(n, [Component(KNOT, events, labels, name=name)])


# ---------------------------------------------------------------------------
# families


def torus_diagram(m, n, a=0, b=1, *, left=True, name=None):
    """The (2, m) torus knot as a coloured braid closure, m odd.

    With left=True this is the left-handed version (all crossings
    negative).  The seed colours must close up, which for a knot needs
    m * (b - a) = 0 mod n; in particular any seeds work when n | m.
    """
    if m < 3 or m % 2 == 0:
        raise ValueError("need odd m >= 3")
    word = [-1] * m if left else [1] * m
    return braid_closure_diagram(
        word, n, (a, b), strands=2, name=name or f"T(2,{m})")


def two_bridge_fraction(cf) -> tuple[int, int]:
    """(p, q) of the knot bounded by the chain surface C(2a_1, 2a_2, ...),
    via the subtractive continued fraction 2a_1 - 1/(2a_2 - 1/(...))."""
    num, den = cf[-1], 1
    for c in reversed(cf[:-1]):
        num, den = c * num - den, num
    if num < 0:
        num, den = -num, -den
    return num, den % num


def _additive_cf(p, q):
    """Odd-length positive continued fraction [c_1, c_2, ...] of p/q."""
    terms = []
    while q:
        c, r = divmod(p, q)
        terms.append(c)
        p, q = q, r
    if len(terms) % 2 == 0:
        if terms[-1] > 1:
            terms[-1] -= 1
            terms.append(1)
        else:
            terms.pop()
            terms[-1] += 1
    return terms


def two_bridge_plat_word(p, q):
    """Alternating 4-plat word of b(p, q): twist blocks on the middle
    pair and (inversely) on the left pair of strands."""
    word = []
    for i, c in enumerate(_additive_cf(p, q)):
        word.extend(([2] if i % 2 == 0 else [-1]) * c)
    return word


TWO_BRIDGE = {
    "3_1": {"cf": (2, 2), "det": 3, "crossings": 3},
    "4_1": {"cf": (2, -2), "det": 5, "crossings": 4},
    "5_1": {"cf": (2, 2, 2, 2), "det": 5, "crossings": 5},
    "5_2": {"cf": (2, 4), "det": 7, "crossings": 5},
    "6_1": {"cf": (4, -2), "det": 9, "crossings": 6},
    "6_2": {"cf": (2, -2, -2, -2), "det": 11, "crossings": 6},
    "7_1": {"cf": (2, 2, 2, 2, 2, 2), "det": 7, "crossings": 7},
    "7_2": {"cf": (2, 6), "det": 11, "crossings": 7},
    "7_4": {"cf": (4, 4), "det": 15, "crossings": 7},
    "7_7": {"cf": (2, -2, -2, 2), "det": 21, "crossings": 7},
}


def colourable_names(n, max_crossings=7):
    """Corpus knots admitting nontrivial n-colourings (n divides det)."""
    return [name for name, info in sorted(TWO_BRIDGE.items())
            if info["det"] % n == 0 and info["crossings"] <= max_crossings]


def two_bridge_diagram(name, n, a=0, b=1):
    """Coloured diagram of a corpus knot from its plat word."""
    p, q = two_bridge_fraction(TWO_BRIDGE[name]["cf"])
    return plat_closure_diagram(
        two_bridge_plat_word(p, q), n, a, b, name=name)


def chain_seifert_matrix(cf):
    """Seifert matrix of the chain-of-clasps surface for C(2a_1, 2a_2, ...).

    Band i has framing a_i; adjacent bands clasp once, giving the single
    subdiagonal 1 per pair, so S - S^T is the standard skew form with
    -1 above the diagonal.
    """
    if any(c % 2 for c in cf):
        raise ValueError("need an even continued fraction")
    g2 = len(cf)
    s = [[0] * g2 for _ in range(g2)]
    for i, c in enumerate(cf):
        s[i][i] = c // 2
        if i + 1 < g2:
            s[i + 1][i] = 1
    return s
