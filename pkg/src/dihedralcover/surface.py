"""Coloured Seifert-surface data: band projections, Seifert matrices and
the vanishing condition behind the untying invariant.

A genus-g surface is carried as a disc with 2g bands attached in the
product-of-commutators order: the feet of each twin pair (B_1, B_2),
(B_3, B_4), ... interleave, so twins meet in a single clasp while all
other band pairs are free of each other except for the crossings listed
explicitly.  With respect to the core basis x_1, ..., x_2g the Seifert
pairing S(x_i, x_j) = lk(x_i^-, x_j) then satisfies

    S - S^T = diag([[0, -1], [1, 0]], ...),

which is the normalisation used throughout: the earlier band of a twin
pair passes over the later at the clasp, scoring the extra +1 below
the diagonal.

A band projection is combinatorial: each band carries an ordered list of
events, either ("twist", sign) for a half twist of the band or
("cross", partner, sign, role) for a transverse crossing with another
band.  Orientability forces an even number of half twists per band, and
a pair of bands always crosses an even number of times.

A colouring of the boundary knot assigns to the i-th band the rotation
v_i = s^{w_i} picked up by a small loop dual to the band; w is stored as
the least-magnitude integer lift.  The membership condition checked by
``vmv_check`` is that w is isotropic for S + S^T mod n together with
w^T S w = 0 mod n, and the untying invariant of valid data is

    cu = 2 (w^T S w) / n   (mod n).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd

from .algebra import DihedralElement, rotation
from .colouring import FoxColouring, is_surjective
from .diagram import KNOT, OVER, UNDER, ColouredDiagram, Component, Event
from .errors import InvalidSurfaceError
from .tables import chain_seifert_matrix

TWIST = "twist"
CROSS = "cross"

_SIDES = ("outer", "inner")
_DIR = {"outer": 1, "inner": -1}


def least_lift(x: int, n: int) -> int:
    """Representative of x mod n in the interval (-n/2, n/2)."""
    r = x % n
    return r - n if r > n // 2 else r


def intersection_form(size: int) -> list[list[int]]:
    """Block diagonal [[0, -1], [1, 0]] matrix of the given even size."""
    j = [[0] * size for _ in range(size)]
    for t in range(0, size, 2):
        j[t][t + 1] = -1
        j[t + 1][t] = 1
    return j


def _check_intersection_form(s) -> None:
    size = len(s)
    if size % 2:
        raise InvalidSurfaceError(f"odd rank {size}")
    if any(len(row) != size for row in s):
        raise InvalidSurfaceError("matrix is not square")
    j = intersection_form(size)
    for i in range(size):
        for k in range(size):
            if s[i][k] - s[k][i] != j[i][k]:
                raise InvalidSurfaceError(
                    f"S - S^T is not the standard intersection form at "
                    f"({i}, {k})")


@dataclass(frozen=True)
class SurfaceData:
    """Seifert matrix plus colouring vector of a coloured surface.

    ``s`` is the Seifert matrix in a twin-pair basis, ``w`` the integer
    exponents of the band rotations.  ``surjective`` records whether the
    colouring that produced w was surjective; non-surjective data is
    legal but its invariant is not meaningful.
    """

    n: int
    s: tuple[tuple[int, ...], ...]
    w: tuple[int, ...]
    surjective: bool = True

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise InvalidSurfaceError(f"n must be odd >= 3, got {self.n}")
        object.__setattr__(self, "s", tuple(tuple(row) for row in self.s))
        object.__setattr__(self, "w", tuple(self.w))
        _check_intersection_form(self.s)
        if len(self.w) != len(self.s):
            raise InvalidSurfaceError(
                f"{len(self.s)} bands but {len(self.w)} colour exponents")

    @property
    def genus(self) -> int:
        return len(self.s) // 2

    @property
    def v(self) -> tuple[DihedralElement, ...]:
        return tuple(rotation(self.n, x) for x in self.w)

    def with_changes(self, **kw) -> "SurfaceData":
        return replace(self, **kw)


def vmv_check(s, w, n: int, z=None) -> bool:
    """Isotropy of the colouring vector for the symmetrised pairing.

    With a test vector z this is the single condition
    z^T (S + S^T) w = 0 mod n; without one, all standard basis vectors
    are tested and w^T S w = 0 mod n is required as well.
    """
    size = len(s)
    sym = [[s[i][j] + s[j][i] for j in range(size)] for i in range(size)]
    if z is not None:
        return sum(z[i] * sym[i][j] * w[j]
                   for i in range(size) for j in range(size)) % n == 0
    rows_ok = all(
        sum(sym[i][j] * w[j] for j in range(size)) % n == 0
        for i in range(size))
    quad = sum(w[i] * s[i][j] * w[j]
               for i in range(size) for j in range(size))
    return rows_ok and quad % n == 0


def cu(sd: SurfaceData) -> int:
    """The untying invariant 2 (w^T S w) / n mod n of valid surface data."""
    if not vmv_check(sd.s, sd.w, sd.n):
        raise InvalidSurfaceError(
            "colouring vector fails the vanishing condition; "
            "the invariant is undefined")
    size = len(sd.s)
    quad = sum(sd.w[i] * sd.s[i][j] * sd.w[j]
               for i in range(size) for j in range(size))
    return (2 * quad // sd.n) % sd.n


# ---------------------------------------------------------------------------
# band projections


@dataclass(frozen=True)
class BandProjection:
    """Bands of a disc-with-bands surface, as per-band event lists.

    ``bands[b]`` lists the events along band b from its first foot to
    its second: ("twist", +1 | -1) for a half twist, or
    ("cross", partner, sign, "over" | "under") for a crossing with
    another band.  The k-th crossing of band i with band j in i's list
    is the same crossing as the k-th with i in j's list, so those
    entries must agree in sign and take complementary roles.  The twin
    clasp is implicit and not listed.
    """

    bands: tuple[tuple, ...]

    def __post_init__(self):
        bands = tuple(tuple(evs) for evs in self.bands)
        object.__setattr__(self, "bands", bands)
        if len(bands) % 2:
            raise InvalidSurfaceError("bands must come in twin pairs")
        for b, evs in enumerate(bands):
            twists = 0
            for ev in evs:
                if ev[0] == TWIST:
                    if len(ev) != 2 or ev[1] not in (1, -1):
                        raise InvalidSurfaceError(f"malformed event {ev}")
                    twists += 1
                elif ev[0] == CROSS:
                    if (len(ev) != 4 or ev[2] not in (1, -1)
                            or ev[3] not in (OVER, UNDER)):
                        raise InvalidSurfaceError(f"malformed event {ev}")
                    if not 0 <= ev[1] < len(bands) or ev[1] == b:
                        raise InvalidSurfaceError(
                            f"band {b} crossing with bad partner {ev[1]}")
                else:
                    raise InvalidSurfaceError(f"malformed event {ev}")
            if twists % 2:
                raise InvalidSurfaceError(
                    f"band {b} has an odd number of half twists")
        for i in range(len(bands)):
            for j in range(i + 1, len(bands)):
                mine = [ev for ev in bands[i] if ev[0] == CROSS and ev[1] == j]
                theirs = [ev for ev in bands[j]
                          if ev[0] == CROSS and ev[1] == i]
                if len(mine) != len(theirs):
                    raise InvalidSurfaceError(
                        f"bands {i} and {j} disagree on their crossings")
                for a, b_ in zip(mine, theirs):
                    if a[2] != b_[2] or {a[3], b_[3]} != {OVER, UNDER}:
                        raise InvalidSurfaceError(
                            f"bands {i} and {j}: crossing records {a} and "
                            f"{b_} do not match")

    @property
    def genus(self) -> int:
        return len(self.bands) // 2


def seifert_matrix(bp: BandProjection) -> list[list[int]]:
    """Seifert matrix of the band projection in its core basis.

    S_ij is the linking of the pushed-down i-th core with the j-th, so a
    crossing where band i passes under band j scores its sign into S_ij
    while an over-crossing scores into S_ji.  Diagonal entries count
    full twists, and each implicit twin clasp (earlier band over the
    later, positively) adds the single +1 under the diagonal.
    """
    size = len(bp.bands)
    s = [[0] * size for _ in range(size)]
    for b, evs in enumerate(bp.bands):
        t = sum(ev[1] for ev in evs if ev[0] == TWIST)
        if t % 2:
            raise InvalidSurfaceError(f"band {b}: unbalanced half twists")
        s[b][b] = t // 2
        for ev in evs:
            if ev[0] == CROSS:
                _, j, sgn, role = ev
                if role == UNDER:
                    s[b][j] += sgn
                # the partner's own list scores the complementary slot
    for t in range(0, size, 2):
        s[t + 1][t] += 1
    result_diff_ok = True
    j_std = intersection_form(size)
    for i in range(size):
        for k in range(size):
            if s[i][k] - s[k][i] != j_std[i][k]:
                result_diff_ok = False
    if not result_diff_ok:
        raise InvalidSurfaceError(
            "unbalanced band crossings: over- and under-passes of each "
            "pair must link equally outside the twin clasp")
    return s


def bp_from_seifert_matrix(s) -> BandProjection:
    """A band projection realizing the given twin-basis Seifert matrix.

    Each diagonal entry becomes that many full twists; a symmetric
    off-diagonal pair s_ij = s_ji = c becomes |c| under- plus |c|
    over-crossings of band i with band j (the balance the Seifert
    pairing forces); the twin clasps supply the asymmetry, so S - S^T
    must already be the standard intersection form.
    """
    _check_intersection_form(s)
    size = len(s)
    events: list[list[tuple]] = [[] for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            c = s[i][j]
            sgn = 1 if c > 0 else -1
            for _ in range(abs(c)):
                events[i].append((CROSS, j, sgn, UNDER))
                events[j].append((CROSS, i, sgn, OVER))
                events[i].append((CROSS, j, sgn, OVER))
                events[j].append((CROSS, i, sgn, UNDER))
    for b in range(size):
        sgn = 1 if s[b][b] > 0 else -1
        events[b].extend([(TWIST, sgn)] * (2 * abs(s[b][b])))
    return BandProjection(tuple(tuple(evs) for evs in events))


# ---------------------------------------------------------------------------
# the boundary knot of a band projection


@dataclass(frozen=True)
class SurfaceBoundary:
    """Closure diagram of a band projection plus the arc bookkeeping
    needed to read colours off the bands: band_arcs[b] is the pair of
    arc indices at band b's root, (outer side, inner side)."""

    diagram: ColouredDiagram
    band_arcs: tuple[tuple[int, int], ...]


def _side_passes(bp: BandProjection):
    """Per-side event sequences along each band, root to far foot.

    Returns {(band, side): [(crossing_id, role, sign), ...]}.  Twin
    clasps are appended at the end of the earlier band's core and
    prepended to the later one's; as drawn, the later band passes over,
    which realizes the twin basis with the second core reversed.
    """
    size = len(bp.bands)

    # slot bookkeeping: which physical side currently runs on the left
    slot1_at: list[list[str]] = []  # per band, per event index (before it)
    for evs in bp.bands:
        states, cur = [], "outer"
        for ev in evs:
            states.append(cur)
            if ev[0] == TWIST:
                cur = "inner" if cur == "outer" else "outer"
        states.append(cur)  # state after the last event
        slot1_at.append(states)

    def sides_in_slot_order(b: int, e: int) -> list[str]:
        first = slot1_at[b][e]
        return [first, "inner" if first == "outer" else "outer"]

    passes = {(b, side): [] for b in range(size) for side in _SIDES}

    for b, evs in enumerate(bp.bands):
        for e, ev in enumerate(evs):
            sgn = ev[1]
            cid = f"t{b}.{e}"
            s1 = slot1_at[b][e]
            s2 = "inner" if s1 == "outer" else "outer"
            over, under = (s1, s2) if sgn > 0 else (s2, s1)
            dsign = sgn * _DIR["outer"] * _DIR["inner"]
            passes[b, over].append((cid, OVER, dsign))
            passes[b, under].append((cid, UNDER, dsign))

    for t in range(0, size, 2):
        lo, hi = t, t + 1
        lo_order = sides_in_slot_order(lo, len(bp.bands[lo]))
        hi_order = sides_in_slot_order(hi, 0)
        head = {(hi, side): [] for side in _SIDES}
        for mine in lo_order:
            for theirs in hi_order:
                cid = f"clasp{t // 2}.{mine[0]}{theirs[0]}"
                dsign = _DIR[mine] * _DIR[theirs]
                passes[lo, mine].append((cid, UNDER, dsign))
        for mine in hi_order:
            for theirs in lo_order:
                cid = f"clasp{t // 2}.{theirs[0]}{mine[0]}"
                dsign = _DIR[mine] * _DIR[theirs]
                head[hi, mine].append((cid, OVER, dsign))
        for side in _SIDES:
            passes[hi, side] = head[hi, side] + passes[hi, side]

    return passes


def _boundary_walk(genus: int):
    """Order in which the boundary traverses the band sides.

    Feet sit on the disc edge in the order A1 A2 B1 B2 per twin pair;
    outer sides connect first-foot-left to second-foot-right and are
    walked root to far foot, inner sides the other way around.
    """
    if genus == 0:
        return []
    afoot = {}
    bfoot = {}
    for t in range(genus):
        for j in (0, 1):
            afoot[2 * t + j] = 4 * t + j
            bfoot[2 * t + j] = 4 * t + 2 + j
    enter_at_left = {}
    for b in range(2 * genus):
        enter_at_left[afoot[b], "l"] = (b, "outer", bfoot[b])
        enter_at_left[bfoot[b], "l"] = (b, "inner", afoot[b])
    order = []
    foot = 0
    while True:
        band, side, out_foot = enter_at_left[foot, "l"]
        order.append((band, side))
        foot = (out_foot + 1) % (4 * genus)
        if foot == 0:
            break
        if len(order) > 4 * genus:
            raise AssertionError("boundary walk does not close")
    if len(order) != 4 * genus:
        raise AssertionError("boundary is not a single circle")
    return order


def closure_diagram(bp: BandProjection, n: int) -> SurfaceBoundary:
    """The boundary knot of the band projection, labelled trivially.

    The diagram's single component carries constant labels t; solve for
    colourings to obtain meaningful ones.  The returned band_arcs map
    each band to the arcs of its two sides at the root, which is where
    colour differences are read.

    Only projections whose bands interact through the twin clasps alone
    close to a well-defined diagram: generic band crossings leave the
    planar routing (and with it the boundary knot) undetermined, so
    they are rejected here even though their Seifert data is fine.
    """
    if any(ev[0] == CROSS for evs in bp.bands for ev in evs):
        raise InvalidSurfaceError(
            "cannot close a band projection with generic band crossings: "
            "the event lists do not determine the planar routing")
    passes = _side_passes(bp)
    walk = _boundary_walk(bp.genus)

    events: list[Event] = []
    side_range = {}
    for band, side in walk:
        seq = passes[band, side]
        if side == "inner":
            seq = list(reversed(seq))
        start = len(events)
        events.extend(Event(cid, role, sgn) for cid, role, sgn in seq)
        side_range[band, side] = (start, len(events))

    unders_before = [0] * (len(events) + 1)
    for i, ev in enumerate(events):
        unders_before[i + 1] = unders_before[i] + (ev.role == UNDER)
    m = max(1, unders_before[-1])

    def arc_at(point: int) -> int:
        return (unders_before[point] - 1) % m

    band_arcs = []
    for b in range(len(bp.bands)):
        outer_root = side_range[b, "outer"][0]
        inner_root = side_range[b, "inner"][1]
        band_arcs.append((arc_at(outer_root), arc_at(inner_root)))

    comp = Component(KNOT, events,
                     [DihedralElement(n, True, 0)] * m, name="boundary")
    return SurfaceBoundary(ColouredDiagram(n, [comp]), tuple(band_arcs))


def colouring_vector(bp: BandProjection, colouring: FoxColouring
                     ) -> SurfaceData:
    """Surface data of a colouring of the band projection's boundary.

    The i-th exponent is the colour difference between the two sides of
    band i at its root, lifted to least magnitude; the Seifert matrix
    comes from the band combinatorics.  The closure drawing runs the
    second core of each twin pair against its basis orientation (that is
    what makes the clasp score below the diagonal), so the difference is
    negated on odd bands.  A non-surjective colouring is recorded in the
    flag, not rejected.
    """
    n = colouring.n
    boundary = closure_diagram(bp, n)
    cols = colouring.colours[0]
    if len(cols) != len(boundary.diagram.components[0].labels):
        raise InvalidSurfaceError(
            "colouring does not fit the boundary diagram")
    w = tuple(least_lift((-1) ** (i % 2) * (cols[inner] - cols[outer]), n)
              for i, (outer, inner) in enumerate(boundary.band_arcs))
    return SurfaceData(n, seifert_matrix(bp), w,
                       surjective=is_surjective(colouring))


# ---------------------------------------------------------------------------
# chain surfaces (two-bridge and torus knots)


def chain_colour_vector(cf, n: int, a: int = 0, b: int = 1) -> list[int]:
    """Band colour exponents of the chain surface C(2a_1, 2a_2, ...)
    for the colouring with bridge colours a, b.

    The first band sees the two bridges, and isotropy for S + S^T
    propagates the rest through the three-term recursion
    w_{i+1} = -2 a_{i+1} w_i - w_{i-1}; the final relation must close
    mod n, otherwise the bridge colours do not extend to a colouring.
    """
    if any(c % 2 for c in cf):
        raise InvalidSurfaceError("need an even continued fraction")
    half = [c // 2 for c in cf]
    w = [(b - a) % n]
    prev = 0
    for ai in half[:-1]:
        w.append((-2 * ai * w[-1] - prev) % n)
        prev = w[-2]
    if (prev + 2 * half[-1] * w[-1]) % n:
        raise InvalidSurfaceError(
            f"bridge colours {a}, {b} do not extend to a colouring mod {n}")
    return [least_lift(x, n) for x in w]


def chain_to_twin(s_chain, w_chain):
    """Rewrite chain-basis surface data in the twin-pair basis.

    The chain basis has each band clasping the next; replacing the odd
    bands by partial sums y_{2i-1} = x_1 + x_3 + ... + x_{2i-1} makes
    consecutive pairs twins and kills all other intersections.  Returns
    (S_twin, w_twin) with S_twin = P S P^T and w_twin = P^{-T} w.
    """
    size = len(s_chain)
    if size % 2:
        raise InvalidSurfaceError("chain basis must have even rank")
    p = [[0] * size for _ in range(size)]
    for i in range(size):
        if i % 2:
            p[i][i] = 1
        else:
            for j in range(0, i + 1, 2):
                p[i][j] = 1
    s_twin = [[sum(p[i][k] * s_chain[k][x] * p[j][x]
                   for k in range(size) for x in range(size))
               for j in range(size)] for i in range(size)]
    # P^{-T}: x_{2i+1} = y_{2i+1} - y_{2i-1} transposed
    w_twin = list(w_chain)
    for i in range(2, size, 2):
        w_twin[i - 2] -= w_chain[i]
    return s_twin, w_twin


def chain_surface_data(cf, n: int, a: int = 0, b: int = 1) -> SurfaceData:
    """Twin-basis surface data of the chain surface C(2a_1, ...) with
    bridge colours a, b."""
    s_chain = chain_seifert_matrix(cf)
    w_chain = chain_colour_vector(cf, n, a, b)
    s_twin, w_twin = chain_to_twin(s_chain, w_chain)
    surjective = gcd(b - a, n) == 1
    return SurfaceData(n, tuple(map(tuple, s_twin)), tuple(w_twin),
                       surjective=surjective)


def torus_surface_data(m: int, n: int, a: int = 0, b: int = 1, *,
                       left: bool = True) -> SurfaceData:
    """Surface data of the (2, m) torus knot's chain surface, m odd."""
    if m < 3 or m % 2 == 0:
        raise ValueError("need odd m >= 3")
    cf = tuple([-2 if left else 2] * (m - 1))
    return chain_surface_data(cf, n, a, b)
