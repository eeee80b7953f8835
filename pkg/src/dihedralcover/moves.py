"""Move calculus on coloured surface data: band slides, licensed twist
surgeries, and the reduction of surjectively coloured data to its
genus-one normal form.

Every operation is pure and returns fresh :class:`SurfaceData`; the
compound reductions also return a :class:`MoveTrace`, an ordered record
of the elementary rewrites applied.  Replaying a trace on the original
input reproduces the output bit-exactly, which keeps each reduction
auditable.

All rewrites preserve the intersection form S - S^T, the vanishing
condition of ``vmv_check`` and the invariant ``cu``:

* a band slide within a twin pair is the unimodular congruence
  S -> P S P^T with P = I + eps * E_ab, b the twin of a; colour moves
  across pairs by twisting along an embedded curve through two pairs,
  the transvection Q = I + lam * c c^T J with c = e_a + sigma e_b.  In
  both cases the colour exponents transform by the contragredient
  Q^{-T}, so the boundary colouring is untouched and w^T S w is
  preserved on the nose;
* twist surgeries are performed along circles lying in the kernel of
  the colouring: a self twist needs the ringed band's rotation to be
  trivial, ringing the first band n times adds n^2 to its framing
  unconditionally, and on a genus-one surface with trivial second
  rotation the off-diagonal entries can absorb n at a time;
* the genus-reduction surgeries unlink a twin pair whose rotations are
  trivial and then delete it.

``normal_form`` chains these: make the first rotation the generator s,
trivialise the remaining rotations by sliding over the first band,
delete trivialized pairs down to genus one, and pin the matrix to

    [[k n, (n - 1) / 2], [(n + 1) / 2, (1 - n) / 2]],   w = (1, 0),

with 0 <= k < n.  The residue satisfies 2 k = cu mod n, so data with
equal invariant reaches an identical normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import IllegalMoveError, InvalidSurfaceError
from .surface import SurfaceData, intersection_form, vmv_check

FIRST_OVER_SECOND = "first-over-second"
SECOND_OVER_FIRST = "second-over-first"
CCW = "ccw"
CW = "cw"

SELF_TWIST = "self_twist"
N_SQUARED = "n_squared"
OFFDIAG_N = "offdiag_n"


@dataclass(frozen=True)
class MoveTrace:
    """Ordered list of elementary rewrite steps.

    Steps are plain tuples with 0-based band indices, e.g.
    ``("slide", a, b, eps, count)`` or ``("self_twist", band, count)``,
    so traces serialise directly.  ``replay`` folds the steps over an
    input and reproduces the recorded output exactly.
    """

    steps: tuple[tuple, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "steps", tuple(tuple(st) for st in self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other) -> "MoveTrace":
        return MoveTrace(self.steps + tuple(tuple(st) for st in other))

    def replay(self, sd: SurfaceData) -> SurfaceData:
        for st in self.steps:
            sd = _apply(sd, st)
        return sd


def _apply(sd: SurfaceData, step: tuple) -> SurfaceData:
    """Apply one elementary rewrite, enforcing its licence."""
    name = step[0]
    n = sd.n
    s = [list(row) for row in sd.s]
    w = list(sd.w)
    size = len(s)

    if name == "slide":
        _, a, b, eps, count = step
        if not 0 <= a < size or b != a ^ 1:
            raise IllegalMoveError(
                f"bad slide indices ({a}, {b}): slides stay within a twin "
                "pair; use a transvection across pairs")
        if eps not in (1, -1) or count < 0:
            raise IllegalMoveError("slide needs eps = +-1 and count >= 0")
        c = eps * count
        new = [row[:] for row in s]
        for j in range(size):
            new[a][j] += c * s[b][j]
        for i in range(size):
            new[i][a] += c * s[i][b]
        new[a][a] += c * c * s[b][b]
        s = new
        w[b] -= c * w[a]
    elif name == "transvect":
        _, a, b, sigma, lam = step
        if not (0 <= a < size and 0 <= b < size) or a // 2 == b // 2:
            raise IllegalMoveError(
                f"bad transvection slots ({a}, {b}): they must lie in "
                "distinct twin pairs")
        if sigma not in (1, -1):
            raise IllegalMoveError("transvection sigma must be +-1")
        jm = intersection_form(size)
        row = [lam * (jm[a][j] + sigma * jm[b][j]) for j in range(size)]
        q = [[int(i == j) for j in range(size)] for i in range(size)]
        for i, ci in ((a, 1), (b, sigma)):
            for j in range(size):
                q[i][j] += ci * row[j]
        qs = [[sum(q[i][x] * s[x][j] for x in range(size))
               for j in range(size)] for i in range(size)]
        s = [[sum(qs[i][x] * q[j][x] for x in range(size))
              for j in range(size)] for i in range(size)]
        dot = w[a] + sigma * w[b]
        for i in range(size):
            w[i] += lam * (jm[i][a] + sigma * jm[i][b]) * dot
    elif name == "self_twist":
        _, band, count = step
        if not 0 <= band < size:
            raise IllegalMoveError(f"no band {band}")
        if w[band] % n:
            raise IllegalMoveError(
                "self twist needs a trivial band rotation: the ringing "
                "circle must lie in the colouring kernel")
        s[band][band] += count
    elif name == "n_squared":
        _, count = step
        if size < 2:
            raise IllegalMoveError("n-squared twist needs a band pair")
        s[0][0] += count * n * n
    elif name == "offdiag_n":
        _, count = step
        if size != 2:
            raise IllegalMoveError("off-diagonal twist needs genus one")
        if w[1] % n:
            raise IllegalMoveError(
                "off-diagonal twist needs a trivial second rotation")
        s[0][1] += count * n
        s[1][0] += count * n
    elif name == "set_lift":
        _, j, value = step
        if not 0 <= j < size:
            raise IllegalMoveError(f"no band {j}")
        if (value - w[j]) % n:
            raise IllegalMoveError(
                f"lift {value} does not represent w[{j}] = {w[j]} mod {n}")
        w[j] = value
    elif name == "unlink":
        _, a, j = step
        if not (0 <= a < size and 0 <= j < size) or j in (a, a ^ 1):
            raise IllegalMoveError(f"bad unlink indices ({a}, {j})")
        if w[a] != 0:
            raise IllegalMoveError(
                "unlink surgery needs an exactly zero colour exponent on "
                "the band being freed")
        s[a][j] = 0
        s[j][a] = 0
    elif name == "untwist_pair":
        _, t = step
        a, b = 2 * t, 2 * t + 1
        if not 0 <= b < size:
            raise IllegalMoveError(f"no twin pair {t}")
        if w[a] != 0 or w[b] != 0:
            raise IllegalMoveError(
                "clasp untwisting needs exactly zero colour exponents on "
                "the pair")
        s[a][b] = 0
        s[b][a] = 1
    elif name == "stabilize":
        for row in s:
            row.extend((0, 0))
        s.append([0] * (size + 2))
        s.append([0] * (size + 2))
        s[size + 1][size] = 1
        w.extend((0, 0))
    elif name == "delete_last_pair":
        if size < 2:
            raise IllegalMoveError("nothing to delete")
        a, b = size - 2, size - 1
        trivial = (w[a] == w[b] == 0
                   and s[a][a] == s[a][b] == s[b][b] == 0 and s[b][a] == 1
                   and all(s[a][j] == s[j][a] == s[b][j] == s[j][b] == 0
                           for j in range(a)))
        if not trivial:
            raise IllegalMoveError(
                "last pair is not an unlinked trivial pair")
        s = [row[:a] for row in s[:a]]
        w = w[:a]
    else:
        raise ValueError(f"unknown move step {name!r}")

    return sd.with_changes(s=tuple(tuple(row) for row in s), w=tuple(w))


class _Recorder:
    """Accumulates applied steps alongside the evolving data."""

    def __init__(self, sd: SurfaceData, steps=()):
        self.sd = sd
        self.steps = list(steps)

    def do(self, *step):
        self.sd = _apply(self.sd, step)
        self.steps.append(step)

    def extend(self, sd: SurfaceData, trace: MoveTrace):
        self.sd = sd
        self.steps.extend(trace)

    def trace(self) -> MoveTrace:
        return MoveTrace(tuple(self.steps))


# ---------------------------------------------------------------------------
# elementary public moves


def band_slide(sd: SurfaceData, i: int, which: str, dir: str) -> SurfaceData:
    """Slide one band of twin pair ``i`` (1-based) over its twin.

    ``which`` selects the sliding band, ``dir`` the sense of the slide.
    Counterclockwise adds the slid-over core to the sliding band and
    divides its twin's rotation by the slider's; clockwise is inverse.
    """
    if not 1 <= i <= sd.genus:
        raise IndexError(f"twin-pair index {i} out of range for genus "
                         f"{sd.genus}")
    if which not in (FIRST_OVER_SECOND, SECOND_OVER_FIRST):
        raise ValueError(f"unknown slide variant {which!r}")
    if dir not in (CCW, CW):
        raise ValueError(f"unknown slide direction {dir!r}")
    a, b = 2 * i - 2, 2 * i - 1
    if which == SECOND_OVER_FIRST:
        a, b = b, a
    return _apply(sd, ("slide", a, b, 1 if dir == CCW else -1, 1))


def twist_move(sd: SurfaceData, mode: str, sign: int,
               band: int | None = None) -> SurfaceData:
    """Add a single licensed twist: ``self_twist`` on a 1-based ``band``
    with trivial rotation, ``n_squared`` on the first band's framing, or
    ``offdiag_n`` on a genus-one pair with trivial second rotation."""
    if sign not in (1, -1):
        raise ValueError("twist sign must be +1 or -1")
    if mode == SELF_TWIST:
        if band is None:
            raise ValueError("self_twist needs a band")
        if not 1 <= band <= 2 * sd.genus:
            raise IndexError(f"band {band} out of range")
        return _apply(sd, ("self_twist", band - 1, sign))
    if band is not None:
        raise ValueError(f"{mode} does not take a band")
    if mode == N_SQUARED:
        return _apply(sd, ("n_squared", sign))
    if mode == OFFDIAG_N:
        return _apply(sd, ("offdiag_n", sign))
    raise ValueError(f"unknown twist mode {mode!r}")


def stabilize(sd: SurfaceData) -> SurfaceData:
    """Append an unlinked trivial twin pair: block [[0, 0], [1, 0]] and
    trivial colours.  Inverse to deleting that pair."""
    return _apply(sd, ("stabilize",))


# ---------------------------------------------------------------------------
# the reduction


def _require_surjective(sd: SurfaceData) -> None:
    if gcd(sd.n, *sd.w) != 1:
        raise IllegalMoveError(
            "colouring is not surjective: the band rotations and n have a "
            "common factor, so no slide sequence reaches the generator")


def _ext_gcd(x: int, y: int):
    # returns (g, u, v) with u*x + v*y == g
    if y == 0:
        return x, 1, 0
    g, u, v = _ext_gcd(y, x % y)
    return g, v, u - (x // y) * v


def _euclid_pair(rec: _Recorder, a: int, b: int) -> None:
    """In-pair slides until w[a] == 0, leaving gcd(w[a], w[b]) in w[b].

    Exponents are first normalised into [0, n) and kept non-negative,
    so the descent follows the representative order 0 < 1 < ... < n - 1.
    """
    for j in (a, b):
        if not 0 <= rec.sd.w[j] < rec.sd.n:
            rec.do("set_lift", j, rec.sd.w[j] % rec.sd.n)
    while rec.sd.w[a]:
        wa, wb = rec.sd.w[a], rec.sd.w[b]
        if wb == 0:
            rec.do("slide", a, b, -1, 1)    # w_b += w_a
            rec.do("slide", b, a, 1, 1)     # w_a -= w_b, now zero
            return
        q = wa // wb
        if q:
            rec.do("slide", b, a, 1, q)
        if rec.sd.w[a] == 0:
            return
        rec.do("slide", a, b, 1, wb // rec.sd.w[a])


def ensure_first_generator(sd: SurfaceData):
    """Slide until the first band's rotation is the generator s.

    Returns ``(data, trace)``.  Within each twin pair a Euclidean
    descent kills the first exponent; the surviving exponents admit a
    combination congruent to 1 because the colouring is surjective, and
    it is realised in the first slot by in-pair slides together with
    transvections along curves meeting the first pair and one survivor.
    """
    _require_surjective(sd)
    n = sd.n
    if sd.w[0] % n == 1:
        return sd, MoveTrace()
    rec = _Recorder(sd)
    for t in range(sd.genus):
        _euclid_pair(rec, 2 * t, 2 * t + 1)
    d1 = rec.sd.w[1]
    # A transvection along a curve through pairs 1 and t adds multiples
    # of w_1 + w_{2t+1} to w_0; the in-pair slide adds multiples of w_1.
    # Together the reachable increments span gcd of all survivors.
    sources = [(None, d1)] + [
        (t, d1 + rec.sd.w[2 * t + 1]) for t in range(1, sd.genus)]
    g, coeffs = 0, {}
    for key, value in sources:
        if value:
            g2, u, v = _ext_gcd(g, value)
            coeffs = {kk: c * u for kk, c in coeffs.items()}
            coeffs[key] = v
            g = g2
    inv = pow(g, -1, n)
    for key, c in coeffs.items():
        c = c * inv % n
        if not c:
            continue
        if key is None:
            rec.do("slide", 1, 0, -1, c)
        else:
            rec.do("transvect", 1, 2 * key + 1, 1, -c)
    rec.do("set_lift", 0, 1)
    return rec.sd, rec.trace()


def reduce_genus_once(sd: SurfaceData):
    """Unlink and delete the last twin pair of data with rotations
    (s, 1, ..., 1); returns ``(data, trace)`` one genus lower."""
    n, g = sd.n, sd.genus
    if g < 2:
        raise IllegalMoveError("genus reduction needs genus >= 2")
    if sd.w[0] % n != 1 or any(x % n for x in sd.w[1:]):
        raise IllegalMoveError(
            "genus reduction needs band rotations (s, 1, ..., 1)")
    rec = _Recorder(sd)
    a, b = 2 * g - 2, 2 * g - 1
    for j in (a, b):
        if rec.sd.w[j]:
            rec.do("set_lift", j, 0)
    for j in range(a):
        if rec.sd.s[a][j] or rec.sd.s[j][a]:
            rec.do("unlink", a, j)
        if rec.sd.s[b][j] or rec.sd.s[j][b]:
            rec.do("unlink", b, j)
    if rec.sd.s[a][b] or rec.sd.s[b][a] != 1:
        rec.do("untwist_pair", g - 1)
    for band in (a, b):
        d = rec.sd.s[band][band]
        if d:
            rec.do("self_twist", band, -d)
    rec.do("delete_last_pair")
    return rec.sd, rec.trace()


def normal_form_data(n: int, k: int) -> SurfaceData:
    """The genus-one normal form for residue k:
    S = [[k n, (n - 1)/2], [(n + 1)/2, (1 - n)/2]] with w = (1, 0)."""
    return SurfaceData(
        n,
        ((k * n, (n - 1) // 2), ((n + 1) // 2, (1 - n) // 2)),
        (1, 0))


def normal_form(sd: SurfaceData):
    """Reduce surjectively coloured data to its normal form.

    Returns ``(k, data, trace)`` with 0 <= k < n and 2 k = cu mod n.
    The trace replays on the input to the returned data.
    """
    _require_surjective(sd)
    n = sd.n
    if not vmv_check(sd.s, sd.w, n):
        raise InvalidSurfaceError(
            "colouring vector fails the vanishing condition; the data "
            "does not bound a coloured surface to reduce")
    rec = _Recorder(*_as_pair(ensure_first_generator(sd)))
    if rec.sd.w[0] != 1:
        rec.do("set_lift", 0, 1)
    for t in range(1, rec.sd.genus):
        # concentrate the pair's colour in its second band, then cancel
        # it against the first band's generator across the pairs
        _euclid_pair(rec, 2 * t, 2 * t + 1)
        d = rec.sd.w[2 * t + 1]
        if d:
            rec.do("transvect", 0, 2 * t, 1, -d)
    junk = rec.sd.w[1]
    if junk:
        rec.do("slide", 0, 1, 1 if junk > 0 else -1, abs(junk))
    while rec.sd.genus > 1:
        rec.extend(*reduce_genus_once(rec.sd))

    delta = (1 - n) // 2 - rec.sd.s[1][1]
    if delta:
        rec.do("self_twist", 1, delta)
    diff = (n - 1) // 2 - rec.sd.s[0][1]
    if diff % n:
        raise InvalidSurfaceError(
            "off-diagonal entry is not congruent to (n - 1)/2 mod n")
    if diff:
        rec.do("offdiag_n", diff // n)
    p = rec.sd.s[0][0]
    if p % n:
        raise InvalidSurfaceError("framing entry is not a multiple of n")
    k0 = p // n
    k = k0 % n
    if k != k0:
        rec.do("n_squared", (k - k0) // n)
    assert rec.sd.s == normal_form_data(n, k).s and rec.sd.w == (1, 0)
    return k, rec.sd, rec.trace()


def _as_pair(pair):
    sd, trace = pair
    return sd, trace.steps


# ---------------------------------------------------------------------------
# generation of valid data


def random_surface_data(rng, n: int, *, genus: int | None = None,
                        steps: int = 20):
    """Random valid surface data with a known invariant.

    Starts from a uniformly chosen normal form, stabilises to the target
    genus (random in 1..4 when unspecified) and applies ``steps`` random
    licensed moves.  Returns ``(sd, k)``; by invariance of the moves,
    cu(sd) == 2 k mod n throughout.
    """
    k = rng.randrange(n)
    sd = normal_form_data(n, k)
    g = genus if genus is not None else rng.randint(1, 4)
    for _ in range(g - 1):
        sd = stabilize(sd)
    size = 2 * g
    for _ in range(steps):
        dice = rng.random()
        if dice < 0.40:
            a = rng.randrange(size)
            sd = _apply(sd, ("slide", a, a ^ 1, rng.choice((1, -1)), 1))
        elif dice < 0.60 and size > 2:
            a = rng.randrange(size)
            b = rng.randrange(size - 2)
            if b // 2 >= a // 2:
                b += 2
            sd = _apply(sd, ("transvect", a, b, rng.choice((1, -1)),
                             rng.choice((1, -1))))
        elif dice < 0.72:
            bands = [j for j in range(size) if sd.w[j] % n == 0]
            if bands:
                sd = _apply(sd, ("self_twist", rng.choice(bands),
                                 rng.choice((1, -1))))
        elif dice < 0.85:
            j = rng.randrange(size)
            sd = _apply(sd, ("set_lift", j,
                             sd.w[j] + n * rng.choice((-1, 1, 2))))
        elif dice < 0.95:
            sd = _apply(sd, ("n_squared", rng.choice((1, -1))))
        elif size == 2 and sd.w[1] % n == 0:
            sd = _apply(sd, ("offdiag_n", rng.choice((1, -1))))
    return sd, k
