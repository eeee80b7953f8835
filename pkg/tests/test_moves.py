import random

import pytest

from dihedralcover.errors import IllegalMoveError, InvalidSurfaceError
from dihedralcover.moves import (
    CCW,
    CW,
    FIRST_OVER_SECOND,
    N_SQUARED,
    OFFDIAG_N,
    SECOND_OVER_FIRST,
    SELF_TWIST,
    MoveTrace,
    band_slide,
    ensure_first_generator,
    normal_form,
    normal_form_data,
    random_surface_data,
    reduce_genus_once,
    stabilize,
    twist_move,
)
from dihedralcover.surface import SurfaceData, cu, vmv_check

TREFOIL = SurfaceData(3, [[-1, 0], [1, -1]], (1, 2))
FIVE_TWO = SurfaceData(7, [[1, 0], [1, 2]], (1, 5))

ALL_SLIDES = [(which, d) for which in (FIRST_OVER_SECOND, SECOND_OVER_FIRST)
              for d in (CCW, CW)]


def reduce_ready(rng, n, genus, noise=12):
    """Random data with rotations (s, 1, ..., 1), by pattern-preserving
    noise on a stabilised normal form.  Returns (sd, k)."""
    k = rng.randrange(n)
    sd = normal_form_data(n, k)
    for _ in range(genus - 1):
        sd = stabilize(sd)
    size = 2 * genus
    steps = []
    for _ in range(noise):
        dice = rng.random()
        if dice < 0.4:
            # in-pair slides that keep the colour pattern: anything in
            # the later pairs, or sliding the second band over the first
            a = rng.choice([1] + list(range(2, size)))
            b = a ^ 1
            if a == 1 or b != 0:
                steps.append(("slide", a, b, rng.choice((1, -1)), 1))
        elif dice < 0.6 and size > 2:
            # transvections avoiding the first band leave every
            # exponent unchanged mod n
            a, b = rng.sample(range(2, size), 2) if size > 4 else (2, 3)
            if a // 2 == b // 2:
                a = 1
            steps.append(("transvect", a, b, rng.choice((1, -1)),
                          rng.choice((1, -1))))
        elif dice < 0.7:
            band = rng.randrange(1, size)
            steps.append(("self_twist", band, rng.randint(-2, 2)))
        elif dice < 0.85:
            j = rng.randrange(1, size)
            steps.append(("set_lift", j, n * rng.choice((-1, 1))))
        else:
            steps.append(("n_squared", rng.choice((1, -1))))
    out = MoveTrace(steps).replay(sd)
    assert out.w[0] % n == 1 and all(x % n == 0 for x in out.w[1:])
    return out, k


# ---------------------------------------------------------------------------
# band slides


def test_slide_congruence_formula():
    # [[a,b],[c,d]] -> [[a+b+c+d, b+d], [c+d, d]] with v2 -> v2 v1^-1
    sd = SurfaceData(5, [[2, 3], [4, 5]], (2, 3))
    out = band_slide(sd, 1, FIRST_OVER_SECOND, CCW)
    assert out.s == ((14, 8), (9, 5))
    assert out.w == (2, 1)


def test_slide_trefoil_anchor():
    out = band_slide(TREFOIL, 1, FIRST_OVER_SECOND, CCW)
    assert out.s == ((-1, -1), (0, -1))
    assert out.w == (1, 1)
    assert cu(out) == cu(TREFOIL) == 1


def test_slide_inverse_cancels():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.choice((3, 5, 7, 9))
        sd, _ = random_surface_data(rng, n, steps=10)
        i = rng.randint(1, sd.genus)
        for which, d in ALL_SLIDES:
            other = CW if d == CCW else CCW
            assert band_slide(band_slide(sd, i, which, d), i, which,
                              other) == sd


def test_slide_argument_errors():
    with pytest.raises(IndexError):
        band_slide(TREFOIL, 2, FIRST_OVER_SECOND, CCW)
    with pytest.raises(IndexError):
        band_slide(TREFOIL, 0, FIRST_OVER_SECOND, CCW)
    with pytest.raises(ValueError):
        band_slide(TREFOIL, 1, "sideways", CCW)
    with pytest.raises(ValueError):
        band_slide(TREFOIL, 1, FIRST_OVER_SECOND, "widdershins")


# ---------------------------------------------------------------------------
# twist moves


def test_n_squared_twist_anchor():
    sd = SurfaceData(3, [[-3, 1], [2, -1]], (1, 0))
    out = twist_move(sd, N_SQUARED, 1)
    assert out.s[0][0] == 6
    assert out.s[0][1] == sd.s[0][1] and out.w == sd.w


def test_self_twist_updates_diagonal():
    sd = normal_form_data(5, 2)           # v = (s, 1)
    out = twist_move(sd, SELF_TWIST, -1, band=2)
    assert out.s[1][1] == sd.s[1][1] - 1
    assert out.w == sd.w


def test_self_twist_needs_kernel_circle():
    with pytest.raises(IllegalMoveError):
        twist_move(TREFOIL, SELF_TWIST, 1, band=1)   # v_1 = s


def test_offdiag_twist_moves_both_entries():
    sd = normal_form_data(5, 1)
    out = twist_move(sd, OFFDIAG_N, 1)
    assert out.s[0][1] == sd.s[0][1] + 5
    assert out.s[1][0] == sd.s[1][0] + 5
    assert cu(out) == cu(sd)


def test_offdiag_twist_preconditions():
    with pytest.raises(IllegalMoveError):
        twist_move(stabilize(normal_form_data(5, 1)), OFFDIAG_N, 1)
    bad = SurfaceData(5, [[0, 2], [3, 0]], (1, 1))   # v_2 = s
    with pytest.raises(IllegalMoveError):
        twist_move(bad, OFFDIAG_N, 1)


def test_twist_argument_errors():
    sd = normal_form_data(5, 1)
    with pytest.raises(ValueError):
        twist_move(sd, SELF_TWIST, 2, band=2)
    with pytest.raises(ValueError):
        twist_move(sd, N_SQUARED, 1, band=1)
    with pytest.raises(ValueError):
        twist_move(sd, "corkscrew", 1)
    with pytest.raises(IndexError):
        twist_move(sd, SELF_TWIST, 1, band=3)


# ---------------------------------------------------------------------------
# invariance of the calculus


def test_moves_preserve_invariants():
    rng = random.Random(23)
    for _ in range(40):
        n = rng.choice((3, 5, 7, 9))
        sd, k = random_surface_data(rng, n, steps=10)
        val = cu(sd)
        outs = [band_slide(sd, rng.randint(1, sd.genus), which, d)
                for which, d in ALL_SLIDES]
        outs.append(twist_move(sd, N_SQUARED, rng.choice((1, -1))))
        kernel_bands = [j for j in range(2 * sd.genus)
                        if sd.w[j] % n == 0]
        if kernel_bands:
            outs.append(twist_move(sd, SELF_TWIST, rng.choice((1, -1)),
                                   band=rng.choice(kernel_bands) + 1))
        if sd.genus == 1 and sd.w[1] % n == 0:
            outs.append(twist_move(sd, OFFDIAG_N, rng.choice((1, -1))))
        for out in outs:
            # the intersection-form invariant is enforced on
            # construction; check the colour condition and cu survive
            assert vmv_check(out.s, out.w, n)
            assert cu(out) == val


def test_reduce_genus_preserves_invariants():
    rng = random.Random(29)
    for _ in range(40):
        n = rng.choice((3, 5, 7, 9))
        sd, k = reduce_ready(rng, n, rng.randint(2, 4))
        out, trace = reduce_genus_once(sd)
        assert out.genus == sd.genus - 1
        assert vmv_check(out.s, out.w, n)
        assert cu(out) == cu(sd) == 2 * k % n
        assert trace.replay(sd) == out


# ---------------------------------------------------------------------------
# the reduction steps


def test_ensure_first_generator_example():
    sd = SurfaceData(5, [[1, 0], [1, -1]], (2, 1))
    out, trace = ensure_first_generator(sd)
    assert out.w[0] % 5 == 1
    assert trace.replay(sd) == out


def test_ensure_first_generator_noop():
    out, trace = ensure_first_generator(TREFOIL)
    assert out == TREFOIL and len(trace) == 0


def test_ensure_first_generator_not_surjective():
    s = [[1, 0, 0, 0], [1, -1, 0, 0], [0, 0, 1, 0], [0, 0, 1, -1]]
    sd = SurfaceData(9, s, (3, 0, 6, 0), surjective=False)
    with pytest.raises(IllegalMoveError):
        ensure_first_generator(sd)


def test_ensure_first_generator_sweep():
    rng = random.Random(31)
    for _ in range(60):
        n = rng.choice((3, 5, 7, 9))
        sd, _ = random_surface_data(rng, n)
        out, trace = ensure_first_generator(sd)
        assert out.w[0] % n == 1
        assert cu(out) == cu(sd)
        assert trace.replay(sd) == out


def test_reduce_genus_once_inverts_stabilization():
    nf = normal_form_data(7, 1)
    out, trace = reduce_genus_once(stabilize(nf))
    assert out == nf
    assert trace.steps == (("delete_last_pair",),)


def test_reduce_genus_once_preconditions():
    with pytest.raises(IllegalMoveError):
        reduce_genus_once(normal_form_data(5, 1))          # genus one
    sd = stabilize(TREFOIL)                                # v = (s, s^2, 1, 1)
    with pytest.raises(IllegalMoveError):
        reduce_genus_once(sd)


# ---------------------------------------------------------------------------
# normal form


def test_normal_form_trefoil():
    k, nf, trace = normal_form(TREFOIL)
    assert k == 2                          # 2k = cu = 1 mod 3
    assert nf.s == ((6, 1), (2, -1)) and nf.w == (1, 0)
    assert trace.replay(TREFOIL) == nf


def test_normal_form_five_two():
    k, nf, trace = normal_form(FIVE_TWO)
    assert k == 1                          # 2k = cu = 2 mod 7
    assert nf == normal_form_data(7, 1)
    assert trace.replay(FIVE_TWO) == nf


def test_normal_form_idempotent():
    for n, k in ((3, 1), (7, 4), (9, 0)):
        nf = normal_form_data(n, k)
        k2, out, trace = normal_form(nf)
        assert (k2, out) == (k, nf)
        assert len(trace) == 0


def test_normal_form_not_surjective():
    sd = SurfaceData(9, [[1, 0], [1, -1]], (3, 6))
    with pytest.raises(IllegalMoveError):
        normal_form(sd)


def test_normal_form_rejects_invalid_colouring():
    sd = SurfaceData(5, [[1, 0], [1, -1]], (1, 1))
    assert not vmv_check(sd.s, sd.w, 5)
    with pytest.raises(InvalidSurfaceError):
        normal_form(sd)


def test_normal_form_matches_generator_truth():
    rng = random.Random(37)
    seen = {n: set() for n in (3, 5, 7, 9)}
    for n in (3, 5, 7, 9):
        for _ in range(50):
            sd, k_true = random_surface_data(rng, n)
            k, nf, trace = normal_form(sd)
            assert k == k_true
            assert nf == normal_form_data(n, k)
            assert trace.replay(sd) == nf
            seen[n].add(k)
    # the classes realise every residue mod n
    assert all(seen[n] == set(range(n)) for n in seen)


def test_equal_invariant_means_equal_normal_form():
    rng = random.Random(41)
    for n in (3, 5, 7):
        pool = {}
        for _ in range(4 * n):
            sd, k = random_surface_data(rng, n)
            pool.setdefault(k, []).append(sd)
        for k, sds in pool.items():
            forms = {normal_form(sd)[1] for sd in sds}
            assert forms == {normal_form_data(n, k)}


def test_normal_form_genus_up_to_four():
    rng = random.Random(43)
    for n in (3, 9):
        for genus in (1, 2, 3, 4):
            sd, k_true = random_surface_data(rng, n, genus=genus)
            k, nf, trace = normal_form(sd)
            assert k == k_true and nf == normal_form_data(n, k)


# ---------------------------------------------------------------------------
# traces and generation


def test_trace_concatenation():
    sd = FIVE_TWO
    half = MoveTrace([("slide", 0, 1, 1, 1)])
    rest = MoveTrace([("slide", 0, 1, -1, 1)])
    assert (half + rest).replay(sd) == sd


def test_trace_rejects_unknown_step():
    with pytest.raises(ValueError):
        MoveTrace([("teleport", 0)]).replay(TREFOIL)


def test_trace_rejects_cross_pair_slide():
    sd = stabilize(TREFOIL)
    with pytest.raises(IllegalMoveError):
        MoveTrace([("slide", 0, 2, 1, 1)]).replay(sd)
    with pytest.raises(IllegalMoveError):
        MoveTrace([("transvect", 0, 1, 1, 1)]).replay(sd)


def test_trace_guards_licensed_rewrites():
    with pytest.raises(IllegalMoveError):
        MoveTrace([("set_lift", 0, 2)]).replay(TREFOIL)
    with pytest.raises(IllegalMoveError):
        MoveTrace([("delete_last_pair",)]).replay(FIVE_TWO)
    with pytest.raises(IllegalMoveError):
        MoveTrace([("unlink", 0, 2)]).replay(stabilize(TREFOIL))


def test_stabilize_block():
    out = stabilize(TREFOIL)
    assert out.genus == 2
    assert out.w == (1, 2, 0, 0)
    assert out.s == ((-1, 0, 0, 0), (1, -1, 0, 0),
                     (0, 0, 0, 0), (0, 0, 1, 0))


def test_normal_form_data_invariant():
    for n in (3, 5, 7, 9):
        for k in range(n):
            assert cu(normal_form_data(n, k)) == 2 * k % n


def test_random_surface_data_is_valid():
    rng = random.Random(47)
    for _ in range(60):
        n = rng.choice((3, 5, 7, 9))
        sd, k = random_surface_data(rng, n)
        assert 1 <= sd.genus <= 4
        assert vmv_check(sd.s, sd.w, n)
        assert cu(sd) == 2 * k % n
