import itertools

import pytest

from dihedralcover.algebra import (
    ContextMismatchError,
    DihedralElement,
    generates_full_group,
    identity,
    parse_element,
    reflection,
    rotation,
    vertex_action,
    vertex_orbit_of_t,
)


def all_elements(n):
    for refl in (False, True):
        for a in range(n):
            yield DihedralElement(n, refl, a)


def test_multiplication_table_spot_checks():
    assert reflection(7, 2) * reflection(7, 5) == rotation(7, 3)
    assert rotation(7, 3) * reflection(7, 1) == reflection(7, 5)
    assert reflection(5, 4) * reflection(5, 4) == identity(5)
    assert rotation(9, 4) * rotation(9, 7) == rotation(9, 2)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13, 15])
def test_group_axioms_exhaustive(n):
    elems = list(all_elements(n))
    e = identity(n)
    for g in elems:
        assert g * e == g == e * g
        assert g * g.inverse() == e
    # associativity on a full triple product sweep
    for a, b, c in itertools.product(elems, repeat=3):
        assert (a * b) * c == a * (b * c)


def test_reflections_are_involutions():
    for n in (3, 7, 9):
        for a in range(n):
            g = reflection(n, a)
            assert g * g == identity(n)
            assert g.order == 2


def test_context_mixing_is_an_error():
    with pytest.raises(ContextMismatchError):
        rotation(3, 1) * rotation(5, 1)


def test_vertex_action_generators():
    assert vertex_action(reflection(7), 2) == 7
    assert vertex_action(rotation(7, 1), 7) == 1
    assert vertex_action(reflection(7, 1), 5) == 5  # fixed point of t s


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_vertex_action_composition_left_factor_first(n):
    # acting by a product applies the left factor first:
    # (g*h)(i) = h(g(i)) as sheet maps
    for g, h in itertools.product(all_elements(n), repeat=2):
        for i in range(1, n + 1):
            assert vertex_action(g * h, i) == vertex_action(h, vertex_action(g, i))


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_vertex_action_is_a_bijection(n):
    for g in all_elements(n):
        assert sorted(vertex_action(g, i) for i in range(1, n + 1)) == list(
            range(1, n + 1)
        )


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_stabilizer_of_vertex_one(n):
    stab = [g for g in all_elements(n) if vertex_action(g, 1) == 1]
    assert sorted(map(str, stab)) == sorted(["1", "t"])


def test_orbits_of_t():
    assert vertex_orbit_of_t(1, 7) == frozenset({1})
    assert vertex_orbit_of_t(2, 7) == frozenset({2, 7})
    assert vertex_orbit_of_t(5, 7) == frozenset({5, 4})


def test_generates_full_group():
    assert generates_full_group({reflection(3, 0), reflection(3, 1)})
    assert not generates_full_group(
        {reflection(9, 0), reflection(9, 3), reflection(9, 6)}
    )
    assert not generates_full_group({reflection(7, 0)})
    # rotations alone never generate (index-2 subgroup)
    assert not generates_full_group({rotation(5, 1)})
    # a reflection plus a generating rotation does
    assert generates_full_group({reflection(9, 0), rotation(9, 2)})


def test_parse_and_str_round_trip():
    for n in (3, 7):
        for g in all_elements(n):
            assert parse_element(str(g), n) == g
    assert parse_element("ts^5", 7) == reflection(7, 5)
    assert parse_element("s^-1", 7) == rotation(7, 6)
    assert parse_element("t s", 5) == reflection(5, 1)
    with pytest.raises(ValueError):
        parse_element("q^2", 5)


def test_powers():
    s = rotation(7, 1)
    assert s ** 7 == identity(7)
    assert s ** -2 == rotation(7, 5)
    assert reflection(7, 3) ** 2 == identity(7)
    assert rotation(7, 3).order == 7
    assert identity(7).order == 1


def test_even_n_rejected():
    with pytest.raises(ValueError):
        DihedralElement(4, False, 1)
    with pytest.raises(ValueError):
        DihedralElement(1, False, 0)
