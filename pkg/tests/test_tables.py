from fractions import Fraction

import pytest

from dihedralcover.colouring import solve_colourings
from dihedralcover.diagram import linking_number, validate, writhe
from dihedralcover.errors import DiagramStructureError
from dihedralcover.tables import (
    TWO_BRIDGE,
    _additive_cf,
    braid_closure_diagram,
    chain_seifert_matrix,
    colourable_names,
    torus_diagram,
    two_bridge_diagram,
    two_bridge_fraction,
    two_bridge_plat_word,
)

from .oracles import alexander_poly, knot_determinant

FRACTIONS = {
    "3_1": (3, 2), "4_1": (5, 2), "5_1": (5, 4), "5_2": (7, 4),
    "6_1": (9, 2), "6_2": (11, 4), "7_1": (7, 6), "7_2": (11, 6),
    "7_4": (15, 4), "7_7": (21, 8),
}


def test_two_bridge_fractions():
    for name, info in TWO_BRIDGE.items():
        p, q = two_bridge_fraction(info["cf"])
        assert (p, q) == FRACTIONS[name], name
        assert p == info["det"]
        assert 0 < q < p and q % 2 == 0  # even-fraction normal form


def test_additive_cf_reconstructs_the_fraction():
    for p, q in FRACTIONS.values():
        terms = _additive_cf(p, q)
        assert len(terms) % 2 == 1
        assert all(t > 0 for t in terms)
        val = Fraction(terms[-1])
        for t in reversed(terms[:-1]):
            val = t + 1 / val
        assert val == Fraction(p, q)


def test_plat_words_have_the_table_crossing_number():
    for name, info in TWO_BRIDGE.items():
        word = two_bridge_plat_word(*two_bridge_fraction(info["cf"]))
        assert len(word) == info["crossings"], name


def test_corpus_diagrams_validate_and_colour():
    for name, info in sorted(TWO_BRIDGE.items()):
        for n in (3, 5, 7):
            if info["det"] % n:
                continue
            d = two_bridge_diagram(name, n)
            rep = validate(d)
            assert rep.ok and rep.surjective, (name, n, rep.lines())
            assert len(d.components) == 1
            assert len(solve_colourings(d, n)) == n * n


def test_uncolourable_seed_fails_to_close():
    with pytest.raises(DiagramStructureError):
        two_bridge_diagram("3_1", 5)  # det 3, so only constants close mod 5


def test_colourable_names():
    assert colourable_names(3) == ["3_1", "6_1", "7_4", "7_7"]
    assert colourable_names(5) == ["4_1", "5_1", "7_4"]
    assert colourable_names(7) == ["5_2", "7_1", "7_7"]
    assert colourable_names(7, max_crossings=5) == ["5_2"]


def test_chain_matrices_have_the_table_determinants():
    for name, info in TWO_BRIDGE.items():
        s = chain_seifert_matrix(info["cf"])
        assert knot_determinant(s) == info["det"], name


def test_chain_matrix_shape():
    s = chain_seifert_matrix((2, 4))
    assert s == [[1, 0], [1, 2]]
    assert chain_seifert_matrix((2, 2)) == [[1, 0], [1, 1]]
    t = chain_seifert_matrix((2, -2, -2, -2))
    assert [row[i] for i, row in enumerate(t)] == [1, -1, -1, -1]
    with pytest.raises(ValueError):
        chain_seifert_matrix((2, 3))


def test_trefoil_chain_alexander():
    p = alexander_poly(chain_seifert_matrix((2, 2)))
    assert p.all_coeffs() == [1, -1, 1]


def test_five_two_chain_alexander():
    p = alexander_poly(chain_seifert_matrix((2, 4)))
    assert p.all_coeffs() == [2, -3, 2]


def test_torus_diagrams():
    for m, n in ((3, 3), (5, 5), (7, 7), (9, 3)):
        d = torus_diagram(m, n)
        rep = validate(d)
        assert rep.ok and rep.surjective, (m, n)
        assert writhe(d, 0) == -m
        assert len(solve_colourings(d, n)) == n * n
    right = torus_diagram(3, 3, left=False)
    assert writhe(right, 0) == 3
    with pytest.raises(ValueError):
        torus_diagram(4, 3)


def test_torus_seed_must_close():
    with pytest.raises(DiagramStructureError):
        torus_diagram(5, 3, 0, 1)  # 5*(1-0) != 0 mod 3


def test_braid_closure_split_cycles():
    d = braid_closure_diagram([1, 1], 5, (0, 0))
    assert validate(d).ok
    assert d.component_names() == ["K0", "K1"]
    assert linking_number(d, "K0", "K1") == 1


def test_braid_closure_colour_mismatch():
    with pytest.raises(DiagramStructureError):
        braid_closure_diagram([1], 3, (0, 1))


def test_one_crossing_unknot():
    d = braid_closure_diagram([1], 3, (0, 0))
    assert validate(d).ok
    assert writhe(d, 0) == 1
    assert len(d.components[0].labels) == 1


def test_bad_braid_letters():
    with pytest.raises(ValueError):
        braid_closure_diagram([0], 3, (0, 0))
    with pytest.raises(ValueError):
        braid_closure_diagram([3], 3, (0, 0))
