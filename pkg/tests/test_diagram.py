import pytest

from dihedralcover.algebra import identity, reflection, rotation
from dihedralcover.diagram import (
    KNOT,
    OVER,
    SURGERY,
    UNDER,
    ColouredDiagram,
    Component,
    Event,
    crossing_change_surgery,
    descending_unknotting,
    linking_number,
    over_label,
    validate,
    writhe,
)
from dihedralcover.errors import DiagramStructureError, IllegalMoveError
from dihedralcover.tables import torus_diagram, two_bridge_diagram


def trefoil(sign=-1, n=3):
    evs = [Event("c1", OVER, sign), Event("c2", UNDER, sign),
           Event("c3", OVER, sign), Event("c1", UNDER, sign),
           Event("c2", OVER, sign), Event("c3", UNDER, sign)]
    labels = [reflection(n, 1), reflection(n, 2), reflection(n, 0)]
    return ColouredDiagram(n, [Component(KNOT, evs, labels, name="K")])


def unknot(n=3, label=None):
    return ColouredDiagram(
        n, [Component(KNOT, [], [label or reflection(n, 0)], name="U")])


def hopf_clasp(n=3):
    a = Component(KNOT, [Event("h1", OVER, 1), Event("h2", UNDER, 1)],
                  [reflection(n, 0)], name="A")
    b = Component(KNOT, [Event("h2", OVER, 1), Event("h1", UNDER, 1)],
                  [reflection(n, 0)], name="B")
    return ColouredDiagram(n, [a, b])


# ---------------------------------------------------------------------------
# validation


def test_trefoil_is_valid_and_surjective():
    d = trefoil()
    # check the three conjugation relations by hand before trusting validate
    g = {c: over_label(d, c) for c in ("c1", "c2", "c3")}
    a0, a1, a2 = d.components[0].labels
    assert a0 == g["c2"].inverse() * a2 * g["c2"]
    assert a1 == g["c1"].inverse() * a0 * g["c1"]
    assert a2 == g["c3"].inverse() * a1 * g["c3"]
    rep = validate(d)
    assert rep.ok and rep.surjective
    assert rep.lines() == ["ok"]


def test_constant_labels_are_valid_but_not_surjective():
    d = trefoil()
    d.components[0].labels = [reflection(3, 0)] * 3
    rep = validate(d)
    assert rep.ok and not rep.surjective


def test_wirtinger_violation_names_the_crossing():
    d = trefoil()
    d.components[0].labels[0] = reflection(3, 2)
    rep = validate(d)
    assert not rep.ok
    assert any(v.code == "wirtinger" and "c2" in v.message
               for v in rep.violations)


def test_rotation_on_knot_component_is_reported():
    d = unknot()
    d.components[0].labels = [rotation(3, 1)]
    rep = validate(d)
    assert [v.code for v in rep.violations] == ["reflection"]


def test_framing_rules():
    d = unknot()
    d.components[0].framing = 1
    assert any(v.code == "framing" for v in validate(d).violations)
    s = ColouredDiagram(3, [Component(SURGERY, [], [identity(3)], name="C")])
    assert any(v.code == "framing" for v in validate(s).violations)
    s.components[0].framing = 5
    # 0 crossings: longitude word is b^5, identity only for b = 1
    assert validate(s).ok
    s.components[0].labels = [rotation(3, 1)]
    assert any(v.code == "framing-word" for v in validate(s).violations)
    s.components[0].framing = 3
    assert validate(s).ok


def test_label_count_mismatch():
    d = trefoil()
    d.components[0].labels = d.components[0].labels[:2]
    assert any(v.code == "arcs" for v in validate(d).violations)


def test_broken_crossing_pairing_is_reported_not_raised():
    d = trefoil()
    evs = d.components[0].events
    d.components[0].events = [Event("c2", OVER, -1) if e == Event("c1", OVER, -1)
                              else e for e in evs]
    rep = validate(d)
    assert any(v.code == "crossing" for v in rep.violations)


def test_even_or_small_n_is_a_context_violation():
    d = ColouredDiagram(4, [])
    assert any(v.code == "context" for v in validate(d).violations)


def test_duplicate_component_names():
    d = ColouredDiagram(3, [unknot().components[0], unknot().components[0]])
    assert any(v.code == "names" for v in validate(d).violations)


def test_five_two_seven_colouring_is_valid_surjective():
    d = two_bridge_diagram("5_2", 7)
    rep = validate(d)
    assert rep.ok and rep.surjective
    exps = sorted(g.rot for g in d.components[0].labels)
    assert len(exps) == 5 and len(set(exps)) == 5


# ---------------------------------------------------------------------------
# writhe and linking numbers


def test_writhe_of_trefoils():
    assert writhe(trefoil(-1), "K") == -3
    assert writhe(trefoil(+1), 0) == 3


def test_kinked_unknot_writhe_zero():
    evs = [Event("a", OVER, 1), Event("a", UNDER, 1),
           Event("b", OVER, -1), Event("b", UNDER, -1)]
    d = ColouredDiagram(3, [Component(KNOT, evs, [reflection(3, 0)] * 2,
                                      name="K")])
    assert validate(d).ok
    assert writhe(d, 0) == 0
    assert linking_number(d, 0, 0) == 0


def test_hopf_clasp_linking_number():
    d = hopf_clasp()
    assert validate(d).ok
    assert linking_number(d, "A", "B") == 1
    assert linking_number(d, "B", "A") == 1


def test_disjoint_components_link_zero():
    d = ColouredDiagram(3, [unknot().components[0],
                            Component(KNOT, [], [reflection(3, 1)], name="V")])
    assert linking_number(d, 0, 1) == 0


def test_odd_crossing_count_between_components_is_structural():
    a = Component(KNOT, [Event("h1", OVER, 1)], [reflection(3, 0)], name="A")
    b = Component(KNOT, [Event("h1", UNDER, 1)], [reflection(3, 0)], name="B")
    with pytest.raises(DiagramStructureError):
        linking_number(ColouredDiagram(3, [a, b]), "A", "B")


def test_resolve_unknown_component():
    d = trefoil()
    with pytest.raises(KeyError):
        d.resolve("nope")
    with pytest.raises(IndexError):
        d.resolve(5)


# ---------------------------------------------------------------------------
# descending unknotting


def test_unknot_needs_no_flips():
    assert descending_unknotting(unknot()) == []


def test_trefoil_needs_one_flip():
    assert len(descending_unknotting(trefoil())) == 1


def rotated(d, r):
    """Same diagram with the knot's event list started r events later."""
    out = d.copy()
    comp = out.components[0]
    k = sum(1 for e in comp.events[:r] if e.role == UNDER)
    m = len(comp.labels)
    comp.events = comp.events[r:] + comp.events[:r]
    comp.labels = [comp.labels[(j + k) % m] for j in range(m)]
    return out


def test_five_two_needs_at_most_two_flips_from_the_best_basepoint():
    d = two_bridge_diagram("5_2", 7)
    counts = []
    for r in range(len(d.components[0].events)):
        dr = rotated(d, r)
        assert validate(dr).ok
        counts.append(len(descending_unknotting(dr)))
    assert min(counts) <= 2


def test_descending_flips_make_the_diagram_descending():
    for d in (trefoil(), two_bridge_diagram("5_2", 7),
              torus_diagram(5, 5)):
        for cid in descending_unknotting(d):
            d = crossing_change_surgery(d, cid)
        assert descending_unknotting(d) == []
        assert validate(d).ok


# ---------------------------------------------------------------------------
# crossing-change surgery


def test_unknown_crossing():
    with pytest.raises(IllegalMoveError):
        crossing_change_surgery(trefoil(), "zz")


def test_wrong_direction_is_rejected():
    d = trefoil()  # negative crossings: antiparallel needs direction -1
    with pytest.raises(IllegalMoveError):
        crossing_change_surgery(d, "c2", +1)
    out = crossing_change_surgery(d, "c2", -1)
    assert validate(out).ok


def test_change_reverses_the_crossing_and_records_a_circle():
    d = trefoil()
    out = crossing_change_surgery(d, "c2")
    assert validate(out).ok
    signs = [e.sign for e in out.components[0].events if e.crossing == "c2"]
    roles = {e.role for e in out.components[0].events if e.crossing == "c2"}
    assert signs == [1, 1] and roles == {OVER, UNDER}
    ring = out.components[-1]
    assert ring.kind == SURGERY and ring.framing == 1
    assert linking_number(out, "K", ring.name) == 0


def test_circle_labels_follow_the_strand_difference():
    # for strands t s^a (over), t s^b (under) the circle arcs are the
    # mutually inverse rotations s^(a-b), s^(b-a)
    for d in (trefoil(), two_bridge_diagram("5_2", 7),
              two_bridge_diagram("6_1", 3)):
        cmap = {e.crossing for c in d.components for e in c.events}
        for cid in sorted(cmap):
            out = crossing_change_surgery(d, cid)
            assert validate(out).ok
            comp = d.components[0]
            po = next(i for i, e in enumerate(comp.events)
                      if e.crossing == cid and e.role == OVER)
            pu = next(i for i, e in enumerate(comp.events)
                      if e.crossing == cid and e.role == UNDER)
            a = comp.labels[comp.arc_leaving(po)].rot
            b = comp.labels[comp.arc_arriving(pu)].rot
            assert {g for g in out.components[-1].labels} == {
                rotation(d.n, a - b), rotation(d.n, b - a)}


def test_specific_circle_labels():
    # a crossing with strand exponents differing by 3 mod 7 gives s^3, s^4
    d = two_bridge_diagram("5_2", 7, 0, 3)
    out = crossing_change_surgery(d, "x1")
    assert {str(g) for g in out.components[-1].labels} == {"s^3", "s^4"}
    # equal strand labels give a circle in the kernel of the colouring
    c = trefoil()
    c.components[0].labels = [reflection(3, 2)] * 3
    out = crossing_change_surgery(c, "c1")
    assert validate(out).ok
    assert all(g.is_identity for g in out.components[-1].labels)


def test_general_labels_on_a_three_colouring():
    # over t, incoming under t s: circle arcs are s and s^2 = s^-1
    d = trefoil()
    for cid in ("c1", "c2", "c3"):
        comp = d.components[0]
        po = next(i for i, e in enumerate(comp.events)
                  if e.crossing == cid and e.role == OVER)
        pu = next(i for i, e in enumerate(comp.events)
                  if e.crossing == cid and e.role == UNDER)
        if (comp.labels[comp.arc_leaving(po)],
                comp.labels[comp.arc_arriving(pu)]) == (reflection(3, 0),
                                                        reflection(3, 1)):
            out = crossing_change_surgery(d, cid)
            assert {str(g) for g in out.components[-1].labels} == {"s", "s^2"}
            return
    raise AssertionError("no crossing with labels t, ts in the fixture")


def test_parallel_placement_links_two():
    d = torus_diagram(3, 3)
    cid = d.components[0].events[0].crossing
    out = crossing_change_surgery(d, cid, antiparallel=False)
    assert validate(out).ok
    ring = out.components[-1]
    assert abs(linking_number(out, 0, ring.name)) == 2
    assert ring.framing == -(-(-1))  # negative crossing: direction +1


def test_double_change_restores_the_crossing():
    d = trefoil()
    once = crossing_change_surgery(d, "c2")
    twice = crossing_change_surgery(once, "c2")
    assert validate(twice).ok
    signs = [e.sign for e in twice.components[0].events if e.crossing == "c2"]
    assert signs == [-1, -1]
    r1, r2 = twice.components[1], twice.components[2]
    assert {g.inverse() for g in r1.labels} == set(r2.labels)
    assert r1.framing == -r2.framing


def test_changes_preserve_validity_across_the_corpus():
    for name, n in (("3_1", 3), ("5_2", 7), ("6_1", 3), ("7_1", 7)):
        d = two_bridge_diagram(name, n)
        for cid in sorted({e.crossing for c in d.components
                           for e in c.events}):
            out = crossing_change_surgery(d, cid)
            rep = validate(out)
            assert rep.ok, (name, cid, rep.lines())


def test_surgery_circles_stack():
    d = two_bridge_diagram("5_2", 7)
    for cid in descending_unknotting(d):
        d = crossing_change_surgery(d, cid)
    assert validate(d).ok
    rings = [c for c in d.components if c.kind == SURGERY]
    assert rings
    for ring in rings:
        assert linking_number(d, 0, ring.name) == 0
        assert abs(ring.framing) == 1
