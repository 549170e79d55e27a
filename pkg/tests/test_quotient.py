"""Equivariant systems: validation laws, classification, gauge, weights."""

from fractions import Fraction

import pytest

from orbimorse import (
    ActionNotWellDefined,
    CancellationFailure,
    CritPoint,
    EquivariantMorseSystem,
    Flow,
    GaugeFailure,
    GroupAction,
    IndexMismatch,
    InvarianceFailure,
    MalformedSystem,
    SignNotOrbitConstant,
    SystemNotValid,
    UnknownPoint,
    admissible_triples,
    betti,
    boundary_plus,
    broken_weight,
    classify,
    derive_intrinsic,
    discarded_orbits,
    generate_group,
    invariant_boundary,
    orbit_of,
    regauge,
    validate_system,
)
from conftest import make_heart


def trivial_system(crit, flows, ambient_dim=2):
    """System over the trivial group with tau identically +1."""
    group = generate_group([], degree=1)
    e = group.identity
    pa = GroupAction(group, [c[0] for c in crit],
                     {e: tuple(range(len(crit)))})
    fa = GroupAction(group, [f[0] for f in flows],
                     {e: tuple(range(len(flows)))})
    return EquivariantMorseSystem(
        group, [CritPoint(*c) for c in crit], pa,
        {e: (1,) * len(crit)}, [Flow(*f) for f in flows], fa, ambient_dim)


def cocycle_corrupt_system():
    # tau(swap, q) flipped by hand, breaking tau(e) = tau(swap, .)tau(swap, .)
    group = generate_group([(1, 0)], degree=2)
    e, w = group.elements
    pa = GroupAction(group, ["p", "q"], {e: (0, 1), w: (1, 0)})
    fa = GroupAction(group, [], {e: (), w: ()})
    return EquivariantMorseSystem(
        group, [CritPoint("p", 0), CritPoint("q", 0)], pa,
        {e: (1, 1), w: (1, -1)}, [], fa, ambient_dim=2)


def laws(report):
    return {v.law for v in report.violations}


def test_heart_validates_and_is_self_indexing(heart):
    report = validate_system(heart)
    assert report.ok
    assert report.self_indexing is True
    assert report.summary() == "ok"


def test_fixtures_all_validate(heart, torus, dented, wedge):
    for s in (heart, torus, dented, wedge):
        assert validate_system(s).ok


def test_manifold_betti_of_fixtures(heart, torus, dented):
    assert betti(heart.manifold_complex()) == (1, 0, 1)
    assert betti(torus.manifold_complex()) == (1, 2, 1)
    assert betti(dented.manifold_complex()) == (1, 0, 1)


def test_index_range_violation():
    s = trivial_system([("p", 3, None)], [], ambient_dim=2)
    assert laws(validate_system(s)) == {"index_range"}


def test_index_equivariance_violation():
    s = EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("p", 2, None), ("q", 1, None)],
        crit_images=[[1, 0]], crit_signs=[[1, 1]],
        flows=[], flow_images=[[]], ambient_dim=2)
    assert laws(validate_system(s)) == {"index_equivariance"}


def test_flow_index_step_violation():
    s = trivial_system([("p", 1, None), ("q", 1, None)],
                       [("f", "p", "q", 1)])
    assert laws(validate_system(s)) == {"flow_index_step"}


def endpoint_skew_system():
    # swap exchanges r1, r2 but fixes both flows pointwise
    return EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("M", 1, None), ("r1", 0, None), ("r2", 0, None)],
        crit_images=[[0, 2, 1]], crit_signs=[[1, 1, 1]],
        flows=[("u1", "M", "r1", 1), ("u2", "M", "r2", -1)],
        flow_images=[[0, 1]], ambient_dim=1)


def test_endpoint_equivariance_violation():
    assert laws(validate_system(endpoint_skew_system())) \
        == {"endpoint_equivariance"}


def test_cocycle_violation():
    assert "cocycle" in laws(validate_system(cocycle_corrupt_system()))


def sign_skew_heart():
    s = make_heart()
    return EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[(p.label, p.index, None) for p in s.crit],
        crit_images=[[1, 0, 2, 3]], crit_signs=[[1, 1, -1, 1]],
        flows=[("g1", "p", "r", 1), ("g2", "q", "r", 1),
               ("d1", "r", "s", 1), ("d2", "r", "s", -1)],
        flow_images=[[1, 0, 3, 2]], ambient_dim=2)


def test_sign_equivariance_violation():
    assert laws(validate_system(sign_skew_heart())) == {"sign_equivariance"}


def test_manifold_d_squared_violation():
    s = trivial_system([("p", 2, None), ("q", 1, None), ("r", 0, None)],
                       [("f", "p", "q", 1), ("g", "q", "r", 1)])
    assert laws(validate_system(s)) == {"manifold_d_squared"}


def test_value_equivariance_violation():
    s = EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("p", 2, Fraction(2)), ("q", 2, Fraction(3)),
                     ("r", 1, Fraction(1)), ("s", 0, Fraction(0))],
        crit_images=[[1, 0, 2, 3]], crit_signs=[[1, 1, -1, 1]],
        flows=[("g1", "p", "r", 1), ("g2", "q", "r", -1),
               ("d1", "r", "s", 1), ("d2", "r", "s", -1)],
        flow_images=[[1, 0, 3, 2]], ambient_dim=2)
    report = validate_system(s)
    assert "value_equivariance" in laws(report)
    assert report.self_indexing is False
    assert "violation" in report.summary()


def test_invalid_system_refuses_derivations():
    s = sign_skew_heart()
    with pytest.raises(SystemNotValid) as info:
        invariant_boundary(s)
    assert not info.value.report.ok
    assert "sign_equivariance" in str(info.value)


def test_malformed_construction_rejected():
    group = generate_group([(1, 0)], degree=2)
    e, w = group.elements
    pa = GroupAction(group, ["p"], {e: (0,), w: (0,)})
    fa = GroupAction(group, [], {e: (), w: ()})
    with pytest.raises(MalformedSystem, match="tau table"):
        EquivariantMorseSystem(group, [CritPoint("p", 0)], pa,
                               {e: (1,)}, [], fa, 0)
    with pytest.raises(MalformedSystem, match="tau rows"):
        EquivariantMorseSystem(group, [CritPoint("p", 0)], pa,
                               {e: (1,), w: (2,)}, [], fa, 0)
    with pytest.raises(MalformedSystem):
        trivial_system([("p", 1, None)], [("f", "p", "ghost", 1)])
    with pytest.raises(MalformedSystem):
        trivial_system([("p", 1, None), ("q", 0, None)],
                       [("f", "p", "q", 2)])
    with pytest.raises(MalformedSystem):
        EquivariantMorseSystem.from_generator_data(
            generators=[(1, 0)], degree=2,
            crit_points=[("p", 0, None)], crit_images=[[0, 0]],
            crit_signs=[[1]], flows=[], flow_images=[[]], ambient_dim=0)


def test_inconsistent_cocycle_data_rejected():
    # the signed swap below has order 4, the group only order 2
    with pytest.raises(ActionNotWellDefined):
        EquivariantMorseSystem.from_generator_data(
            generators=[(1, 0)], degree=2,
            crit_points=[("p", 0, None), ("q", 0, None)],
            crit_images=[[1, 0]], crit_signs=[[1, -1]],
            flows=[], flow_images=[[]], ambient_dim=0)


def test_classification_of_heart(heart):
    cls = classify(heart)
    assert [(o.members, o.index, o.iso_order, o.orientable) for o in cls] == [
        (("p", "q"), 2, 1, True),
        (("r",), 1, 2, False),
        (("s",), 0, 2, True),
    ]
    assert [o.rep for o in discarded_orbits(heart)] == ["r"]


def test_classification_of_torus(torus):
    by_rep = {o.rep: o for o in classify(torus)}
    assert by_rep["M"].orientable and by_rep["b"].orientable
    assert not by_rep["r1"].orientable and not by_rep["r2"].orientable
    assert {o.rep for o in discarded_orbits(torus)} == {"r1", "r2"}


def test_classification_of_dented(dented):
    cls = classify(dented)
    assert all(o.orientable for o in cls)
    assert {o.rep: o.iso_order for o in cls} == \
        {"M": 2, "B": 2, "b1": 1, "r1": 1}


def test_tau_lookup(heart):
    e, w = heart.group.elements
    assert heart.tau(e, "r") == 1
    assert heart.tau(w, "r") == -1
    with pytest.raises(UnknownPoint):
        heart.tau(w, "ghost")
    with pytest.raises(UnknownPoint):
        orbit_of(heart, "ghost")


def test_invariant_boundary_of_heart(heart):
    c = invariant_boundary(heart)
    assert c.basis_labels == (("s",), (), ("p",))
    assert betti(c) == (1, 0, 1)


def test_invariant_boundary_of_torus(torus):
    c = invariant_boundary(torus)
    assert c.dims() == (1, 0, 1)
    assert betti(c) == (1, 0, 1)


def test_invariant_boundary_of_dented(dented):
    c = invariant_boundary(dented)
    assert c.dims() == (2, 1, 1)
    d1 = c.boundary_at(1)
    assert sorted(abs(row[0]) for row in d1.entries) == [1, 2]
    assert betti(c) == (1, 0, 1)


def test_invariant_boundary_matches_derived_quotient(heart, torus, dented,
                                                     wedge):
    for s in (heart, torus, dented, wedge):
        assert invariant_boundary(s) == boundary_plus(derive_intrinsic(s))


def test_cancellation_failure_on_skewed_signs():
    # both top flows land on the non-orientable saddle with sign +1
    with pytest.raises(CancellationFailure, match="non-orientable"):
        invariant_boundary(sign_skew_heart(), check_valid=False)


def test_invariance_failure_on_skewed_endpoints():
    with pytest.raises(InvarianceFailure, match="not"):
        invariant_boundary(endpoint_skew_system(), check_valid=False)


def test_gauge_failure_on_corrupt_cocycle():
    with pytest.raises(GaugeFailure):
        invariant_boundary(cocycle_corrupt_system(), check_valid=False)


def test_sign_not_orbit_constant():
    # u3 is the swap image of u1 yet carries the opposite sign; tau is +1
    s = EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("M", 2, None), ("r1", 1, None), ("r2", 1, None),
                     ("b1", 0, None), ("b2", 0, None), ("B", 0, None)],
        crit_images=[[0, 2, 1, 4, 3, 5]], crit_signs=[[1, 1, 1, 1, 1, 1]],
        flows=[("u1", "M", "r1", 1), ("u2", "M", "r1", -1),
               ("u3", "M", "r2", -1), ("u4", "M", "r2", -1),
               ("w1", "r1", "b1", 1), ("w2", "r1", "B", -1),
               ("w3", "r2", "b2", 1), ("w4", "r2", "B", -1)],
        flow_images=[[2, 3, 0, 1, 6, 7, 4, 5]], ambient_dim=2)
    with pytest.raises(SignNotOrbitConstant):
        invariant_boundary(s, check_valid=False)


def test_broken_weights_of_wedge(wedge):
    assert broken_weight(wedge, "p", "q1", "r") == 1
    assert broken_weight(wedge, "p", "q2", "r") == -1
    assert broken_weight(wedge, "p", "q3", "r") == -1
    triples = admissible_triples(wedge)
    assert len(triples) == 2
    assert sum(broken_weight(wedge, P.rep, Q.rep, R.rep)
               for P, Q, R in triples) == 0


def test_broken_weight_vanishes_through_non_orientable_orbit(heart, torus):
    assert broken_weight(heart, "p", "r", "s") == 0
    assert broken_weight(torus, "M", "r1", "b") == 0
    assert broken_weight(torus, "M", "r2", "b") == 0


def test_broken_weight_rejects_bad_triples(heart):
    with pytest.raises(IndexMismatch):
        broken_weight(heart, "p", "q", "r")
    s = EquivariantMorseSystem.from_generator_data(
        generators=[(1, 0)], degree=2,
        crit_points=[("M", 2, None), ("r1", 1, None), ("r2", 1, None),
                     ("b", 0, None)],
        crit_images=[[0, 1, 2, 3]], crit_signs=[[-1, -1, -1, 1]],
        flows=[("u1", "M", "r1", 1), ("u2", "M", "r1", -1),
               ("u3", "M", "r2", 1), ("u4", "M", "r2", -1),
               ("w1", "r1", "b", 1), ("w2", "r1", "b", -1),
               ("w3", "r2", "b", 1), ("w4", "r2", "b", -1)],
        flow_images=[[1, 0, 3, 2, 5, 4, 7, 6]], ambient_dim=2)
    with pytest.raises(IndexMismatch, match="orientable"):
        broken_weight(s, "M", "r1", "b", check_valid=False)


def test_regauge_round_trips_and_preserves_derived_data(heart, dented, wedge):
    flips = {"p": -1, "r": -1, "b1": -1, "q2": -1, "M": -1}
    for s in (heart, dented, wedge):
        t = regauge(s, flips)
        assert validate_system(t).ok
        assert classify(t) == classify(s)
        assert invariant_boundary(t) == invariant_boundary(s)
        for P, Q, R in admissible_triples(s):
            assert broken_weight(t, P.rep, Q.rep, R.rep) \
                == broken_weight(s, P.rep, Q.rep, R.rep)
        assert regauge(t, flips).tau(s.group.elements[1], s.crit[0].label) \
            == s.tau(s.group.elements[1], s.crit[0].label)


def test_derived_quotient_of_heart(heart):
    q = derive_intrinsic(heart)
    assert [(p.label, p.index, p.iso_order) for p in q.crit] == \
        [("p", 2, 1), ("s", 0, 2)]
    assert q.flows == ()
