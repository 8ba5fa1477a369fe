from fractions import Fraction

import pytest
from string_toric.config import Settings, use_settings
from string_toric.exceptions import DimensionCapExceeded, NotBottData, TauNotInFan
from string_toric.string_polytope import vertices
from string_toric.toric_fan import (
    Divisor,
    TowerFan,
    bott_fan,
    cartier_data,
    cartier_data_in_polytope,
    check_fan,
    hirzebruch_fan,
    is_basepoint_free,
    is_cone_in_fan,
    is_smooth,
    pc_after_star,
    polytope_of_divisor,
    primitive_collections,
    star_subdivision,
    support_value,
)

THREE_STAGE_V = ((-1, 0, -1), (0, -1, 0), (0, 0, -1))
THREE_STAGE_W = ((1, 1, 0), (0, 1, 0), (0, 0, 1))


def as_ints(points):
    return {tuple(int(x) for x in p) for p in points}


def labelled(fan, collections):
    return {frozenset(fan.labels[i] for i in p) for p in collections}


def three_stage():
    fan = bott_fan(THREE_STAGE_V, THREE_STAGE_W)
    return fan.star_subdivision(fan.indices(["v1", "w2"]), "u")


def test_hirzebruch_fan_shape():
    """Test rays, labels and cones of H_2."""
    fan = hirzebruch_fan(2)
    assert fan.rays == ((-1, 2), (0, -1), (1, 0), (0, 1))
    assert fan.labels == ("u1", "u2", "u3", "u4")
    assert fan.max_cones == ((2, 3), (1, 2), (0, 1), (0, 3))
    assert check_fan(fan)
    assert is_smooth(fan)


def test_hirzebruch_primitive_collections():
    """Test the two primitive collections of H_2."""
    fan = hirzebruch_fan(2)
    assert primitive_collections(fan) == {frozenset({0, 2}), frozenset({1, 3})}
    assert is_cone_in_fan(fan, [0, 1])
    assert not is_cone_in_fan(fan, [0, 2])
    assert is_cone_in_fan(fan, [])


def test_cartier_data_of_d2():
    """Test the local data of D_2 on H_2."""
    fan = hirzebruch_fan(2)
    d2 = Divisor.from_labels(fan, {"u2": 1})
    data = cartier_data(fan, d2)
    assert data[(2, 3)] == (Fraction(0), Fraction(0))
    assert data[(1, 2)] == (Fraction(0), Fraction(1))
    assert data[(0, 1)] == (Fraction(2), Fraction(1))
    assert data[(0, 3)] == (Fraction(0), Fraction(0))
    assert as_ints(vertices(polytope_of_divisor(fan, d2)).vertices) == {(0, 0), (0, 1), (2, 1)}


def test_cartier_data_of_d1():
    """Test that D_1 on H_2 gives a segment."""
    fan = hirzebruch_fan(2)
    d1 = Divisor.from_labels(fan, {"u1": 1})
    data = cartier_data(fan, d1)
    assert set(data.values()) == {(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))}
    assert as_ints(vertices(polytope_of_divisor(fan, d1)).vertices) == {(0, 0), (1, 0)}
    assert is_basepoint_free(fan, d1).free


def test_basepoint_free_criteria_agree():
    """Test that the primitive collection test and the Cartier data test agree on H_2."""
    fan = hirzebruch_fan(2)
    d2 = Divisor.from_labels(fan, {"u2": 1})
    d3 = Divisor.from_labels(fan, {"u3": 1})
    assert is_basepoint_free(fan, d2).free
    assert cartier_data_in_polytope(fan, d2)
    check = is_basepoint_free(fan, d2 - d3)
    assert not check.free
    assert not cartier_data_in_polytope(fan, d2 - d3)
    violation = check.violation
    assert violation.collection == ("u1", "u3")
    assert violation.lhs == 0
    assert violation.rhs == 1
    assert violation.to_dict()["rhs"] == "1"


def test_support_value():
    """Test phi_D on a ray of H_2."""
    fan = hirzebruch_fan(2)
    d2 = Divisor.from_labels(fan, {"u2": 1})
    assert support_value(fan, d2, (0, -1)) == -1
    assert support_value(fan, d2, (0, 1)) == 0


def test_divisor_unknown_label():
    """Test that unknown labels are rejected."""
    with pytest.raises(KeyError):
        Divisor.from_labels(hirzebruch_fan(2), {"x9": 1})


def test_fan_star_subdivision():
    """Test the blow-up of H_2 at the cone {u3, u4}."""
    fan = star_subdivision(hirzebruch_fan(2), [2, 3], "e")
    assert fan.rays[-1] == (1, 1)
    assert fan.labels[-1] == "e"
    assert len(fan.max_cones) == 5
    assert check_fan(fan)
    assert is_smooth(fan)


def test_fan_star_subdivision_rejects_non_cone():
    """Test that a primitive collection cannot be subdivided."""
    with pytest.raises(TauNotInFan):
        hirzebruch_fan(2).star_subdivision([0, 2])


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_bott_fan_is_hirzebruch(k):
    """Test that the two-stage Bott fan is H_k."""
    fan = bott_fan(((-1, k), (0, -1)), ((1, 0), (0, 1)))
    assert fan.labels == ("v1", "v2", "w1", "w2")
    assert fan.rays == ((-1, k), (0, -1), (1, 0), (0, 1))
    assert set(fan.max_cones()) == set(hirzebruch_fan(k).max_cones)
    assert primitive_collections(fan) == set(fan.collections)
    assert labelled(fan, fan.collections) == {
        frozenset({"v1", "w1"}),
        frozenset({"v2", "w2"}),
    }


def test_bott_fan_rejects_bad_columns():
    """Test the triangularity and diagonal checks."""
    with pytest.raises(NotBottData, match="diagonal entry"):
        bott_fan(((1,),), ((1,),))
    with pytest.raises(NotBottData, match="above the diagonal"):
        bott_fan(((-1, 0), (1, -1)), ((1, 0), (0, 1)))
    with pytest.raises(NotBottData):
        bott_fan((), ())


def test_tower_rejects_v_w_pair():
    """Test that {v_j, w_j} is not a cone of a Bott fan."""
    fan = bott_fan(THREE_STAGE_V, THREE_STAGE_W)
    with pytest.raises(TauNotInFan):
        fan.star_subdivision(fan.indices(["v1", "w1"]))


def test_three_stage_collections():
    """Test the primitive collections after subdividing {v1, w2}."""
    fan = three_stage()
    assert fan.rays[-1] == (-1, 1, -1)
    assert labelled(fan, fan.collections) == {
        frozenset({"v1", "w2"}),
        frozenset({"v1", "w1"}),
        frozenset({"v2", "w2"}),
        frozenset({"v3", "w3"}),
        frozenset({"v2", "u"}),
        frozenset({"w1", "u"}),
    }


def test_pc_update_matches_definition():
    """Test the incremental primitive collections against a brute force search."""
    fan = three_stage()
    assert primitive_collections(fan) == set(fan.collections)
    further = fan.star_subdivision(fan.indices(["w1", "w3"]), "u'")
    assert primitive_collections(further) == set(further.collections)
    assert check_fan(further)
    assert is_smooth(further)


def test_pc_after_star_direct():
    """Test the update rule on the pairs of a Bott fan."""
    pairs = [frozenset({0, 2}), frozenset({1, 3})]
    updated = pc_after_star(pairs, frozenset({0, 3}), 4)
    assert updated == {
        frozenset({0, 3}),
        frozenset({0, 2}),
        frozenset({1, 3}),
        frozenset({2, 4}),
        frozenset({1, 4}),
    }


def test_tower_locate_replays_subdivisions():
    """Test that the new ray is located on itself."""
    fan = three_stage()
    u = fan.index("u")
    assert fan.locate(fan.rays[u]) == {u: 1}
    assert fan.locate((0, 0, 0)) == {}


def test_tower_locate_agrees_with_explicit_fan():
    """Test greedy location against the materialized fan."""
    fan = three_stage()
    explicit = fan.to_fan()
    for vector in [(1, 2, 0), (-1, 1, -1), (-2, 3, -1), (0, -1, 2), (1, 0, 0)]:
        located = fan.locate(vector)
        assert fan.is_cone(located)
        rebuilt = tuple(
            sum(c * explicit.rays[ray][i] for ray, c in located.items()) for i in range(3)
        )
        assert rebuilt == vector


def test_tower_to_dict():
    """Test the serialized tower fan."""
    data = three_stage().to_dict()
    assert data["d"] == 3
    assert data["labels"][-1] == "u"
    assert ["v1", "w2"] in data["primitive_collections"]
    assert len(data["max_cones"]) == 10


def test_max_cones_cap():
    """Test that large towers are not materialized."""
    fan = bott_fan(THREE_STAGE_V, THREE_STAGE_W)
    try:
        use_settings(Settings(fan_materialize_max_rank=2))
        with pytest.raises(DimensionCapExceeded):
            fan.max_cones()
        assert is_smooth(fan)
    finally:
        use_settings(None)


def test_is_smooth_above_cap_checks_columns():
    """Test that a non-unimodular tower is rejected without listing cones."""
    fan = TowerFan(
        ((-1, 0), (0, -2)),
        ((1, 0), (0, 1)),
        (),
        frozenset({frozenset({0, 2}), frozenset({1, 3})}),
    )
    try:
        use_settings(Settings(fan_materialize_max_rank=1))
        assert not is_smooth(fan)
    finally:
        use_settings(None)


def test_is_smooth_above_cap_checks_subdivisions():
    """Test that a subdivision outside the fan is caught above the cap."""
    base = bott_fan(THREE_STAGE_V, THREE_STAGE_W)
    good = base.star_subdivision({0, 1}, "u7")
    bad = TowerFan(base.v, base.w, ((frozenset({0, 3}), "u7"),), good.collections)
    try:
        use_settings(Settings(fan_materialize_max_rank=2))
        assert is_smooth(good)
        assert not is_smooth(bad)
    finally:
        use_settings(None)
    assert is_smooth(good)
