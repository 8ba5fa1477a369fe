import pytest
from string_toric.exceptions import InvariantError
from string_toric.moves_index import Witness
from string_toric.weyl_words import enumerate_reduced_words, validate
from string_toric.wiring import (
    build_diagram,
    canonical_D_new_path,
    canonical_D_new_paths,
    chamber_matrix,
    enumerate_rigorous_paths,
    expected_leftovers,
    is_new,
    node_relabeling,
    path_label,
    region_of_path,
    regions,
    relabel_vector,
    render_text_grid,
    select_gamma,
    string_vector_t,
    transpose_apply,
)

R7_WORD = (4, 3, 4, 2, 3, 4, 1, 2, 3, 4, 5, 4, 6, 5, 4, 3, 2, 1, 4, 3, 2)
AD_WORD = (4, 3, 4, 2, 3, 4, 1, 2, 5, 4, 3, 2, 1, 4, 5)


def labels(paths):
    return {p.label for p in paths}


def test_build_diagram_slabs():
    """Test that wires start in order and end reversed."""
    diagram = build_diagram(validate((1, 2, 1, 3, 2, 1), 3))
    assert diagram.slab_order[0] == (1, 2, 3, 4)
    assert diagram.slab_order[-1] == (4, 3, 2, 1)
    assert diagram.node_column[3] == 3
    assert diagram.node_wires[0] == (1, 2)
    assert diagram.track_occupancy[0] == (4, 3, 2, 1)
    assert diagram.crossing(1, 4) == 4


def test_chamber_matrix_121():
    """Test M for 1,2,1."""
    diagram = build_diagram(validate((1, 2, 1), 2))
    assert chamber_matrix(diagram) == ((1, -1, 1), (0, 1, -1), (0, 0, 1))


def test_chamber_matrix_is_unitriangular():
    """Test that M is upper triangular with unit diagonal for every word in R(4)."""
    for word in enumerate_reduced_words(3):
        matrix = chamber_matrix(build_diagram(word))
        for i, row in enumerate(matrix):
            assert row[i] == 1
            assert all(x == 0 for x in row[:i])


def test_single_letter_word():
    """Test the only path of the word 1."""
    paths = enumerate_rigorous_paths(validate((1,), 1))
    assert len(paths) == 1
    assert paths[0].label == "l1->l2"
    assert paths[0].w_m == (1,)
    assert paths[0].w_t == (1,)


def test_paths_132132():
    """Test the seven rigorous paths of 1,3,2,1,3,2 and their chamber vectors."""
    paths = enumerate_rigorous_paths(validate((1, 3, 2, 1, 3, 2), 3))
    assert len(paths) == 7
    assert {p.w_m for p in paths} == {
        (1, 0, 1, 0, 1, 0),
        (0, 0, 1, 0, 1, 0),
        (0, 0, 0, 0, 1, 0),
        (0, 0, 0, 0, 0, 1),
        (0, 1, 1, 1, 0, 0),
        (0, 0, 1, 1, 0, 0),
        (0, 0, 0, 1, 0, 0),
    }


@pytest.mark.parametrize(
    "letters,expected",
    [
        ((1, 2, 1), {(1, 0, 0), (0, 1, -1), (0, 0, 1)}),
        ((2, 1, 2), {(1, 0, 0), (0, 1, -1), (0, 0, 1)}),
    ],
)
def test_travel_vectors_rank_two(letters, expected):
    """Test the string inequalities in t-coordinates for both words of R(3)."""
    paths = enumerate_rigorous_paths(validate(letters, 2))
    assert {string_vector_t(p) for p in paths} == expected


def test_chamber_and_travel_vectors_agree():
    """Test M^T w_m = w_t for every path of every word in R(4)."""
    for word in enumerate_reduced_words(3):
        matrix = build_diagram(word).M
        for path in enumerate_rigorous_paths(word):
            assert transpose_apply(matrix, path.w_m) == path.w_t
            assert set(path.w_m) <= {0, 1}


def test_region_of_path_matches_chamber_vector():
    """Test that the region of a wire expression is the support of w_m."""
    word = validate((1, 3, 2, 1, 3, 2), 3)
    diagram = build_diagram(word)
    for path in enumerate_rigorous_paths(word):
        assert region_of_path(diagram, path.wires) == path.region


def test_max_peak_is_first_turn():
    """Test that the maximal peak is the topmost turn and is a peak."""
    for path in enumerate_rigorous_paths(validate((1, 3, 2, 1, 3, 2), 3)):
        assert path.max_peak == min(path.nodes)
        assert path.max_peak in path.peaks


def test_r7_path_counts():
    """Test the 24 rigorous paths of the R(7) example by source."""
    word = validate(R7_WORD, 6)
    paths = enumerate_rigorous_paths(word)
    assert len(paths) == 24
    counts = [sum(1 for p in paths if p.source == k) for k in range(1, 7)]
    assert counts == [3, 5, 5, 6, 1, 4]


def test_r7_regions():
    """Test two chamber decompositions of the R(7) example."""
    diagram = build_diagram(validate(R7_WORD, 6))
    found = regions(diagram)
    assert found[1] == frozenset({10, 11, 13})
    assert found[5] == frozenset({21})


def test_r7_d_new_paths():
    """Test canonical and non-canonical D-new paths of the R(7) example."""
    word = validate(R7_WORD, 6)
    paths = enumerate_rigorous_paths(word)
    assert canonical_D_new_path(word, 3).label == "l6->l3->l7"
    assert canonical_D_new_path(word, 6).label == "l6->l7"
    assert {"l2->l6->l7->l3", "l3->l7->l4", "l4->l7->l5"} <= labels(paths)
    canonical = {p.label for p in canonical_D_new_paths(word).values()}
    assert "l3->l7->l4" not in canonical


def test_r7_leftovers():
    """Test the labelled leftover paths of the R(7) example."""
    word = validate(R7_WORD, 6)
    selection = select_gamma(word, Witness("DAAADD", (0, 0, 0, 0, 0, 3), 3), require_small=False)
    assert {label: p.label for label, p in selection.leftovers.items()} == {
        "0": "l2->l6->l3",
        "2": "l4->l7->l5",
        "3": "l3->l7->l4",
    }
    assert len(selection.gammas) == 21


def test_ad_example_canonical_paths():
    """Test the canonical D-new paths of the R(6) example."""
    word = validate(AD_WORD, 5)
    found = {k: p.label for k, p in canonical_D_new_paths(word).items()}
    assert found == {
        1: "l3->l1->l6->l4",
        2: "l2->l6->l3",
        3: "l3->l6->l4",
        4: "l4->l6->l5",
        5: "l5->l6",
    }
    assert regions(build_diagram(word))[5] == frozenset({13})


def test_select_gamma_213213():
    """Test the tie at t_2 of 2,1,3,2,1,3, won by the path whose region contains the other."""
    selection = select_gamma(validate((2, 1, 3, 2, 1, 3), 3))
    assert selection.gammas[2].label == "l2->l4->l1->l3"
    assert selection.gammas[2].region == frozenset({2, 3, 4})
    assert {label: p.label for label, p in selection.leftovers.items()} == {"0": "l2->l1->l3"}
    assert selection.leftovers["0"].region == frozenset({2, 4})


def test_node_relabeling_follows_wires():
    """Test that a 2-move swaps the node numbers of the two crossings."""
    mapping = node_relabeling(validate((1, 3, 2, 1, 3, 2), 3), validate((3, 1, 2, 3, 1, 2), 3))
    assert mapping == {1: 2, 2: 1, 3: 3, 4: 4, 5: 5, 6: 6}
    assert relabel_vector((1, 0, 1, 0, 1, 0), mapping) == (0, 1, 1, 0, 1, 0)


def test_node_relabeling_rejects_other_classes():
    """Test that words in different 2-move classes have no node relabeling."""
    with pytest.raises(InvariantError):
        node_relabeling(validate((1, 2, 1, 3, 2, 1), 3), validate((1, 3, 2, 1, 3, 2), 3))


def test_chamber_vectors_follow_node_relabeling():
    """Test that paths with the same wires have relabeled chamber vectors."""
    source = validate((1, 3, 2, 1, 3, 2), 3)
    target = validate((3, 1, 2, 3, 1, 2), 3)
    mapping = node_relabeling(source, target)
    by_wires = {p.wires: p for p in enumerate_rigorous_paths(source)}
    paths = enumerate_rigorous_paths(target)
    assert {p.wires for p in paths} == set(by_wires)
    for path in paths:
        assert path.w_m == relabel_vector(by_wires[path.wires].w_m, mapping)


def test_select_gamma_carried_to_class_member():
    """Test that 3,1,2,3,1,2 gets the paths chosen on 1,3,2,1,3,2."""
    witness = Witness("DDD", (0, 0, 2), 2)
    base = select_gamma(validate((1, 3, 2, 1, 3, 2), 3), witness)
    moved = select_gamma(validate((3, 1, 2, 3, 1, 2), 3), witness)
    assert moved.gammas[1].wires == base.gammas[2].wires
    assert moved.gammas[2].wires == base.gammas[1].wires
    for j in range(3, 7):
        assert moved.gammas[j].wires == base.gammas[j].wires
    assert {k: p.wires for k, p in moved.leftovers.items()} == {
        k: p.wires for k, p in base.leftovers.items()
    }


def test_select_gamma_every_node_has_a_path():
    """Test that gamma_j peaks at t_j for a word with k = 0."""
    selection = select_gamma(validate((1, 2, 1, 3, 2, 1), 3))
    assert selection.leftovers == {}
    for j, path in selection.gammas.items():
        assert path.max_peak == j


def test_expected_leftovers_shapes():
    """Test the labelled leftover shapes in both cases."""
    assert expected_leftovers(3, "DDD", 2) == {"2": (1, 4, 2)}
    assert expected_leftovers(3, "DAD", 1) == {"0": (2, 1, 3)}
    assert expected_leftovers(4, "DDDD", 0) == {}


def test_is_new():
    """Test the D-new and A-new flags."""
    paths = {p.label: p for p in enumerate_rigorous_paths(validate((1, 3, 2, 1, 3, 2), 3))}
    path = next(p for p in paths.values() if p.wires[-1] == 4)
    assert is_new(path, "D")
    with pytest.raises(ValueError):
        is_new(path, "X")


def test_path_label_and_grid():
    """Test label formatting and the text dump."""
    assert path_label((1, 3, 2)) == "l1->l3->l2"
    grid = render_text_grid(build_diagram(validate((1, 2, 1), 2)))
    assert "t1: column 1, l1 x l2" in grid
    assert grid.splitlines()[0].split() == ["l1", "l2", "l3"]
