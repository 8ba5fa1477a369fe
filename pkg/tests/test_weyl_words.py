import pytest
from string_toric.exceptions import (
    EnumerationCapExceeded,
    InvalidLetter,
    NotReduced,
    WrongLength,
)
from string_toric.weyl_words import (
    apply_involution,
    braid_graph,
    commutation_class_of,
    commutation_classes,
    enumerate_reduced_words,
    format_word,
    hook_length_count,
    longest_element,
    parse_word,
    rank_for_length,
    same_commutation_class,
    three_move_neighbors,
    two_move_neighbors,
    validate,
    word_length,
)


def test_validate_accepts_reduced_word():
    """Test that a reduced word of w0 validates."""
    word = validate((1, 2, 1, 3, 2, 1), 3)
    assert word.letters == (1, 2, 1, 3, 2, 1)
    assert word.rank == 3
    assert word.length == 6
    assert str(word) == "1,2,1,3,2,1"


def test_validate_rank_one():
    """Test the single word of S_2."""
    assert validate((1,), 1).length == 1


def test_validate_rejects_bad_letter():
    """Test that letters outside 1..n are rejected."""
    with pytest.raises(InvalidLetter, match="outside"):
        validate((1, 4, 1), 2)


def test_validate_rejects_wrong_length():
    """Test that a word of the wrong length is rejected."""
    with pytest.raises(WrongLength, match="expected 3 letters"):
        validate((1, 2), 2)


def test_validate_rejects_non_reduced():
    """Test that a repeated letter is not reduced."""
    with pytest.raises(NotReduced, match="not reduced"):
        validate((1, 1, 2), 2)


def test_parse_word_formats():
    """Test comma separated and compact input."""
    assert parse_word("1,3,2,1,3,2").letters == (1, 3, 2, 1, 3, 2)
    assert parse_word("132132").letters == (1, 3, 2, 1, 3, 2)
    assert parse_word(" 2, 1, 2 ").rank == 2
    assert format_word(parse_word("121")) == "1,2,1"


def test_parse_word_rejects_garbage():
    """Test that non numeric input raises InvalidLetter."""
    with pytest.raises(InvalidLetter):
        parse_word("1,x,1")


def test_rank_for_length():
    """Test the triangular number inversion."""
    assert rank_for_length(1) == 1
    assert rank_for_length(10) == 4
    with pytest.raises(WrongLength):
        rank_for_length(7)


def test_longest_element():
    """Test w0 in one-line notation."""
    assert longest_element(3) == (4, 3, 2, 1)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 16), (4, 768)])
def test_enumeration_matches_hook_length_formula(n, count):
    """Test |R(n+1)| against the hook length formula."""
    words = enumerate_reduced_words(n)
    assert len(words) == count
    assert hook_length_count(n) == count
    assert len(set(words)) == count
    assert all(len(w) == word_length(n) for w in words)


def test_enumeration_is_sorted():
    """Test that the enumeration is lexicographically sorted."""
    words = enumerate_reduced_words(3)
    assert words == sorted(words)
    assert words[0].letters == (1, 2, 1, 3, 2, 1)


def test_enumeration_cap():
    """Test that ranks above the cap are refused."""
    with pytest.raises(EnumerationCapExceeded) as excinfo:
        enumerate_reduced_words(4, max_rank=3)
    assert excinfo.value.limit == 3


def test_two_and_three_moves():
    """Test the neighbours of 1,2,1,3,2,1."""
    word = validate((1, 2, 1, 3, 2, 1), 3)
    two = {w.letters for w in two_move_neighbors(word)}
    assert two == {(1, 2, 3, 1, 2, 1)}
    three = {w.letters for w in three_move_neighbors(word)}
    assert three == {(2, 1, 2, 3, 2, 1)}


def test_moves_preserve_reducedness():
    """Test that every neighbour of every R(4) word is again reduced."""
    for word in enumerate_reduced_words(3):
        for neighbor in two_move_neighbors(word) | three_move_neighbors(word):
            assert validate(neighbor.letters, 3) == neighbor


def test_commutation_class_of():
    """Test the 2-move closure of 1,3,2,1,3,2."""
    cls = commutation_class_of(validate((1, 3, 2, 1, 3, 2), 3))
    assert validate((3, 1, 2, 3, 1, 2), 3) in cls
    assert cls.representative.letters == (1, 3, 2, 1, 3, 2)
    assert cls.to_dict()["representative"] == "1,3,2,1,3,2"


def test_commutation_classes_r4():
    """Test that R(4) splits into 8 classes covering all 16 words."""
    classes = commutation_classes(3)
    assert len(classes) == 8
    assert sum(len(c) for c in classes) == 16


def test_commutation_classes_r5():
    """Test that R(5) splits into 62 classes."""
    classes = commutation_classes(4)
    assert len(classes) == 62
    assert sum(len(c) for c in classes) == 768
    reps = [c.representative for c in classes]
    assert reps == sorted(reps)


def test_braid_graph_connected():
    """Test that 2-moves and 3-moves connect R(4)."""
    import networkx as nx

    graph = braid_graph(3)
    assert graph.number_of_nodes() == 16
    assert nx.is_connected(graph)


def test_apply_involution():
    """Test the letterwise Dynkin involution."""
    word = validate((1, 2, 1, 3, 2, 1), 3)
    image = apply_involution(word)
    assert image.letters == (3, 2, 3, 1, 2, 3)
    assert validate(image.letters, 3) == image
    assert apply_involution(image) == word


def test_same_commutation_class():
    """Test the pairwise-subword criterion for 2-move equivalence."""
    assert same_commutation_class(parse_word("132132"), parse_word("312312"))
    assert same_commutation_class(parse_word("121321"), parse_word("123121"))
    assert not same_commutation_class(parse_word("121321"), parse_word("132132"))
    assert not same_commutation_class(parse_word("121"), parse_word("121321"))


def test_same_commutation_class_agrees_with_classes():
    """Test the criterion against the 2-move components of R(5)."""
    classes = commutation_classes(4)
    for first in classes:
        member = min(first.members)
        for second in classes:
            assert same_commutation_class(member, second.representative) == (first is second)
