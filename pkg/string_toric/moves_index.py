"""Extensions, contractions and delta-indices of reduced words.

The D-contraction removes the wire ``l_{n+1}`` from G(i): nodes on the wire are
deleted, nodes on its upper-left side keep their column and nodes on its
lower-right side move one column to the left. The A-contraction removes ``l_1``
symmetrically. ``ind_D`` and ``ind_A`` count the nodes strictly below the removed
wire.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .exceptions import BadBounds, BadCase, BadPosition, InvariantError, WordError
from .logger import get_logger
from .weyl_words import (
    ReducedWord,
    apply_involution,
    same_commutation_class,
    validate,
    word_length,
)
from .wiring import RigorousPath, build_diagram, enumerate_rigorous_paths

logger = get_logger(__name__)

BULLETS = ("D", "A")

ON, LEFT, RIGHT = "on", "left", "right"


@dataclass(frozen=True)
class Witness:
    """A delta sequence whose index vector is ``(0, ..., 0, k)``.

    Attributes:
        delta: The sequence over {A, D}, e.g. 'DAAADD'
        index: The full index vector
        k: The last entry of the index vector
    """

    delta: str
    index: Tuple[int, ...]
    k: int

    def to_dict(self) -> dict:
        return {"delta": self.delta, "k": self.k, "index": list(self.index)}


@dataclass(frozen=True)
class SmallIndexResult:
    """Outcome of the small-indices test.

    Attributes:
        small: Whether the word is 2-move equivalent to some ``i_delta(0, ..., 0, k)``
            with ``k <= kappa(delta)``
        witness: The preferred such delta, if any
    """

    small: bool
    witness: Optional[Witness]

    def to_dict(self) -> dict:
        return {
            "small": self.small,
            "witness": self.witness.to_dict() if self.witness else None,
        }


def _check_bullet(bullet: str) -> None:
    if bullet not in BULLETS:
        raise ValueError(f"bullet must be 'A' or 'D', got {bullet!r}")


def _normalize_delta(delta: Iterable[str]) -> str:
    text = "".join(delta).upper()
    if any(ch not in BULLETS for ch in text):
        raise BadCase(f"delta must be a string over A and D, got {text!r}")
    return text


def swap_delta(delta: str) -> str:
    """Exchange A and D entrywise; the image of delta under the Dynkin involution."""
    return delta.translate(str.maketrans("AD", "DA"))


def _preference(delta: str) -> Tuple[int, ...]:
    """Sort key preferring D over A from the last entry backwards."""
    return tuple(0 if ch == "D" else 1 for ch in reversed(delta))


def node_sides(word: ReducedWord, wire: int) -> Dict[int, str]:
    """Classify every node as on ``wire``, left of it or right of it."""
    diagram = build_diagram(word)
    sides: Dict[int, str] = {}
    for j, (a, b) in enumerate(diagram.node_wires, start=1):
        if wire in (a, b):
            sides[j] = ON
            continue
        column = diagram.node_column[j - 1]
        track = diagram.track_of(wire, j - 1)
        sides[j] = LEFT if column + 1 < track else RIGHT
    return sides


def _extremal_wire(word: ReducedWord, bullet: str) -> int:
    return word.rank + 1 if bullet == "D" else 1


def _below_side(bullet: str) -> str:
    return RIGHT if bullet == "D" else LEFT


def _extend_letters(letters: Tuple[int, ...], n: int, bullet: str, s: int) -> Tuple[int, ...]:
    size = len(letters)
    if not 0 <= s <= size:
        raise BadPosition(f"extension position {s} is outside 0..{size}")
    head, tail = letters[: size - s], letters[size - s :]
    if bullet == "D":
        block = tuple(range(n + 1, 0, -1))
        return head + block + tuple(x + 1 for x in tail)
    block = tuple(range(1, n + 2))
    return tuple(x + 1 for x in head) + block + tail


def extend(word: ReducedWord, bullet: str, s: int) -> ReducedWord:
    """The D- or A-extension of a word at position s.

    ``E_D(s)(i) = i^-(s) D_{n+1} (i^+(s) + 1)`` and
    ``E_A(s)(i) = (i^-(s) + 1) A_{n+1} i^+(s)``, where ``i^+(s)`` is the last s
    letters and ``i^-(s)`` the rest.

    Raises:
        BadPosition: If s lies outside ``0..len(word)``

    Example:
        >>> extend(validate((1, 2, 1, 3, 2, 1), 3), "D", 3).letters
        (1, 2, 1, 4, 3, 2, 1, 4, 3, 2)
    """
    _check_bullet(bullet)
    letters = _extend_letters(word.letters, word.rank, bullet, s)
    return validate(letters, word.rank + 1)


def contract(word: ReducedWord, bullet: str) -> ReducedWord:
    """The D- or A-contraction of a word of rank at least 2.

    Raises:
        BadCase: If the rank is 1
    """
    _check_bullet(bullet)
    if word.rank < 2:
        raise BadCase(f"contraction needs rank >= 2, got {word.rank}")
    sides = node_sides(word, _extremal_wire(word, bullet))
    # Nodes right of the removed wire move one column to the left.
    letters = tuple(
        letter - 1 if sides[j] == RIGHT else letter
        for j, letter in enumerate(word.letters, start=1)
        if sides[j] != ON
    )
    try:
        return validate(letters, word.rank - 1)
    except WordError as e:
        raise InvariantError(f"{bullet}-contraction of {word} is not reduced: {e}")


def ind(word: ReducedWord, bullet: str) -> int:
    """Number of nodes strictly below l_{n+1} (bullet D) or below l_1 (bullet A)."""
    _check_bullet(bullet)
    below = _below_side(bullet)
    sides = node_sides(word, _extremal_wire(word, bullet))
    return sum(1 for side in sides.values() if side == below)


def delta_index(word: ReducedWord, delta: Sequence[str]) -> Tuple[int, ...]:
    """The delta-index ``ind_delta(i)``.

    ``I_n = ind_{delta_n}(i)``, and the remaining entries are the delta-index of
    the ``delta_n``-contraction.

    Raises:
        BadCase: If delta does not have one entry per letter value
    """
    text = _normalize_delta(delta)
    if len(text) != word.rank:
        raise BadCase(f"delta {text} has length {len(text)}, expected {word.rank}")
    entries: List[int] = []
    current = word
    for position in range(word.rank, 0, -1):
        bullet = text[position - 1]
        entries.append(ind(current, bullet))
        if position > 1:
            current = contract(current, bullet)
    return tuple(reversed(entries))


def build_word(delta: Sequence[str], index: Sequence[int]) -> ReducedWord:
    """The word ``i_delta(I)`` obtained by iterated extensions of the empty word.

    Raises:
        BadBounds: If the lengths differ or some ``I_i`` exceeds ``i(i-1)/2``

    Example:
        >>> build_word("DDD", (0, 0, 2)).letters
        (1, 3, 2, 1, 3, 2)
    """
    text = _normalize_delta(delta)
    values = tuple(int(x) for x in index)
    if len(text) != len(values) or not text:
        raise BadBounds(f"delta {text} and index {values} must have the same positive length")
    for i, value in enumerate(values, start=1):
        if not 0 <= value <= word_length(i - 1):
            raise BadBounds(f"I_{i} = {value} is outside 0..{word_length(i - 1)}")
    letters: Tuple[int, ...] = ()
    for i, (bullet, value) in enumerate(zip(text, values), start=1):
        letters = _extend_letters(letters, i - 1, bullet, value)
    return validate(letters, len(text))


def kappa(delta: str) -> int:
    """Bound on k for small indices: 2 if the last two entries agree, n-1 otherwise."""
    n = len(delta)
    if n < 2:
        return 0
    return 2 if delta[-1] == delta[-2] else n - 1


def all_deltas(n: int) -> List[str]:
    """Every delta sequence of length n, in preference order."""
    deltas = ["".join(p) for p in product(BULLETS, repeat=n)]
    return sorted(deltas, key=_preference)


def delta_witnesses(word: ReducedWord) -> List[Witness]:
    """All deltas whose index vector vanishes except in the last entry."""
    witnesses = []
    for delta in all_deltas(word.rank):
        index = delta_index(word, delta)
        if not any(index[:-1]):
            witnesses.append(Witness(delta, index, index[-1]))
    return witnesses


def witness_word(witness: Witness) -> ReducedWord:
    """The word ``i_delta(0, ..., 0, k)`` of a witness."""
    n = len(witness.delta)
    return build_word(witness.delta, (0,) * (n - 1) + (witness.k,))


def class_representative(word: ReducedWord, witness: Witness) -> ReducedWord:
    """``i_delta(0, ..., 0, k)`` when the word lies in its 2-move class, else the word."""
    candidate = witness_word(witness)
    return candidate if same_commutation_class(candidate, word) else word


def has_small_indices(word: ReducedWord) -> SmallIndexResult:
    """Decide whether the word has small indices.

    A witness counts when ``k <= kappa(delta)`` and the word is 2-move equivalent
    to ``i_delta(0, ..., 0, k)``; the index vector alone does not fix the class.
    The preferred witness ends in D when possible, compares deltas from the last
    entry backwards with D before A, and then takes the smallest k.
    """
    small = [
        w
        for w in delta_witnesses(word)
        if w.k <= kappa(w.delta) and same_commutation_class(witness_word(w), word)
    ]
    if not small:
        logger.debug(f"{word} has no small indices")
        return SmallIndexResult(False, None)
    witness = min(small, key=lambda w: (_preference(w.delta), w.k))
    logger.debug(f"{word} has small indices via {witness.delta} with k={witness.k}")
    return SmallIndexResult(True, witness)


def best_witness(word: ReducedWord) -> Optional[Witness]:
    """The witness with the smallest k regardless of the small-index bound."""
    witnesses = delta_witnesses(word)
    if not witnesses:
        return None
    return min(witnesses, key=lambda w: (w.k, _preference(w.delta)))


def table_witness(word: ReducedWord) -> Tuple[str, Tuple[int, ...]]:
    """The delta and index reported in classification tables.

    Minimises the sum of the leading entries, then the last entry.
    """
    best: Optional[Tuple[Tuple[int, int, Tuple[int, ...]], str, Tuple[int, ...]]] = None
    for delta in all_deltas(word.rank):
        index = delta_index(word, delta)
        key = (sum(index[:-1]), index[-1], _preference(delta))
        if best is None or key < best[0]:
            best = (key, delta, index)
    assert best is not None
    return best[1], best[2]


def normalize(word: ReducedWord, witness: Witness) -> Tuple[ReducedWord, Witness, bool]:
    """Move a witness ending in A to the involution image, which ends in D.

    Returns:
        The (possibly mirrored) word, its witness and whether the involution was applied
    """
    if witness.delta[-1] == "D":
        return word, witness, False
    mirrored = apply_involution(word)
    return mirrored, Witness(swap_delta(witness.delta), witness.index, witness.k), True


def small_index_words(n: int) -> Set[ReducedWord]:
    """Every word ``i_delta(0, ..., 0, k)`` with ``k <= kappa(delta)``."""
    words = set()
    for delta in all_deltas(n):
        for k in range(kappa(delta) + 1):
            if k <= word_length(n - 1):
                words.add(build_word(delta, (0,) * (n - 1) + (k,)))
    return words


def gp_count_formula(delta: Sequence[str], k: int, n: int) -> int:
    """Closed formula for ``|GP(i_delta(0, ..., 0, k))|`` when ``delta_n = D``.

    Raises:
        BadCase: If ``delta_n = A``, ``n < 2`` or k is outside ``0..n-1``
    """
    text = _normalize_delta(delta)
    if n < 2 or len(text) < 2:
        raise BadCase(f"the path-count formula needs n >= 2, got n={n}")
    if text[-1] != "D":
        raise BadCase("the path-count formula assumes delta_n = D")
    if not 0 <= k <= n - 1:
        raise BadCase(f"k={k} is outside 0..{n - 1}")
    size = word_length(n)
    if k == 0:
        return size
    if text[-2] == "D":
        return size + k - 1 if k == n - 1 else size + k
    return size if k == n - 1 else size + 1


def psi_inclusion(word: ReducedWord) -> Dict[str, RigorousPath]:
    """The canonical inclusion of GP(C_D(i)) into GP(i).

    Each rigorous path of the contraction is sent to the path of ``word`` with the
    same wire expression. The image is exactly the set of paths that are not D-new.

    Raises:
        InvariantError: If some path of the contraction has no counterpart
    """
    contracted = contract(word, "D")
    targets = {path.wires: path for path in enumerate_rigorous_paths(word)}
    mapping: Dict[str, RigorousPath] = {}
    for path in enumerate_rigorous_paths(contracted):
        image = targets.get(path.wires)
        if image is None:
            raise InvariantError(f"{path.label} of {contracted} has no image in GP({word})")
        mapping[path.label] = image
    return mapping
