"""Reduced words of the longest element of the symmetric group S_{n+1}.

A word ``(i_1, ..., i_N)`` over ``1..n`` is read as the product of simple
transpositions ``s_{i_1} ... s_{i_N}``. It is a reduced word of the longest
element ``w0`` when ``N = n(n+1)/2`` and every letter creates a new inversion.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import factorial, isqrt
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .config import default_settings
from .exceptions import EnumerationCapExceeded, InvalidLetter, NotReduced, WrongLength
from .logger import get_logger

logger = get_logger(__name__)


def word_length(n: int) -> int:
    """Return ``n(n+1)/2``, the length of a reduced word of w0 in S_{n+1}."""
    return n * (n + 1) // 2


@dataclass(frozen=True, order=True)
class ReducedWord:
    """A reduced word of the longest element of S_{n+1}.

    Instances are only created through :func:`validate` (or by operations that
    preserve reducedness), so ``letters`` always satisfies both invariants.

    Attributes:
        letters: The letters ``i_1, ..., i_N`` with ``1 <= i_j <= rank``
        rank: n, the rank of the symmetric group S_{n+1}
    """

    letters: Tuple[int, ...]
    rank: int

    @property
    def length(self) -> int:
        """Number of letters, ``n(n+1)/2``."""
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class CommutationClass:
    """A 2-move equivalence class of reduced words.

    Attributes:
        members: Every reduced word in the class
        representative: The lexicographically smallest member
    """

    members: frozenset
    representative: ReducedWord

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, word: object) -> bool:
        return word in self.members

    def to_dict(self) -> dict:
        """Serialize as ``{"representative": ..., "members": [...]}``."""
        return {
            "representative": format_word(self.representative),
            "members": [format_word(w) for w in sorted(self.members)],
        }


def longest_element(n: int) -> Tuple[int, ...]:
    """Return w0 of S_{n+1} in one-line notation, ``(n+1, n, ..., 1)``."""
    return tuple(range(n + 1, 0, -1))


def _reducedness_failure(letters: Sequence[int], n: int) -> Optional[int]:
    """Return the first position that fails to add an inversion, or None."""
    perm = list(range(1, n + 2))
    for position, letter in enumerate(letters, start=1):
        if perm[letter - 1] > perm[letter]:
            return position
        perm[letter - 1], perm[letter] = perm[letter], perm[letter - 1]
    return None


def validate(letters: Iterable[int], n: int) -> ReducedWord:
    """Validate a sequence of letters as a reduced word of w0 in S_{n+1}.

    Args:
        letters: The letters of the word (1-based)
        n: The rank

    Returns:
        The validated ReducedWord

    Raises:
        InvalidLetter: If a letter lies outside ``1..n``
        WrongLength: If the word does not have ``n(n+1)/2`` letters
        NotReduced: If some letter does not create a new inversion

    Example:
        >>> validate((1, 2, 1, 3, 2, 1), 3).length
        6
    """
    word = tuple(int(x) for x in letters)
    if n < 1:
        raise InvalidLetter(f"rank must be positive, got n={n}")
    for letter in word:
        if not 1 <= letter <= n:
            raise InvalidLetter(f"letter {letter} is outside 1..{n}")
    expected = word_length(n)
    if len(word) != expected:
        raise WrongLength(f"expected {expected} letters for n={n}, got {len(word)}")
    failure = _reducedness_failure(word, n)
    if failure is not None:
        raise NotReduced(
            f"word {','.join(map(str, word))} is not reduced: letter {failure} "
            f"(value {word[failure - 1]}) shortens the product"
        )
    return ReducedWord(word, n)


def rank_for_length(length: int) -> int:
    """Return n with ``n(n+1)/2 == length``.

    Raises:
        WrongLength: If ``length`` is not a triangular number
    """
    n = (isqrt(8 * length + 1) - 1) // 2
    if word_length(n) != length or n < 1:
        raise WrongLength(f"{length} letters is not the length of any longest-element word")
    return n


def parse_word(text: str, n: Optional[int] = None) -> ReducedWord:
    """Parse a comma separated word such as ``"1,3,2,1,3,2"``.

    The rank is inferred from the length when ``n`` is omitted. Compact input
    without commas (``"132132"``) is accepted for ranks below 10.
    """
    cleaned = text.strip()
    if "," in cleaned:
        parts = [p for p in cleaned.split(",") if p.strip()]
    else:
        parts = [c for c in cleaned if not c.isspace()]
    try:
        letters = tuple(int(p) for p in parts)
    except ValueError:
        raise InvalidLetter(f"cannot parse word: {text!r}")
    if n is None:
        n = rank_for_length(len(letters))
    return validate(letters, n)


def format_word(word: ReducedWord) -> str:
    """Format a word as comma separated 1-based letters."""
    return ",".join(str(x) for x in word.letters)


def hook_length_count(n: int) -> int:
    """Number of reduced words of w0 in S_{n+1} by the hook length formula.

    The staircase shape ``(n, n-1, ..., 1)`` has hook length ``2(n-r-c)-1`` at
    row ``r`` and column ``c``.
    """
    hooks = 1
    for r in range(n):
        for c in range(n - r):
            hooks *= 2 * (n - r - c) - 1
    return factorial(word_length(n)) // hooks


def enumerate_reduced_words(n: int, max_rank: Optional[int] = None) -> List[ReducedWord]:
    """Enumerate every reduced word of w0 in S_{n+1}, sorted lexicographically.

    Args:
        n: The rank (n >= 1)
        max_rank: Override of ``Settings.max_rank``

    Raises:
        EnumerationCapExceeded: If ``n`` exceeds the configured cap
    """
    cap = default_settings().max_rank if max_rank is None else max_rank
    if n > cap:
        raise EnumerationCapExceeded(
            f"refusing to enumerate reduced words for n={n} (cap is {cap})", limit=cap
        )
    total = word_length(n)
    words: List[ReducedWord] = []
    prefix: List[int] = []
    perm = list(range(1, n + 2))

    def extend() -> None:
        if len(prefix) == total:
            words.append(ReducedWord(tuple(prefix), n))
            return
        for i in range(1, n + 1):
            if perm[i - 1] < perm[i]:
                perm[i - 1], perm[i] = perm[i], perm[i - 1]
                prefix.append(i)
                extend()
                prefix.pop()
                perm[i - 1], perm[i] = perm[i], perm[i - 1]

    extend()
    logger.debug(f"Enumerated {len(words)} reduced words for n={n}")
    return words


def two_move_neighbors(word: ReducedWord) -> Set[ReducedWord]:
    """All words obtained by swapping one adjacent pair of commuting letters."""
    letters = word.letters
    neighbors: Set[ReducedWord] = set()
    for p in range(len(letters) - 1):
        a, b = letters[p], letters[p + 1]
        if abs(a - b) > 1:
            swapped = letters[:p] + (b, a) + letters[p + 2 :]
            neighbors.add(ReducedWord(swapped, word.rank))
    return neighbors


def three_move_neighbors(word: ReducedWord) -> Set[ReducedWord]:
    """All words obtained by one braid relation ``(i, i±1, i) -> (i±1, i, i±1)``."""
    letters = word.letters
    neighbors: Set[ReducedWord] = set()
    for p in range(len(letters) - 2):
        a, b, c = letters[p : p + 3]
        if a == c and abs(a - b) == 1:
            replaced = letters[:p] + (b, a, b) + letters[p + 3 :]
            neighbors.add(ReducedWord(replaced, word.rank))
    return neighbors


def commutation_class_of(word: ReducedWord) -> CommutationClass:
    """Breadth-first closure of a single word under 2-moves."""
    seen = {word}
    queue = deque([word])
    while queue:
        current = queue.popleft()
        for neighbor in two_move_neighbors(current):
            if neighbor not in seen:
                seen.add(neighbor)
                queue.append(neighbor)
    return CommutationClass(frozenset(seen), min(seen))


def same_commutation_class(first: ReducedWord, second: ReducedWord) -> bool:
    """Whether two words differ by 2-moves only.

    Letters commute unless they are equal or adjacent, so two words are 2-move
    equivalent iff their subwords over every pair ``{i, i+1}`` agree.

    Example:
        >>> same_commutation_class(parse_word("132132"), parse_word("312312"))
        True
    """
    if first.rank != second.rank:
        return False
    if first.rank == 1:
        return first.letters == second.letters
    for i in range(1, first.rank):
        pair = (i, i + 1)
        if [x for x in first.letters if x in pair] != [x for x in second.letters if x in pair]:
            return False
    return True


def commutation_classes(n: int, max_rank: Optional[int] = None) -> List[CommutationClass]:
    """Partition all reduced words of w0 into 2-move classes.

    Classes are the connected components of the 2-move graph and are returned
    sorted by representative.
    """
    words = enumerate_reduced_words(n, max_rank=max_rank)
    graph = nx.Graph()
    graph.add_nodes_from(words)
    for word in words:
        for neighbor in two_move_neighbors(word):
            graph.add_edge(word, neighbor)
    classes = [
        CommutationClass(frozenset(component), min(component))
        for component in nx.connected_components(graph)
    ]
    classes.sort(key=lambda c: c.representative)
    logger.info(f"R({n + 1}) splits into {len(classes)} commutation classes")
    return classes


def braid_graph(n: int, max_rank: Optional[int] = None) -> nx.Graph:
    """The graph on reduced words of w0 whose edges are 2-moves and 3-moves."""
    words = enumerate_reduced_words(n, max_rank=max_rank)
    graph = nx.Graph()
    graph.add_nodes_from(words)
    for word in words:
        for neighbor in two_move_neighbors(word) | three_move_neighbors(word):
            graph.add_edge(word, neighbor)
    return graph


def apply_involution(word: ReducedWord) -> ReducedWord:
    """Apply the Dynkin involution ``i -> n+1-i`` letterwise."""
    n = word.rank
    return ReducedWord(tuple(n + 1 - x for x in word.letters), n)
