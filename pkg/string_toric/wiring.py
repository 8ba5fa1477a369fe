"""Wiring diagrams, chambers and rigorous paths.

Layout conventions used throughout the package:

* tracks are numbered ``1..n+1`` from left to right;
* slab ``s`` (``0 <= s <= N``, ``N = n(n+1)/2``) is the horizontal band below the
  first ``s`` nodes, and slab 0 carries wire ``l_c`` on track ``c``;
* node ``t_j`` sits between slabs ``j-1`` and ``j`` and swaps tracks ``i_j`` and
  ``i_j + 1``.

For a path of source ``k`` the wires ``l_1..l_k`` point up and the others point
down. A rigorous path starts at the bottom end of ``l_k``, may switch wires at
any node, never visits a node twice and ends at the bottom end of ``l_{k+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .exceptions import (
    BadCase,
    CanonicalPathNotFound,
    InvariantError,
    NotSmallIndices,
    TieUnresolvable,
)
from .logger import get_logger
from .weyl_words import ReducedWord, same_commutation_class

if TYPE_CHECKING:
    from .moves_index import Witness

logger = get_logger(__name__)

# Face identifier: (gap, top slab). Gap 0 and gap n+1 are the unbounded sides.
Face = Tuple[int, int]

SAME_COLUMN = "same"
ADJACENT_COLUMN = "adjacent"


def path_label(wires: Sequence[int]) -> str:
    """Format a wire expression as ``"l1->l3->l2"``."""
    return "->".join(f"l{w}" for w in wires)


@dataclass(frozen=True)
class WiringDiagram:
    """The wiring diagram G(i) of a reduced word.

    Attributes:
        word: The reduced word
        node_column: ``node_column[j-1] = i_j``
        slab_order: ``slab_order[s]`` lists the wire on each track in slab ``s``
        node_wires: ``node_wires[j-1] = (a, b)`` with ``a < b``, the wires crossing at t_j
        wire_nodes: Nodes on each wire, listed top-down
        face_boundary_nodes: Boundary nodes of each bounded face with their relative column
        M: The t -> m change of coordinates, ``m = M t``
    """

    word: ReducedWord
    node_column: Tuple[int, ...]
    slab_order: Tuple[Tuple[int, ...], ...]
    node_wires: Tuple[Tuple[int, int], ...]
    wire_nodes: Dict[int, Tuple[int, ...]] = field(compare=False)
    face_boundary_nodes: Dict[Face, FrozenSet[Tuple[int, str]]] = field(compare=False)
    M: Tuple[Tuple[int, ...], ...] = field(compare=False)

    @property
    def rank(self) -> int:
        return self.word.rank

    @property
    def size(self) -> int:
        """Number of nodes, ``n(n+1)/2``."""
        return len(self.node_column)

    @property
    def track_occupancy(self) -> Tuple[Tuple[int, ...], ...]:
        """Wire labels by track per level; level 0 is the bottom boundary."""
        return tuple(reversed(self.slab_order))

    @property
    def chamber_of_node(self) -> Dict[int, Face]:
        """Face directly below each node, which is the chamber C_j."""
        return {j: (self.node_column[j - 1], j) for j in range(1, self.size + 1)}

    def track_of(self, wire: int, slab: int) -> int:
        """Track carrying ``wire`` in ``slab``."""
        return self.slab_order[slab].index(wire) + 1

    def crossing(self, a: int, b: int) -> int:
        """Index of the node where wires ``a`` and ``b`` cross."""
        return _crossings(self)[(min(a, b), max(a, b))]


@lru_cache(maxsize=None)
def _crossings(diagram: WiringDiagram) -> Dict[Tuple[int, int], int]:
    return {pair: j for j, pair in enumerate(diagram.node_wires, start=1)}


def _face_boundaries(
    columns: Sequence[int], n: int
) -> Dict[Face, FrozenSet[Tuple[int, str]]]:
    """Split each gap into faces and collect the nodes on their boundaries."""
    size = len(columns)
    boundaries: Dict[Face, Set[Tuple[int, str]]] = {}
    for gap in range(1, n + 1):
        pinches = [j for j, c in enumerate(columns, start=1) if c == gap]
        tops = [0] + pinches
        for top in tops:
            below = [j for j in pinches if j > top]
            bottom_slab = below[0] - 1 if below else size
            nodes: Set[Tuple[int, str]] = set()
            if top > 0:
                nodes.add((top, SAME_COLUMN))
            if below:
                nodes.add((below[0], SAME_COLUMN))
            for j in range(top + 1, bottom_slab + 1):
                if abs(columns[j - 1] - gap) == 1:
                    nodes.add((j, ADJACENT_COLUMN))
            boundaries[(gap, top)] = nodes
    return {face: frozenset(nodes) for face, nodes in boundaries.items()}


@lru_cache(maxsize=None)
def build_diagram(word: ReducedWord) -> WiringDiagram:
    """Build the wiring diagram of a reduced word.

    Args:
        word: A validated reduced word

    Returns:
        The populated WiringDiagram

    Example:
        >>> d = build_diagram(validate((1, 2, 1, 3, 2, 1), 3))
        >>> d.node_column[3]
        3
    """
    n = word.rank
    order = list(range(1, n + 2))
    slabs = [tuple(order)]
    node_wires: List[Tuple[int, int]] = []
    for c in word.letters:
        a, b = order[c - 1], order[c]
        node_wires.append((min(a, b), max(a, b)))
        order[c - 1], order[c] = b, a
        slabs.append(tuple(order))

    wire_nodes: Dict[int, List[int]] = {w: [] for w in range(1, n + 2)}
    for j, (a, b) in enumerate(node_wires, start=1):
        wire_nodes[a].append(j)
        wire_nodes[b].append(j)

    boundaries = _face_boundaries(word.letters, n)
    size = len(word.letters)
    rows: List[Tuple[int, ...]] = []
    for j in range(1, size + 1):
        row = [0] * size
        for node, relation in boundaries[(word.letters[j - 1], j)]:
            row[node - 1] += 1 if relation == SAME_COLUMN else -1
        rows.append(tuple(row))

    diagram = WiringDiagram(
        word=word,
        node_column=tuple(word.letters),
        slab_order=tuple(slabs),
        node_wires=tuple(node_wires),
        wire_nodes={w: tuple(nodes) for w, nodes in wire_nodes.items()},
        face_boundary_nodes=boundaries,
        M=tuple(rows),
    )
    if slabs[-1] != tuple(range(n + 1, 0, -1)):
        raise InvariantError(f"bottom boundary of {word} is {slabs[-1]}, not reversed")
    return diagram


def chamber_matrix(diagram: WiringDiagram) -> Tuple[Tuple[int, ...], ...]:
    """Return M with ``m = M t``.

    Row j has +1 at the nodes of C_j in the column of t_j and -1 at its nodes
    one column to the left or right. In top-down node order M is upper
    triangular with unit diagonal.
    """
    return diagram.M


def node_relabeling(source: ReducedWord, target: ReducedWord) -> Dict[int, int]:
    """The node permutation induced by the 2-moves from ``source`` to ``target``.

    Node j of ``source`` goes to the node of ``target`` where the same two wires
    cross. Chambers follow their nodes, so m-coordinates are permuted the same way.

    Raises:
        InvariantError: If the words are not 2-move equivalent
    """
    if not same_commutation_class(source, target):
        raise InvariantError(f"{source} and {target} are not 2-move equivalent")
    target_diagram = build_diagram(target)
    return {
        j: target_diagram.crossing(a, b)
        for j, (a, b) in enumerate(build_diagram(source).node_wires, start=1)
    }


def relabel_vector(vector: Sequence[int], mapping: Dict[int, int]) -> Tuple[int, ...]:
    """Move entry j of a node-indexed vector to position ``mapping[j]``."""
    out = [0] * len(vector)
    for j, value in enumerate(vector, start=1):
        out[mapping[j] - 1] = value
    return tuple(out)


def transpose_apply(matrix: Sequence[Sequence[int]], vector: Sequence[int]) -> Tuple[int, ...]:
    """Compute ``matrix^T vector`` over the integers."""
    size = len(matrix[0]) if matrix else 0
    out = [0] * size
    for row, coefficient in zip(matrix, vector):
        if coefficient:
            for col, entry in enumerate(row):
                out[col] += coefficient * entry
    return tuple(out)


@dataclass(frozen=True)
class RigorousPath:
    """A rigorous path of G(i, k).

    Attributes:
        source: k, the path runs from L_k to L_{k+1}
        rank: n of the underlying word
        wires: Wire expression ``(r_1, ..., r_{p+1})`` with ``r_1 = k`` and ``r_{p+1} = k+1``
        nodes: Turn nodes, in travel order
        visited: Every node the path meets, turns and pass-throughs, in travel order
        w_m: Chamber indicator vector (m-coordinates)
        w_t: Travel vector (t-coordinates)
        max_peak: Index of the topmost turn
        peaks: Turns from an up-wire to a down-wire
    """

    source: int
    rank: int
    wires: Tuple[int, ...]
    nodes: Tuple[int, ...]
    visited: Tuple[int, ...]
    w_m: Tuple[int, ...]
    w_t: Tuple[int, ...]
    max_peak: int
    peaks: Tuple[int, ...]

    @property
    def label(self) -> str:
        return path_label(self.wires)

    @property
    def region(self) -> FrozenSet[int]:
        """Chambers enclosed by the path."""
        return frozenset(j for j, x in enumerate(self.w_m, start=1) if x)

    def to_dict(self, canonical: bool = False) -> dict:
        return {
            "path": self.label,
            "source": self.source,
            "nodes": list(self.nodes),
            "w_m": list(self.w_m),
            "w_t": list(self.w_t),
            "max_peak": self.max_peak,
            "is_D_new": is_new(self, "D"),
            "is_A_new": is_new(self, "A"),
            "is_canonical": canonical,
        }


# A segment (wire, lo, hi) covers slabs lo..hi-1; node position N+1 is the bottom end.
Segment = Tuple[int, int, int]


def _chamber_parity(diagram: WiringDiagram, segments: Sequence[Segment]) -> Tuple[int, ...]:
    """Ray-cast each chamber cell to the right and count path segments mod 2."""
    vector = []
    for j, gap in enumerate(diagram.node_column, start=1):
        crossings = 0
        for wire, lo, hi in segments:
            if lo <= j < hi and diagram.track_of(wire, j) > gap:
                crossings += 1
        vector.append(crossings % 2)
    return tuple(vector)


def _forbidden_straight(wire: int, other: int, upward: bool) -> bool:
    """Whether going straight along ``wire`` through a same-direction crossing is forbidden.

    The wire that crosses over is the larger one when both point down and the
    smaller one when both point up.
    """
    return wire > other if not upward else wire < other


def _search_paths(diagram: WiringDiagram, k: int) -> List[RigorousPath]:
    n = diagram.rank
    size = diagram.size
    bottom = size + 1
    target = k + 1
    found: List[RigorousPath] = []

    def is_up(wire: int) -> bool:
        return wire <= k

    def ahead(wire: int, position: int) -> List[int]:
        nodes = diagram.wire_nodes[wire]
        if is_up(wire):
            return [j for j in reversed(nodes) if j < position]
        return [j for j in nodes if j > position]

    def walk(
        wire: int,
        start: int,
        visited: List[int],
        wires: List[int],
        turns: List[Tuple[int, int, int]],
        segments: List[Segment],
    ) -> None:
        passed: List[int] = []
        for node in ahead(wire, start):
            if node in visited:
                break
            a, b = diagram.node_wires[node - 1]
            other = b if wire == a else a
            segment = (wire, min(start, node), max(start, node))
            walk(
                other,
                node,
                visited + passed + [node],
                wires + [other],
                turns + [(node, wire, other)],
                segments + [segment],
            )
            if is_up(other) == is_up(wire) and _forbidden_straight(wire, other, is_up(wire)):
                break
            passed.append(node)
        else:
            if wire == target and not is_up(wire):
                final = segments + [(wire, start, bottom)]
                found.append(_make_path(diagram, k, wires, turns, visited + passed, final, n))

    walk(k, bottom, [], [k], [], [])
    return found


def _make_path(
    diagram: WiringDiagram,
    k: int,
    wires: Sequence[int],
    turns: Sequence[Tuple[int, int, int]],
    visited: Sequence[int],
    segments: Sequence[Segment],
    n: int,
) -> RigorousPath:
    w_t = [0] * diagram.size
    peaks = []
    for node, came, went in turns:
        w_t[node - 1] += 1 if came < went else -1
        if came <= k < went:
            peaks.append(node)
    w_m = _chamber_parity(diagram, segments)
    if transpose_apply(diagram.M, w_m) != tuple(w_t):
        raise InvariantError(
            f"chamber vector of {path_label(wires)} does not map to its travel vector"
        )
    turn_nodes = tuple(node for node, _, _ in turns)
    return RigorousPath(
        source=k,
        rank=n,
        wires=tuple(wires),
        nodes=turn_nodes,
        visited=tuple(visited),
        w_m=w_m,
        w_t=tuple(w_t),
        max_peak=min(turn_nodes),
        peaks=tuple(sorted(peaks)),
    )


@lru_cache(maxsize=None)
def enumerate_rigorous_paths(word: ReducedWord) -> Tuple[RigorousPath, ...]:
    """Enumerate GP(i) across all orientations k in 1..n.

    Paths are sorted by source and then by wire expression.

    Example:
        >>> len(enumerate_rigorous_paths(validate((1, 3, 2, 1, 3, 2), 3)))
        7
    """
    diagram = build_diagram(word)
    paths: List[RigorousPath] = []
    for k in range(1, word.rank + 1):
        found = _search_paths(diagram, k)
        logger.debug(f"{word}: {len(found)} rigorous paths of source {k}")
        paths.extend(found)
    paths.sort(key=lambda p: (p.source, p.wires))
    return tuple(paths)


def string_vector_t(path: RigorousPath) -> Tuple[int, ...]:
    """The string inequality of a path in t-coordinates.

    The entry at t_j is +1 where the path switches from l_r to l_s with r < s,
    -1 where r > s and 0 elsewhere.
    """
    return path.w_t


def region_of_path(diagram: WiringDiagram, wires: Sequence[int]) -> FrozenSet[int]:
    """Chambers enclosed by the curve that follows ``wires`` from the bottom end of
    the first wire to the bottom end of the last one, switching at their crossings.
    """
    bottom = diagram.size + 1
    segments: List[Segment] = []
    position = bottom
    for here, there in zip(wires, wires[1:]):
        node = diagram.crossing(here, there)
        segments.append((here, min(position, node), max(position, node)))
        position = node
    segments.append((wires[-1], position, bottom))
    parity = _chamber_parity(diagram, segments)
    return frozenset(j for j, x in enumerate(parity, start=1) if x)


def regions(diagram: WiringDiagram) -> Dict[int, FrozenSet[int]]:
    """Chamber decomposition of each region R_k enclosed by l_k -> l_{k+1}."""
    return {k: region_of_path(diagram, (k, k + 1)) for k in range(1, diagram.rank + 1)}


def is_new(path: RigorousPath, bullet: str) -> bool:
    """Whether the path turns at a node of l_{n+1} (bullet D) or of l_1 (bullet A)."""
    if bullet == "D":
        return path.rank + 1 in path.wires
    if bullet == "A":
        return 1 in path.wires
    raise ValueError(f"bullet must be 'A' or 'D', got {bullet!r}")


def _strictly_decreasing(values: Sequence[int]) -> bool:
    return all(a > b for a, b in zip(values, values[1:]))


def _is_canonical_for(path: RigorousPath, diagram: WiringDiagram, k: int) -> bool:
    top = diagram.rank + 1
    wires = path.wires
    for p in range(len(wires) - 1):
        if wires[p] == k and wires[p + 1] == top:
            node = diagram.crossing(k, top)
            return (
                path.nodes[p] == node
                and path.peaks == (node,)
                and _strictly_decreasing(wires[: p + 1])
                and _strictly_decreasing(wires[p + 1 :])
            )
    return False


def canonical_D_new_path(word: ReducedWord, k: int) -> RigorousPath:
    """The canonical D-new path that switches from l_k to l_{n+1}.

    It turns from l_k onto l_{n+1} at their crossing, has that crossing as its
    only peak, and its wire indices strictly decrease before l_k and after
    l_{n+1}. Among such paths the one with the largest source is returned.

    Raises:
        CanonicalPathNotFound: If no path qualifies
    """
    diagram = build_diagram(word)
    candidates = [
        path for path in enumerate_rigorous_paths(word) if _is_canonical_for(path, diagram, k)
    ]
    if not candidates:
        raise CanonicalPathNotFound(f"no canonical D-new path for k={k} in {word}")
    return max(candidates, key=lambda p: (p.source, tuple(-w for w in p.wires)))


def canonical_D_new_paths(word: ReducedWord) -> Dict[int, RigorousPath]:
    """Canonical D-new paths for every k in 1..n."""
    return {k: canonical_D_new_path(word, k) for k in range(1, word.rank + 1)}


@dataclass(frozen=True)
class GammaSelection:
    """The designated path of every node plus the labelled leftover paths.

    Attributes:
        gammas: ``gammas[j]`` is the path designated for node t_j
        leftovers: Remaining paths keyed by label ('0', '2', '3', ...)
        delta: The delta sequence of the witness used for labelling
        k: The last index entry of the witness
    """

    gammas: Dict[int, RigorousPath]
    leftovers: Dict[str, RigorousPath]
    delta: str
    k: int


def expected_leftovers(n: int, delta: str, k: int) -> Dict[str, Tuple[int, ...]]:
    """Wire expressions of the leftover paths, labelled by their index, when defined."""
    shapes: Dict[str, Tuple[int, ...]] = {}
    if k < 1 or n < 2:
        return shapes
    if delta[-2] == "D":
        if n - k - 1 >= 1:
            shapes["0"] = (n - k - 1, n, n - k)
        for i in range(2, k + 1):
            if n - i >= 1:
                shapes[str(i)] = (n - i, n + 1, n - i + 1)
    else:
        shapes["0"] = (k + 1, 1, k + 2)
    return shapes


def _choose(
    candidates: List[RigorousPath], canonical: Set[Tuple[int, ...]], j: int
) -> RigorousPath:
    if len(candidates) == 1:
        return candidates[0]
    for path in candidates:
        if all(other.region <= path.region for other in candidates):
            return path
    marked = [p for p in candidates if p.wires in canonical]
    if len(marked) == 1:
        return marked[0]
    raise TieUnresolvable(
        f"cannot choose between {', '.join(p.label for p in candidates)} at t_{j}"
    )


def _transport(
    selection: GammaSelection, source: ReducedWord, target: ReducedWord
) -> GammaSelection:
    """Carry a selection to a 2-move equivalent word, matching paths by wire expression."""
    mapping = node_relabeling(source, target)
    by_wires = {path.wires: path for path in enumerate_rigorous_paths(target)}

    def image(path: RigorousPath) -> RigorousPath:
        if path.wires not in by_wires:
            raise InvariantError(f"{path.label} of {source} has no counterpart in {target}")
        return by_wires[path.wires]

    gammas = {mapping[j]: image(path) for j, path in selection.gammas.items()}
    leftovers = {label: image(path) for label, path in selection.leftovers.items()}
    return GammaSelection(dict(sorted(gammas.items())), leftovers, selection.delta, selection.k)


def select_gamma(
    word: ReducedWord, witness: Optional["Witness"] = None, require_small: bool = True
) -> GammaSelection:
    """Designate a rigorous path for each node and label the leftover paths.

    Paths are chosen on ``i_delta(0, ..., 0, k)`` and carried to ``word`` through
    the node relabeling when the two are 2-move equivalent.

    Args:
        word: A reduced word whose witness has last entry D
        witness: The (delta, k) witness; searched when omitted
        require_small: Refuse words without small indices

    Raises:
        NotSmallIndices: If the word has no suitable witness
        BadCase: If the witness ends with A
        TieUnresolvable: If some node has no designated path or leftovers are unexpected
    """
    if witness is None:
        from .moves_index import best_witness, has_small_indices

        small = has_small_indices(word)
        witness = small.witness if small.small else None
        if witness is None and not require_small:
            witness = best_witness(word)
        if witness is None:
            raise NotSmallIndices(f"{word} has no small indices")
    if witness.delta[-1] != "D":
        raise BadCase(f"witness {witness.delta} ends with A; apply the involution first")

    from .moves_index import class_representative

    base = class_representative(word, witness)
    if base != word:
        return _transport(select_gamma(base, witness, require_small=False), base, word)

    paths = enumerate_rigorous_paths(word)
    diagram = build_diagram(word)
    canonical = {path.wires for path in canonical_D_new_paths(word).values()}
    by_peak: Dict[int, List[RigorousPath]] = {}
    for path in paths:
        by_peak.setdefault(path.max_peak, []).append(path)

    gammas: Dict[int, RigorousPath] = {}
    rest: List[RigorousPath] = []
    for j in range(1, diagram.size + 1):
        candidates = by_peak.get(j, [])
        if not candidates:
            raise TieUnresolvable(f"no rigorous path of {word} peaks at t_{j}")
        chosen = _choose(candidates, canonical, j)
        gammas[j] = chosen
        rest.extend(p for p in candidates if p is not chosen)

    shapes = expected_leftovers(word.rank, witness.delta, witness.k)
    leftovers: Dict[str, RigorousPath] = {}
    for path in rest:
        labels = [label for label, wires in shapes.items() if wires == path.wires]
        if not labels:
            raise TieUnresolvable(f"leftover path {path.label} of {word} has no label")
        leftovers[labels[0]] = path
    ordered = dict(sorted(leftovers.items(), key=lambda item: int(item[0])))
    logger.debug(f"{word}: leftovers {[p.label for p in ordered.values()]}")
    return GammaSelection(gammas, ordered, witness.delta, witness.k)


def render_text_grid(diagram: WiringDiagram) -> str:
    """Debug dump: wire labels by track for every slab, with the node in between."""
    lines = []
    width = len(str(diagram.rank + 1)) + 1
    for s, order in enumerate(diagram.slab_order):
        lines.append("  ".join(f"l{w}".rjust(width) for w in order))
        if s < diagram.size:
            a, b = diagram.node_wires[s]
            column = diagram.node_column[s]
            lines.append(f"-- t{s + 1}: column {column}, l{a} x l{b}")
    return "\n".join(lines)
