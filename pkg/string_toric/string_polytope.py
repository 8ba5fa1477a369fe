"""String cones, lambda-cones and string polytopes with exact vertex machinery.

Polytopes are stored as H-representations ``A x + b >= 0`` over
:class:`fractions.Fraction`. Vertices are found by solving every independent set
of ``d`` rows for a tight point and keeping the feasible solutions. No floating
point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy as sp

from .config import default_settings
from .exceptions import (
    BadWeightLength,
    BoxCapExceeded,
    DimensionCapExceeded,
    NotIntegral,
    NotRegular,
    RedundantRow,
    UnboundedPolytope,
    WeightError,
)
from .logger import get_logger
from .weyl_words import ReducedWord
from .wiring import build_diagram, enumerate_rigorous_paths

logger = get_logger(__name__)

Point = Tuple[Fraction, ...]
COORDS = ("t", "m")


@dataclass(frozen=True)
class WeightVector:
    """A dominant weight ``lambda_1 w_1 + ... + lambda_n w_n``.

    Attributes:
        entries: The non-negative coefficients on the fundamental weights
    """

    entries: Tuple[int, ...]

    @property
    def regular(self) -> bool:
        return all(x > 0 for x in self.entries)

    def reversed(self) -> "WeightVector":
        """The image under the Dynkin involution."""
        return WeightVector(tuple(reversed(self.entries)))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]


WeightLike = Union[WeightVector, Sequence[int]]


def as_weight(weight: WeightLike, n: int) -> WeightVector:
    """Validate a weight against rank n.

    Raises:
        BadWeightLength: If the weight does not have n entries
        WeightError: If some entry is negative
    """
    entries = tuple(int(x) for x in (weight.entries if isinstance(weight, WeightVector) else weight))
    if len(entries) != n:
        raise BadWeightLength(f"weight {entries} has {len(entries)} entries, expected {n}")
    if any(x < 0 for x in entries):
        raise WeightError(f"weight {entries} has negative entries")
    return WeightVector(entries)


def fundamental_weight(n: int, i: int) -> WeightVector:
    """The fundamental weight w_i of rank n."""
    return WeightVector(tuple(1 if j == i else 0 for j in range(1, n + 1)))


@dataclass(frozen=True)
class Row:
    """One inequality ``<a, x> + b >= 0`` with its provenance tag."""

    a: Tuple[Fraction, ...]
    b: Fraction
    tag: str = ""

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((ai * xi for ai, xi in zip(self.a, x)), Fraction(0)) + self.b


@dataclass(frozen=True)
class HPolytope:
    """An exact H-representation ``A x + b >= 0``.

    Attributes:
        rows: The inequalities
        coords: Coordinate-system tag, 't' or 'm'
        dimension: Ambient dimension d
    """

    rows: Tuple[Row, ...]
    coords: str
    dimension: int

    @property
    def A(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(r.a for r in self.rows)

    @property
    def b(self) -> Tuple[Fraction, ...]:
        return tuple(r.b for r in self.rows)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(r.value(x) >= 0 for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "coords": self.coords,
            "rows": [
                {"a": [str(v) for v in r.a], "b": str(r.b), "tag": r.tag} for r in self.rows
            ],
        }


@dataclass(frozen=True)
class VertexSet:
    """Exact vertices of a polytope, sorted lexicographically."""

    vertices: Tuple[Point, ...]
    integral: bool

    def __len__(self) -> int:
        return len(self.vertices)

    def to_list(self) -> List[List[str]]:
        return [[str(x) for x in v] for v in self.vertices]


@dataclass(frozen=True)
class LatticePoints:
    """Lattice points of a polytope, sorted lexicographically."""

    count: int
    points: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class FacetReport:
    """Result of the facet check.

    Attributes:
        normals: Primitive inner normal of every row, in row order
        tags: Row tags, aligned with normals
    """

    normals: Tuple[Tuple[int, ...], ...]
    tags: Tuple[str, ...]

    @property
    def normal_set(self) -> frozenset:
        return frozenset(self.normals)


def _vector(values: Sequence[int]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def _check_coords(coords: str) -> None:
    if coords not in COORDS:
        raise ValueError(f"coords must be 't' or 'm', got {coords!r}")


def string_cone(word: ReducedWord, coords: str = "m") -> HPolytope:
    """One row ``<w_gamma, x> >= 0`` per rigorous path.

    In m-coordinates the rows are chamber indicator vectors and in t-coordinates
    the +-1 travel vectors.
    """
    _check_coords(coords)
    rows = tuple(
        Row(_vector(path.w_m if coords == "m" else path.w_t), Fraction(0), f"path:{path.label}")
        for path in enumerate_rigorous_paths(word)
    )
    return HPolytope(rows, coords, word.length)


def lambda_rows_m(word: ReducedWord) -> List[Tuple[int, ...]]:
    """``v_j = -sum of e_k over k >= j with i_k = i_j``, the lambda-rows in m-coordinates."""
    letters = word.letters
    size = len(letters)
    return [
        tuple(-1 if k >= j and letters[k] == letters[j] else 0 for k in range(size))
        for j in range(size)
    ]


def _cartan(a: int, b: int) -> int:
    if a == b:
        return 2
    return -1 if abs(a - b) == 1 else 0


def lambda_rows_from_cartan(word: ReducedWord) -> List[Tuple[int, ...]]:
    """Lambda-rows in t-coordinates: ``t_j <= lambda_{i_j} - sum_{k>j} a_{i_j i_k} t_k``."""
    letters = word.letters
    size = len(letters)
    rows = []
    for j in range(size):
        row = [0] * size
        row[j] = -1
        for k in range(j + 1, size):
            row[k] = -_cartan(letters[j], letters[k])
        rows.append(tuple(row))
    return rows


def lambda_cone(word: ReducedWord, weight: WeightLike, coords: str = "m") -> HPolytope:
    """The lambda-cone: one row per node with constant ``lambda_{i_j}``.

    Raises:
        BadWeightLength: If the weight has the wrong length
    """
    _check_coords(coords)
    lam = as_weight(weight, word.rank)
    normals = lambda_rows_m(word) if coords == "m" else lambda_rows_from_cartan(word)
    rows = tuple(
        Row(_vector(normal), Fraction(lam[letter - 1]), f"node:{j}")
        for j, (normal, letter) in enumerate(zip(normals, word.letters), start=1)
    )
    return HPolytope(rows, coords, word.length)


def string_polytope(word: ReducedWord, weight: WeightLike, coords: str = "m") -> HPolytope:
    """The string polytope, the intersection of the string cone and the lambda-cone."""
    cone = string_cone(word, coords)
    caps = lambda_cone(word, weight, coords)
    return HPolytope(cone.rows + caps.rows, coords, word.length)


# Reduced row: (pivot column, coefficients, constant) with a 1 at the pivot.
_Reduced = Tuple[int, List[Fraction], Fraction]


def _add_row(
    stored: List[_Reduced], a: Sequence[Fraction], b: Fraction
) -> Optional[List[_Reduced]]:
    vec = list(a)
    const = b
    for col, pivot_row, pivot_const in stored:
        factor = vec[col]
        if factor:
            vec = [x - factor * y for x, y in zip(vec, pivot_row)]
            const -= factor * pivot_const
    col = next((i for i, x in enumerate(vec) if x), None)
    if col is None:
        return None
    scale = vec[col]
    vec = [x / scale for x in vec]
    const /= scale
    updated: List[_Reduced] = []
    for other_col, other_row, other_const in stored:
        factor = other_row[col]
        if factor:
            other_row = [x - factor * y for x, y in zip(other_row, vec)]
            other_const -= factor * const
        updated.append((other_col, other_row, other_const))
    updated.append((col, vec, const))
    return updated


def vertices(
    polytope: HPolytope, max_dim: Optional[int] = None, max_rows: Optional[int] = None
) -> VertexSet:
    """Exact vertex enumeration by tight row subsets.

    Args:
        polytope: A bounded H-representation
        max_dim: Override of ``Settings.vertex_max_dim``
        max_rows: Override of ``Settings.vertex_max_rows``

    Raises:
        DimensionCapExceeded: If d or m exceeds the caps
        UnboundedPolytope: If no vertex exists
    """
    settings = default_settings()
    dim_cap = settings.vertex_max_dim if max_dim is None else max_dim
    row_cap = settings.vertex_max_rows if max_rows is None else max_rows
    d = polytope.dimension
    rows = polytope.rows
    if d > dim_cap or len(rows) > row_cap:
        raise DimensionCapExceeded(
            f"vertex enumeration refused for d={d}, m={len(rows)} (caps {dim_cap}, {row_cap})",
            limit=dim_cap if d > dim_cap else row_cap,
        )
    if d == 0:
        return VertexSet(((),), True)

    found: Dict[Point, None] = {}

    def search(start: int, stored: List[_Reduced]) -> None:
        if len(stored) == d:
            point = [Fraction(0)] * d
            for col, _, const in stored:
                point[col] = -const
            if polytope.contains(point):
                found[tuple(point)] = None
            return
        for r in range(start, len(rows)):
            if len(rows) - r < d - len(stored):
                break
            extended = _add_row(stored, rows[r].a, rows[r].b)
            if extended is not None:
                search(r + 1, extended)

    search(0, [])
    if not found:
        raise UnboundedPolytope("no vertices: the system is empty or unbounded")
    points = tuple(sorted(found))
    integral = all(x.denominator == 1 for p in points for x in p)
    logger.debug(f"{len(points)} vertices in dimension {d} from {len(rows)} rows")
    return VertexSet(points, integral)


def is_integral(polytope: HPolytope) -> bool:
    """Whether every vertex has integer coordinates."""
    return vertices(polytope).integral


def _to_sympy(rows: Sequence[Sequence[Fraction]]) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in rows])


def affine_rank(points: Sequence[Point]) -> int:
    """Dimension of the affine span of a point set (-1 when empty)."""
    if not points:
        return -1
    base = points[0]
    differences = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    if not differences:
        return 0
    return int(_to_sympy(differences).rank())


def facet_rows(polytope: HPolytope, verts: Optional[VertexSet] = None) -> List[int]:
    """Indices of the rows whose tight vertices span a hyperplane."""
    verts = verts or vertices(polytope)
    d = polytope.dimension
    facets = []
    for index, row in enumerate(polytope.rows):
        tight = [v for v in verts.vertices if row.value(v) == 0]
        if affine_rank(tight) == d - 1:
            facets.append(index)
    return facets


def primitive(values: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a non-zero rational vector to the primitive integer vector on its ray."""
    denominator = 1
    for x in values:
        denominator = lcm(denominator, Fraction(x).denominator)
    integers = [int(Fraction(x) * denominator) for x in values]
    divisor = 0
    for x in integers:
        divisor = gcd(divisor, x)
    if divisor == 0:
        raise ValueError("the zero vector has no primitive generator")
    return tuple(x // divisor for x in integers)


def verify_facets(word: ReducedWord, weight: WeightLike) -> FacetReport:
    """Confirm that every row of the string polytope in m-coordinates is a facet.

    Raises:
        NotRegular: If the weight is not regular
        RedundantRow: If some row is not a facet or two rows share a normal
    """
    lam = as_weight(weight, word.rank)
    if not lam.regular:
        raise NotRegular(f"facet verification needs a regular weight, got {lam.entries}")
    polytope = string_polytope(word, lam, "m")
    facets = set(facet_rows(polytope))
    for index, row in enumerate(polytope.rows):
        if index not in facets:
            logger.error(f"Row {row.tag} of the string polytope of {word} is redundant")
            raise RedundantRow(f"row {row.tag} is not a facet", tag=row.tag)
    normals = tuple(primitive(row.a) for row in polytope.rows)
    if len(set(normals)) != len(normals):
        raise RedundantRow("two rows share a facet normal")
    return FacetReport(normals, tuple(row.tag for row in polytope.rows))


def lattice_points(polytope: HPolytope, max_points: Optional[int] = None) -> LatticePoints:
    """Enumerate lattice points inside the integer bounding box of the vertices.

    Raises:
        BoxCapExceeded: If the bounding box holds more than the cap
    """
    cap = default_settings().box_max_points if max_points is None else max_points
    verts = vertices(polytope).vertices
    d = polytope.dimension
    lows = [ceil(min(v[i] for v in verts)) for i in range(d)]
    highs = [floor(max(v[i] for v in verts)) for i in range(d)]
    box = 1
    for lo, hi in zip(lows, highs):
        box *= max(hi - lo + 1, 0)
    if box > cap:
        raise BoxCapExceeded(f"bounding box has {box} points (cap {cap})", limit=cap)

    # Each row is checked as soon as its last non-zero coordinate is assigned.
    checks: List[List[Row]] = [[] for _ in range(d)]
    for row in polytope.rows:
        support = [i for i, x in enumerate(row.a) if x]
        checks[support[-1] if support else 0].append(row)

    points: List[Tuple[int, ...]] = []
    current = [0] * d

    def assign(i: int) -> None:
        if i == d:
            points.append(tuple(current))
            return
        for value in range(lows[i], highs[i] + 1):
            current[i] = value
            partial = current[: i + 1] + [0] * (d - i - 1)
            if all(row.value(partial) >= 0 for row in checks[i]):
                assign(i + 1)
        current[i] = 0

    if d:
        assign(0)
    else:
        points.append(())
    return LatticePoints(len(points), tuple(points))


def is_reflexive_after_translation(polytope: HPolytope) -> bool:
    """Whether a lattice translate of the polytope is reflexive.

    The polytope must have a unique interior lattice point p, and every facet
    must read ``<u, x - p> >= -1`` with u primitive.

    Raises:
        NotIntegral: If some vertex is not a lattice point
    """
    verts = vertices(polytope)
    if not verts.integral:
        raise NotIntegral("reflexivity is only defined for lattice polytopes")
    d = polytope.dimension
    if affine_rank(list(verts.vertices)) != d:
        return False
    facet_indices = facet_rows(polytope, verts)
    facets = [polytope.rows[i] for i in facet_indices]
    interior = [
        p
        for p in lattice_points(polytope).points
        if all(row.value(_vector(p)) > 0 for row in facets)
    ]
    if len(interior) != 1:
        logger.debug(f"{len(interior)} interior lattice points, not reflexive")
        return False
    centre = _vector(interior[0])
    for row in facets:
        i = next(i for i, x in enumerate(row.a) if x)
        scale = Fraction(primitive(row.a)[i]) / row.a[i]
        if row.value(centre) * scale != 1:
            return False
    return True


def three_move_transfer(point: Sequence[Fraction], k: int) -> Tuple[Fraction, ...]:
    """Transfer a point across the 3-move at positions k, k+1, k+2 (1-based).

    ``(t_k, t_{k+1}, t_{k+2})`` becomes
    ``(max(t_{k+2}, t_{k+1} - t_k), t_k + t_{k+2}, min(t_k, t_{k+1} - t_{k+2}))``.
    """
    values = [Fraction(x) for x in point]
    if not 1 <= k <= len(values) - 2:
        raise ValueError(f"position {k} leaves no room for a 3-move in length {len(values)}")
    a, b, c = values[k - 1 : k + 2]
    values[k - 1 : k + 2] = [max(c, b - a), a + c, min(a, b - c)]
    return tuple(values)
