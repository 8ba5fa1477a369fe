"""Simplicial fans, Bott tower fans, primitive collections and divisor criteria.

Two fan representations share one query surface (``rays``, ``labels``,
``is_cone``, ``locate``, ``star_subdivision``):

* :class:`Fan` lists its maximal cones explicitly and locates vectors by solving
  over each cone with sympy. It is used for small fans such as the Hirzebruch
  surface.
* :class:`TowerFan` is a Bott tower fan followed by a sequence of star
  subdivisions. Its ``2^N`` cones are never stored: membership is decided by
  primitive collections and vectors are located by a triangular solve.

All fans here are complete, simplicial and pure. Completeness is assumed and
not checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import sympy as sp

from .config import default_settings
from .exceptions import (
    DimensionCapExceeded,
    NonSmoothStar,
    NotBottData,
    OutsideSupport,
    SingularCone,
    TauNotInFan,
)
from .logger import get_logger
from .string_polytope import HPolytope, Row

logger = get_logger(__name__)

Vector = Tuple[int, ...]
Cone = Tuple[int, ...]
Collection = FrozenSet[int]


def _add(vectors: Iterable[Sequence[int]], d: int) -> Vector:
    total = [0] * d
    for vector in vectors:
        for i, x in enumerate(vector):
            total[i] += x
    return tuple(total)


def _fraction(value: sp.Expr) -> Fraction:
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


@dataclass(frozen=True)
class Fan:
    """A fan given by rays and maximal cones.

    Attributes:
        rays: Primitive integer ray generators
        max_cones: Sorted ray-index tuples, one per maximal cone
        labels: Display names of the rays (defaults to u1, u2, ...)
    """

    rays: Tuple[Vector, ...]
    max_cones: Tuple[Cone, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"u{i}" for i in range(1, len(self.rays) + 1)))
        cones = tuple(tuple(sorted(c)) for c in self.max_cones)
        object.__setattr__(self, "max_cones", cones)

    @property
    def dimension(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def indices(self, labels: Iterable[str]) -> FrozenSet[int]:
        return frozenset(self.index(label) for label in labels)

    def is_cone(self, rays: Iterable[int]) -> bool:
        wanted = set(rays)
        return any(wanted <= set(cone) for cone in self.max_cones)

    def locate(self, u: Sequence[int]) -> Dict[int, Fraction]:
        """Coefficients of u over the first maximal cone that contains it.

        Raises:
            SingularCone: If a maximal cone is not full-dimensional
            OutsideSupport: If no maximal cone contains u
        """
        target = sp.Matrix(list(u))
        for cone in self.max_cones:
            inverse = _cone_inverse(self, cone)
            coefficients = [_fraction(c) for c in inverse * target]
            if all(c >= 0 for c in coefficients):
                return {ray: c for ray, c in zip(cone, coefficients) if c}
        raise OutsideSupport(f"{tuple(u)} lies in no cone of the fan")

    def star_subdivision(self, tau: Iterable[int], label: str = "") -> "Fan":
        """Subdivide every maximal cone containing tau at the new ray ``u_tau``.

        Raises:
            TauNotInFan: If tau is not a cone of the fan
            NonSmoothStar: If some maximal cone containing tau is not smooth
        """
        tau_set = frozenset(tau)
        if not tau_set or not self.is_cone(tau_set):
            raise TauNotInFan(f"{self.describe(tau_set)} is not a cone of the fan")
        new_index = len(self.rays)
        cones: List[Cone] = []
        for cone in self.max_cones:
            if not tau_set <= set(cone):
                cones.append(cone)
                continue
            if abs(_cone_matrix(self, cone).det()) != 1:
                raise NonSmoothStar(f"cone {self.describe(cone)} containing tau is not smooth")
            for ray in tau_set:
                cones.append(tuple(sorted((set(cone) - {ray}) | {new_index})))
        u = _add((self.rays[i] for i in tau_set), self.dimension)
        name = label or f"u{new_index + 1}"
        logger.debug(f"Star subdivision at {self.describe(tau_set)} adds {name} = {u}")
        return Fan(self.rays + (u,), tuple(cones), self.labels + (name,))

    def describe(self, rays: Iterable[int]) -> str:
        return "{" + ", ".join(self.labels[i] for i in sorted(rays)) + "}"

    def to_dict(self) -> dict:
        return {
            "d": self.dimension,
            "rays": [list(r) for r in self.rays],
            "labels": list(self.labels),
            "max_cones": [list(c) for c in self.max_cones],
        }


@lru_cache(maxsize=None)
def _cone_matrix(fan: Fan, cone: Cone) -> sp.Matrix:
    return sp.Matrix([list(fan.rays[i]) for i in cone]).T


@lru_cache(maxsize=None)
def _cone_inverse(fan: Fan, cone: Cone) -> sp.Matrix:
    matrix = _cone_matrix(fan, cone)
    if matrix.rows != matrix.cols or matrix.det() == 0:
        raise SingularCone(f"cone {fan.describe(cone)} is not full-dimensional")
    return matrix.inv()


@dataclass(frozen=True)
class TowerFan:
    """A Bott tower fan with a history of star subdivisions.

    Ray indices run over ``v_1..v_N`` (0..N-1), ``w_1..w_N`` (N..2N-1) and then the
    subdivision rays in the order they were added.

    Attributes:
        v: The v-columns, lower triangular with -1 on the diagonal
        w: The w-columns, lower triangular with +1 on the diagonal
        subdivisions: ``(tau, label)`` for each star subdivision, in order
        collections: The current primitive collections
    """

    v: Tuple[Vector, ...]
    w: Tuple[Vector, ...]
    subdivisions: Tuple[Tuple[Collection, str], ...]
    collections: FrozenSet[Collection]

    @property
    def rank(self) -> int:
        return len(self.v)

    @property
    def dimension(self) -> int:
        return len(self.v)

    @property
    def rays(self) -> Tuple[Vector, ...]:
        return _tower_rays(self)

    @property
    def labels(self) -> Tuple[str, ...]:
        n = self.rank
        base = tuple(f"v{j}" for j in range(1, n + 1)) + tuple(f"w{j}" for j in range(1, n + 1))
        return base + tuple(label for _, label in self.subdivisions)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def indices(self, labels: Iterable[str]) -> FrozenSet[int]:
        return frozenset(self.index(label) for label in labels)

    def describe(self, rays: Iterable[int]) -> str:
        labels = self.labels
        return "{" + ", ".join(labels[i] for i in sorted(rays)) + "}"

    def is_cone(self, rays: Iterable[int]) -> bool:
        """A set spans a cone iff it contains no primitive collection."""
        wanted = frozenset(rays)
        return not any(p <= wanted for p in self.collections)

    def locate(self, u: Sequence[int]) -> Dict[int, Fraction]:
        """Coefficients of u over its minimal cone.

        The Bott cone is found row by row: a non-negative residual at row j is
        taken by ``w_j`` and a negative one by ``v_j``. Each subdivision is then
        replayed on the coefficients.
        """
        n = self.rank
        if len(u) != n:
            raise OutsideSupport(f"vector of length {len(u)} in a fan of dimension {n}")
        residual = [Fraction(x) for x in u]
        coefficients: Dict[int, Fraction] = {}
        for j in range(n):
            r = residual[j]
            if r == 0:
                continue
            index, column = (n + j, self.w[j]) if r > 0 else (j, self.v[j])
            c = abs(r)
            coefficients[index] = c
            for i in range(j, n):
                residual[i] -= c * column[i]
        for step, (tau, _) in enumerate(self.subdivisions):
            if tau <= coefficients.keys():
                smallest = min(coefficients[ray] for ray in tau)
                for ray in tau:
                    coefficients[ray] -= smallest
                    if coefficients[ray] == 0:
                        del coefficients[ray]
                coefficients[2 * n + step] = smallest
        return coefficients

    def star_subdivision(self, tau: Iterable[int], label: str = "") -> "TowerFan":
        """Subdivide at tau, updating the primitive collections.

        Raises:
            TauNotInFan: If tau is not a cone of the fan
        """
        tau_set = frozenset(tau)
        if not tau_set or not self.is_cone(tau_set):
            raise TauNotInFan(f"{self.describe(tau_set)} is not a cone of the fan")
        new_index = len(self.labels)
        name = label or f"u{new_index + 1}"
        updated = pc_after_star(self.collections, tau_set, new_index)
        logger.debug(f"Star subdivision at {self.describe(tau_set)} adds {name}")
        return TowerFan(self.v, self.w, self.subdivisions + ((tau_set, name),), updated)

    def max_cones(self) -> Tuple[Cone, ...]:
        """Maximal cones, listed only up to ``Settings.fan_materialize_max_rank``.

        Raises:
            DimensionCapExceeded: If the rank is above the cap
        """
        cap = default_settings().fan_materialize_max_rank
        if self.rank > cap:
            raise DimensionCapExceeded(
                f"refusing to list 2^{self.rank} cones (cap is rank {cap})", limit=cap
            )
        n = self.rank
        cones: List[Cone] = [
            tuple(sorted(j if pick else n + j for j, pick in enumerate(choice)))
            for choice in product((False, True), repeat=n)
        ]
        for step, (tau, _) in enumerate(self.subdivisions):
            new_index = 2 * n + step
            split: List[Cone] = []
            for cone in cones:
                if tau <= set(cone):
                    split.extend(tuple(sorted((set(cone) - {ray}) | {new_index})) for ray in tau)
                else:
                    split.append(cone)
            cones = split
        return tuple(sorted(cones))

    def to_fan(self) -> Fan:
        """Materialize the explicit fan."""
        return Fan(self.rays, self.max_cones(), self.labels)

    def to_dict(self) -> dict:
        data: dict = {
            "d": self.dimension,
            "rays": [list(r) for r in self.rays],
            "labels": list(self.labels),
            "primitive_collections": sorted(
                sorted(self.labels[i] for i in p) for p in self.collections
            ),
        }
        if self.rank <= default_settings().fan_materialize_max_rank:
            data["max_cones"] = [list(c) for c in self.max_cones()]
        return data


@lru_cache(maxsize=None)
def _tower_rays(fan: TowerFan) -> Tuple[Vector, ...]:
    rays: List[Vector] = list(fan.v) + list(fan.w)
    for tau, _ in fan.subdivisions:
        rays.append(_add((rays[i] for i in tau), fan.dimension))
    return tuple(rays)


AnyFan = Union[Fan, TowerFan]


@dataclass(frozen=True)
class Divisor:
    """A torus-invariant divisor ``sum a_rho D_rho``.

    Attributes:
        coeffs: ``a_rho`` for each ray, aligned with the fan's ray order
    """

    coeffs: Tuple[int, ...]

    @classmethod
    def from_labels(cls, fan: AnyFan, values: Mapping[str, int]) -> "Divisor":
        """Build a divisor from ``{label: coefficient}``; missing rays get 0."""
        unknown = set(values) - set(fan.labels)
        if unknown:
            raise KeyError(f"unknown ray labels: {sorted(unknown)}")
        return cls(tuple(int(values.get(label, 0)) for label in fan.labels))

    def __getitem__(self, index: int) -> int:
        return self.coeffs[index]

    def __sub__(self, other: "Divisor") -> "Divisor":
        return Divisor(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))


@dataclass(frozen=True)
class Violation:
    """A primitive collection on which the support-function inequality fails.

    Attributes:
        collection: Labels of the primitive collection P
        lhs_terms: ``(label, -c a)`` for each ray of the cone containing the sum of P
        rhs_terms: ``(label, phi(u_x))`` for each x in P
    """

    collection: Tuple[str, ...]
    lhs_terms: Tuple[Tuple[str, Fraction], ...]
    rhs_terms: Tuple[Tuple[str, Fraction], ...]

    @property
    def lhs(self) -> Fraction:
        return sum((value for _, value in self.lhs_terms), Fraction(0))

    @property
    def rhs(self) -> Fraction:
        return sum((value for _, value in self.rhs_terms), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "collection": list(self.collection),
            "lhs_terms": [[label, str(value)] for label, value in self.lhs_terms],
            "rhs_terms": [[label, str(value)] for label, value in self.rhs_terms],
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


@dataclass(frozen=True)
class BasepointCheck:
    """Outcome of the primitive-collection test for basepoint freeness."""

    free: bool
    violations: Tuple[Violation, ...]

    @property
    def violation(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None


def is_cone_in_fan(fan: AnyFan, rays: Iterable[int]) -> bool:
    """Whether the rays span a cone of the fan (the empty set spans the zero cone)."""
    return fan.is_cone(rays)


def primitive_collections(fan: AnyFan) -> Set[Collection]:
    """All minimal non-faces of a simplicial fan, computed from the definition.

    Candidates grow one ray at a time from known faces, so a set is examined
    only when every subset one smaller is a face.
    """
    if isinstance(fan, TowerFan):
        fan = fan.to_fan()
    ray_count = len(fan.rays)
    faces: Set[Collection] = {frozenset([i]) for i in range(ray_count)}
    found: Set[Collection] = set()
    layer = faces
    for size in range(2, fan.dimension + 2):
        next_layer: Set[Collection] = set()
        for face in layer:
            for ray in range(max(face) + 1, ray_count):
                candidate = face | {ray}
                if any(candidate - {x} not in faces for x in candidate):
                    continue
                if fan.is_cone(candidate):
                    next_layer.add(candidate)
                else:
                    found.add(candidate)
        faces |= next_layer
        layer = next_layer
        if not layer:
            break
    return found


def pc_after_star(
    collections: Iterable[Collection], tau: Collection, new_ray: int
) -> FrozenSet[Collection]:
    """Primitive collections after a star subdivision at tau.

    The result is the set of minimal elements of ``{tau}``, the old collections
    that do not contain tau, and ``(P - tau) | {new_ray}`` for every old P meeting tau.
    """
    candidates: Set[Collection] = {frozenset(tau)}
    for p in collections:
        if not tau <= p:
            candidates.add(p)
        if p & tau:
            candidates.add((p - tau) | {new_ray})
    minimal = {c for c in candidates if not any(other < c for other in candidates)}
    return frozenset(minimal)


def star_subdivision(fan: AnyFan, tau: Iterable[int], label: str = "") -> AnyFan:
    """Star subdivision of a fan at a cone."""
    return fan.star_subdivision(tau, label)


def support_value(fan: AnyFan, divisor: Divisor, u: Sequence[int]) -> Fraction:
    """``phi_D(u) = -sum c_rho a_rho`` over a cone containing u.

    Raises:
        OutsideSupport: If u lies in no cone
    """
    return -sum((c * divisor[ray] for ray, c in fan.locate(u).items()), Fraction(0))


def _explicit(fan: AnyFan) -> Fan:
    return fan.to_fan() if isinstance(fan, TowerFan) else fan


def cartier_data(fan: AnyFan, divisor: Divisor) -> Dict[Cone, Tuple[Fraction, ...]]:
    """Solve ``<m_sigma, u_rho> = -a_rho`` on every maximal cone.

    Raises:
        SingularCone: If some maximal cone is not full-dimensional
    """
    explicit = _explicit(fan)
    data: Dict[Cone, Tuple[Fraction, ...]] = {}
    for cone in explicit.max_cones:
        matrix = _cone_matrix(explicit, cone).T
        if matrix.rows != matrix.cols or matrix.det() == 0:
            raise SingularCone(f"cone {explicit.describe(cone)} is not full-dimensional")
        rhs = sp.Matrix([-divisor[ray] for ray in cone])
        data[cone] = tuple(_fraction(x) for x in matrix.LUsolve(rhs))
    return data


def polytope_of_divisor(fan: AnyFan, divisor: Divisor) -> HPolytope:
    """``P_D = {m : <m, u_rho> >= -a_rho for every ray}``."""
    rows = tuple(
        Row(tuple(Fraction(x) for x in ray), Fraction(divisor[i]), f"ray:{label}")
        for i, (ray, label) in enumerate(zip(fan.rays, fan.labels))
    )
    return HPolytope(rows, "m", fan.dimension)


def _collections_of(fan: AnyFan) -> Iterable[Collection]:
    if isinstance(fan, TowerFan):
        return fan.collections
    return primitive_collections(fan)


def is_basepoint_free(
    fan: AnyFan, divisor: Divisor, collections: Optional[Iterable[Collection]] = None
) -> BasepointCheck:
    """Test ``phi_D(sum P) >= sum phi_D(x)`` for every primitive collection P.

    Every failing collection is reported.
    """
    labels = fan.labels
    pcs = sorted(
        collections if collections is not None else _collections_of(fan),
        key=lambda p: sorted(p),
    )
    violations: List[Violation] = []
    for p in pcs:
        total = _add((fan.rays[x] for x in p), fan.dimension)
        located = fan.locate(total)
        lhs_terms = tuple((labels[ray], -c * divisor[ray]) for ray, c in sorted(located.items()))
        rhs_terms = tuple((labels[x], Fraction(-divisor[x])) for x in sorted(p))
        violation = Violation(tuple(labels[x] for x in sorted(p)), lhs_terms, rhs_terms)
        if violation.lhs < violation.rhs:
            logger.debug(
                f"Collection {fan.describe(p)} violates: {violation.lhs} < {violation.rhs}"
            )
            violations.append(violation)
    return BasepointCheck(not violations, tuple(violations))


def cartier_data_in_polytope(fan: AnyFan, divisor: Divisor) -> bool:
    """Criterion (2): every ``m_sigma`` lies in ``P_D``."""
    polytope = polytope_of_divisor(fan, divisor)
    return all(polytope.contains(m) for m in cartier_data(fan, divisor).values())


def bott_fan(v_columns: Sequence[Sequence[int]], w_columns: Sequence[Sequence[int]]) -> TowerFan:
    """The Bott tower fan with rays ``v_j`` and ``w_j``.

    Its maximal cones are ``{v_j : j in S} | {w_j : j not in S}`` and its primitive
    collections are the N pairs ``{v_j, w_j}``.

    Raises:
        NotBottData: If the columns are not lower triangular with diagonals -1 and +1
    """
    n = len(v_columns)
    if len(w_columns) != n or n == 0:
        raise NotBottData(f"expected two non-empty column lists of equal length, got {n}")
    v = tuple(tuple(int(x) for x in col) for col in v_columns)
    w = tuple(tuple(int(x) for x in col) for col in w_columns)
    for name, columns, diagonal in (("v", v, -1), ("w", w, 1)):
        for j, col in enumerate(columns):
            if len(col) != n:
                raise NotBottData(f"{name}{j + 1} has length {len(col)}, expected {n}")
            if any(col[i] for i in range(j)):
                raise NotBottData(f"{name}{j + 1} has entries above the diagonal")
            if col[j] != diagonal:
                raise NotBottData(f"{name}{j + 1} has diagonal entry {col[j]}, expected {diagonal}")
    collections = frozenset(frozenset((j, n + j)) for j in range(n))
    return TowerFan(v, w, (), collections)


def _tower_is_smooth(fan: TowerFan) -> bool:
    """Structural smoothness check that never lists the ``2^N`` cones."""
    n = fan.rank
    for name, columns, diagonal in (("v", fan.v, -1), ("w", fan.w, 1)):
        for j, col in enumerate(columns):
            if len(col) != n or col[j] != diagonal or any(col[i] for i in range(j)):
                logger.debug(f"Column {name}{j + 1} is not unimodular Bott data")
                return False
    collections = frozenset(frozenset((j, n + j)) for j in range(n))
    for step, (tau, label) in enumerate(fan.subdivisions):
        if not tau or any(p <= tau for p in collections):
            logger.debug(f"Subdivision {label} is not at a cone")
            return False
        collections = pc_after_star(collections, tau, 2 * n + step)
    if collections != fan.collections:
        logger.debug("Primitive collections do not match the subdivision history")
        return False
    return True


def is_smooth(fan: AnyFan) -> bool:
    """Whether every maximal cone is generated by a lattice basis.

    Tower fans above ``Settings.fan_materialize_max_rank`` are checked
    structurally: the Bott columns must be unimodular and every subdivision must
    happen at a cone of the fan before it. Subdivision rays are sums of their
    cone's rays, so smoothness is preserved.
    """
    if isinstance(fan, TowerFan):
        if fan.rank > default_settings().fan_materialize_max_rank:
            return _tower_is_smooth(fan)
        fan = fan.to_fan()
    for cone in fan.max_cones:
        matrix = _cone_matrix(fan, cone)
        if matrix.rows != matrix.cols or abs(matrix.det()) != 1:
            logger.debug(f"Cone {fan.describe(cone)} is not smooth")
            return False
    return True


def check_fan(fan: AnyFan) -> bool:
    """Wall check for complete simplicial fans.

    Every codimension-one face of a maximal cone must lie in exactly two maximal
    cones whose remaining rays sit on opposite sides of the wall.
    """
    explicit = _explicit(fan)
    d = explicit.dimension
    walls: Dict[Cone, List[int]] = {}
    for cone in explicit.max_cones:
        if len(cone) != d:
            return False
        for ray in cone:
            wall = tuple(r for r in cone if r != ray)
            walls.setdefault(wall, []).append(ray)
    for wall, opposite in walls.items():
        if len(opposite) != 2:
            logger.debug(f"Wall {explicit.describe(wall)} lies in {len(opposite)} cones")
            return False
        if wall:
            normal = sp.Matrix([list(explicit.rays[r]) for r in wall]).nullspace()
            if len(normal) != 1:
                return False
            signs = [(sp.Matrix([list(explicit.rays[r])]) * normal[0])[0] for r in opposite]
        else:
            signs = [explicit.rays[r][0] for r in opposite]
        if not signs[0] * signs[1] < 0:
            return False
    return True


def hirzebruch_fan(a: int) -> Fan:
    """The fan of the Hirzebruch surface H_a with rays ``(-1, a), (0, -1), (1, 0), (0, 1)``."""
    rays = ((-1, a), (0, -1), (1, 0), (0, 1))
    return Fan(rays, ((2, 3), (1, 2), (0, 1), (0, 3)))

