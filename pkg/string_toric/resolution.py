"""Bott data, the resolution fan and the small-resolution verdict.

For a word with small indices the designated paths ``gamma_j`` give the w-columns
and the lambda-rows give the v-columns of a Bott tower fan. Each leftover path is
then added as a star subdivision ray. The verdict checks that the result is
smooth, that its rays are the facet normals of the string polytope and that the
divisor of the weight is basepoint free.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .config import Settings, default_settings
from .exceptions import NotRegular, NotSmallIndices, RedundantRow, RelationFailed
from .logger import get_logger
from .moves_index import (
    Witness,
    best_witness,
    class_representative,
    has_small_indices,
    normalize,
)
from .string_polytope import (
    WeightLike,
    WeightVector,
    as_weight,
    lambda_rows_m,
    primitive,
    string_polytope,
    verify_facets,
)
from .toric_fan import (
    BasepointCheck,
    Divisor,
    TowerFan,
    Violation,
    bott_fan,
    is_basepoint_free,
    is_smooth,
)
from .weyl_words import ReducedWord, format_word
from .wiring import GammaSelection, node_relabeling, relabel_vector, select_gamma

logger = get_logger(__name__)

VERIFIED = "verified"
HEURISTIC = "heuristic"
REFUTED = "refuted"

# A term of a relation: (ray label, coefficient).
Term = Tuple[str, int]


@dataclass(frozen=True)
class BottData:
    """The Bott tower fan of a word together with how it was built.

    The fan lives on ``word``, which is ``i_delta(0, ..., 0, k)`` whenever the
    (normalised) input is 2-move equivalent to it, so ray labels such as ``v4`` or
    ``w~2`` refer to its nodes. ``node_map`` carries node j of ``word`` to the
    node of ``source`` where the same wires cross.

    Attributes:
        word: The word the fan is built from
        witness: The witness used for labelling, ending in D
        selection: Designated and leftover paths of ``word``
        fan: The Bott tower fan
        involution_applied: Whether the input word was mirrored first
        small: Whether the input word has small indices
        source: The input word, mirrored when ``involution_applied``
        node_map: Node relabeling from ``word`` to ``source``
    """

    word: ReducedWord
    witness: Witness
    selection: GammaSelection
    fan: TowerFan
    involution_applied: bool
    small: bool
    source: ReducedWord
    node_map: Dict[int, int]

    def to_source(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """An m-coordinate vector of ``word`` in the coordinates of ``source``."""
        return relabel_vector(vector, self.node_map)


def _witness_for(word: ReducedWord, require_small: bool) -> Tuple[Witness, bool]:
    result = has_small_indices(word)
    if result.small and result.witness is not None:
        return result.witness, True
    if require_small:
        raise NotSmallIndices(f"{word} has no small indices")
    witness = best_witness(word)
    if witness is None:
        raise NotSmallIndices(f"no delta gives {word} an index of the form (0, ..., 0, k)")
    logger.warning(f"{word} has no small indices, continuing with witness {witness.delta}")
    return witness, False


def bott_data(word: ReducedWord, require_small: bool = True) -> BottData:
    """Build the Bott data of a word, mirroring it first when its witness ends in A.

    The fan is built on ``i_delta(0, ..., 0, k)`` when the word is 2-move
    equivalent to it and the node relabeling to the word is kept alongside.

    Raises:
        NotSmallIndices: If the word has no suitable witness
        TieUnresolvable: If the designated paths cannot be chosen
    """
    witness, small = _witness_for(word, require_small)
    target, target_witness, applied = normalize(word, witness)
    base = class_representative(target, target_witness)
    selection = select_gamma(base, target_witness, require_small=False)
    v = lambda_rows_m(base)
    w = [selection.gammas[j].w_m for j in range(1, base.length + 1)]
    fan = bott_fan(v, w)
    node_map = node_relabeling(base, target)
    logger.debug(
        f"Bott data of {target} on {base}: witness {target_witness.delta}, k={target_witness.k}"
    )
    return BottData(base, target_witness, selection, fan, applied, small, target, node_map)


def bott_manifold_fan(word: ReducedWord) -> TowerFan:
    """The Bott tower fan with columns ``v_j`` and ``w_j = w_{gamma_j}``."""
    return bott_data(word).fan


@dataclass(frozen=True)
class TauCones:
    """The cones subdivided to build the resolution fan, as ray labels.

    Attributes:
        tau: The cone for the first leftover path
        tau2: The cone for the second leftover path, when there is one
    """

    tau: Tuple[str, ...]
    tau2: Optional[Tuple[str, ...]] = None

    @property
    def cones(self) -> List[Tuple[str, ...]]:
        return [self.tau] + ([self.tau2] if self.tau2 else [])


def _tau_formulas(n: int, size: int, delta: str, k: int) -> Dict[str, Tuple[str, ...]]:
    """Case formulas keyed by the leftover label they produce."""
    if k < 1 or n < 2:
        return {}
    if delta[-2] == "A":
        if k >= n - 1:
            return {}
        return {"0": (f"w{size - (n + k)}", f"v{size - n}", f"w{size - k + 1}")}
    formulas: Dict[str, Tuple[str, ...]] = {}
    if n - k - 1 >= 1:
        formulas["0"] = (f"w{size - (n + k)}", f"v{size - 2 * k}", f"w{size - k + 1}")
    if k == 2:
        formulas["2"] = (f"w{size - 3}", f"v{size - 2}", f"w{size - 1}")
    return formulas


def tau_cones(word: ReducedWord) -> Optional[TauCones]:
    """The cones tau and tau_2 of a word with small indices.

    Returns None when the word has no leftover path (k = 0 or the path count
    equals the length).
    """
    data = bott_data(word)
    formulas = _tau_formulas(data.word.rank, data.word.length, data.witness.delta, data.witness.k)
    ordered = [formulas[label] for label in sorted(formulas, key=int)]
    if not ordered:
        return None
    return TauCones(ordered[0], ordered[1] if len(ordered) > 1 else None)


@dataclass(frozen=True)
class ResolutionFan:
    """The fan obtained from the Bott tower by subdividing at each leftover path.

    Attributes:
        data: The underlying Bott data
        fan: The subdivided fan
        new_rays: Leftover label to the ray label it became ('0' -> 'w~0')
    """

    data: BottData
    fan: TowerFan
    new_rays: Dict[str, str]


def _vector_sum(fan: TowerFan, labels: Sequence[str]) -> Tuple[int, ...]:
    total = [0] * fan.dimension
    for label in labels:
        for i, x in enumerate(fan.rays[fan.index(label)]):
            total[i] += x
    return tuple(total)


def hat_sigma(word: ReducedWord, require_small: bool = True) -> ResolutionFan:
    """Subdivide the Bott tower fan once per leftover path.

    For words with small indices the cones come from the case formulas and each
    cone's ray sum must equal the leftover path vector. Otherwise every leftover
    is located in the current fan and its cone is subdivided when all
    coefficients are 1.

    Raises:
        RelationFailed: If a leftover path is not the sum of the rays of a cone
    """
    data = bott_data(word, require_small=require_small)
    fan = data.fan
    leftovers = data.selection.leftovers
    new_rays: Dict[str, str] = {}
    if data.small:
        formulas = _tau_formulas(
            data.word.rank, data.word.length, data.witness.delta, data.witness.k
        )
        for label, path in leftovers.items():
            if label not in formulas:
                raise RelationFailed(f"no cone formula for leftover {path.label}", relation=label)
            tau = formulas[label]
            relation = f"w~{label} = {' + '.join(tau)}"
            if _vector_sum(fan, tau) != path.w_m:
                logger.error(f"{data.word}: {relation} fails")
                raise RelationFailed(f"{relation} does not hold for {data.word}", relation=relation)
            fan = fan.star_subdivision(fan.indices(tau), f"w~{label}")
            new_rays[label] = f"w~{label}"
    else:
        for label, path in leftovers.items():
            located = fan.locate(path.w_m)
            if any(c != 1 for c in located.values()):
                relation = f"w~{label} = " + " + ".join(
                    f"{c}*{fan.labels[ray]}" for ray, c in sorted(located.items())
                )
                raise RelationFailed(
                    f"leftover {path.label} is not a sum of cone generators", relation=relation
                )
            fan = fan.star_subdivision(located.keys(), f"w~{label}")
            new_rays[label] = f"w~{label}"
    logger.debug(f"Resolution fan of {data.word} has {len(fan.rays)} rays")
    return ResolutionFan(data, fan, new_rays)


def divisor_for_weight(
    source: Union[ReducedWord, ResolutionFan], weight: WeightLike
) -> Divisor:
    """``a_{v_j} = lambda_{i_j}``; every w-ray and subdivision ray gets 0.

    The weight is given for the input word and is reversed along with it when the
    construction mirrored the word. A bare word is first resolved with
    :func:`hat_sigma`.

    Raises:
        NotRegular: If the weight is not regular
    """
    resolution = source if isinstance(source, ResolutionFan) else hat_sigma(source)
    word = resolution.data.word
    lam = as_weight(weight, word.rank)
    if not lam.regular:
        raise NotRegular(f"weight {lam.entries} is not regular")
    if resolution.data.involution_applied:
        lam = lam.reversed()
    fan = resolution.fan
    coeffs = [0] * len(fan.rays)
    for j, letter in enumerate(word.letters):
        coeffs[j] = lam[letter - 1]
    return Divisor(tuple(coeffs))


@dataclass(frozen=True)
class Relation:
    """A linear identity among ray vectors, ``sum lhs = sum rhs``."""

    lhs: Tuple[Term, ...]
    rhs: Tuple[Term, ...]

    @classmethod
    def parse(cls, text: str) -> "Relation":
        """Parse ``"w1 + v1 = w~2 + v4"``; ``"0"`` stands for the empty sum."""
        left, right = text.split("=")
        return cls(_parse_side(left), _parse_side(right))

    def __str__(self) -> str:
        return f"{_format_side(self.lhs)} = {_format_side(self.rhs)}"


_TERM = re.compile(r"^(?:(\d+)\*)?([a-z]~?\d+)$")


def _parse_side(text: str) -> Tuple[Term, ...]:
    terms: List[Term] = []
    for part in text.split("+"):
        part = part.strip()
        if part == "0":
            continue
        match = _TERM.match(part)
        if not match:
            raise ValueError(f"cannot parse relation term {part!r}")
        terms.append((match.group(2), int(match.group(1) or 1)))
    return tuple(terms)


def _format_side(terms: Sequence[Term]) -> str:
    if not terms:
        return "0"
    return " + ".join(label if c == 1 else f"{c}*{label}" for label, c in terms)


def check_relation(fan: TowerFan, relation: Relation) -> bool:
    """Whether the identity holds as an exact vector equation."""

    def side(terms: Sequence[Term]) -> Tuple[int, ...]:
        total = [0] * fan.dimension
        for label, c in terms:
            for i, x in enumerate(fan.rays[fan.index(label)]):
                total[i] += c * x
        return tuple(total)

    return side(relation.lhs) == side(relation.rhs)


def verify_relations(word: ReducedWord) -> List[Relation]:
    """Check that every leftover path is the ray sum of its cone.

    Raises:
        RelationFailed: If some identity fails
    """
    resolution = hat_sigma(word)
    fan = resolution.fan
    verified = []
    for tau, new_label in resolution.fan.subdivisions:
        relation = Relation(((new_label, 1),), tuple((fan.labels[i], 1) for i in sorted(tau)))
        if not check_relation(fan, relation):
            raise RelationFailed(f"{relation} does not hold", relation=str(relation))
        verified.append(relation)
    return verified


def ledger_relations(word: ReducedWord) -> List[Relation]:
    """The primitive relation of every primitive collection of the resolution fan.

    For a collection P the relation reads ``sum of P = sum c_rho u_rho`` over the
    cone that contains the sum.
    """
    fan = hat_sigma(word).fan
    relations = []
    for p in sorted(fan.collections, key=lambda c: sorted(c)):
        total = [0] * fan.dimension
        for x in p:
            for i, value in enumerate(fan.rays[x]):
                total[i] += value
        located = fan.locate(total)
        relations.append(
            Relation(
                tuple((fan.labels[x], 1) for x in sorted(p)),
                tuple((fan.labels[ray], int(c)) for ray, c in sorted(located.items())),
            )
        )
    return relations


@dataclass(frozen=True)
class ResolutionVerdict:
    """End-to-end result for one word and weight.

    Attributes:
        word: The input word
        witness: The witness of the input word
        weight: The weight of the input word
        status: 'verified', 'heuristic' or 'refuted'
        smooth: Whether the resolution fan is smooth
        rays_match: Whether its rays are the facet normals of the string polytope
        bpf: Whether the divisor of the weight is basepoint free
        violations: Failing primitive collections with the compared values
        relations: Verified identities for the subdivision rays
        involution_applied: Whether the construction used the mirrored word
        fan: The resolution fan
    """

    word: ReducedWord
    witness: Witness
    weight: WeightVector
    status: str
    smooth: bool
    rays_match: bool
    bpf: bool
    violations: Tuple[Violation, ...]
    relations: Tuple[Relation, ...]
    involution_applied: bool
    fan: TowerFan

    @property
    def violation(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def to_dict(self) -> dict:
        return {
            "word": format_word(self.word),
            "witness": {"delta": self.witness.delta, "k": self.witness.k},
            "lambda": list(self.weight.entries),
            "status": self.status,
            "smooth": self.smooth,
            "rays_match": self.rays_match,
            "bpf": self.bpf,
            "violation": self.violation.to_dict() if self.violation else None,
            "relations": [str(r) for r in self.relations],
            "involution_applied": self.involution_applied,
            "rays": len(self.fan.rays),
        }


def _rays_match(data: BottData, weight: WeightVector, fan: TowerFan, settings: Settings) -> bool:
    word = data.source
    rays = {primitive(data.to_source(ray)) for ray in fan.rays}
    if word.length <= settings.facet_check_max_dim:
        try:
            report = verify_facets(word, weight)
        except RedundantRow as e:
            logger.warning(f"{word}: string polytope row {e.tag} is not a facet")
            return False
        return report.normal_set == rays
    logger.warning(
        f"{word}: dimension {word.length} is above the facet check cap, comparing row normals"
    )
    polytope = string_polytope(word, weight, "m")
    return {primitive(row.a) for row in polytope.rows} == rays


def verify_small_resolution(
    word: ReducedWord, weight: Optional[WeightLike] = None, settings: Optional[Settings] = None
) -> ResolutionVerdict:
    """Build the resolution fan of a word and certify or refute it.

    Words without small indices go through the same construction with their best
    witness and can at most be reported as heuristic.

    Args:
        word: Any reduced word with some witness
        weight: A regular weight; defaults to ``Settings.default_lambda`` everywhere
        settings: Caps and defaults; the shared defaults when omitted

    Raises:
        NotRegular: If the weight is not regular
        NotSmallIndices: If no delta gives an index of the form (0, ..., 0, k)
    """
    settings = settings or default_settings()
    if weight is None:
        weight = (settings.default_lambda,) * word.rank
    lam = as_weight(weight, word.rank)
    if not lam.regular:
        raise NotRegular(f"weight {lam.entries} is not regular")

    small = has_small_indices(word)
    resolution = hat_sigma(word, require_small=False)
    data = resolution.data
    fan = resolution.fan
    target_weight = lam.reversed() if data.involution_applied else lam

    smooth = is_smooth(fan)
    rays_match = _rays_match(data, target_weight, fan, settings)
    check: BasepointCheck = is_basepoint_free(fan, divisor_for_weight(resolution, lam))
    relations = tuple(
        Relation(((label, 1),), tuple((fan.labels[i], 1) for i in sorted(tau)))
        for tau, label in fan.subdivisions
    )
    if smooth and rays_match and check.free:
        status = VERIFIED if small.small else HEURISTIC
    else:
        status = REFUTED
    if status == HEURISTIC:
        logger.warning(f"{word}: construction succeeded without small indices")
    logger.info(
        f"{word}: {status} (smooth={smooth}, rays_match={rays_match}, bpf={check.free})"
    )
    witness = small.witness if small.witness else best_witness(word)
    assert witness is not None
    return ResolutionVerdict(
        word=word,
        witness=witness,
        weight=lam,
        status=status,
        smooth=smooth,
        rays_match=rays_match,
        bpf=check.free,
        violations=check.violations,
        relations=relations,
        involution_applied=data.involution_applied,
        fan=fan,
    )
