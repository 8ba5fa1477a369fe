"""Custom exceptions for the string_toric library.

Errors come in two families. ``ValidationError`` covers bad input (a word that is
not reduced, a weight of the wrong length, a request beyond a resource cap) and maps
to exit code 1 in the command line front end. ``InvariantError`` covers results
that contradict the theory the library implements (a missing canonical path, a
failed vector identity, an unbounded string polytope) and maps to exit code 2.
"""

from __future__ import annotations

from typing import Optional


class StringToricError(Exception):
    """Base exception for all string_toric errors.

    All custom exceptions in this library inherit from this base class,
    making it easy to catch any library error.

    Example:
        >>> try:
        ...     word = validate((1, 1, 2, 3, 2, 1), 3)
        ... except StringToricError as e:
        ...     print(f"string_toric error: {e}")
    """

    pass


class ValidationError(StringToricError):
    """Raised when an input does not satisfy an operation's preconditions.

    Example:
        >>> try:
        ...     build_word("DDD", (0, 5, 0))
        ... except ValidationError as e:
        ...     print(f"Invalid input: {e}")
    """

    pass


class InvariantError(StringToricError):
    """Raised when a computed object breaks an invariant that should always hold.

    These errors signal a bug or a case outside the proven range rather than a
    user mistake.
    """

    pass


class ConfigurationError(ValidationError):
    """Raised when there's an error with the configuration.

    This can occur when:
    - The config file is missing
    - The config file has invalid YAML syntax
    - The config file is empty
    - Field values don't pass validation

    Example:
        >>> try:
        ...     settings = load_config(Path("missing.yaml"))
        ... except ConfigurationError as e:
        ...     print(f"Config error: {e}")
    """

    pass


class WordError(ValidationError):
    """Base class for malformed reduced words."""

    pass


class InvalidLetter(WordError):
    """Raised when a word contains a letter outside ``1..n``."""

    pass


class WrongLength(WordError):
    """Raised when a word does not have ``n(n+1)/2`` letters.

    Example:
        >>> validate((1, 2), 2)
        Traceback (most recent call last):
        ...
        WrongLength: expected 3 letters for n=2, got 2
    """

    pass


class NotReduced(WordError):
    """Raised when a word of the right length is not a reduced word of w0.

    This can occur when:
    - Two adjacent equal letters cancel (s_i s_i = id)
    - Some letter swaps a pair of values that is already inverted
    """

    pass


class WeightError(ValidationError):
    """Base class for invalid weight vectors."""

    pass


class BadWeightLength(WeightError):
    """Raised when a weight vector does not have one entry per fundamental weight."""

    pass


class NotRegular(WeightError):
    """Raised when an operation needs a regular dominant weight (all entries > 0)."""

    pass


class BadPosition(ValidationError):
    """Raised when an extension position ``s`` is outside ``0..len(word)``."""

    pass


class BadBounds(ValidationError):
    """Raised when an index vector violates ``I_i <= i(i-1)/2`` or has the wrong length."""

    pass


class BadCase(ValidationError):
    """Raised when the path-count formula is asked about a case it does not cover.

    This can occur when:
    - The last entry of the delta sequence is A (apply the involution first)
    - k is negative or at least n
    - n is smaller than 2
    """

    pass


class NotSmallIndices(ValidationError):
    """Raised when a construction requires a word with small indices.

    Example:
        >>> try:
        ...     disk_potential(word)
        ... except NotSmallIndices as e:
        ...     print(f"No potential: {e}")
    """

    pass


class NotIntegral(ValidationError):
    """Raised when a lattice statement is requested for a non-integral polytope."""

    pass


class ResourceLimitError(ValidationError):
    """Raised when a computation would exceed a configured resource cap.

    Attributes:
        limit: The configured cap that was exceeded

    Example:
        >>> try:
        ...     enumerate_reduced_words(7)
        ... except ResourceLimitError as e:
        ...     print(f"Refused, cap is {e.limit}")
    """

    def __init__(self, message: str, limit: Optional[int] = None) -> None:
        """Initialize the exception with the exceeded cap.

        Args:
            message: Error message
            limit: The cap from the active settings
        """
        super().__init__(message)
        self.limit = limit


class EnumerationCapExceeded(ResourceLimitError):
    """Raised when word enumeration is asked for a rank above ``max_rank``."""

    pass


class DimensionCapExceeded(ResourceLimitError):
    """Raised when vertex enumeration exceeds ``vertex_max_dim`` or ``vertex_max_rows``."""

    pass


class BoxCapExceeded(ResourceLimitError):
    """Raised when a lattice-point bounding box holds more than ``box_max_points`` points."""

    pass


class PathError(InvariantError):
    """Base class for failures in rigorous-path bookkeeping."""

    pass


class CanonicalPathNotFound(PathError):
    """Raised when no rigorous path satisfies the canonical D-new conditions.

    Existence is guaranteed for every reduced word, so this signals a bug.
    """

    pass


class TieUnresolvable(PathError):
    """Raised when the designated path of a node cannot be determined.

    This can occur when:
    - No rigorous path has its maximal peak at the node
    - Several paths share a maximal peak, no region contains the others and
      no single candidate is a canonical D-new path
    - The leftover paths do not match the expected labelled shapes
    """

    pass


class PolytopeError(InvariantError):
    """Base class for polytope failures."""

    pass


class RedundantRow(PolytopeError):
    """Raised when a row of a string polytope is not a facet.

    Attributes:
        tag: Provenance tag of the redundant row (e.g. 'node:4')
    """

    def __init__(self, message: str, tag: str = "") -> None:
        """Initialize the exception with the offending row tag.

        Args:
            message: Error message
            tag: Row provenance tag
        """
        super().__init__(message)
        self.tag = tag


class UnboundedPolytope(PolytopeError):
    """Raised when vertex enumeration finds no vertex for a non-empty system."""

    pass


class FanError(InvariantError):
    """Base class for fan construction and evaluation failures."""

    pass


class NotBottData(FanError):
    """Raised when the v/w columns are not lower triangular with -1/+1 diagonals."""

    pass


class TauNotInFan(FanError):
    """Raised when a star subdivision is requested along a set that is not a cone."""

    pass


class NonSmoothStar(FanError):
    """Raised when a cone containing the subdivided cone is not smooth."""

    pass


class OutsideSupport(FanError):
    """Raised when a vector lies in no cone of the fan."""

    pass


class SingularCone(FanError):
    """Raised when a maximal cone's rays do not form a basis."""

    pass


class RelationFailed(InvariantError):
    """Raised when an expected linear relation among ray vectors does not hold.

    Attributes:
        relation: Human readable form of the failed identity

    Example:
        >>> try:
        ...     verify_relations(word)
        ... except RelationFailed as e:
        ...     print(f"Broken identity: {e.relation}")
    """

    def __init__(self, message: str, relation: str = "") -> None:
        """Initialize the exception with the failed identity.

        Args:
            message: Error message
            relation: The identity that failed, e.g. 'w~0 = w2 + v4 + w6'
        """
        super().__init__(message)
        self.relation = relation
