"""The disk potential of a string polytope as a formal Laurent polynomial."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Tuple

import sympy as sp

from .exceptions import NotSmallIndices
from .logger import get_logger
from .moves_index import has_small_indices
from .string_polytope import lambda_rows_m
from .weyl_words import ReducedWord, format_word
from .wiring import enumerate_rigorous_paths

logger = get_logger(__name__)

# (y exponents, q exponents)
Term = Tuple[Tuple[int, ...], Tuple[int, ...]]

FORMATS = ("text", "json")


@dataclass(frozen=True)
class LaurentPotential:
    """A sum of monomials ``q^{q_exp} y^{y_exp}`` in a fixed order.

    Attributes:
        word: The word the potential belongs to
        terms: Path terms first, then one term per node
    """

    word: ReducedWord
    terms: Tuple[Term, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def to_dict(self) -> dict:
        return {
            "word": format_word(self.word),
            "terms": [{"y": list(y), "q": list(q)} for y, q in self.terms],
            "text": render_text(self),
        }

    def to_sympy(self) -> sp.Expr:
        """The potential as a sympy expression in ``y1..yN`` and ``q1..qn``."""
        ys = sp.symbols(f"y1:{self.word.length + 1}")
        qs = sp.symbols(f"q1:{self.word.rank + 1}")
        total = sp.Integer(0)
        for y_exp, q_exp in self.terms:
            monomial = sp.Integer(1)
            for symbol, e in zip(ys, y_exp):
                monomial *= symbol**e
            for symbol, e in zip(qs, q_exp):
                monomial *= symbol**e
            total += monomial
        return total


def disk_potential(word: ReducedWord) -> LaurentPotential:
    """``sum over paths of y^{w_gamma}`` plus ``sum over nodes of q_{i_j} y^{v_j}``.

    Path terms are ordered by maximal peak, node terms by node index.

    Raises:
        NotSmallIndices: If the word does not have small indices
    """
    if not has_small_indices(word).small:
        raise NotSmallIndices(f"the disk potential of {word} is only defined for small indices")
    paths = sorted(enumerate_rigorous_paths(word), key=lambda p: (p.max_peak, p.w_m))
    zero_q = (0,) * word.rank
    terms: List[Term] = [(path.w_m, zero_q) for path in paths]
    for v, letter in zip(lambda_rows_m(word), word.letters):
        q = tuple(1 if i == letter else 0 for i in range(1, word.rank + 1))
        terms.append((v, q))
    logger.debug(f"Disk potential of {word} has {len(terms)} terms")
    return LaurentPotential(word, tuple(terms))


def _factor(name: str, exponent: int) -> str:
    return name if exponent == 1 else f"{name}^{exponent}"


def _monomial(y_exp: Tuple[int, ...], q_exp: Tuple[int, ...]) -> str:
    numerator = [_factor(f"q{i}", e) for i, e in enumerate(q_exp, start=1) if e > 0]
    numerator += [_factor(f"y{i}", e) for i, e in enumerate(y_exp, start=1) if e > 0]
    denominator = [_factor(f"y{i}", -e) for i, e in enumerate(y_exp, start=1) if e < 0]
    top = "*".join(numerator) or "1"
    if not denominator:
        return top
    bottom = denominator[0] if len(denominator) == 1 else f"({'*'.join(denominator)})"
    return f"{top}/{bottom}"


def render_text(potential: LaurentPotential) -> str:
    """Text form such as ``"y1 + q1/y1"``."""
    return " + ".join(_monomial(y, q) for y, q in potential.terms)


def render(potential: LaurentPotential, fmt: str = "text") -> str:
    """Render as text or as a JSON document."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    if fmt == "text":
        return render_text(potential)
    return json.dumps(potential.to_dict())
