"""Command line front end: ``string-toric COMMAND [options]``.

Every command prints JSON by default, aligned text with ``--text``, and writes
to a file with ``--out`` (CSV when the name ends in ``.csv``). Errors are printed
as ``{"error": ..., "type": ...}`` with exit code 1 for invalid input and 2 for
everything else.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .config import Settings, default_settings, load_config, use_settings
from .exceptions import StringToricError, ValidationError, WeightError
from .logger import get_logger, setup_logging
from .moves_index import (
    delta_index,
    delta_witnesses,
    gp_count_formula,
    has_small_indices,
    kappa,
    table_witness,
)
from .potential import disk_potential, render_text
from .resolution import bott_data, tau_cones, verify_small_resolution
from .router import CommandResult, CommandRouter, Option
from .string_polytope import WeightVector, as_weight, string_polytope, vertices
from .weyl_words import (
    CommutationClass,
    ReducedWord,
    apply_involution,
    commutation_classes,
    format_word,
    parse_word,
)
from .wiring import canonical_D_new_paths, enumerate_rigorous_paths

logger = get_logger(__name__)

OPTIONS: Dict[str, Option] = {
    "word": Option(("--word",), {"required": True, "help": "Reduced word, e.g. 1,3,2,1,3,2"}),
    "lambda": Option(
        ("--lambda",), {"dest": "weight", "default": None, "help": "Weight entries, e.g. 2,2,2"}
    ),
    "delta": Option(("--delta",), {"default": None, "help": "Delta sequence, e.g. DDD"}),
    "coords": Option(("--coords",), {"choices": ["t", "m"], "default": "m"}),
    "vertices": Option(("--vertices",), {"action": "store_true", "help": "Enumerate vertices"}),
    "n": Option(("--n",), {"type": int, "required": True, "help": "Rank n of S_{n+1}"}),
    "mod_involution": Option(
        ("--mod-involution",),
        {"action": "store_true", "help": "Identify each class with its involution image"},
    ),
    "text": Option(("--text",), {"action": "store_true", "help": "Aligned text instead of JSON"}),
    "out": Option(("--out",), {"default": None, "help": "Write output to FILE (.csv for CSV)"}),
    "config": Option(("--config",), {"default": None, "help": "YAML settings file"}),
    "verbose": Option(("--verbose", "-v"), {"action": "store_true", "help": "Debug logging"}),
}

router = CommandRouter(OPTIONS, global_options=("text", "out", "config", "verbose"))


def _word(args: argparse.Namespace) -> ReducedWord:
    return parse_word(args.word)


def _weight(args: argparse.Namespace, word: ReducedWord, settings: Settings) -> WeightVector:
    if args.weight is None:
        return as_weight((settings.default_lambda,) * word.rank, word.rank)
    try:
        entries = tuple(int(x) for x in args.weight.split(",") if x.strip())
    except ValueError:
        raise WeightError(f"cannot parse weight: {args.weight!r}")
    return as_weight(entries, word.rank)


def _vector(values: Sequence[Any]) -> str:
    return "(" + ",".join(str(x) for x in values) + ")"


def _aligned(rows: Sequence[Dict[str, Any]]) -> str:
    if not rows:
        return ""
    headers = list(rows[0])
    cells = [[_cell(row[h]) for h in headers] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(line, widths)) for line in cells]
    return "\n".join(line.rstrip() for line in lines)


def _cell(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(str(x) for x in value)
    return str(value)


@router.command(
    "paths",
    description="List the rigorous paths of a word",
    usage="--word 1,3,2,1,3,2",
    options=("word",),
)
def paths_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    word = _word(args)
    paths = enumerate_rigorous_paths(word)
    canonical = {p.wires for p in canonical_D_new_paths(word).values()}
    entries = [p.to_dict(canonical=p.wires in canonical) for p in paths]
    payload = {"word": format_word(word), "count": len(paths), "paths": entries}
    text = _aligned(
        [
            {
                "path": e["path"],
                "source": e["source"],
                "max_peak": e["max_peak"],
                "w_m": _vector(e["w_m"]),
                "w_t": _vector(e["w_t"]),
            }
            for e in entries
        ]
    )
    return CommandResult(payload, text)


@router.command(
    "polytope",
    description="H-representation of the string polytope",
    usage="--word 1,2,1 --lambda 2,2 --coords t --vertices",
    options=("word", "lambda", "coords", "vertices"),
)
def polytope_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    word = _word(args)
    weight = _weight(args, word, settings)
    polytope = string_polytope(word, weight, args.coords)
    payload: Dict[str, Any] = {"word": format_word(word), "lambda": list(weight.entries)}
    payload.update(polytope.to_dict())
    lines = [f"{_vector(row['a'])} . x + {row['b']} >= 0    {row['tag']}" for row in payload["rows"]]
    if args.vertices:
        found = vertices(polytope)
        payload["vertices"] = found.to_list()
        payload["integral"] = found.integral
        lines.append(f"{len(found)} vertices, integral={found.integral}")
        lines += [_vector(v) for v in payload["vertices"]]
    return CommandResult(payload, "\n".join(lines))


@router.command(
    "index",
    description="Delta-index of a word, or all of its witnesses",
    usage="--word 1,2,1,3,2,1 --delta DDD",
    options=("word", "delta"),
)
def index_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    word = _word(args)
    if args.delta:
        index = delta_index(word, args.delta)
        payload: Dict[str, Any] = {
            "word": format_word(word),
            "delta": args.delta.upper(),
            "index": list(index),
        }
        return CommandResult(payload, f"{args.delta.upper()} {_vector(index)}")
    witnesses = delta_witnesses(word)
    delta, index = table_witness(word)
    payload = {
        "word": format_word(word),
        "witnesses": [w.to_dict() for w in witnesses],
        "table": {"delta": delta, "index": list(index)},
    }
    text = _aligned(
        [{"delta": w.delta, "index": _vector(w.index), "kappa": kappa(w.delta)} for w in witnesses]
    )
    return CommandResult(payload, text or f"no witness; table entry {delta} {_vector(index)}")


@router.command(
    "small",
    description="Decide whether a word has small indices",
    usage="--word 1,3,2,1,3,2",
    options=("word",),
)
def small_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    word = _word(args)
    result = has_small_indices(word)
    payload = result.to_dict()
    payload["word"] = format_word(word)
    payload["gp_count"] = len(enumerate_rigorous_paths(word))
    witness = result.witness
    if witness is not None and witness.delta[-1] == "D" and word.rank >= 2:
        payload["gp_count_formula"] = gp_count_formula(witness.delta, witness.k, word.rank)
    text = f"small={result.small}"
    if witness is not None:
        text += f" witness={witness.delta}{_vector(witness.index)}"
    return CommandResult(payload, f"{text} gp_count={payload['gp_count']}")


@router.command(
    "bott",
    description="Bott data of a word: v and w columns, designated and leftover paths",
    usage="--word 2,1,3,2,1,3",
    options=("word",),
)
def bott_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    word = _word(args)
    data = bott_data(word, require_small=False)
    gammas = data.selection.gammas
    payload: Dict[str, Any] = {
        "word": format_word(word),
        "normalized_word": format_word(data.source),
        "class_word": format_word(data.word),
        "node_map": {str(j): node for j, node in data.node_map.items()},
        "witness": data.witness.to_dict(),
        "small": data.small,
        "involution_applied": data.involution_applied,
        "v": [list(col) for col in data.fan.v],
        "w": [list(col) for col in data.fan.w],
        "gammas": {str(j): path.label for j, path in gammas.items()},
        "leftovers": {f"w~{label}": path.label for label, path in data.selection.leftovers.items()},
        "tau": None,
    }
    if data.small:
        cones = tau_cones(word)
        payload["tau"] = [list(c) for c in cones.cones] if cones else []
    text = _aligned(
        [
            {
                "j": j,
                "gamma": path.label,
                "w": _vector(data.fan.w[j - 1]),
                "v": _vector(data.fan.v[j - 1]),
            }
            for j, path in gammas.items()
        ]
    )
    return CommandResult(payload, text)


@router.command(
    "resolve",
    description="Build the resolution fan and certify or refute it",
    usage="--word 1,3,2,1,3,2 --lambda 2,2,2",
    options=("word", "lambda"),
)
def resolve_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    word = _word(args)
    verdict = verify_small_resolution(word, _weight(args, word, settings), settings)
    payload = verdict.to_dict()
    text = (
        f"{payload['status']}: smooth={verdict.smooth} rays_match={verdict.rays_match} "
        f"bpf={verdict.bpf}"
    )
    if verdict.violation is not None:
        v = verdict.violation
        text += f"\nviolation {{{', '.join(v.collection)}}}: {v.lhs} < {v.rhs}"
    return CommandResult(payload, text)


@router.command(
    "potential",
    description="Disk potential of a word with small indices",
    usage="--word 1,3,2,1,3,2",
    options=("word",),
)
def potential_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    potential = disk_potential(_word(args))
    return CommandResult(potential.to_dict(), render_text(potential))


def _mod_involution(classes: Sequence[CommutationClass]) -> List[CommutationClass]:
    """Keep one class from each pair ``{C, iota(C)}``, the one with the smaller representative."""
    kept = []
    for cls in classes:
        image = next(c for c in classes if apply_involution(cls.representative) in c)
        if cls.representative <= image.representative:
            kept.append(cls)
    return kept


def _classes(n: int, mod_involution: bool, settings: Settings) -> List[CommutationClass]:
    classes = commutation_classes(n, max_rank=settings.max_rank)
    return _mod_involution(classes) if mod_involution else classes


@router.command(
    "classes",
    description="Commutation classes of reduced words of w0",
    usage="--n 3 --mod-involution",
    options=("n", "mod_involution"),
)
def classes_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    classes = _classes(args.n, args.mod_involution, settings)
    rows: List[Dict[str, Any]] = [
        {"representative": format_word(c.representative), "size": len(c)} for c in classes
    ]
    return CommandResult(rows, _aligned(rows), rows)


@dataclass(frozen=True)
class TableRow:
    """One commutation class of the classification table.

    Attributes:
        word: The class representative
        delta_witness: The delta reported for the class
        index_vector: The delta-index for that delta
        small: Whether the class has small indices
        gp_count: The number of rigorous paths
    """

    word: ReducedWord
    delta_witness: str
    index_vector: Tuple[int, ...]
    small: bool
    gp_count: int

    @property
    def class_representative(self) -> str:
        return format_word(self.word)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "word": "".join(str(x) for x in self.word.letters),
            "class_representative": self.class_representative,
            "delta_witness": self.delta_witness,
            "index_vector": list(self.index_vector),
            "small": self.small,
            "gp_count": self.gp_count,
        }


def table_rows(
    n: int, mod_involution: bool = True, settings: Optional[Settings] = None
) -> List[TableRow]:
    """One row per commutation class, sorted by representative."""
    settings = settings or default_settings()
    rows = []
    for cls in _classes(n, mod_involution, settings):
        word = cls.representative
        delta, index = table_witness(word)
        row = TableRow(
            word=word,
            delta_witness=delta,
            index_vector=index,
            small=has_small_indices(word).small,
            gp_count=len(enumerate_rigorous_paths(word)),
        )
        logger.info(f"{row.class_representative}: {delta}{_vector(index)} gp={row.gp_count}")
        rows.append(row)
    return rows


@router.command(
    "table",
    description="Classification table: delta-index, small flag and path count per class",
    usage="--n 4 --mod-involution",
    options=("n", "mod_involution"),
)
def table_cmd(args: argparse.Namespace, settings: Settings) -> CommandResult:
    rows = [row.to_dict() for row in table_rows(args.n, args.mod_involution, settings)]
    return CommandResult(rows, _aligned(rows), rows)


def _write(result: CommandResult, args: argparse.Namespace) -> None:
    path = Path(args.out)
    rows = result.rows
    if path.suffix == ".csv":
        records = rows if rows is not None else [result.payload]
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=list(records[0]) if records else [])
            writer.writeheader()
            for record in records:
                writer.writerow({k: _cell(v) for k, v in record.items()})
    else:
        with open(path, "w", encoding="utf-8") as f:
            if args.text:
                f.write(result.text + "\n")
            elif rows is not None:
                f.writelines(json.dumps(row) + "\n" for row in rows)
            else:
                f.write(json.dumps(result.payload) + "\n")
    logger.info(f"Wrote {args.command} output to {path}")


def _print(result: CommandResult, args: argparse.Namespace) -> None:
    if args.text:
        print(result.text)
    elif result.rows is not None:
        for row in result.rows:
            print(json.dumps(row))
    else:
        print(json.dumps(result.payload))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    previous = default_settings()
    try:
        args = router.build_parser("string-toric").parse_args(argv)
        settings = load_config(Path(args.config)) if args.config else previous
        use_settings(settings)
        setup_logging(logging.DEBUG if args.verbose else settings.log_level)
        result = router.dispatch(args, settings)
        if args.out:
            _write(result, args)
        else:
            _print(result, args)
    except StringToricError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(json.dumps({"error": str(e), "type": type(e).__name__}))
        return 1 if isinstance(e, ValidationError) else 2
    finally:
        use_settings(previous)
    return 0


if __name__ == "__main__":
    sys.exit(main())
