"""Command-line interface.

Exit codes: 0 success (or "equivalent"), 1 a negative answer (not
equivalent, invalid input, failing theorems), 2 an error.  Errors are
printed to stderr as ``error[<code>]: <message>``.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import equiv, harness, oracle
from .core import (
    InvalidSystemError,
    KripkeStructure,
    LabelledTransitionSystem,
    disjoint_union,
    format_props,
    validate_ks,
    validate_lts,
)
from .embed import embed_ks, embed_lts, reverse_ks, reverse_lts
from .formats import FormatError, emit, read_system, write_system
from .minimise import KS_RELATIONS, LTS_RELATIONS, min_ks, min_ks_via_lts, min_lts, min_lts_via_ks

DEFAULT_SEED = "42"
SEED_ENV = "TSBRIDGE_SEED"

RELATIONS = ("sim", "bisim", "trace", "stutter", "dsbb")


class CliError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def _model_name(sys_) -> str:
    return "Kripke structure" if isinstance(sys_, KripkeStructure) else "transition system"


def _load(path: str, validate: bool = True):
    try:
        return read_system(path, validate)
    except OSError as exc:
        raise CliError("io", f"{path}: {exc.strerror or exc}") from None
    except FormatError as exc:
        raise CliError("format", f"{path}: {exc}") from None


def _store(path: str, sys_) -> None:
    if path == "-":
        sys.stdout.write(emit(sys_))
        return
    try:
        write_system(path, sys_)
    except FormatError as exc:
        raise CliError("format", str(exc)) from None
    except OSError as exc:
        raise CliError("io", f"{path}: {exc.strerror or exc}") from None


def _expect(sys_, kind, path: str):
    if not isinstance(sys_, kind):
        want = "Kripke structure (.ks)" if kind is KripkeStructure else "transition system (.aut)"
        raise CliError("model", f"{path}: expected a {want}, got a {_model_name(sys_)}")
    return sys_


# -- subcommands -----------------------------------------------------------


def cmd_validate(args) -> int:
    sys_ = _load(args.file, validate=False)
    problems = validate_ks(sys_) if isinstance(sys_, KripkeStructure) else validate_lts(sys_)
    for v in problems:
        print(f"error[{v.rule}]: {v.message}", file=sys.stderr)
    if problems:
        return 1
    size = len(sys_.edges) if isinstance(sys_, KripkeStructure) else len(sys_.transitions)
    print(f"ok: {_model_name(sys_)} with {sys_.n_states} states and {size} transitions")
    return 0


def cmd_embed(args) -> int:
    if args.to == "lts":
        out, _ = embed_lts(_expect(_load(args.input), KripkeStructure, args.input))
    else:
        out, _ = embed_ks(_expect(_load(args.input), LabelledTransitionSystem, args.input))
    _store(args.output, out)
    return 0


def cmd_reverse(args) -> int:
    if args.source == "lts":
        out = reverse_lts(_expect(_load(args.input), LabelledTransitionSystem, args.input))
    else:
        out = reverse_ks(_expect(_load(args.input), KripkeStructure, args.input))
    _store(args.output, out)
    return 0


def _state(text: str, n: int, what: str) -> int:
    try:
        s = int(text)
    except ValueError:
        raise CliError("usage", f"{what} must be a state number, got {text!r}") from None
    if not 0 <= s < n:
        raise CliError("usage", f"{what} {s} is out of range for {n} states")
    return s


def _decide(sys_, rel: str, s: int, s2: int):
    """Return (equivalent, witness-or-None)."""
    ks = isinstance(sys_, KripkeStructure)
    if rel == "sim":
        return (equiv.similar_ks if ks else equiv.similar_lts)(sys_, s, s2), None
    if rel == "bisim":
        return (equiv.bisimilar_ks if ks else equiv.bisimilar_lts)(sys_, s, s2), None
    if rel == "trace":
        w = (equiv.trace_witness_ks if ks else equiv.trace_witness_lts)(sys_, s, s2)
        return w is None, w
    if rel == "stutter":
        if not ks:
            raise CliError("model", "stuttering equivalence applies to Kripke structures; use dsbb")
        return equiv.stuttering_equivalent(sys_, s, s2), None
    if not ks:
        return equiv.dsbb_equivalent(sys_, s, s2), None
    raise CliError("model", "dsbb applies to transition systems; use stutter")


def _spell(word) -> str:
    return " ".join(format_props(x) if isinstance(x, frozenset) else str(x) for x in word)


def cmd_check(args) -> int:
    left = _load(args.file)
    s = _state(args.s, left.n_states, "state s")
    if args.against:
        right = _load(args.against)
        if type(right) is not type(left):
            raise CliError("model", "both files must hold the same kind of model")
        s2 = _state(args.s2, right.n_states, "state s'")
        sys_, off = disjoint_union(left, right)
        s2 += off
    else:
        sys_ = left
        s2 = _state(args.s2, left.n_states, "state s'")
    same, witness = _decide(sys_, args.rel, s, s2)
    if same:
        print("equivalent")
        return 0
    print("not equivalent")
    if witness is not None:
        print(f"witness: {_spell(witness)}")
    return 1


def cmd_minimise(args) -> int:
    sys_ = _load(args.input)
    rel = args.rel
    if isinstance(sys_, KripkeStructure):
        if rel not in KS_RELATIONS:
            raise CliError("model", f"relation {rel!r} does not apply to Kripke structures; use one of {', '.join(KS_RELATIONS)}")
        out = (min_ks_via_lts if args.via_other_model else min_ks)(sys_, rel)
    else:
        if rel not in LTS_RELATIONS:
            raise CliError("model", f"relation {rel!r} does not apply to transition systems; use one of {', '.join(LTS_RELATIONS)}")
        out = (min_lts_via_ks if args.via_other_model else min_lts)(sys_, rel)
    _store(args.output, out)
    return 0


def cmd_verify(args) -> int:
    try:
        report = harness.run(args.trials, args.max_states, args.seed, args.theorem)
    except ValueError as exc:
        raise CliError("usage", str(exc)) from None
    sys.stdout.write(report.render())
    return 0 if report.ok else 1


_SPEC_KEYS = {"n": "n_states", "letters": "n_letters", "density": "density", "tau": "tau_prob", "seed": "seed"}


def parse_spec(text: str, default_seed: int = 0) -> oracle.RandomSpec:
    """``n=4,letters=2,density=0.3,tau=0.3,seed=7``; omitted keys keep their defaults."""
    values: dict = {"seed": default_seed}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, eq, val = part.partition("=")
        key = key.strip()
        if not eq or key not in _SPEC_KEYS:
            raise CliError("usage", f"bad --spec entry {part!r}; keys are {', '.join(_SPEC_KEYS)}")
        field = _SPEC_KEYS[key]
        try:
            values[field] = float(val) if field in ("density", "tau_prob") else int(val)
        except ValueError:
            raise CliError("usage", f"bad value for {key}: {val!r}") from None
    try:
        return oracle.RandomSpec(**values)
    except ValueError as exc:
        raise CliError("usage", str(exc)) from None


_GENERATORS = {
    "ks": oracle.random_ks,
    "lts": oracle.random_lts,
    "rev-lts": oracle.random_reversible_lts,
    "rev-ks": oracle.random_reversible_ks,
}


def cmd_gen(args) -> int:
    try:
        default_seed = int(args.seed_default)
    except ValueError:
        raise CliError("usage", f"{SEED_ENV} must be an integer for gen, got {args.seed_default!r}") from None
    spec = parse_spec(args.spec, default_seed)
    _store(args.output, _GENERATORS[args.kind](spec))
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    seed = os.environ.get(SEED_ENV, DEFAULT_SEED)
    p = argparse.ArgumentParser(prog="tsbridge", description="Translate, compare and minimise Kripke structures and transition systems.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("validate", help="check a .ks or .aut file")
    q.add_argument("file")
    q.set_defaults(run=cmd_validate)

    q = sub.add_parser("embed", help="translate into the other model")
    q.add_argument("--to", choices=("lts", "ks"), required=True)
    q.add_argument("input")
    q.add_argument("output", help="output file, or - for stdout")
    q.set_defaults(run=cmd_embed)

    q = sub.add_parser("reverse", help="undo an embedding")
    q.add_argument("--from", dest="source", choices=("lts", "ks"), required=True)
    q.add_argument("input")
    q.add_argument("output", help="output file, or - for stdout")
    q.set_defaults(run=cmd_reverse)

    q = sub.add_parser("check", help="decide an equivalence between two states")
    q.add_argument("--rel", choices=RELATIONS, required=True)
    q.add_argument("--against", metavar="FILE", help="take s' from this file instead")
    q.add_argument("file")
    q.add_argument("s")
    q.add_argument("s2", metavar="s'")
    q.set_defaults(run=cmd_check)

    q = sub.add_parser("minimise", help="quotient by an equivalence")
    q.add_argument("--rel", choices=("bisim", "stutter", "dsbb"), required=True)
    q.add_argument("--via-other-model", action="store_true", help="minimise through the embedding and back")
    q.add_argument("input")
    q.add_argument("output", help="output file, or - for stdout")
    q.set_defaults(run=cmd_minimise)

    q = sub.add_parser("verify-theorems", help="run the randomised theorem checks")
    q.add_argument("--trials", type=int, default=1000)
    q.add_argument("--max-states", type=int, default=8)
    q.add_argument("--seed", default=seed)
    q.add_argument("--theorem", action="append", choices=harness.THEOREM_NAMES, help="restrict to this theorem (repeatable)")
    q.set_defaults(run=cmd_verify)

    q = sub.add_parser("gen", help="write a random system")
    q.add_argument("--kind", choices=tuple(_GENERATORS), required=True)
    q.add_argument("--spec", default="", help="e.g. n=4,letters=2,density=0.3,tau=0.3,seed=7")
    q.add_argument("output", help="output file, or - for stdout")
    q.set_defaults(run=cmd_gen, seed_default=seed)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except CliError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
    except InvalidSystemError as exc:
        for v in exc.violations:
            print(f"error[{v.rule}]: {v.message}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
