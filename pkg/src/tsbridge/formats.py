"""Text formats: Aldebaran ``.aut`` for transition systems, ``.ks`` for Kripke structures.

Both emitters are canonical (sorted), so ``emit(parse(emit(x))) == emit(x)``.
Neither format declares its alphabet or proposition universe; on parsing
these are the actions and propositions that occur.
"""

from __future__ import annotations

import re
from pathlib import Path

from .core import (
    KripkeStructure,
    LabelledTransitionSystem,
    System,
    format_props,
    parse_action,
    parse_props,
    require_valid,
)

_AUT_HEADER = re.compile(r"des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")
_AUT_LINE = re.compile(r'\(\s*(\d+)\s*,\s*"([^"]*)"\s*,\s*(\d+)\s*\)')


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            yield no, line


def parse_aut(text: str, validate: bool = True) -> LabelledTransitionSystem:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file, expected a 'des' header")
    no, head = lines[0]
    m = _AUT_HEADER.fullmatch(head)
    if not m:
        raise FormatError(f"malformed header {head!r}", no)
    first, n_trans, n_states = map(int, m.groups())
    if first != 0:
        raise FormatError(f"initial state must be 0, got {first}", no)
    trs = set()
    for no, line in lines[1:]:
        m = _AUT_LINE.fullmatch(line)
        if not m:
            raise FormatError(f"malformed transition {line!r}", no)
        s, label, u = m.groups()
        s, u = int(s), int(u)
        for x in (s, u):
            if x >= n_states:
                raise FormatError(f"state {x} out of range for {n_states} states", no)
        try:
            a = parse_action(label)
        except ValueError as exc:
            raise FormatError(str(exc), no) from None
        trs.add((s, a, u))
    if len(lines) - 1 != n_trans:
        raise FormatError(f"header announces {n_trans} transitions, found {len(lines) - 1}")
    alphabet = frozenset(a for _, a, _ in trs if not a.is_tau)
    t = LabelledTransitionSystem(n_states, alphabet, frozenset(trs))
    if validate:
        require_valid(t)
    return t


def emit_aut(t: LabelledTransitionSystem) -> str:
    out = [f"des (0,{len(t.transitions)},{t.n_states})"]
    for s, a, u in t.sorted_transitions():
        out.append(f'({s},"{a}",{u})')
    return "\n".join(out) + "\n"


def parse_ks(text: str, validate: bool = True) -> KripkeStructure:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty file, expected a 'ks' header")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 3 or parts[0] != "ks" or not all(p.isdigit() for p in parts[1:]):
        raise FormatError(f"malformed header {head!r}", no)
    n, m = int(parts[1]), int(parts[2])
    labels: dict = {}
    edges = set()
    n_edge_lines = 0
    for no, line in lines[1:]:
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "state":
            sid, _, props = rest.partition(" ")
            if not sid.isdigit():
                raise FormatError(f"malformed state line {line!r}", no)
            s = int(sid)
            if s >= n:
                raise FormatError(f"unknown state {s}", no)
            if s in labels:
                raise FormatError(f"duplicate state line for {s}", no)
            try:
                labels[s] = parse_props(props)
            except ValueError as exc:
                raise FormatError(str(exc), no) from None
        elif word == "edge":
            ends = rest.split()
            if len(ends) != 2 or not all(e.isdigit() for e in ends):
                raise FormatError(f"malformed edge line {line!r}", no)
            s, t = map(int, ends)
            for x in (s, t):
                if x >= n:
                    raise FormatError(f"unknown state {x}", no)
            edges.add((s, t))
            n_edge_lines += 1
        else:
            raise FormatError(f"unexpected line {line!r}", no)
    missing = [s for s in range(n) if s not in labels]
    if missing:
        raise FormatError(f"missing state line for {missing[0]}")
    if n_edge_lines != m:
        raise FormatError(f"header announces {m} edges, found {n_edge_lines}")
    label_tuple = tuple(labels[s] for s in range(n))
    ap = frozenset().union(*label_tuple) if label_tuple else frozenset()
    k = KripkeStructure(n, ap, label_tuple, frozenset(edges))
    if validate:
        require_valid(k)
    return k


def emit_ks(k: KripkeStructure) -> str:
    out = [f"ks {k.n_states} {len(k.edges)}"]
    out += [f"state {s} {format_props(k.labels[s])}" for s in range(k.n_states)]
    out += [f"edge {s} {t}" for s, t in sorted(k.edges)]
    return "\n".join(out) + "\n"


def format_of(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".aut":
        return "aut"
    if suffix == ".ks":
        return "ks"
    raise FormatError(f"cannot infer format of {str(path)!r}; use a .aut or .ks extension")


def read_system(path: str | Path, validate: bool = True) -> System:
    text = Path(path).read_text()
    if format_of(path) == "aut":
        return parse_aut(text, validate)
    return parse_ks(text, validate)


def emit(sys: System) -> str:
    return emit_ks(sys) if isinstance(sys, KripkeStructure) else emit_aut(sys)


def write_system(path: str | Path, sys: System) -> None:
    want = "ks" if isinstance(sys, KripkeStructure) else "aut"
    if format_of(path) != want:
        raise FormatError(f"{str(path)!r} does not match the output model; expected a .{want} file")
    Path(path).write_text(emit(sys))
