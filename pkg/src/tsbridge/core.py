"""Finite Kripke structures, labelled transition systems and partitions.

States are dense integers ``0 .. n_states - 1``.  Systems are immutable;
the plain constructors do not validate, so that :func:`validate_ks` and
:func:`validate_lts` can report on malformed input.  Use :func:`make_ks`
and :func:`make_lts` to build systems that are guaranteed total.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

TAU_SPELLING = "tau"
BOT_SPELLING = "bottom"

# a proposition is a plain token or the spelling of a label-set action
_PROP_RE = re.compile(r"\{[^{}\s]*\}|[^\s,{}\"()]+")


class ActionKind(enum.Enum):
    TAU = 0
    BOT = 1
    VISIBLE = 2
    LABELSET = 3


@dataclass(frozen=True)
class Action:
    """An LTS label: tau, bottom, a named action, or a set of propositions."""

    kind: ActionKind
    name: str = ""
    props: frozenset = frozenset()

    def __str__(self) -> str:
        if self.kind is ActionKind.TAU:
            return TAU_SPELLING
        if self.kind is ActionKind.BOT:
            return BOT_SPELLING
        if self.kind is ActionKind.LABELSET:
            return format_props(self.props)
        return self.name

    def __repr__(self) -> str:
        return f"Action({self})"

    def __hash__(self) -> int:
        # hot in trace enumeration; the generated hash goes through the enum
        try:
            return self._hash
        except AttributeError:
            h = hash((self.kind.value, self.name, self.props))
            object.__setattr__(self, "_hash", h)
            return h

    def __lt__(self, other: "Action") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (str(self), self.kind.value)

    @property
    def is_tau(self) -> bool:
        return self.kind is ActionKind.TAU

    @property
    def is_bot(self) -> bool:
        return self.kind is ActionKind.BOT

    @staticmethod
    def visible(name: str) -> "Action":
        return Action(ActionKind.VISIBLE, name=name)

    @staticmethod
    def labelset(props: Iterable[str]) -> "Action":
        return Action(ActionKind.LABELSET, props=frozenset(props))


TAU = Action(ActionKind.TAU)
BOT = Action(ActionKind.BOT)


def format_props(props: Iterable[str]) -> str:
    return "{" + ",".join(sorted(props)) + "}"


def parse_props(text: str) -> frozenset:
    """Inverse of :func:`format_props`; raises ValueError on bad syntax."""
    text = text.strip()
    if len(text) < 2 or text[0] != "{" or text[-1] != "}":
        raise ValueError(f"expected a braced proposition set, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return frozenset()
    props = []
    for part in _split_props(inner):
        if not _PROP_RE.fullmatch(part):
            raise ValueError(f"malformed proposition {part!r}")
        props.append(part)
    if len(set(props)) != len(props):
        raise ValueError(f"duplicate proposition in {text!r}")
    return frozenset(props)


def _split_props(inner: str) -> list[str]:
    # commas inside a nested {..} belong to that proposition
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return parts


def parse_action(text: str) -> Action:
    if text == TAU_SPELLING:
        return TAU
    if text == BOT_SPELLING:
        return BOT
    if text.startswith("{"):
        return Action.labelset(parse_props(text))
    return Action.visible(text)


def is_valid_prop_name(name: str) -> bool:
    return isinstance(name, str) and bool(_PROP_RE.fullmatch(name))


@dataclass(frozen=True)
class Violation:
    """One broken invariant; ``rule`` is a stable machine-readable tag."""

    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


class InvalidSystemError(ValueError):
    def __init__(self, violations: Sequence[Violation], what: str = "system"):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid {what}: {lines}")


@dataclass(frozen=True, eq=True)
class KripkeStructure:
    n_states: int
    ap: frozenset
    labels: tuple
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "ap", frozenset(self.ap))
        object.__setattr__(self, "labels", tuple(frozenset(l) for l in self.labels))
        object.__setattr__(self, "edges", frozenset((int(s), int(t)) for s, t in self.edges))

    @cached_property
    def succ(self) -> tuple:
        out = [[] for _ in range(self.n_states)]
        for s, t in sorted(self.edges):
            if 0 <= s < self.n_states and 0 <= t < self.n_states:
                out[s].append(t)
        return tuple(tuple(ts) for ts in out)

    @cached_property
    def pred(self) -> tuple:
        out = [[] for _ in range(self.n_states)]
        for s, t in sorted(self.edges):
            if 0 <= s < self.n_states and 0 <= t < self.n_states:
                out[t].append(s)
        return tuple(tuple(ss) for ss in out)

    @property
    def states(self) -> range:
        return range(self.n_states)

    def __str__(self) -> str:
        labels = " ".join(f"{s}:{format_props(l)}" for s, l in enumerate(self.labels))
        edges = " ".join(f"{s}->{t}" for s, t in sorted(self.edges))
        return f"KS[{labels} | {edges}]"


@dataclass(frozen=True, eq=True)
class LabelledTransitionSystem:
    n_states: int
    alphabet: frozenset
    transitions: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(
            self, "transitions", frozenset((int(s), a, int(t)) for s, a, t in self.transitions)
        )

    @cached_property
    def succ(self) -> tuple:
        """Per state, the sorted outgoing ``(action, target)`` pairs."""
        out = [[] for _ in range(self.n_states)]
        for s, a, t in self.transitions:
            if 0 <= s < self.n_states and 0 <= t < self.n_states:
                out[s].append((a, t))
        return tuple(tuple(sorted(ts, key=lambda p: (p[0].sort_key(), p[1]))) for ts in out)

    @property
    def states(self) -> range:
        return range(self.n_states)

    def actions(self) -> list:
        """Alphabet plus tau, sorted; the letters transitions may carry."""
        return sorted(self.alphabet | {TAU})

    def sorted_transitions(self) -> list:
        return sorted(self.transitions, key=lambda tr: (tr[0], tr[1].sort_key(), tr[2]))

    def __str__(self) -> str:
        trs = " ".join(f"{s}-{a}->{t}" for s, a, t in self.sorted_transitions())
        return f"LTS[{self.n_states} | {trs}]"


System = Union[KripkeStructure, LabelledTransitionSystem]


def validate_ks(k: KripkeStructure) -> list:
    out = []
    n = k.n_states
    if n < 1:
        out.append(Violation("empty", "a Kripke structure needs at least one state"))
    if len(k.labels) != n:
        out.append(Violation("labeling", f"{len(k.labels)} labels for {n} states"))
    for p in sorted(k.ap):
        if not is_valid_prop_name(p):
            out.append(Violation("prop-name", f"proposition {p!r} cannot be serialised"))
    for s, label in enumerate(k.labels):
        extra = label - k.ap
        if extra:
            out.append(Violation(
                "label-universe",
                f"state {s} carries {format_props(extra)} outside the proposition universe",
            ))
    has_out = [False] * max(n, 0)
    for s, t in sorted(k.edges):
        if not (0 <= s < n and 0 <= t < n):
            out.append(Violation("edge-range", f"edge {s}->{t} leaves the state range"))
            continue
        has_out[s] = True
    for s in range(n):
        if not has_out[s]:
            out.append(Violation("totality", f"state {s} has no outgoing edge"))
    return out


def validate_lts(t: LabelledTransitionSystem) -> list:
    out = []
    n = t.n_states
    if n < 1:
        out.append(Violation("empty", "a transition system needs at least one state"))
    if TAU in t.alphabet:
        out.append(Violation("alphabet", "tau may not be declared in the alphabet"))
    for a in sorted(t.alphabet):
        out.extend(_action_violations(a))
    has_out = [False] * max(n, 0)
    for s, a, u in t.sorted_transitions():
        if not (0 <= s < n and 0 <= u < n):
            out.append(Violation("edge-range", f"transition {s}-{a}->{u} leaves the state range"))
            continue
        if not a.is_tau and a not in t.alphabet:
            out.append(Violation("alphabet", f"transition {s}-{a}->{u} uses an undeclared action"))
            if a.kind is ActionKind.VISIBLE:
                out.extend(_action_violations(a))
        has_out[s] = True
    for s in range(n):
        if not has_out[s]:
            out.append(Violation("totality", f"state {s} has no outgoing transition"))
    return out


def _action_violations(a: Action) -> list:
    if a.kind is ActionKind.VISIBLE:
        if a.name in (TAU_SPELLING, BOT_SPELLING):
            return [Violation("reserved-token", f"visible action spelled {a.name!r}")]
        if not a.name or not re.fullmatch(r"[^\s,{}\"()]+", a.name):
            return [Violation("action-name", f"action name {a.name!r} cannot be serialised")]
    if a.kind is ActionKind.LABELSET:
        bad = [p for p in a.props if not is_valid_prop_name(p)]
        if bad:
            return [Violation("prop-name", f"label set {a} has unserialisable members")]
    return []


def require_valid(sys: System) -> None:
    if isinstance(sys, KripkeStructure):
        errors = validate_ks(sys)
        what = "Kripke structure"
    else:
        errors = validate_lts(sys)
        what = "transition system"
    if errors:
        raise InvalidSystemError(errors, what)


def make_ks(labels: Sequence[Iterable[str]], edges: Iterable[tuple], ap: Iterable[str] | None = None) -> KripkeStructure:
    """Build and validate a Kripke structure; ``ap`` defaults to the props in use."""
    labels = [frozenset(l) for l in labels]
    if ap is None:
        ap = frozenset().union(*labels) if labels else frozenset()
    k = KripkeStructure(len(labels), frozenset(ap), tuple(labels), frozenset(edges))
    require_valid(k)
    return k


def make_lts(n_states: int, transitions: Iterable[tuple], alphabet: Iterable[Action] | None = None) -> LabelledTransitionSystem:
    """Build and validate an LTS.  Labels may be given as Actions or spellings."""
    trs = []
    for s, a, u in transitions:
        if isinstance(a, str):
            a = parse_action(a)
        trs.append((s, a, u))
    if alphabet is None:
        alphabet = {a for _, a, _ in trs if not a.is_tau}
    else:
        alphabet = {parse_action(a) if isinstance(a, str) else a for a in alphabet}
    t = LabelledTransitionSystem(n_states, frozenset(alphabet), frozenset(trs))
    require_valid(t)
    return t


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks covering ``0 .. n-1``, numbered by smallest member."""

    block_of: tuple
    blocks: tuple = field(init=False, compare=False)

    def __post_init__(self):
        ids: dict = {}
        canon = tuple(ids.setdefault(b, len(ids)) for b in self.block_of)
        object.__setattr__(self, "block_of", canon)
        members = [[] for _ in range(len(ids))]
        for s, b in enumerate(canon):
            members[b].append(s)
        object.__setattr__(self, "blocks", tuple(frozenset(m) for m in members))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        block_of = [-1] * n
        for i, blk in enumerate(blocks):
            for s in blk:
                if block_of[s] != -1:
                    raise ValueError(f"state {s} occurs in two blocks")
                block_of[s] = i
        if -1 in block_of:
            raise ValueError(f"state {block_of.index(-1)} is in no block")
        return cls(tuple(block_of))

    @classmethod
    def from_relation(cls, n: int, pairs) -> "Partition":
        """Classes of an equivalence given as a pair set; raises if it is not one."""
        pairs = set(pairs)
        block_of = [-1] * n
        for s in range(n):
            if block_of[s] != -1:
                continue
            cls_ = [t for t in range(n) if (s, t) in pairs]
            for t in cls_:
                if block_of[t] != -1:
                    raise ValueError("relation is not an equivalence")
                block_of[t] = s
        part = cls(tuple(block_of))
        if part.pairs() != pairs:
            raise ValueError("relation is not an equivalence")
        return part

    @property
    def n_states(self) -> int:
        return len(self.block_of)

    def __len__(self) -> int:
        return len(self.blocks)

    def same(self, s: int, t: int) -> bool:
        return self.block_of[s] == self.block_of[t]

    def pairs(self) -> set:
        return {(s, t) for blk in self.blocks for s in blk for t in blk}

    def restrict(self, n: int) -> "Partition":
        """Restriction to the states ``0 .. n-1``."""
        return Partition(self.block_of[:n])

    def sorted_blocks(self) -> list:
        return [sorted(b) for b in self.blocks]

    def __str__(self) -> str:
        return " ".join("{" + ",".join(map(str, b)) + "}" for b in self.sorted_blocks())


def disjoint_union(a: System, b: System) -> tuple:
    """Place ``b`` after ``a``; returns the union and the offset of ``b``'s states."""
    off = a.n_states
    if isinstance(a, KripkeStructure) and isinstance(b, KripkeStructure):
        u = KripkeStructure(
            a.n_states + b.n_states,
            a.ap | b.ap,
            a.labels + b.labels,
            a.edges | {(s + off, t + off) for s, t in b.edges},
        )
    elif isinstance(a, LabelledTransitionSystem) and isinstance(b, LabelledTransitionSystem):
        u = LabelledTransitionSystem(
            a.n_states + b.n_states,
            a.alphabet | b.alphabet,
            a.transitions | {(s + off, x, t + off) for s, x, t in b.transitions},
        )
    else:
        raise TypeError("disjoint_union needs two systems of the same kind")
    return u, off


def infinite_path_states(n: int, succ: Sequence[Sequence[int]]) -> frozenset:
    """States with an infinite path in the graph ``succ``.

    Repeatedly discards states all of whose successors were discarded; what
    survives can always step to another survivor.
    """
    outdeg = [len(set(ts)) for ts in succ]
    pred = [[] for _ in range(n)]
    for s in range(n):
        for t in set(succ[s]):
            pred[t].append(s)
    dead = [s for s in range(n) if outdeg[s] == 0]
    alive = [True] * n
    for s in dead:
        alive[s] = False
    while dead:
        t = dead.pop()
        for s in pred[t]:
            outdeg[s] -= 1
            if outdeg[s] == 0 and alive[s]:
                alive[s] = False
                dead.append(s)
    return frozenset(s for s in range(n) if alive[s])
