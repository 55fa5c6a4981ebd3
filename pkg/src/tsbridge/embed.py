"""Translations between Kripke structures and labelled transition systems.

``embed_lts`` and ``embed_ks`` are the classical embeddings; ``reverse_lts``
and ``reverse_ks`` undo them on the reversible fragment of the target model.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .core import (
    BOT,
    BOT_SPELLING,
    TAU,
    TAU_SPELLING,
    Action,
    ActionKind,
    InvalidSystemError,
    KripkeStructure,
    LabelledTransitionSystem,
    Violation,
    format_props,
    parse_action,
    require_valid,
)

log = logging.getLogger(__name__)


class NotReversibleError(InvalidSystemError):
    pass


@dataclass(frozen=True)
class StateMapping:
    """Where each original state (and its auxiliary states) went.

    ``shadow`` maps a Kripke state to its shadow in ``embed_lts``;
    ``action_states`` maps a non-tau transition to its state in ``embed_ks``.
    """

    fwd: tuple
    shadow: dict = field(default_factory=dict)
    action_states: dict = field(default_factory=dict)

    def check(self) -> bool:
        fwd = set(self.fwd)
        shadows = set(self.shadow.values())
        acts = set(self.action_states.values())
        return (
            len(fwd) == len(self.fwd)
            and len(shadows) == len(self.shadow)
            and len(acts) == len(self.action_states)
            and not (fwd & shadows)
            and not (fwd & acts)
            and not (shadows & acts)
        )


def action_to_prop(a: Action) -> str:
    return str(a)


def prop_to_action(p: str) -> Action:
    return parse_action(p)


def embed_lts(k: KripkeStructure) -> tuple:
    """Kripke structure to LTS; state ``s`` keeps its id, its shadow is ``n + s``."""
    require_valid(k)
    n = k.n_states
    trs = set()
    for s in range(n):
        trs.add((s, BOT, n + s))
        trs.add((n + s, Action.labelset(k.labels[s]), s))
    for s, t in k.edges:
        if k.labels[s] == k.labels[t]:
            trs.add((s, TAU, t))
        else:
            trs.add((s, Action.labelset(k.labels[t]), t))
    alphabet = {Action.labelset(l) for l in set(k.labels)} | {BOT}
    lts = LabelledTransitionSystem(2 * n, frozenset(alphabet), frozenset(trs))
    mapping = StateMapping(tuple(range(n)), {s: n + s for s in range(n)})
    return lts, mapping


def embed_ks(t: LabelledTransitionSystem) -> tuple:
    """LTS to Kripke structure; each visible transition becomes a state."""
    require_valid(t)
    if any(a.is_bot for a in t.alphabet):
        raise InvalidSystemError(
            [Violation("reserved-token", f"action {BOT_SPELLING!r} is reserved by the embedding")],
            "transition system",
        )
    n = t.n_states
    labels = [frozenset({BOT_SPELLING})] * n
    edges = set()
    action_states = {}
    for s, a, u in t.sorted_transitions():
        if a.is_tau:
            edges.add((s, u))
            continue
        x = n + len(action_states)
        action_states[(s, a, u)] = x
        labels.append(frozenset({action_to_prop(a)}))
        edges.add((s, x))
        edges.add((x, u))
    ap = {action_to_prop(a) for a in t.alphabet} | {BOT_SPELLING}
    ks = KripkeStructure(len(labels), frozenset(ap), tuple(labels), frozenset(edges))
    return ks, StateMapping(tuple(range(n)), {}, action_states)


def is_reversible_lts(t: LabelledTransitionSystem) -> list:
    out = []
    for a in sorted(t.alphabet):
        if a.kind not in (ActionKind.BOT, ActionKind.LABELSET):
            out.append(Violation("condition-1", f"action {a} is neither bottom nor a proposition set"))
    has_bot = [any(a.is_bot for a, _ in t.succ[s]) for s in range(t.n_states)]
    flagged = set()
    for s, a, u in t.sorted_transitions():
        if not a.is_bot and not has_bot[u] and u not in flagged:
            flagged.add(u)
            out.append(Violation("condition-2", f"state {u} is entered by {s}-{a}->{u} but has no bottom transition"))
    for s in range(t.n_states):
        witnesses = sorted({u for a, u in t.succ[s] if a.is_bot})
        if not witnesses:
            continue
        seen = set()
        for w in witnesses:
            offered = _offered_labels(t, w)
            if not offered:
                out.append(Violation("missing-label", f"bottom-successor {w} of state {s} offers no proposition set"))
            seen |= offered
        if len(seen) > 1:
            found = ", ".join(sorted(str(a) for a in seen))
            out.append(Violation("condition-3", f"bottom-successors of state {s} offer several labels: {found}"))
    return out


def _offered_labels(t: LabelledTransitionSystem, s: int) -> set:
    return {a for a, _ in t.succ[s] if not a.is_bot and not a.is_tau}


def reverse_lts(t: LabelledTransitionSystem) -> KripkeStructure:
    require_valid(t)
    problems = is_reversible_lts(t)
    if problems:
        raise NotReversibleError(problems, "reversible transition system")
    keep = [s for s in range(t.n_states) if any(a.is_bot for a, _ in t.succ[s])]
    dropped = len(keep) != t.n_states
    if dropped:
        log.debug("reverse_lts drops states without bottom: %s", sorted(set(range(t.n_states)) - set(keep)))
    index = {s: i for i, s in enumerate(keep)}
    labels = []
    edges = set()
    for s in keep:
        w = next(u for a, u in t.succ[s] if a.is_bot)
        (label,) = _offered_labels(t, w)
        labels.append(label.props)
        for a, u in t.succ[s]:
            if not a.is_bot:
                edges.add((index[s], index[u]))
    ap = frozenset().union(*(a.props for a in t.alphabet if a.kind is ActionKind.LABELSET))
    return KripkeStructure(len(keep), ap, tuple(labels), frozenset(edges))


def dropped_by_reverse_lts(t: LabelledTransitionSystem) -> list:
    """States that ``reverse_lts`` discards because they have no bottom step."""
    return [s for s in range(t.n_states) if not any(a.is_bot for a, _ in t.succ[s])]


def is_reversible_ks(k: KripkeStructure) -> list:
    out = []
    if BOT_SPELLING not in k.ap:
        out.append(Violation("condition-1", f"proposition {BOT_SPELLING!r} is missing from the universe"))
    if TAU_SPELLING in k.ap:
        out.append(Violation("reserved-token", f"proposition {TAU_SPELLING!r} cannot become an action"))
    bot = frozenset({BOT_SPELLING})
    for s in range(k.n_states):
        if len(k.labels[s]) != 1:
            out.append(Violation("condition-2", f"state {s} is labelled {format_props(k.labels[s])}, not a singleton"))
            continue
        if k.labels[s] == bot:
            continue
        succ = set(k.succ[s])
        if len(succ) != 1:
            out.append(Violation("condition-3", f"state {s} has {len(succ)} successors, expected exactly one"))
        elif k.labels[next(iter(succ))] != bot:
            out.append(Violation("condition-3", f"successor of state {s} is not labelled {{{BOT_SPELLING}}}"))
    return out


def reverse_ks(k: KripkeStructure) -> LabelledTransitionSystem:
    require_valid(k)
    problems = is_reversible_ks(k)
    if problems:
        raise NotReversibleError(problems, "reversible Kripke structure")
    bot = frozenset({BOT_SPELLING})
    keep = [s for s in range(k.n_states) if k.labels[s] == bot]
    index = {s: i for i, s in enumerate(keep)}
    trs = set()
    for s in keep:
        for x in k.succ[s]:
            if k.labels[x] == bot:
                trs.add((index[s], TAU, index[x]))
                continue
            (p,) = k.labels[x]
            a = prop_to_action(p)
            for u in k.succ[x]:
                trs.add((index[s], a, index[u]))
    alphabet = {prop_to_action(p) for p in k.ap if p != BOT_SPELLING}
    return LabelledTransitionSystem(len(keep), frozenset(alphabet), frozenset(trs))
