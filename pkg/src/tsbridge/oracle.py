"""Brute-force oracles, bare-run apparatus and random instance generators.

Everything here works straight from the definitions (pair deletion,
explicit path and lasso enumeration) and shares no algorithmic code with
:mod:`tsbridge.equiv`; its purpose is differential testing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    BOT,
    TAU,
    Action,
    KripkeStructure,
    LabelledTransitionSystem,
    System,
)
from .embed import embed_ks, embed_lts

# -- greatest fixpoints by pair deletion -----------------------------------


def _moves(sys: System):
    if isinstance(sys, KripkeStructure):
        return [[(None, t) for t in sys.succ[s]] for s in range(sys.n_states)]
    return [list(sys.succ[s]) for s in range(sys.n_states)]


def _label_ok(sys: System, s: int, s2: int) -> bool:
    return not isinstance(sys, KripkeStructure) or sys.labels[s] == sys.labels[s2]


def _transfer(moves, rel, s, s2) -> bool:
    for a, t in moves[s]:
        if not any(b == a and (t, t2) in rel for b, t2 in moves[s2]):
            return False
    return True


def gfp_simulation(sys: System, seed_relation=None) -> set:
    """Greatest simulation inside ``seed_relation`` (default: all pairs)."""
    n = sys.n_states
    if seed_relation is None:
        seed_relation = {(s, s2) for s in range(n) for s2 in range(n)}
    rel = {(s, s2) for s, s2 in seed_relation if _label_ok(sys, s, s2)}
    moves = _moves(sys)
    changed = True
    while changed:
        changed = False
        for pair in sorted(rel):
            if pair in rel and not _transfer(moves, rel, *pair):
                rel.discard(pair)
                changed = True
    return rel


def gfp_bisimulation(sys: System) -> set:
    """Greatest symmetric simulation."""
    n = sys.n_states
    rel = {(s, s2) for s in range(n) for s2 in range(n) if _label_ok(sys, s, s2)}
    moves = _moves(sys)
    changed = True
    while changed:
        changed = False
        for s, s2 in sorted(rel):
            if (s, s2) in rel and not (_transfer(moves, rel, s, s2) and _transfer(moves, rel, s2, s)):
                rel.discard((s, s2))
                rel.discard((s2, s))
                changed = True
    return rel


def gfp_dbse(k: KripkeStructure) -> set:
    """Greatest divergence-blind stuttering equivalence, by pair deletion.

    For a step ``s -> t`` the partner ``s2`` may walk through states related
    to ``s`` and must end in a state related to ``t``.
    """
    n = k.n_states
    rel = {(s, s2) for s in range(n) for s2 in range(n) if k.labels[s] == k.labels[s2]}

    def matched(s, s2, t):
        walk = {s2}
        stack = [s2]
        while stack:
            x = stack.pop()
            for y in k.succ[x]:
                if (s, y) in rel and y not in walk:
                    walk.add(y)
                    stack.append(y)
        ends = walk | {y for x in walk for y in k.succ[x]}
        return any((t, y) in rel for y in ends)

    changed = True
    while changed:
        changed = False
        for s, s2 in sorted(rel):
            if (s, s2) not in rel:
                continue
            ok = all(matched(s, s2, t) for t in k.succ[s]) and all(matched(s2, s, t) for t in k.succ[s2])
            if not ok:
                rel.discard((s, s2))
                rel.discard((s2, s))
                changed = True
    return rel


def bounded_divergent_ks(k: KripkeStructure) -> set:
    """States with a same-label walk of ``n`` steps (pigeonhole gives a cycle)."""
    n = k.n_states
    can = [True] * n
    for _ in range(n):
        can = [any(can[t] and k.labels[t] == k.labels[s] for t in k.succ[s]) for s in range(n)]
    return {s for s in range(n) if can[s]}


def gfp_stuttering(k: KripkeStructure) -> set:
    n = k.n_states
    d = "d"
    while d in k.ap:
        d += "_"
    edges = set(k.edges) | {(s, n) for s in bounded_divergent_ks(k)} | {(n, n)}
    kd = KripkeStructure(n + 1, k.ap | {d}, k.labels + (frozenset({d}),), frozenset(edges))
    return {(s, s2) for s, s2 in gfp_dbse(kd) if s < n and s2 < n}


def bounded_tau_divergent(t: LabelledTransitionSystem) -> set:
    n = t.n_states
    can = [True] * n
    for _ in range(n):
        can = [any(a.is_tau and can[u] for a, u in t.succ[s]) for s in range(n)]
    return {s for s in range(n) if can[s]}


def tau_lassos(t: LabelledTransitionSystem, s: int) -> list:
    """State sets of the tau-lassos from ``s`` (a simple path closed by a back edge).

    Every infinite tau-path from ``s`` visits all states of one of these.
    """
    silent = [[u for a, u in t.succ[x] if a.is_tau] for x in range(t.n_states)]
    found = set()
    path = [s]
    on_path = {s}

    def extend():
        x = path[-1]
        for y in silent[x]:
            if y in on_path:
                found.add(frozenset(path))
            else:
                path.append(y)
                on_path.add(y)
                extend()
                on_path.discard(path.pop())

    extend()
    return sorted(found, key=lambda p: (len(p), sorted(p)))


def _branching_answer(t, rel, tau_reach, s, s2) -> bool:
    for a, u in t.succ[s]:
        if a.is_tau and (u, s2) in rel:
            continue
        if not any(
            (s, x) in rel and any(b == a and (u, u2) in rel for b, u2 in t.succ[x])
            for x in tau_reach[s2]
        ):
            return False
    return True


def _tau_reach(t: LabelledTransitionSystem) -> list:
    silent = [[u for a, u in t.succ[x] if a.is_tau] for x in range(t.n_states)]
    out = []
    for s in range(t.n_states):
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in silent[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(seen)
    return out


def _symmetric_deletion(n, ok) -> set:
    rel = {(s, s2) for s in range(n) for s2 in range(n)}
    changed = True
    while changed:
        changed = False
        for s, s2 in sorted(rel):
            if (s, s2) in rel and not (ok(rel, s, s2) and ok(rel, s2, s)):
                rel.discard((s, s2))
                rel.discard((s2, s))
                changed = True
    return rel


def gfp_dsbb(t: LabelledTransitionSystem) -> set:
    """Greatest branching bisimulation in which divergence is observable.

    Transfer: ``s -a-> u`` is either an inert tau with ``(u, s2)`` related, or
    answered by ``s2 -tau*-> s* -a-> u2`` with ``(s, s*)`` and ``(u, u2)``
    related.  Divergence: if ``s`` has an infinite tau-path, ``s2`` reaches by
    tau-steps some ``s*`` related to ``s`` that has one too.
    """
    div = bounded_tau_divergent(t)
    reach = _tau_reach(t)

    def ok(rel, s, s2):
        if s in div and not any((s, x) in rel and x in div for x in reach[s2]):
            return False
        return _branching_answer(t, rel, reach, s, s2)

    return _symmetric_deletion(t.n_states, ok)


def gfp_dsbb_explicit(t: LabelledTransitionSystem) -> set:
    """Greatest branching bisimulation with explicit divergence, by pair deletion.

    Divergence: for every infinite tau-path of ``s``, ``s2`` must have an
    infinite tau-path all of whose states are related to some state of it.
    Only lassos need checking, since every infinite path covers one.
    """
    n = t.n_states
    silent = [[u for a, u in t.succ[x] if a.is_tau] for x in range(n)]
    lassos = [tau_lassos(t, s) for s in range(n)]
    reach = _tau_reach(t)

    def diverges_inside(s2, allowed):
        can = {x: True for x in allowed}
        for _ in range(len(allowed)):
            can = {x: any(can.get(y, False) for y in silent[x]) for x in allowed}
        return can.get(s2, False)

    def ok(rel, s, s2):
        for lasso in lassos[s]:
            allowed = {x for x in range(n) if any((p, x) in rel for p in lasso)}
            if not diverges_inside(s2, allowed):
                return False
        return _branching_answer(t, rel, reach, s, s2)

    return _symmetric_deletion(n, ok)


# -- trace prefixes and bare runs ------------------------------------------


def prefix_trace_ends(sys: System, s: int, depth: int) -> dict:
    """Every trace prefix of at most ``depth`` steps with its set of end states."""
    if isinstance(sys, KripkeStructure):
        layer = {((sys.labels[s],), s)}
    else:
        layer = {((), s)}
    out: dict = {}
    for word, x in layer:
        out.setdefault(word, set()).add(x)
    for _ in range(depth):
        nxt = set()
        for word, x in layer:
            if isinstance(sys, KripkeStructure):
                nxt.update((word + (sys.labels[y],), y) for y in sys.succ[x])
            else:
                nxt.update((word + (a,), y) for a, y in sys.succ[x])
        for word, y in nxt:
            out.setdefault(word, set()).add(y)
        layer = nxt
    return out


def prefix_traces(sys: System, s: int, depth: int) -> set:
    """Trace prefixes from ``s``; a Kripke prefix of depth d has d + 1 letters."""
    return set(prefix_trace_ends(sys, s, depth))


def bare_trace(sigma) -> tuple:
    """Drop every bottom together with the letter after it, and a trailing bottom."""
    out = []
    i = 0
    while i < len(sigma):
        if sigma[i] == BOT:
            i += 2
        else:
            out.append(sigma[i])
            i += 1
    return tuple(out)


def _ks_paths(k: KripkeStructure, s: int, depth: int) -> set:
    paths = set()
    layer = [(s,)]
    for _ in range(depth + 1):
        paths.update(layer)
        layer = [p + (t,) for p in layer for t in k.succ[p[-1]]]
    return paths


def _bare_runs(t: LabelledTransitionSystem, s: int, depth: int) -> list:
    runs = []
    layer = [((s,), ())]
    for _ in range(depth + 1):
        runs.extend(layer)
        layer = [
            (states + (u,), labels + (a,))
            for states, labels in layer
            for a, u in t.succ[states[-1]]
            if not a.is_bot
        ]
    return runs


def check_bare_run_bijection(k: KripkeStructure, s: int, depth: int) -> bool:
    """Bare runs of the embedding versus paths of ``k``, and the erasure lemma, up to ``depth``."""
    t, mapping = embed_lts(k)
    start = mapping.fwd[s]
    paths = {tuple(mapping.fwd[x] for x in p) for p in _ks_paths(k, s, depth)}
    labelings: dict = {}
    for states, labels in _bare_runs(t, start, depth):
        labelings.setdefault(states, set()).add(labels)
    if set(labelings) != paths:
        return False
    if any(len(ls) != 1 for ls in labelings.values()):
        return False
    ends = prefix_trace_ends(t, start, depth)
    for sigma, reached in ends.items():
        b = bare_trace(sigma)
        if BOT in b or b not in ends:
            return False
        key = b + (BOT,) if sigma and sigma[-1] == BOT else b
        if ends.get(key, set()) != reached:
            return False
    return True


# -- random instances ------------------------------------------------------


@dataclass(frozen=True)
class RandomSpec:
    """``n_letters`` is the proposition count for Kripke structures, the action count otherwise."""

    n_states: int = 4
    n_letters: int = 2
    density: float = 0.3
    tau_prob: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("random systems need at least one state")
        if self.n_letters < 1:
            raise ValueError("random systems need at least one letter")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if not 0.0 <= self.tau_prob <= 1.0:
            raise ValueError("tau probability must lie in [0, 1]")


PROP_NAMES = "pqrstuvw"
ACTION_NAMES = "abcdefgh"


def _names(base: str, count: int) -> list:
    return [base[i] if i < len(base) else f"{base[0]}{i}" for i in range(count)]


def _rng(spec: RandomSpec, salt: str) -> random.Random:
    return random.Random(f"{salt}:{spec.seed}:{spec.n_states}:{spec.n_letters}:{spec.density}:{spec.tau_prob}")


def _random_targets(rng, n, density):
    out = [[t for t in range(n) if rng.random() < density] for _ in range(n)]
    for ts in out:
        if not ts:
            ts.append(rng.randrange(n))
    return out


def random_ks(spec: RandomSpec) -> KripkeStructure:
    rng = _rng(spec, "ks")
    props = _names(PROP_NAMES, spec.n_letters)
    n = spec.n_states
    labels = [frozenset(p for p in props if rng.random() < 0.5) for _ in range(n)]
    targets = _random_targets(rng, n, spec.density)
    edges = {(s, t) for s in range(n) for t in targets[s]}
    return KripkeStructure(n, frozenset(props), tuple(labels), frozenset(edges))


def random_lts(spec: RandomSpec) -> LabelledTransitionSystem:
    rng = _rng(spec, "lts")
    acts = [Action.visible(a) for a in _names(ACTION_NAMES, spec.n_letters)]
    n = spec.n_states

    def pick():
        return TAU if rng.random() < spec.tau_prob else rng.choice(acts)

    trs = set()
    for s, ts in enumerate(_random_targets(rng, n, spec.density)):
        for t in ts:
            trs.add((s, pick(), t))
            if rng.random() < 0.2 * spec.density:
                trs.add((s, pick(), t))
    return LabelledTransitionSystem(n, frozenset(acts), frozenset(trs))


def random_reversible_lts(spec: RandomSpec) -> LabelledTransitionSystem:
    """An embedding image, perturbed while staying reversible.

    Perturbations: extra tau self-loops on original states, and for states
    whose only visible steps are their own label, a bottom self-loop with a
    label self-loop (optionally dropping the shadow and the tau self-loop).
    """
    rng = _rng(spec, "rev-lts")
    k = random_ks(spec)
    t, mapping = embed_lts(k)
    n = k.n_states
    trs = set(t.transitions)
    for s in range(n):
        if rng.random() < 0.2:
            trs.add((s, TAU, s))
    gone = set()
    for s in range(n):
        label = Action.labelset(k.labels[s])
        visible = {a for x, a, _ in trs if x == s and not a.is_bot and not a.is_tau}
        if visible - {label} or rng.random() < 0.5:
            continue
        trs.add((s, BOT, s))
        trs.add((s, label, s))
        if rng.random() < 0.5:
            shadow = mapping.shadow[s]
            gone.add(shadow)
            trs = {tr for tr in trs if shadow not in (tr[0], tr[2])}
            if rng.random() < 0.5:
                trs.discard((s, TAU, s))
    keep = [x for x in range(t.n_states) if x not in gone]
    index = {x: i for i, x in enumerate(keep)}
    trs = {(index[s], a, index[u]) for s, a, u in trs}
    return LabelledTransitionSystem(len(keep), t.alphabet, frozenset(trs))


def random_reversible_ks(spec: RandomSpec) -> KripkeStructure:
    """An embedding image of a random LTS, plus duplicated and orphan action states."""
    rng = _rng(spec, "rev-ks")
    base, _ = embed_ks(random_lts(spec))
    labels = list(base.labels)
    edges = set(base.edges)
    n_orig = spec.n_states
    acts = sorted(p for p in base.ap if p != "bottom")
    for x in range(n_orig, base.n_states):
        if rng.random() < 0.15:
            y = len(labels)
            labels.append(labels[x])
            (target,) = base.succ[x]
            edges.add((y, target))
            sources = base.pred[x]
            if rng.random() < 0.7:
                edges.add((rng.choice(sources), y))
    if rng.random() < 0.3:
        y = len(labels)
        labels.append(frozenset({rng.choice(acts)}))
        edges.add((y, rng.randrange(n_orig)))
    return KripkeStructure(len(labels), base.ap, tuple(labels), frozenset(edges))
