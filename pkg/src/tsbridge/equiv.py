"""Decision procedures for the behavioural equivalences.

Similarity is computed with a bitset pre-image fixpoint, the bisimulation
flavours by signature refinement, and the trace equivalences by a joint
subset construction.  The naive counterparts live in :mod:`tsbridge.oracle`.
"""

from __future__ import annotations

from collections import deque

from .core import (
    TAU,
    KripkeStructure,
    LabelledTransitionSystem,
    Partition,
    infinite_path_states,
    require_valid,
)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lts_tables(t: LabelledTransitionSystem):
    letters = t.actions()
    index = {a: i for i, a in enumerate(letters)}
    succ = [[(index[a], u) for a, u in t.succ[s]] for s in range(t.n_states)]
    return letters, index, succ


# -- similarity ------------------------------------------------------------


def _greatest_simulation(n, seed, moves, pre):
    """``sim[s]`` holds the states simulating ``s``.

    ``moves[s]`` lists ``(letter, target)``; ``pre[letter][x]`` is the bitset
    of letter-predecessors of ``x``.
    """
    sim = list(seed)
    changed = True
    while changed:
        changed = False
        for s in range(n):
            cur = sim[s]
            for a, t in moves[s]:
                allowed = 0
                pa = pre[a]
                for x in _bits(sim[t]):
                    allowed |= pa[x]
                cur &= allowed
            if cur != sim[s]:
                sim[s] = cur
                changed = True
    return frozenset((s, s2) for s in range(n) for s2 in _bits(sim[s]))


def simulation_preorder_ks(k: KripkeStructure) -> frozenset:
    """Greatest simulation; ``(s, s2)`` in the result means s2 simulates s."""
    require_valid(k)
    n = k.n_states
    pre = [0] * n
    for s, t in k.edges:
        pre[t] |= 1 << s
    seed = [sum(1 << s2 for s2 in range(n) if k.labels[s2] == k.labels[s]) for s in range(n)]
    moves = [[(0, t) for t in k.succ[s]] for s in range(n)]
    return _greatest_simulation(n, seed, moves, [pre])


def simulation_preorder_lts(t: LabelledTransitionSystem) -> frozenset:
    require_valid(t)
    n = t.n_states
    letters, _, succ = _lts_tables(t)
    pre = [[0] * n for _ in letters]
    for s in range(n):
        for a, u in succ[s]:
            pre[a][u] |= 1 << s
    full = (1 << n) - 1
    return _greatest_simulation(n, [full] * n, succ, pre)


def similar_ks(k: KripkeStructure, s: int, s2: int) -> bool:
    rel = simulation_preorder_ks(k)
    return (s, s2) in rel and (s2, s) in rel


def similar_lts(t: LabelledTransitionSystem, s: int, s2: int) -> bool:
    rel = simulation_preorder_lts(t)
    return (s, s2) in rel and (s2, s) in rel


# -- signature refinement --------------------------------------------------


def _canonical(keys) -> list:
    ids: dict = {}
    return [ids.setdefault(key, len(ids)) for key in keys]


def _refine(n, initial, signature) -> Partition:
    block = _canonical(initial)
    count = len(set(block))
    while True:
        new = _canonical((block[s], signature(block, s)) for s in range(n))
        new_count = len(set(new))
        block = new
        if new_count == count:
            return Partition(tuple(block))
        count = new_count


def bisim_partition_ks(k: KripkeStructure) -> Partition:
    require_valid(k)
    succ = k.succ

    def sig(block, s):
        return frozenset(block[t] for t in succ[s])

    return _refine(k.n_states, k.labels, sig)


def bisim_partition_lts(t: LabelledTransitionSystem) -> Partition:
    require_valid(t)
    _, _, succ = _lts_tables(t)

    def sig(block, s):
        return frozenset((a, block[u]) for a, u in succ[s])

    return _refine(t.n_states, [0] * t.n_states, sig)


def bisimilar_ks(k: KripkeStructure, s: int, s2: int) -> bool:
    return bisim_partition_ks(k).same(s, s2)


def bisimilar_lts(t: LabelledTransitionSystem, s: int, s2: int) -> bool:
    return bisim_partition_lts(t).same(s, s2)


def _branching_refine(n, initial, succ, silent, block_divergence=False) -> Partition:
    """Branching-style refinement over ``succ[s] = [(letter, target)]``.

    A step is inert when it carries ``silent`` and stays inside the current
    block.  The signature of ``s`` collects the non-inert steps available
    after inert steps only.  With ``block_divergence`` it also records whether
    ``s`` has an infinite path of inert steps, recomputed every round.
    """
    cache: dict = {}

    def inert_divergent(block):
        key = id(block)
        if key not in cache:
            cache.clear()
            inert = [[u for a, u in succ[x] if a == silent and block[u] == block[x]] for x in range(n)]
            cache[key] = (block, infinite_path_states(n, inert))
        return cache[key][1]

    def sig(block, s):
        b = block[s]
        seen = {s}
        stack = [s]
        out = set()
        while stack:
            x = stack.pop()
            for a, u in succ[x]:
                if block[u] == b and a == silent:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
                else:
                    out.add((a, block[u]))
        if block_divergence:
            return frozenset(out), s in inert_divergent(block)
        return frozenset(out)

    return _refine(n, initial, sig)


# -- stuttering ------------------------------------------------------------


def divergent_states_ks(k: KripkeStructure) -> frozenset:
    """States with an infinite path through states of their own label."""
    require_valid(k)
    same = [[t for t in k.succ[s] if k.labels[t] == k.labels[s]] for s in range(k.n_states)]
    return infinite_path_states(k.n_states, same)


def fresh_prop(ap, base: str = "d") -> str:
    p = base
    while p in ap:
        p += "'"
    return p


def build_kd(k: KripkeStructure) -> KripkeStructure:
    """Append a sink ``n`` labelled by a fresh proposition, entered from divergent states."""
    div = divergent_states_ks(k)
    n = k.n_states
    d = fresh_prop(k.ap)
    edges = set(k.edges) | {(s, n) for s in div} | {(n, n)}
    return KripkeStructure(n + 1, k.ap | {d}, k.labels + (frozenset({d}),), frozenset(edges))


def dbse_partition(k: KripkeStructure) -> Partition:
    """Classes of divergence-blind stuttering equivalence."""
    require_valid(k)
    moves = [[(0, t) for t in k.succ[s]] for s in range(k.n_states)]
    # same-block edges are inert; label changes always leave the block
    return _branching_refine(k.n_states, k.labels, moves, 0)


def stuttering_partition(k: KripkeStructure) -> Partition:
    return dbse_partition(build_kd(k)).restrict(k.n_states)


def stuttering_equivalent(k: KripkeStructure, s: int, s2: int) -> bool:
    return stuttering_partition(k).same(s, s2)


# -- divergence-sensitive branching bisimilarity ---------------------------


def tau_divergent_states_lts(t: LabelledTransitionSystem) -> frozenset:
    """States with an infinite tau-path."""
    require_valid(t)
    silent = [[u for a, u in t.succ[s] if a.is_tau] for s in range(t.n_states)]
    return infinite_path_states(t.n_states, silent)


def dsbb_partition(t: LabelledTransitionSystem) -> Partition:
    """Branching bisimilarity in which the ability to diverge is observable.

    Tau-divergent states get a self-loop on a fresh letter, then branching
    refinement runs.  A state may diverge through states it is not equivalent
    to; this is the notion matched by stuttering equivalence on ``embed_ks``.
    """
    require_valid(t)
    letters, index, succ = _lts_tables(t)
    delta = len(letters)
    marked = [list(moves) for moves in succ]
    for s in tau_divergent_states_lts(t):
        marked[s].append((delta, s))
    return _branching_refine(t.n_states, [0] * t.n_states, marked, index[TAU])


def explicit_divergence_partition(t: LabelledTransitionSystem) -> Partition:
    """Branching bisimilarity with explicit divergence.

    Stricter than :func:`dsbb_partition`: divergence only counts along inert
    tau-paths, i.e. through states of the same class.
    """
    require_valid(t)
    _, index, succ = _lts_tables(t)
    return _branching_refine(t.n_states, [0] * t.n_states, succ, index[TAU], block_divergence=True)


def dsbb_equivalent(t: LabelledTransitionSystem, s: int, s2: int) -> bool:
    return dsbb_partition(t).same(s, s2)


# -- traces ----------------------------------------------------------------


def _first_difference(start, step):
    """Shortest word separating two prefix-closed languages, or None.

    ``start`` is a pair of state sets; ``step(X)`` maps each enabled letter
    to the successor set.  Breadth-first over pairs of subset states.
    """
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (x, y), word = queue.popleft()
        sx, sy = step(x), step(y)
        if sx.keys() != sy.keys():
            letter = min(sx.keys() ^ sy.keys(), key=_letter_key)
            return word + (letter,)
        for letter in sorted(sx, key=_letter_key):
            nxt = (sx[letter], sy[letter])
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (letter,)))
    return None


def _letter_key(letter):
    if isinstance(letter, frozenset):
        return (0, tuple(sorted(letter)))
    return (1, letter.sort_key())


def trace_witness_ks(k: KripkeStructure, s: int, s2: int):
    """A finite trace prefix of exactly one of the two states, or None."""
    require_valid(k)
    if k.labels[s] != k.labels[s2]:
        return (k.labels[s],)
    labels, succ = k.labels, k.succ

    def step(states):
        out: dict = {}
        for x in states:
            for t in succ[x]:
                out.setdefault(labels[t], set()).add(t)
        return {a: frozenset(v) for a, v in out.items()}

    rest = _first_difference((frozenset({s}), frozenset({s2})), step)
    return None if rest is None else (k.labels[s],) + rest


def trace_witness_lts(t: LabelledTransitionSystem, s: int, s2: int):
    require_valid(t)
    succ = t.succ

    def step(states):
        out: dict = {}
        for x in states:
            for a, u in succ[x]:
                out.setdefault(a, set()).add(u)
        return {a: frozenset(v) for a, v in out.items()}

    return _first_difference((frozenset({s}), frozenset({s2})), step)


# Infinite traces of a total, finitely branching system are exactly the
# infinite words all of whose prefixes are traces (Koenig's lemma), so
# comparing the prefix-closed languages decides (completed) trace equivalence.


def trace_equivalent_ks(k: KripkeStructure, s: int, s2: int) -> bool:
    return trace_witness_ks(k, s, s2) is None


def completed_trace_equivalent_lts(t: LabelledTransitionSystem, s: int, s2: int) -> bool:
    return trace_witness_lts(t, s, s2) is None
