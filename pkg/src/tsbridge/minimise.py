"""Quotients, canonical minimisation and the cross-model pipelines."""

from __future__ import annotations

import enum

import networkx as nx

from .core import (
    KripkeStructure,
    LabelledTransitionSystem,
    Partition,
    System,
    disjoint_union,
    infinite_path_states,
)
from .embed import embed_ks, embed_lts, reverse_ks, reverse_lts
from .equiv import (
    bisim_partition_ks,
    bisim_partition_lts,
    dsbb_partition,
    stuttering_partition,
)


class QuotientMode(enum.Enum):
    STRONG = "strong"
    STUTTER = "stutter"
    BRANCHING = "branching"


KS_RELATIONS = ("bisim", "stutter")
LTS_RELATIONS = ("bisim", "dsbb")

# equivalence in the other model that the embeddings preserve and reflect
KS_TO_LTS = {"bisim": "bisim", "stutter": "dsbb"}
LTS_TO_KS = {"bisim": "bisim", "dsbb": "stutter"}


class QuotientError(ValueError):
    pass


def _block_has_cycle(blk, succ) -> bool:
    members = sorted(blk)
    local = {s: i for i, s in enumerate(members)}
    inner = [[local[t] for t in succ[s] if t in local] for s in members]
    return bool(infinite_path_states(len(members), inner))


def quotient_ks(k: KripkeStructure, p: Partition, mode: QuotientMode = QuotientMode.STRONG) -> KripkeStructure:
    if p.n_states != k.n_states:
        raise QuotientError(f"partition covers {p.n_states} states, structure has {k.n_states}")
    if mode is QuotientMode.BRANCHING:
        raise QuotientError("branching quotients apply to transition systems")
    labels = []
    for i, blk in enumerate(p.blocks):
        found = {k.labels[s] for s in blk}
        if len(found) != 1:
            raise QuotientError(f"block {i} mixes labels")
        labels.append(found.pop())
    edges = set()
    loops = set()
    for s, t in k.edges:
        bs, bt = p.block_of[s], p.block_of[t]
        if bs != bt:
            edges.add((bs, bt))
        else:
            loops.add(bs)
    for b in sorted(loops):
        if mode is QuotientMode.STRONG or _block_has_cycle(p.blocks[b], k.succ):
            edges.add((b, b))
    return KripkeStructure(len(p), k.ap, tuple(labels), frozenset(edges))


def quotient_lts(t: LabelledTransitionSystem, p: Partition, mode: QuotientMode = QuotientMode.STRONG) -> LabelledTransitionSystem:
    if p.n_states != t.n_states:
        raise QuotientError(f"partition covers {p.n_states} states, system has {t.n_states}")
    if mode is QuotientMode.STUTTER:
        raise QuotientError("stuttering quotients apply to Kripke structures")
    silent = [[u for a, u in t.succ[s] if a.is_tau] for s in range(t.n_states)]
    trs = set()
    tau_loops = {}
    for s, a, u in t.transitions:
        bs, bu = p.block_of[s], p.block_of[u]
        if a.is_tau and bs == bu and mode is QuotientMode.BRANCHING:
            tau_loops[bs] = a
            continue
        trs.add((bs, a, bu))
    for b, a in tau_loops.items():
        if _block_has_cycle(p.blocks[b], silent):
            trs.add((b, a, b))
    return LabelledTransitionSystem(len(p), t.alphabet, frozenset(trs))


def ks_partition(k: KripkeStructure, rel: str) -> Partition:
    if rel == "bisim":
        return bisim_partition_ks(k)
    if rel == "stutter":
        return stuttering_partition(k)
    raise ValueError(f"unknown Kripke relation {rel!r}; expected one of {KS_RELATIONS}")


def lts_partition(t: LabelledTransitionSystem, rel: str) -> Partition:
    if rel == "bisim":
        return bisim_partition_lts(t)
    if rel == "dsbb":
        return dsbb_partition(t)
    raise ValueError(f"unknown transition system relation {rel!r}; expected one of {LTS_RELATIONS}")


def min_ks(k: KripkeStructure, rel: str = "bisim") -> KripkeStructure:
    """Quotient by ``rel``; block ``i`` is the class with the i-th smallest least member."""
    mode = QuotientMode.STRONG if rel == "bisim" else QuotientMode.STUTTER
    return quotient_ks(k, ks_partition(k, rel), mode)


def min_lts(t: LabelledTransitionSystem, rel: str = "bisim") -> LabelledTransitionSystem:
    mode = QuotientMode.STRONG if rel == "bisim" else QuotientMode.BRANCHING
    return quotient_lts(t, lts_partition(t, rel), mode)


def min_ks_via_lts(k: KripkeStructure, rel: str = "bisim") -> KripkeStructure:
    lts, _ = embed_lts(k)
    return reverse_lts(min_lts(lts, KS_TO_LTS[rel]))


def min_lts_via_ks(t: LabelledTransitionSystem, rel: str = "bisim") -> LabelledTransitionSystem:
    ks, _ = embed_ks(t)
    return reverse_ks(min_ks(ks, LTS_TO_KS[rel]))


def system_partition(sys: System, rel: str) -> Partition:
    if isinstance(sys, KripkeStructure):
        return ks_partition(sys, rel)
    return lts_partition(sys, rel)


# -- isomorphism -----------------------------------------------------------


def _as_digraph(sys: System) -> nx.DiGraph:
    g = nx.DiGraph()
    if isinstance(sys, KripkeStructure):
        for s in range(sys.n_states):
            g.add_node(s, label=sys.labels[s])
        g.add_edges_from(sys.edges, label=None)
    else:
        g.add_nodes_from(range(sys.n_states), label=None)
        acts: dict = {}
        for s, a, u in sys.transitions:
            acts.setdefault((s, u), set()).add(a)
        for (s, u), labels in acts.items():
            g.add_edge(s, u, label=frozenset(labels))
    return g


def isomorphic(a: System, b: System) -> bool:
    """Label-respecting graph isomorphism; proposition universes and unused actions are ignored."""
    if type(a) is not type(b) or a.n_states != b.n_states:
        return False
    if isinstance(a, KripkeStructure):
        if len(a.edges) != len(b.edges) or sorted(map(sorted, a.labels)) != sorted(map(sorted, b.labels)):
            return False
    elif len(a.transitions) != len(b.transitions):
        return False
    same = lambda x, y: x["label"] == y["label"]
    return nx.is_isomorphic(_as_digraph(a), _as_digraph(b), node_match=same, edge_match=same)


def equivalence_bijection(a: System, b: System, rel: str):
    """For two ``rel``-minimal systems, the state bijection induced by ``rel``, or None.

    Computed on the disjoint union.  On minimal systems it exists exactly when
    the systems are isomorphic; it is a cheap cross-check of :func:`isomorphic`.
    """
    if type(a) is not type(b) or a.n_states != b.n_states:
        return None
    union, off = disjoint_union(a, b)
    p = system_partition(union, rel)
    mapping = {}
    for blk in p.blocks:
        left = [s for s in blk if s < off]
        right = [s - off for s in blk if s >= off]
        if len(left) != 1 or len(right) != 1:
            return None
        mapping[left[0]] = right[0]
    return mapping
