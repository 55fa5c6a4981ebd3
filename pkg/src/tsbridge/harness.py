"""Randomised metamorphic checks of the translation and minimisation theorems.

Each theorem is a predicate over one random instance.  Trial ``i`` of a run
with seed ``S`` draws its instances from the string seed ``"S/i"``, so a
failing trial can be replayed in isolation.  Reports carry no timings and
are byte-identical for equal arguments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import equiv, oracle
from .core import BOT, KripkeStructure, LabelledTransitionSystem, Partition, make_ks, make_lts
from .embed import embed_ks, embed_lts, is_reversible_ks, is_reversible_lts, reverse_ks, reverse_lts
from .minimise import (
    equivalence_bijection,
    isomorphic,
    min_ks,
    min_ks_via_lts,
    min_lts,
    min_lts_via_ks,
)

TRACE_MAX_STATES = 6
TRACE_DEPTH = 8
BARE_RUN_DEPTH = 6


@dataclass(frozen=True)
class Theorem:
    name: str
    corpus: str  # which random instance of the trial it consumes
    check: Callable
    summary: str


# -- helpers ---------------------------------------------------------------


def _pairs(n):
    return [(s, s2) for s in range(n) for s2 in range(n)]


def _both_ways(rel, s, s2):
    return (s, s2) in rel and (s2, s) in rel


def _same_on(p: Partition, q: Partition, n: int) -> bool:
    return all(p.same(s, s2) == q.same(s, s2) for s, s2 in _pairs(n))


def _trace_oracle(sys, witness_of) -> bool:
    """Bounded enumeration confirms every subset-construction verdict."""
    memo: dict = {}

    def lang(s, depth):
        if (s, depth) not in memo:
            memo[s, depth] = oracle.prefix_traces(sys, s, depth)
        return memo[s, depth]

    for s, s2 in _pairs(sys.n_states):
        witness = witness_of(sys, s, s2)
        if witness is None:
            if lang(s, TRACE_DEPTH) != lang(s2, TRACE_DEPTH):
                return False
            continue
        depth = len(witness) - 1 if isinstance(sys, KripkeStructure) else len(witness)
        if (tuple(witness) in lang(s, depth)) == (tuple(witness) in lang(s2, depth)):
            return False
    return True


# -- theorem predicates ----------------------------------------------------


def roundtrip_lts(k: KripkeStructure) -> bool:
    back = reverse_lts(embed_lts(k)[0])
    return back.labels == k.labels and back.edges == k.edges


def roundtrip_ks(t: LabelledTransitionSystem) -> bool:
    return reverse_ks(embed_ks(t)[0]) == t


def sim_via_lts(k):
    t, m = embed_lts(k)
    a, b = equiv.simulation_preorder_ks(k), equiv.simulation_preorder_lts(t)
    return all(_both_ways(a, s, s2) == _both_ways(b, m.fwd[s], m.fwd[s2]) for s, s2 in _pairs(k.n_states))


def sim_via_ks(t):
    k, m = embed_ks(t)
    a, b = equiv.simulation_preorder_lts(t), equiv.simulation_preorder_ks(k)
    return all(_both_ways(a, s, s2) == _both_ways(b, m.fwd[s], m.fwd[s2]) for s, s2 in _pairs(t.n_states))


def bisim_via_lts(k):
    t, m = embed_lts(k)
    p, q = equiv.bisim_partition_ks(k), equiv.bisim_partition_lts(t)
    return all(p.same(s, s2) == q.same(m.fwd[s], m.fwd[s2]) for s, s2 in _pairs(k.n_states))


def bisim_via_ks(t):
    k, m = embed_ks(t)
    p, q = equiv.bisim_partition_lts(t), equiv.bisim_partition_ks(k)
    return all(p.same(s, s2) == q.same(m.fwd[s], m.fwd[s2]) for s, s2 in _pairs(t.n_states))


def trace_via_lts(k):
    t, m = embed_lts(k)
    return all(
        equiv.trace_equivalent_ks(k, s, s2) == equiv.completed_trace_equivalent_lts(t, m.fwd[s], m.fwd[s2])
        for s, s2 in _pairs(k.n_states)
    )


def trace_via_ks(t):
    k, m = embed_ks(t)
    return all(
        equiv.completed_trace_equivalent_lts(t, s, s2) == equiv.trace_equivalent_ks(k, m.fwd[s], m.fwd[s2])
        for s, s2 in _pairs(t.n_states)
    )


def dsbb_via_stutter(t):
    k, _ = embed_ks(t)
    return _same_on(equiv.dsbb_partition(t), equiv.stuttering_partition(k), t.n_states)


def oracle_sim_ks(k):
    return equiv.simulation_preorder_ks(k) == oracle.gfp_simulation(k)


def oracle_sim_lts(t):
    return equiv.simulation_preorder_lts(t) == oracle.gfp_simulation(t)


def oracle_bisim_ks(k):
    return equiv.bisim_partition_ks(k).pairs() == oracle.gfp_bisimulation(k)


def oracle_bisim_lts(t):
    return equiv.bisim_partition_lts(t).pairs() == oracle.gfp_bisimulation(t)


def oracle_dbse(k):
    return equiv.dbse_partition(k).pairs() == oracle.gfp_dbse(k)


def oracle_stutter(k):
    return equiv.stuttering_partition(k).pairs() == oracle.gfp_stuttering(k)


def oracle_dsbb(t):
    return equiv.dsbb_partition(t).pairs() == oracle.gfp_dsbb(t)


def oracle_explicit(t):
    return equiv.explicit_divergence_partition(t).pairs() == oracle.gfp_dsbb_explicit(t)


def oracle_trace_ks(k):
    return _trace_oracle(k, equiv.trace_witness_ks)


def oracle_trace_lts(t):
    return _trace_oracle(t, equiv.trace_witness_lts)


def _min_ks_theorem(rel):
    def check(k):
        direct, via = min_ks(k, rel), min_ks_via_lts(k, rel)
        iso = isomorphic(direct, via)
        # on minimal systems the equivalence itself must be a bijection
        assert iso == (equivalence_bijection(direct, via, rel) is not None), "isomorphism cross-check disagrees"
        return iso

    return check


def _min_lts_theorem(rel):
    def check(t):
        direct, via = min_lts(t, rel), min_lts_via_ks(t, rel)
        iso = isomorphic(direct, via)
        assert iso == (equivalence_bijection(direct, via, rel) is not None), "isomorphism cross-check disagrees"
        return iso

    return check


def _lemma(ks_rel, lts_rel):
    def check(k):
        image, _ = embed_lts(min_ks(k, ks_rel))
        return isomorphic(min_lts(image, lts_rel), image)

    return check


def _reversible_lts_theorem(rel):
    def check(t):
        return not is_reversible_lts(min_lts(t, rel))

    return check


def _reversible_ks_theorem(rel):
    def check(k):
        return not is_reversible_ks(min_ks(k, rel))

    return check


def bare_runs(k):
    return all(oracle.check_bare_run_bijection(k, s, BARE_RUN_DEPTH) for s in range(k.n_states))


THEOREMS = (
    Theorem("roundtrip-lts", "ks", roundtrip_lts, "reverse_lts(embed_lts(K)) == K"),
    Theorem("roundtrip-ks", "lts", roundtrip_ks, "reverse_ks(embed_ks(T)) == T"),
    Theorem("sim-lts", "ks", sim_via_lts, "similarity preserved and reflected by embed_lts"),
    Theorem("sim-ks", "lts", sim_via_ks, "similarity preserved and reflected by embed_ks"),
    Theorem("bisim-lts", "ks", bisim_via_lts, "bisimilarity preserved and reflected by embed_lts"),
    Theorem("bisim-ks", "lts", bisim_via_ks, "bisimilarity preserved and reflected by embed_ks"),
    Theorem("trace-lts", "ks-small", trace_via_lts, "trace equivalence vs completed traces of embed_lts"),
    Theorem("trace-ks", "lts-small", trace_via_ks, "completed traces vs trace equivalence of embed_ks"),
    Theorem("dsbb-stutter", "lts", dsbb_via_stutter, "dsbb on T equals stuttering on embed_ks(T)"),
    Theorem("oracle-sim-ks", "ks", oracle_sim_ks, "similarity vs pair-deletion oracle"),
    Theorem("oracle-sim-lts", "lts", oracle_sim_lts, "similarity vs pair-deletion oracle"),
    Theorem("oracle-bisim-ks", "ks", oracle_bisim_ks, "bisimulation vs pair-deletion oracle"),
    Theorem("oracle-bisim-lts", "lts", oracle_bisim_lts, "bisimulation vs pair-deletion oracle"),
    Theorem("oracle-dbse", "ks", oracle_dbse, "divergence-blind stuttering vs pair-deletion oracle"),
    Theorem("oracle-stutter", "ks", oracle_stutter, "stuttering vs pair-deletion oracle"),
    Theorem("oracle-dsbb", "lts", oracle_dsbb, "dsbb vs pair-deletion oracle"),
    Theorem("oracle-explicit-divergence", "lts", oracle_explicit, "explicit divergence vs lasso oracle"),
    Theorem("oracle-trace-ks", "ks-small", oracle_trace_ks, "trace decision vs bounded enumeration"),
    Theorem("oracle-trace-lts", "lts-small", oracle_trace_lts, "trace decision vs bounded enumeration"),
    Theorem("min-ks-bisim", "ks", _min_ks_theorem("bisim"), "min_ks == reverse_lts . min_lts . embed_lts (bisim)"),
    Theorem("min-ks-stutter", "ks", _min_ks_theorem("stutter"), "min_ks == reverse_lts . min_lts . embed_lts (stutter)"),
    Theorem("min-lts-bisim", "lts", _min_lts_theorem("bisim"), "min_lts == reverse_ks . min_ks . embed_ks (bisim)"),
    Theorem("min-lts-dsbb", "lts", _min_lts_theorem("dsbb"), "min_lts == reverse_ks . min_ks . embed_ks (dsbb)"),
    Theorem("lemma-bisim", "ks", _lemma("bisim", "bisim"), "embed_lts of a bisim-minimal KS is minimal"),
    Theorem("lemma-stutter", "ks", _lemma("stutter", "dsbb"), "embed_lts of a stutter-minimal KS is dsbb-minimal"),
    Theorem("reversible-lts-bisim", "rev-lts", _reversible_lts_theorem("bisim"), "bisim quotient keeps LTS reversibility"),
    Theorem("reversible-lts-dsbb", "rev-lts", _reversible_lts_theorem("dsbb"), "dsbb quotient keeps LTS reversibility"),
    Theorem("reversible-ks-bisim", "rev-ks", _reversible_ks_theorem("bisim"), "bisim quotient keeps KS reversibility"),
    Theorem("reversible-ks-stutter", "rev-ks", _reversible_ks_theorem("stutter"), "stutter quotient keeps KS reversibility"),
    Theorem("bare-runs", "ks-small", bare_runs, "bare runs of embed_lts(K) match paths of K"),
)

THEOREM_NAMES = tuple(th.name for th in THEOREMS) + ("example",)


# -- the worked example ----------------------------------------------------


def example_systems():
    """The reversible one-state LTS, its reverse, and that reverse's embedding."""
    left = make_lts(1, [(0, BOT, 0), (0, "{a}", 0)])
    middle = reverse_lts(left)
    right, _ = embed_lts(middle)
    return left, middle, right


def check_example() -> bool:
    left, middle, right = example_systems()
    want_middle = make_ks([{"a"}], [(0, 0)])
    want_right = make_lts(2, [(0, "bottom", 1), (1, "{a}", 0), (0, "tau", 0)])
    return (
        middle.labels == want_middle.labels
        and middle.edges == want_middle.edges
        and right == want_right
        and not isomorphic(left, right)
    )


# -- corpus and runner -----------------------------------------------------


def trial_spec(seed, i: int, max_states: int) -> oracle.RandomSpec:
    rng = random.Random(f"{seed}/{i}")
    return oracle.RandomSpec(
        n_states=rng.randint(1, max_states),
        n_letters=rng.randint(1, 3),
        density=round(rng.uniform(0.1, 0.5), 2),
        tau_prob=0.3,
        seed=rng.randrange(2**31),
    )


def _small(spec: oracle.RandomSpec) -> oracle.RandomSpec:
    return oracle.RandomSpec(min(spec.n_states, TRACE_MAX_STATES), spec.n_letters, spec.density, spec.tau_prob, spec.seed)


_MAKERS = {
    "ks": lambda sp: oracle.random_ks(sp),
    "lts": lambda sp: oracle.random_lts(sp),
    "ks-small": lambda sp: oracle.random_ks(_small(sp)),
    "lts-small": lambda sp: oracle.random_lts(_small(sp)),
    "rev-lts": lambda sp: oracle.random_reversible_lts(sp),
    "rev-ks": lambda sp: oracle.random_reversible_ks(sp),
}


@dataclass
class TheoremResult:
    name: str
    passed: int = 0
    total: int = 0
    failing: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.total


@dataclass
class Report:
    seed: str
    trials: int
    max_states: int
    results: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def render(self) -> str:
        width = max(len(r.name) for r in self.results)
        lines = [f"verify-theorems seed={self.seed} trials={self.trials} max-states={self.max_states}"]
        for r in self.results:
            status = "PASS" if r.ok else "FAIL"
            line = f"{status}  {r.name:<{width}}  {r.passed}/{r.total}"
            if r.failing:
                shown = ", ".join(r.failing[:5])
                more = f" (+{len(r.failing) - 5} more)" if len(r.failing) > 5 else ""
                line += f"  failing trials: {shown}{more}"
            lines.append(line)
        bad = sum(not r.ok for r in self.results)
        lines.append(f"{len(self.results)} theorems, {bad} failing")
        return "\n".join(lines) + "\n"


def run(trials: int = 1000, max_states: int = 8, seed="42", only=None) -> Report:
    if trials < 0:
        raise ValueError("trials must be non-negative")
    if max_states < 1:
        raise ValueError("max-states must be at least 1")
    if only is not None:
        unknown = sorted(set(only) - set(THEOREM_NAMES))
        if unknown:
            raise ValueError(f"unknown theorem {unknown[0]!r}")
    chosen = [th for th in THEOREMS if only is None or th.name in only]
    results = {th.name: TheoremResult(th.name) for th in chosen}
    for i in range(trials):
        spec = trial_spec(seed, i, max_states)
        cache: dict = {}
        for th in chosen:
            if th.corpus not in cache:
                cache[th.corpus] = _MAKERS[th.corpus](spec)
            res = results[th.name]
            res.total += 1
            try:
                good = bool(th.check(cache[th.corpus]))
            except Exception as exc:  # a crash counts as a counterexample
                good = False
                res.failing.append(f"{seed}/{i} ({type(exc).__name__}: {exc})")
            else:
                if not good:
                    res.failing.append(f"{seed}/{i}")
            if good:
                res.passed += 1
    ordered = [results[th.name] for th in chosen]
    if only is None or "example" in only:
        ex = TheoremResult("example", total=1)
        if check_example():
            ex.passed = 1
        else:
            ex.failing.append("fixed instance")
        ordered.insert(0, ex)
    return Report(str(seed), trials, max_states, ordered)
