"""Acceptance criteria 1-12, checked on the default corpus.

Criteria 1-11 read the report of ``tsbridge verify-theorems --seed 42``
(1000 trials, up to 8 states; the trace and bare-run theorems use up to 6).
Criterion 12 compares that report with a second run in a fresh process.

Run directly (``python tests/test_acceptance.py``) to print the criterion
lines without pytest.
"""

import re
import subprocess
import sys

import pytest

from conftest import ACCEPTANCE

ARGS = ["verify-theorems", "--trials", "1000", "--max-states", "8", "--seed", "42"]

CRITERIA = {
    1: ("round trips are identities", ["roundtrip-lts", "roundtrip-ks"]),
    2: ("worked example reproduced", ["example"]),
    3: ("similarity preserved and reflected", ["sim-lts", "sim-ks"]),
    4: ("bisimilarity preserved and reflected", ["bisim-lts", "bisim-ks"]),
    5: ("trace equivalences correspond", ["trace-lts", "trace-ks", "oracle-trace-ks", "oracle-trace-lts"]),
    6: ("dsbb matches stuttering of the embedding", ["dsbb-stutter"]),
    7: (
        "fast procedures match oracles",
        [
            "oracle-sim-ks",
            "oracle-sim-lts",
            "oracle-bisim-ks",
            "oracle-bisim-lts",
            "oracle-dbse",
            "oracle-stutter",
            "oracle-dsbb",
            "oracle-trace-ks",
            "oracle-trace-lts",
        ],
    ),
    8: ("minimisation pipelines commute", ["min-ks-bisim", "min-ks-stutter", "min-lts-bisim", "min-lts-dsbb"]),
    9: ("embedded minimal structures are minimal", ["lemma-bisim", "lemma-stutter"]),
    10: (
        "quotients keep reversibility",
        ["reversible-lts-bisim", "reversible-lts-dsbb", "reversible-ks-bisim", "reversible-ks-stutter"],
    ),
    11: ("bare runs match paths", ["bare-runs"]),
}

_LINE = re.compile(r"(PASS|FAIL)\s+(\S+)\s+(\d+)/(\d+)")


def run_cli():
    res = subprocess.run([sys.executable, "-m", "tsbridge", *ARGS], capture_output=True, text=True)
    if res.returncode not in (0, 1):
        raise RuntimeError(res.stderr)
    return res.stdout


def parse(report: str) -> dict:
    out = {}
    for line in report.splitlines():
        m = _LINE.match(line)
        if m:
            out[m.group(2)] = (int(m.group(3)), int(m.group(4)))
    return out


def judge(counts: dict, number: int):
    title, names = CRITERIA[number]
    missing = [n for n in names if n not in counts]
    if missing:
        return False, f"{title}: theorem {missing[0]} missing from the report"
    parts = [f"{n} {counts[n][0]}/{counts[n][1]}" for n in names]
    ok = all(counts[n][0] == counts[n][1] and counts[n][1] > 0 for n in names)
    return ok, f"{title} ({', '.join(parts)})"


@pytest.fixture(scope="module")
def reports():
    return run_cli(), run_cli()


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(reports, number):
    ok, detail = judge(parse(reports[0]), number)
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_12_determinism(reports):
    first, second = reports
    ok = first == second and bool(first)
    detail = "two runs of verify-theorems --seed 42 are byte-identical" if ok else "reports differ"
    ACCEPTANCE[12] = (ok, detail)
    print(f"criterion 12: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok


if __name__ == "__main__":
    a, b = run_cli(), run_cli()
    counts = parse(a)
    for number in sorted(CRITERIA):
        ok, detail = judge(counts, number)
        print(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    print(f"criterion 12: {'PASS' if a == b else 'FAIL'}  determinism")
