import subprocess
import sys

from tsbridge.cli import main, parse_spec
from tsbridge.formats import parse_aut, parse_ks

LEFT = 'des (0,2,1)\n(0,"bottom",0)\n(0,"{a}",0)\n'
PAIR = "ks 2 2\nstate 0 {p}\nstate 1 {p}\nedge 0 1\nedge 1 0\n"


def write(path, text):
    path.write_text(text)
    return str(path)


def test_check_bisimilar_pair_exits_zero(tmp_cwd, capsys):
    f = write(tmp_cwd / "pair.ks", PAIR)
    assert main(["check", "--rel", "bisim", f, "0", "1"]) == 0
    assert capsys.readouterr().out == "equivalent\n"


def test_check_reports_trace_witness(tmp_cwd, capsys):
    f = write(tmp_cwd / "t.aut", 'des (0,2,2)\n(0,"tau",0)\n(1,"a",1)\n')
    assert main(["check", "--rel", "trace", f, "0", "1"]) == 1
    assert capsys.readouterr().out == "not equivalent\nwitness: a\n"


def test_check_across_files(tmp_cwd, capsys):
    a = write(tmp_cwd / "a.ks", PAIR)
    b = write(tmp_cwd / "b.ks", "ks 1 1\nstate 0 {p}\nedge 0 0\n")
    assert main(["check", "--rel", "stutter", a, "1", "0", "--against", b]) == 0
    assert main(["check", "--rel", "sim", a, "0", "0", "--against", b]) == 0


def test_check_rejects_wrong_model_and_bad_state(tmp_cwd, capsys):
    f = write(tmp_cwd / "pair.ks", PAIR)
    assert main(["check", "--rel", "dsbb", f, "0", "1"]) == 2
    assert main(["check", "--rel", "bisim", f, "0", "7"]) == 2
    err = capsys.readouterr().err
    assert "error[model]" in err and "error[usage]" in err


def test_reverse_of_non_reversible_file(tmp_cwd, capsys):
    f = write(tmp_cwd / "bad.aut", 'des (0,2,2)\n(0,"{a}",1)\n(1,"{a}",1)\n')
    assert main(["reverse", "--from", "lts", f, "out.ks"]) == 2
    assert "error[condition-2]" in capsys.readouterr().err
    assert not (tmp_cwd / "out.ks").exists()


def test_reverse_and_embed_example(tmp_cwd):
    f = write(tmp_cwd / "left.aut", LEFT)
    assert main(["reverse", "--from", "lts", f, "mid.ks"]) == 0
    assert (tmp_cwd / "mid.ks").read_text() == "ks 1 1\nstate 0 {a}\nedge 0 0\n"
    assert main(["embed", "--to", "lts", "mid.ks", "right.aut"]) == 0
    right = parse_aut((tmp_cwd / "right.aut").read_text())
    assert len(right.transitions) == 3
    assert main(["embed", "--to", "ks", "left.aut", "img.ks"]) == 2  # bottom is reserved


def test_validate(tmp_cwd, capsys):
    good = write(tmp_cwd / "g.ks", PAIR)
    bad = write(tmp_cwd / "b.ks", "ks 2 1\nstate 0 {}\nstate 1 {}\nedge 0 1\n")
    junk = write(tmp_cwd / "j.aut", "nonsense\n")
    assert main(["validate", good]) == 0
    assert main(["validate", bad]) == 1
    assert main(["validate", junk]) == 2
    assert main(["validate", str(tmp_cwd / "missing.ks")]) == 2
    err = capsys.readouterr().err
    assert "error[totality]" in err and "error[format]" in err and "error[io]" in err


def test_minimise_direct_and_via(tmp_cwd):
    f = write(tmp_cwd / "pair.ks", PAIR)
    assert main(["minimise", "--rel", "bisim", f, "m.ks"]) == 0
    assert main(["minimise", "--rel", "stutter", "--via-other-model", f, "v.ks"]) == 0
    assert parse_ks((tmp_cwd / "m.ks").read_text()).n_states == 1
    assert parse_ks((tmp_cwd / "v.ks").read_text()).n_states == 1
    assert main(["minimise", "--rel", "dsbb", f, "x.ks"]) == 2
    assert main(["minimise", "--rel", "bisim", f, "x.aut"]) == 2


def test_gen_spec_and_env_seed(tmp_cwd, monkeypatch):
    assert main(["gen", "--kind", "rev-lts", "--spec", "n=3,letters=2,seed=5", "a.aut"]) == 0
    assert main(["gen", "--kind", "rev-lts", "--spec", "n=3,letters=2,seed=5", "b.aut"]) == 0
    assert (tmp_cwd / "a.aut").read_text() == (tmp_cwd / "b.aut").read_text()
    monkeypatch.setenv("TSBRIDGE_SEED", "5")
    assert main(["gen", "--kind", "rev-lts", "--spec", "n=3,letters=2", "c.aut"]) == 0
    assert (tmp_cwd / "c.aut").read_text() == (tmp_cwd / "a.aut").read_text()
    assert main(["gen", "--kind", "ks", "--spec", "n=0", "d.ks"]) == 2


def test_parse_spec():
    spec = parse_spec("n=4, letters=3, density=0.25, tau=0.1, seed=9")
    assert (spec.n_states, spec.n_letters, spec.density, spec.tau_prob, spec.seed) == (4, 3, 0.25, 0.1, 9)


def test_verify_subset(capsys):
    assert main(["verify-theorems", "--trials", "3", "--seed", "7", "--theorem", "example", "--theorem", "roundtrip-ks"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines() == [
        "verify-theorems seed=7 trials=3 max-states=8",
        "PASS  example       1/1",
        "PASS  roundtrip-ks  3/3",
        "2 theorems, 0 failing",
    ]


def test_module_entry_point(tmp_path):
    f = tmp_path / "pair.ks"
    f.write_text(PAIR)
    res = subprocess.run([sys.executable, "-m", "tsbridge", "check", "--rel", "bisim", str(f), "0", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "equivalent\n"


def test_verify_is_deterministic(capsys):
    args = ["verify-theorems", "--trials", "20", "--seed", "42"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first
