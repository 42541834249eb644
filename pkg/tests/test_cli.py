import json
import pathlib

import pytest

from mobiuslab.cli import main

REPO = pathlib.Path(__file__).parent.parent
SPECS = REPO / "specs"
GOLDEN = pathlib.Path(__file__).parent / "fixtures" / "golden"
TM_SPEC = str(SPECS / "thue_morse.spec")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen(capsys):
    code, out, err = run(capsys, "gen", TM_SPEC, "--system", "tm", "--n", "16")
    assert (code, out, err) == (0, "0110100110010110\n", "")


def test_gen_infers_unique_system(capsys):
    code, out, _ = run(capsys, "gen", str(SPECS / "herning.spec"), "--system", "herning", "--n", "5")
    assert code == 0 and out == "aabaa\n"


def test_cover(capsys):
    code, out, err = run(capsys, "cover", str(SPECS / "herning.spec"), "--system", "herning")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "|G| = 6"
    assert lines[1] == "block = 0 1 2 0 0"
    assert lines[2:] == [
        "column 0: e",
        "column 1: (b c)",
        "column 2: (a b)",
        "column 3: e",
        "column 4: e",
    ]


def test_hat(capsys):
    code, out, _ = run(capsys, "hat", TM_SPEC, "--system", "tm", "--n", "15")
    assert code == 0 and out == "101110101011101\n"


def test_skeleton(capsys):
    code, out, _ = run(capsys, "skeleton", "--lam", "2", "--t", "3", "--k", "5")
    assert code == 0 and out == "-5\n"
    code, out, _ = run(capsys, "skeleton", "--lam", "2", "--t", "3", "--k", "8")
    assert code == 0 and out == "0\n"


def test_blocks(capsys):
    code, out, _ = run(capsys, "blocks", str(SPECS / "herning.spec"), "--system", "herning", "--t", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t=1 |word|=5 aabaa"
    assert lines[1].startswith("t=2 |word|=25 aabaaaabaabcabb")


def test_corr_header(capsys):
    code, out, _ = run(
        capsys, "corr", TM_SPEC, "--system", "tm", "--observable", "w0",
        "--n", "4096", "--lags", "4",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "lag,real,imag"
    assert lines[1] == "0,1,0"
    assert len(lines) == 6


def test_spectrum_header(capsys):
    code, out, _ = run(
        capsys, "spectrum", TM_SPEC, "--system", "tm", "--observable", "w0",
        "--n", "8192", "--lags", "32", "--grid", "8",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "k,value"
    assert len(lines) == 9


def test_sarnak_final(capsys):
    code, out, _ = run(
        capsys, "sarnak", TM_SPEC, "--system", "tm", "--observable", "w0", "--n", "1024",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "final = 0.00390625 + 0i at N = 1024"
    assert lines[1] == "N,real,imag"
    assert lines[-1] == "1024,0.00390625,0"


def test_kbsz_final(capsys):
    code, out, _ = run(
        capsys, "kbsz", TM_SPEC, "--observable", "w0", "--n", "1024", "--primes", "3,5",
    )
    assert code == 0
    assert out.splitlines()[0] == "final = 0.328125 + 0i at N = 1024"


def test_kbsz_rejects_bad_primes(capsys):
    code, _, err = run(
        capsys, "kbsz", TM_SPEC, "--observable", "w0", "--n", "64", "--primes", "4,5",
    )
    assert code == 2 and err.startswith("error:")


def test_sarnak_writes_file(capsys, tmp_path):
    out_file = tmp_path / "run.json"
    code, _, _ = run(
        capsys, "sarnak", TM_SPEC, "--system", "tm", "--observable", "w0",
        "--n", "256", "--out", str(out_file), "--format", "json",
    )
    assert code == 0
    payload = json.loads(out_file.read_text())
    assert payload["metadata"]["weight"] == "moebius"
    assert payload["rows"][-1]["N"] == 256


def test_run_matches_golden_csv(capsys, tmp_path):
    code, out, err = run(capsys, "run", TM_SPEC, "--out", str(tmp_path))
    assert code == 0 and err == ""
    produced = tmp_path / "sarnak_tm_moebius.csv"
    assert produced.read_bytes() == (GOLDEN / "sarnak_tm_moebius_pow2.csv").read_bytes()
    assert (tmp_path / "kbsz_tm_3_5.json").exists()
    assert "experiment sarnak_tm_moebius: final = 0.000138282775879" in out


def test_bad_spec_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.spec"
    bad.write_text('substitution tm on {0, 1} {\n  0 "01";\n}\n')
    code, out, err = run(capsys, "gen", str(bad))
    assert code == 1 and out == ""
    assert "error: line 2, column 5" in err


def test_missing_file_exits_two(capsys):
    code, _, err = run(capsys, "gen", str(SPECS / "missing.spec"))
    assert code == 2 and err.startswith("error:")


def test_unknown_system_exits_two(capsys):
    code, _, err = run(capsys, "gen", TM_SPEC, "--system", "nope")
    assert code == 2
    assert err == "error: unknown system 'nope' (have: tm)\n"


def test_veech_and_rs_systems(capsys):
    spec = str(SPECS / "veech_rs.spec")
    code, out, _ = run(capsys, "gen", spec, "--system", "vtm", "--n", "15")
    assert code == 0 and out == "101110101011101\n"
    code, out, _ = run(capsys, "gen", spec, "--system", "rs11", "--n", "16")
    assert code == 0 and out == "0001001000011101\n"
