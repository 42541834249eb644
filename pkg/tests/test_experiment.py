import json
import pathlib

import numpy as np
import pytest

from mobiuslab.arith import weight_table
from mobiuslab.experiment import (
    ExperimentConfig,
    block_sweep,
    kbsz_series,
    pow2_checkpoints,
    report_csv,
    report_json,
    run_config,
    run_experiment,
    sarnak_series,
)
from mobiuslab.spectral import make_symbol_table, make_walsh
from mobiuslab.streams import periodic_stream
from mobiuslab.subst import Substitution, fixed_point_stream

GOLDEN = pathlib.Path(__file__).parent / "fixtures" / "golden"
TM = fixed_point_stream(Substitution(((0, 1), (1, 0)), ("0", "1")), name="thue_morse")
W0 = make_walsh((0,))


def test_pow2_checkpoints():
    assert pow2_checkpoints(1) == (1,)
    assert pow2_checkpoints(16) == (1, 2, 4, 8, 16)
    assert pow2_checkpoints(20) == (1, 2, 4, 8, 16, 20)
    with pytest.raises(ValueError):
        pow2_checkpoints(0)


def test_checkpoint_validation():
    with pytest.raises(ValueError):
        sarnak_series(TM, W0, None, ())
    with pytest.raises(ValueError):
        sarnak_series(TM, W0, None, (0, 4))
    with pytest.raises(ValueError):
        sarnak_series(TM, W0, None, (4, 4, 8))


def test_sarnak_matches_direct_sum():
    mu = weight_table("moebius", 600)
    rep = sarnak_series(TM, W0, mu, (1, 7, 100, 600))
    v = W0.evaluate(TM, 1, 600)
    for m, got in zip(rep.checkpoints, rep.values):
        direct = np.dot(v[:m], mu.values[1 : m + 1]) / m
        assert got == pytest.approx(direct, abs=1e-15)
    assert rep.weight == "moebius" and rep.system == "thue_morse"
    assert rep.final == rep.values[-1]


def test_sarnak_unweighted():
    rep = sarnak_series(TM, W0, None, (4096,))
    v = W0.evaluate(TM, 1, 4096)
    assert rep.final == pytest.approx(np.mean(v), abs=1e-15)
    assert rep.weight == "none"


def test_weight_table_too_short():
    mu = weight_table("moebius", 100)
    with pytest.raises(ValueError):
        sarnak_series(TM, W0, mu, (1, 200))


def test_kbsz_periodic_is_one():
    # odd dilations preserve parity, so the periodic word gives exactly 1
    stream = periodic_stream([0, 1], name="alternating")
    rep = kbsz_series(stream, W0, 3, 5, pow2_checkpoints(4096))
    assert all(v == 1.0 + 0.0j for v in rep.values)
    assert rep.primes == (3, 5) and rep.weight is None
    with pytest.raises(ValueError):
        kbsz_series(stream, W0, 0, 5, (16,))


def test_kbsz_matches_direct_sum():
    rep = kbsz_series(TM, W0, 3, 5, (1, 10, 1000))
    prefix = TM.prefix(5 * 1000 + 1)
    signs = 1.0 - 2.0 * prefix
    for m, got in zip(rep.checkpoints, rep.values):
        n = np.arange(1, m + 1)
        direct = np.mean(signs[3 * n] * signs[5 * n])
        assert got == pytest.approx(direct, abs=1e-15)


def test_block_sweep_partition():
    reports = block_sweep(TM, 2, None, (2048,))
    assert sorted(reports) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    # indicators of the length-2 blocks partition every position
    total = sum(rep.final for rep in reports.values())
    assert total == 1.0 + 0.0j
    with pytest.raises(ValueError):
        block_sweep(TM, 0, None, (64,))


def test_report_csv_matches_golden():
    mu = weight_table("moebius", 1 << 20)
    rep = sarnak_series(TM, W0, mu, pow2_checkpoints(1 << 20))
    assert report_csv(rep) == (GOLDEN / "sarnak_tm_moebius_pow2.csv").read_bytes()


def test_final_values_match_golden():
    mu = weight_table("moebius", 1 << 20)
    rep = sarnak_series(TM, W0, mu, (1 << 20,))
    frozen = json.loads((GOLDEN / "sarnak_tm_moebius.json").read_text())
    assert rep.final.real == frozen["value"] and rep.final.imag == 0.0

    kb = kbsz_series(TM, W0, 3, 5, (1 << 18,))
    frozen = json.loads((GOLDEN / "kbsz_tm_3_5.json").read_text())
    assert kb.final.real == frozen["value"] and kb.final.imag == 0.0


def test_report_json_shape():
    rep = kbsz_series(TM, W0, 3, 5, (16, 64))
    payload = json.loads(report_json(rep))
    assert payload["metadata"] == {
        "system": "thue_morse",
        "observable": "walsh{0}",
        "weight": None,
        "r": 3,
        "s": 5,
    }
    assert [row["N"] for row in payload["rows"]] == [16, 64]
    assert payload["rows"][1]["real"] == rep.final.real


def test_run_experiment_writes_files(tmp_path):
    config = ExperimentConfig(
        name="demo",
        stream=TM,
        observable=W0,
        sample_size=512,
        weight=weight_table("liouville", 512),
    )
    report, paths = run_experiment(config, tmp_path)
    assert [p.name for p in paths] == ["demo.csv", "demo.json"]
    assert paths[0].read_bytes() == report_csv(report)
    assert paths[1].read_bytes() == report_json(report)
    with pytest.raises(ValueError):
        run_experiment(config, tmp_path, formats=("yaml",))


def test_resolved_checkpoints():
    config = ExperimentConfig(name="x", stream=TM, observable=W0, sample_size=20)
    assert config.resolved_checkpoints() == (1, 2, 4, 8, 16, 20)
    bad = ExperimentConfig(
        name="x", stream=TM, observable=W0, sample_size=20, checkpoints=(8, 32)
    )
    with pytest.raises(ValueError):
        bad.resolved_checkpoints()


def test_config_requires_distinct_primes():
    for pair in ((4, 5), (3, 3), (1, 2)):
        with pytest.raises(ValueError):
            ExperimentConfig(
                name="x", stream=TM, observable=W0, sample_size=16, kbsz=pair
            )
    ok = ExperimentConfig(name="x", stream=TM, observable=W0, sample_size=16, kbsz=(3, 5))
    assert ok.kbsz == (3, 5)


def test_worker_count_does_not_change_bytes():
    # float products make the summation order visible; the fixed tree hides it
    obs = make_symbol_table({0: 0.1, 1: -0.7})
    mu = weight_table("moebius", 1 << 15)
    outputs = []
    for workers in (1, 4):
        config = ExperimentConfig(
            name="float_run",
            stream=TM,
            observable=obs,
            sample_size=1 << 15,
            weight=mu,
            workers=workers,
        )
        outputs.append(report_csv(run_config(config)))
    assert outputs[0] == outputs[1]

    kb = [
        report_csv(kbsz_series(TM, obs, 3, 5, pow2_checkpoints(1 << 15), workers=w))
        for w in (1, 4)
    ]
    assert kb[0] == kb[1]
