"""Acceptance checks: twelve end-to-end criteria, one pass/fail line each.

Run with  pytest tests/test_acceptance.py -v -s  to see the lines as they
print.  Each criterion recomputes its claim from scratch; thresholds for the
two disjointness numerics come from the frozen fixtures under
tests/fixtures/golden, which were produced by the straight-line oracle in
tools/record_golden.py before this suite existed.
"""

import json
import pathlib
import time

import numpy as np

from mobiuslab.arith import pattern_parities, weight_table
from mobiuslab.cli import main
from mobiuslab.experiment import kbsz_series, pow2_checkpoints, sarnak_series
from mobiuslab.morse import (
    MorseSpec,
    blocks_from_cocycle,
    cocycle_values,
    hat_stream,
    morse_stream,
    toeplitz_check,
)
from mobiuslab.odometer import OdometerSpec, VeechSpec, veech_stream
from mobiuslab.permgrp import centralizer_in_sym, cyclic_group
from mobiuslab.spectral import atom_mass, autocorrelation, make_walsh
from mobiuslab.specfile import SpecDocument, parse_spec, print_spec
from mobiuslab.streams import periodic_stream
from mobiuslab.subst import (
    Substitution,
    column_maps,
    factor_stream,
    fixed_point,
    fixed_point_stream,
    group_cover,
    language,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"

Z2 = cyclic_group(2)
TM = Substitution(((0, 1), (1, 0)), ("0", "1"))
HERNING = Substitution.from_words({"a": "aabaa", "b": "bcabb", "c": "cbccc"})
W0 = make_walsh((0,))


def report(num, ok, description):
    print("[criterion %2d] %s: %s" % (num, "PASS" if ok else "FAIL", description))
    assert ok, "criterion %d failed: %s" % (num, description)


def test_criterion_01_dual_rudin_shapiro_identity():
    start = time.perf_counter()
    count = 1 << 20
    rs4 = Substitution(((0, 1), (0, 2), (3, 1), (3, 2)), ("a", "b", "c", "d"))
    coded = (fixed_point(rs4, count) >= 2).astype(np.uint8)
    parities = pattern_parities(count, "11")
    elapsed = time.perf_counter() - start
    ok = np.array_equal(coded, parities) and elapsed < 5.0
    report(1, ok, "four-letter code equals the pattern-11 parities on 2^20 terms (%.2fs)" % elapsed)


def test_criterion_02_herning_cover_factors_back():
    start = time.perf_counter()
    count = 10**5
    cover = group_cover(HERNING)
    base = fixed_point(HERNING, count)
    factored = factor_stream(cover, cover.stream()).prefix(count)
    elapsed = time.perf_counter() - start
    ok = cover.group.order == 6 and np.array_equal(factored, base) and elapsed < 1.0
    report(2, ok, "|G| = 6 and the cover projects onto the base fixed point over 10^5 symbols (%.2fs)" % elapsed)


def test_criterion_03_block_cocycle_round_trip():
    rng = np.random.default_rng(2026)
    depth = 6
    trials = failures = 0
    for group in (cyclic_group(2), cyclic_group(3)):
        for _ in range(50):
            head = []
            for _ in range(depth):
                lam = int(rng.integers(2, 4))
                head.append((0,) + tuple(int(v) for v in rng.integers(0, group.order, size=lam - 1)))
            spec = MorseSpec(group, tuple(head), (0, 1 % group.order))
            stages = [cocycle_values(spec, t) for t in range(1, depth + 1)]
            lambdas = [spec.lam(t) for t in range(depth)]
            trials += 1
            if blocks_from_cocycle(group, stages, lambdas) != list(spec.head):
                failures += 1
    ok = trials == 100 and failures == 0
    report(3, ok, "blocks -> cocycle stages -> blocks is the identity on %d random specs" % trials)


def test_criterion_04_veech_equals_hat_thue_morse():
    count = 1 << 16
    vspec = VeechSpec(OdometerSpec(tail=2), Z2, psi_tail=(1, 0))
    vs = veech_stream(vspec).prefix(count)
    hat = hat_stream(Z2, morse_stream(MorseSpec(Z2, (), (0, 1)))).prefix(count)
    ok = np.array_equal(vs, hat)
    report(4, ok, "veech output equals the Thue-Morse difference sequence over 2^16 symbols")


def test_criterion_05_sieve_matches_trial_division():
    limit = 10**5
    mu = weight_table("moebius", limit).values
    lam = weight_table("liouville", limit).values

    def factor_exponents(n):
        out = []
        d = 2
        while d * d <= n:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e:
                out.append(e)
            d += 1
        if n > 1:
            out.append(1)
        return out

    ok = True
    for n in range(1, limit + 1):
        exps = factor_exponents(n)
        mu_ref = 0 if any(e > 1 for e in exps) else (-1) ** len(exps)
        lam_ref = (-1) ** sum(exps)
        if mu[n] != mu_ref or lam[n] != lam_ref:
            ok = False
            break
    mertens10 = int(mu[1:11].sum())
    ok = ok and mertens10 == -1
    report(5, ok, "mu and lambda match trial division up to 10^5; sum of mu over n <= 10 is -1")


def test_criterion_06_thue_morse_autocorrelations():
    est = autocorrelation(fixed_point_stream(TM), W0, 1 << 20, 64)
    g = {0: 1.0, 1: -1.0 / 3.0}

    def gamma(n):
        if n not in g:
            g[n] = gamma(n // 2) if n % 2 == 0 else -(gamma(n // 2) + gamma(n // 2 + 1)) / 2
        return g[n]

    worst = max(abs(est.values[n].real - gamma(n)) for n in range(65))
    ok = (
        abs(est.values[1].real + 1.0 / 3.0) < 1e-2
        and abs(est.values[3].real - 1.0 / 3.0) < 1e-2
        and worst < 5e-3
    )
    report(6, ok, "gamma-hat(1) = -1/3, gamma-hat(3) = +1/3, recursion error %.2e over lags <= 64" % worst)


def test_criterion_07_toeplitz_periods_of_hat():
    hat = hat_stream(Z2, morse_stream(MorseSpec(Z2, (), (0, 1))))
    results = toeplitz_check(hat, range(512), 2, max_level=12)
    levels = [level for _, level in results]
    ok = len(results) == 512 and all(level is not None and level <= 12 for level in levels)
    report(7, ok, "every position below 512 has a verified period 2^t with t <= %d" % max(levels))


def test_criterion_08_language_counts_and_centralizers():
    two = language(TM, 2).count
    three = language(TM, 3).count
    tm_cent, _ = centralizer_in_sym(column_maps(TM).maps, degree=2)
    herning_cent, _ = centralizer_in_sym(column_maps(HERNING).maps, degree=3)
    ok = two == 4 and three == 6 and tm_cent.order == 2 and herning_cent.order == 1
    report(8, ok, "Thue-Morse has 4 two-blocks and 6 three-blocks; column centralizers have orders 2 and 1")


def test_criterion_09_atom_masses():
    count = 1 << 18
    pd = hat_stream(Z2, morse_stream(MorseSpec(Z2, (), (0, 1))))
    mass_pd = atom_mass(pd, W0, (0, 1), count)
    mass_tm = atom_mass(fixed_point_stream(TM), W0, (0, 1), count)
    ok = abs(mass_pd - 1.0 / 9.0) < 1e-2 and mass_tm <= 1e-2
    report(9, ok, "atom at 0: period-doubling %.5f vs 1/9, Thue-Morse %.1e" % (mass_pd, mass_tm))


def test_criterion_10_disjointness_thresholds():
    tm_stream = fixed_point_stream(TM)
    frozen_s = json.loads((GOLDEN / "sarnak_tm_moebius.json").read_text())
    n_s = frozen_s["N"]
    rep = sarnak_series(tm_stream, W0, weight_table("moebius", n_s), (n_s,))
    s_ok = abs(rep.final) <= frozen_s["threshold"]

    frozen_c = json.loads((GOLDEN / "kbsz_tm_3_5.json").read_text())
    n_c = frozen_c["N"]
    kb = kbsz_series(tm_stream, W0, frozen_c["r"], frozen_c["s"], (n_c,))
    c_ok = abs(kb.final) <= frozen_c["threshold"]

    periodic = kbsz_series(periodic_stream([0, 1]), W0, 3, 5, (1 << 14,))
    p_ok = periodic.final == 1.0 + 0.0j

    ok = s_ok and c_ok and p_ok
    report(10, ok, "|S_N| = %.3e and |C_N| = %.3e within 2x the frozen oracle values; periodic C_N = 1 exactly"
           % (abs(rep.final), abs(kb.final)))


def test_criterion_11_deterministic_reports(tmp_path, capsys):
    spec_dir = pathlib.Path(__file__).parent.parent / "specs"
    with_experiments = [
        path
        for path in sorted(spec_dir.glob("*.spec"))
        if isinstance(doc := parse_spec(path.read_text()), SpecDocument) and doc.experiments()
    ]
    runs = {}
    for tag, workers in (("a1", 1), ("b4", 4), ("c4", 4)):
        out = tmp_path / tag
        for spec in with_experiments:
            code = main(["run", str(spec), "--out", str(out), "--workers", str(workers)])
            assert code == 0
        runs[tag] = {p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))}
    capsys.readouterr()
    ok = len(runs["a1"]) >= 3 and runs["a1"] == runs["b4"] == runs["c4"]
    report(11, ok, "every experiment fixture emits byte-identical CSV across reruns and worker counts")


def test_criterion_12_parser_round_trip_and_diagnostics():
    valid = sorted((FIXTURES / "specs" / "valid").glob("*.spec"))
    round_trips = 0
    for path in valid:
        doc = parse_spec(path.read_text())
        assert isinstance(doc, SpecDocument)
        if parse_spec(print_spec(doc)) == doc:
            round_trips += 1

    expected = {
        "missing_arrow.spec": (2, 5),
        "unknown_letter.spec": (2, 8),
        "unterminated_string.spec": (1, 14),
        "duplicate_names.spec": (2, 1),
        "length_mismatch.spec": (3, 8),
        "dangling_reference.spec": (1, 1),
        "nonprime_kbsz.spec": (6, 1),
    }
    located = 0
    for name, (line, column) in expected.items():
        diags = parse_spec((FIXTURES / "specs" / "malformed" / name).read_text())
        if isinstance(diags, list) and any((d.line, d.column) == (line, column) for d in diags):
            located += 1

    ok = round_trips == len(valid) >= 4 and located == len(expected)
    report(12, ok, "%d valid files round-trip; %d malformed files diagnose at the expected position"
           % (round_trips, located))
