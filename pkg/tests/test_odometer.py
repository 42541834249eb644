import numpy as np
import pytest

from mobiuslab.errors import UndefinedPointError
from mobiuslab.morse import MorseSpec, hat_stream, morse_stream
from mobiuslab.odometer import (
    OdometerSpec,
    VeechSpec,
    morse_cocycle_eval,
    rs_extension_stages,
    tower_index,
    translate,
    veech_conditions,
    veech_stream,
    veech_tau,
)
from mobiuslab.permgrp import cyclic_group

Z2 = cyclic_group(2)
DYADIC = OdometerSpec(tail=2)


def test_spec_validation():
    with pytest.raises(ValueError):
        OdometerSpec(tail=1)
    with pytest.raises(ValueError):
        OdometerSpec(head=(2, 1), tail=3)
    spec = OdometerSpec(head=(2, 3), tail=5)
    assert spec.lam(0) == 2 and spec.lam(1) == 3 and spec.lam(7) == 5
    assert spec.n(0) == 1 and spec.n(2) == 6 and spec.n(3) == 30


def test_digits():
    p = DYADIC.point(11)
    assert p.digits(5) == (1, 1, 0, 1, 0)
    assert p.digit(0) == 1 and p.digit(3) == 1
    mixed = OdometerSpec(head=(2, 3), tail=4)
    q = mixed.point(17)  # 17 = 1 + 2*2 + 6*2
    assert q.digits(3) == (1, 2, 2)


def test_all_top_point():
    top = DYADIC.all_top()
    assert top.value == -1
    assert top.is_all_top
    assert top.digits(6) == (1, 1, 1, 1, 1, 1)
    mixed = OdometerSpec(head=(3,), tail=2)
    assert mixed.all_top().digits(4) == (2, 1, 1, 1)


def test_from_digits():
    assert DYADIC.from_digits((1, 1, 0, 1)).value == 11
    assert DYADIC.from_digits((1, 1), top_tail=True).value == -1
    assert DYADIC.from_digits((0, 1), top_tail=True).value == -2
    mixed = OdometerSpec(head=(2, 3), tail=4)
    assert mixed.from_digits((1, 2, 2)).value == 17
    with pytest.raises(ValueError):
        DYADIC.from_digits((2,))


def test_translate_carries():
    assert translate(DYADIC.point(0)).digits(4) == (1, 0, 0, 0)
    assert translate(DYADIC.point(3)).digits(4) == (0, 0, 1, 0)
    assert translate(DYADIC.all_top()).value == 0
    assert translate(DYADIC.point(5), steps=3).value == 8
    assert translate(DYADIC.point(5), steps=-6).value == -1


def test_tower_index():
    p = DYADIC.point(11)
    for t in range(6):
        assert tower_index(p, t) == 11 % (2**t)
    # the all-top point sits at the top of every tower
    top = DYADIC.all_top()
    for t in range(1, 6):
        assert tower_index(top, t) == 2**t - 1


def test_veech_tau_trailing_ones():
    for n in range(1, 2**12):
        expected = len(bin(n)) - len(bin(n).rstrip("1")) + 1
        assert veech_tau(DYADIC.point(n)) == expected
    with pytest.raises(UndefinedPointError):
        veech_tau(DYADIC.all_top())


def test_morse_cocycle_eval_matches_hat():
    spec = MorseSpec(Z2, (), (0, 1))
    hat = hat_stream(Z2, morse_stream(spec)).prefix(300)
    for n in range(300):
        assert morse_cocycle_eval(spec, DYADIC.point(n)) == hat[n]
    with pytest.raises(UndefinedPointError):
        morse_cocycle_eval(spec, DYADIC.all_top())


def test_veech_stream_equals_hat_tm():
    vspec = VeechSpec(DYADIC, Z2, psi_tail=(1, 0))
    vs = veech_stream(vspec)
    hat = hat_stream(Z2, morse_stream(MorseSpec(Z2, (), (0, 1))))
    assert np.array_equal(vs.prefix(4096), hat.prefix(4096))


def test_veech_stream_offsets():
    vspec = VeechSpec(DYADIC, Z2, psi_tail=(1, 0))
    base = veech_stream(vspec).prefix(64)
    shifted = veech_stream(vspec, start=10).prefix(54)
    assert np.array_equal(base[10:], shifted)
    # an orbit through the all-top point is rejected
    with pytest.raises(UndefinedPointError):
        veech_stream(vspec, start=-3).prefix(5)


def test_veech_psi_head_tail():
    vspec = VeechSpec(DYADIC, cyclic_group(3), psi_head=(2,), psi_tail=(1, 0))
    assert [vspec.psi(t) for t in (1, 2, 3, 4, 5)] == [2, 1, 0, 1, 0]
    with pytest.raises(ValueError):
        vspec.psi(0)
    with pytest.raises(ValueError):
        VeechSpec(DYADIC, Z2, psi_tail=())
    with pytest.raises(ValueError):
        VeechSpec(DYADIC, Z2, psi_tail=(2,))


def test_veech_conditions():
    good = VeechSpec(DYADIC, Z2, psi_tail=(1, 0))
    rep = veech_conditions(good, 64)
    assert rep.all_hold
    assert rep.no_limit and rep.values_generate and rep.differences_generate and rep.blocks_recur

    constant = VeechSpec(DYADIC, Z2, psi_tail=(0,))
    rep = veech_conditions(constant, 64)
    assert not rep.all_hold
    assert not rep.values_generate

    # eventually constant head: tail half has a single value, limit exists
    settled = VeechSpec(DYADIC, Z2, psi_head=(1, 0, 1), psi_tail=(1,))
    rep = veech_conditions(settled, 64)
    assert not rep.no_limit

    with pytest.raises(ValueError):
        veech_conditions(good, 4)


def test_rs_extension_zero_choices():
    stages, stream = rs_extension_stages([0] * 8, max_level=6)
    assert stream.prefix(16).tolist() == [0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1, 1, 0, 1, 1, 0]
    by_t = {s.t: s for s in stages}
    assert by_t[1].newly_filled == ()
    assert by_t[2].newly_filled == (0, 2)
    assert by_t[3].newly_filled == (1, 5)
    assert by_t[4].newly_filled == (3, 11)
    # the two exceptional levels of each stage stay undefined
    assert 1 in by_t[2].undefined_levels and 3 in by_t[2].undefined_levels
    assert set(by_t[2].defined_levels) == {0, 2}


def test_rs_extension_choice_one():
    stages, one = rs_extension_stages([1] * 8, max_level=6)
    _, zero = rs_extension_stages([0] * 8, max_level=6)
    a = one.prefix(64)
    b = zero.prefix(64)
    assert not np.array_equal(a, b)
    by_t = {s.t: s for s in stages}
    # choice 1 swaps the pair written into the two fresh levels
    assert by_t[2].values[0] == 1 and by_t[2].values[2] == 0


def test_rs_extension_stage_consistency():
    rng = np.random.default_rng(41)
    for _ in range(10):
        choices = [int(v) for v in rng.integers(0, 2, size=9)]
        stages, stream = rs_extension_stages(choices, max_level=8)
        word = stream.prefix(200)
        for stage in stages:
            n = 2**stage.t
            for level, value in enumerate(stage.values):
                if value < 0:
                    continue
                positions = np.arange(level, 200, n)
                assert np.all(word[positions] == value)
