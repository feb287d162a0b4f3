import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paleylab.grid import (
    GridFunction,
    GridSpec,
    WindowViolation,
    auto_spec,
    coeff,
    grid_character,
    inner,
    modulate,
    norm_l1,
    norm_l2,
    spectrum_of,
    synth,
)


def test_spec_validates_alias_freedom():
    with pytest.raises(ValueError):
        GridSpec((8,), (4,))  # 2*4+1 > 8
    GridSpec((9,), (4,))


def test_auto_spec_smooth_sizes():
    spec = auto_spec(100)
    assert spec.dims[0] >= 202
    n = spec.dims[0]
    for p in (2, 3, 5):
        while n % p == 0:
            n //= p
    assert n == 1


def test_coeff_orthonormality():
    spec = GridSpec((32,), (10,))
    f = synth({(7,): 1.0}, spec)
    assert abs(coeff(f, 7) - 1) < 1e-14
    for n in range(-10, 11):
        if n != 7:
            assert abs(coeff(f, n)) < 1e-14


def test_coeff_example_n8():
    spec = GridSpec((8,), (3,))
    f = synth({(0,): 1.0, (2,): 1.0}, spec)
    assert abs(coeff(f, 2) - 1) < 1e-14


def test_coeff_outside_window_raises():
    spec = GridSpec((32,), (10,))
    f = synth({(3,): 1.0}, spec)
    with pytest.raises(WindowViolation):
        coeff(f, 11)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_synth_coeff_roundtrip(seed):
    rng = np.random.default_rng(seed)
    spec = GridSpec((129,), (64,))
    spectrum = {
        (n,): complex(rng.standard_normal(), rng.standard_normal())
        for n in range(-64, 65)
    }
    f = synth(spectrum, spec)
    err = max(abs(coeff(f, n) - spectrum[(n,)]) for n in range(-64, 65))
    scale = max(abs(v) for v in spectrum.values())
    assert err <= 1e-12 * scale


def test_synth_empty_spectrum_is_zero():
    spec = GridSpec((16,), (5,))
    f = synth({}, spec)
    assert np.all(f.samples == 0)


def test_norm_l1_of_character_is_one():
    spec = GridSpec((64,), (10,))
    f = synth({(4,): 1.0}, spec)
    assert abs(norm_l1(f) - 1) < 1e-13


def test_norm_l1_two_term_closed_form():
    # |1 + e^{2it}| integrates to 4/pi under the normalized measure
    spec = GridSpec((1024,), (4,))
    f = synth({(0,): 1.0, (2,): 1.0}, spec)
    assert abs(norm_l1(f) - 4 / np.pi) < 1e-4


def test_parseval():
    rng = np.random.default_rng(11)
    spec = GridSpec((64,), (20,))
    f = GridFunction(spec, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    total = float(np.sum(np.abs(f.hat()) ** 2))
    assert abs(norm_l2(f) ** 2 - total) < 1e-12 * total


def test_inner_and_coefficient_identity():
    # (g, z^n h) equals the coefficient of g conj(h) at n
    rng = np.random.default_rng(5)
    spec = GridSpec((64,), (20,))
    g = GridFunction(spec, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    h = GridFunction(spec, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    n = 7
    lhs = inner(g, modulate(h, n))
    prod = GridFunction(spec, g.samples * np.conj(h.samples))
    assert abs(lhs - coeff(prod, n)) < 1e-13


def test_inner_spec_mismatch():
    a = synth({(0,): 1.0}, GridSpec((16,), (5,)))
    b = synth({(0,): 1.0}, GridSpec((32,), (5,)))
    with pytest.raises(ValueError):
        inner(a, b)


def test_modulate_shift_and_unitarity():
    rng = np.random.default_rng(7)
    spec = GridSpec((64,), (20,))
    f = GridFunction(spec, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    g = modulate(f, 5)
    assert abs(norm_l2(g) - norm_l2(f)) < 1e-12
    for n in range(-10, 11):
        assert abs(coeff(g, n) - coeff(f, n - 5)) < 1e-12
    back = modulate(g, -5)
    assert np.max(np.abs(back.samples - f.samples)) < 1e-12


def test_modulate_constant_gives_character():
    spec = GridSpec((32,), (8,))
    one = synth({(0,): 1.0}, spec)
    z3 = modulate(one, 3)
    assert np.max(np.abs(z3.samples - grid_character(spec, 3))) < 1e-13


def test_multi_axis_coeff_and_synth():
    spec = GridSpec((16, 9), (5, 3))
    f = synth({(2, -1): 1.5 + 0.5j}, spec)
    assert abs(coeff(f, (2, -1)) - (1.5 + 0.5j)) < 1e-13
    assert abs(coeff(f, (1, 1))) < 1e-13
    assert spectrum_of(f) == {(2, -1): coeff(f, (2, -1))}
