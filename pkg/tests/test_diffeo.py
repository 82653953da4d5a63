import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projpoints.diffeo import (Harmonic, build_fourier_lift, build_mobius_lift, identity,
                               lift_from_samples, sample_with_derivatives, spec_from_dict,
                               spec_from_json)
from projpoints.errors import (InputParseError, NotADiffeoError, SingularError,
                               UnderResolvedError)

from conftest import grid


def test_valid_and_invalid_fourier():
    build_fourier_lift([Harmonic(1, 0.1, 0.0)])
    with pytest.raises(NotADiffeoError):
        build_fourier_lift([Harmonic(1, 0.6, 0.0)])
    with pytest.raises(NotADiffeoError):
        build_fourier_lift([(0, 0.1, 0.0)])


def test_empty_is_identity():
    spec = build_fourier_lift([])
    a = grid(64)
    assert np.array_equal(spec(a), a)


def test_mobius_identity_and_stretch():
    a = np.linspace(0, 3, 7)
    assert np.allclose(build_mobius_lift(np.eye(2))(a), a, atol=1e-15)
    # arctan(2 tan(pi/4)) = arctan 2, frozen from a 60-digit evaluation
    assert build_mobius_lift([[2, 0], [0, 1]])(np.pi / 4) == pytest.approx(1.1071487177940905, abs=1e-15)


@pytest.mark.parametrize("c", [0.3, 1.0, 2.5])
def test_rotation_matrix_is_a_shift(c):
    # x = tan(a) -> (cos c x - sin c)/(sin c x + cos c) = tan(a - c)
    spec = build_mobius_lift([[np.cos(c), -np.sin(c)], [np.sin(c), np.cos(c)]])
    a = grid(64)
    d = spec(a) - a
    assert np.abs(d - d[0]).max() < 1e-13
    assert np.mod(d[0] + c, np.pi) == pytest.approx(0, abs=1e-13) or \
        np.mod(d[0] + c, np.pi) == pytest.approx(np.pi, abs=1e-13)


def test_mobius_branch_and_errors():
    spec = build_mobius_lift([[1, 5], [0, 1]])
    assert 0 <= float(spec(0.0)) < np.pi
    with pytest.raises(SingularError):
        build_mobius_lift([[1, 2], [2, 4]])
    with pytest.raises(NotADiffeoError):
        build_mobius_lift([[0, 1], [1, 0]])


def test_mobius_matches_chart_formula():
    m = [[1.3, -0.4], [0.7, 1.1]]
    spec = build_mobius_lift(m)
    a = np.array([0.1, 0.4, 1.0, 1.4])  # away from the chart singularity
    x = np.tan(a)
    y = (m[0][0] * x + m[0][1]) / (m[1][0] * x + m[1][1])
    assert np.allclose(np.tan(spec(a)), y, rtol=1e-12)


def test_period_shift_is_exact(sin2):
    lift = sample_with_derivatives(sin2, 256)
    alpha, f, _ = lift.doubled()
    assert np.array_equal(f[256:], f[:256] + np.pi)
    a = grid(64)
    assert np.allclose(sin2(a + np.pi) - sin2(a), np.pi, atol=1e-14)


def test_identity_samples():
    lift = sample_with_derivatives(identity(), 256)
    assert np.allclose(lift.fdot, 1, atol=1e-15)
    assert np.abs(lift.fddot).max() < 1e-15 and np.abs(lift.fdddot).max() < 1e-15


def test_sin2_derivatives_at_zero(sin2):
    lift = sample_with_derivatives(sin2, 512)
    assert lift.fdot[0] == pytest.approx(1.2, abs=1e-13)
    assert lift.fddot[0] == pytest.approx(0.0, abs=1e-13)
    assert lift.fdddot[0] == pytest.approx(-0.8, abs=1e-12)


def test_stretch_derivative_at_zero():
    spec = build_mobius_lift([[2, 0], [0, 1]])
    assert sample_with_derivatives(spec, 512).fdot[0] == pytest.approx(2.0, abs=1e-13)
    assert sample_with_derivatives(spec, 512, "spectral").fdot[0] == pytest.approx(2.0, abs=1e-10)


def test_exact_and_spectral_agree_for_mild_mobius():
    spec = build_mobius_lift([[1.2, 0.3], [-0.2, 0.9]])
    e = sample_with_derivatives(spec, 512, "exact")
    s = sample_with_derivatives(spec, 512, "spectral")
    for u, v in ((e.fdot, s.fdot), (e.fddot, s.fddot), (e.fdddot, s.fdddot)):
        assert np.abs(u - v).max() < 1e-10 * max(1, np.abs(u).max())


def test_under_resolved():
    spec = build_fourier_lift([Harmonic(40, 0.001, 0.0)])
    sample_with_derivatives(spec, 256)
    with pytest.raises(UnderResolvedError):
        sample_with_derivatives(spec, 64)


def test_grid_must_be_power_of_two(sin2):
    with pytest.raises(ValueError):
        sample_with_derivatives(sin2, 100)
    with pytest.raises(ValueError):
        sample_with_derivatives(sin2, 32)


def test_lift_from_samples_rejects_decreasing():
    a = grid(64)
    with pytest.raises(NotADiffeoError):
        lift_from_samples(a + 0.8 * np.sin(2 * a))


def test_json_roundtrip(sin2, stretch):
    for spec in (sin2, stretch):
        again = spec_from_json(spec.to_json())
        a = grid(32)
        assert np.array_equal(again(a), spec(a))
    assert spec_from_dict({"type": "fourier", "harmonics": [{"k": 1, "a": 0.1, "b": 0.0}]}) == sin2


@pytest.mark.parametrize("text", ["{", "[]", '{"type": "spline"}', '{"type": "mobius"}',
                                  '{"type": "mobius", "matrix": [[1, 2]]}',
                                  '{"type": "fourier", "harmonics": [{"a": 1}]}'])
def test_bad_json(text):
    with pytest.raises(InputParseError):
        spec_from_json(text)


harmonic = st.tuples(st.integers(1, 8), st.floats(-1, 1), st.floats(-1, 1))


@given(st.lists(harmonic, min_size=1, max_size=4, unique_by=lambda h: h[0]))
def test_spectral_derivatives_match_closed_form(raw):
    # scale the harmonics so f' stays positive
    total = sum(2 * k * (abs(a) + abs(b)) for k, a, b in raw)
    if total < 1e-6:
        return
    s = 0.7 / total
    hs = [Harmonic(k, a * s, b * s) for k, a, b in raw]
    spec = build_fourier_lift(hs)
    lift = sample_with_derivatives(spec, 512)
    a = lift.grid
    exact = [np.zeros_like(a) for _ in range(3)]
    for h in hs:
        w = 2 * h.k
        for j in range(3):
            ph = (j + 1) * np.pi / 2
            exact[j] += w ** (j + 1) * (h.a * np.sin(w * a + ph) + h.b * np.cos(w * a + ph))
    exact[0] += 1
    for got, want in zip((lift.fdot, lift.fddot, lift.fdddot), exact):
        # absolute 1e-12 once the derivative is O(1); relative beyond that
        assert np.abs(got - want).max() <= 1e-12 * max(1.0, np.abs(want).max())


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_mobius_lift_is_continuous_and_equivariant(a, b, c, d):
    if a * d - b * c < 0.1:
        return
    spec = build_mobius_lift([[a, b], [c, d]])
    t = grid(2048)
    f = spec(t)
    assert np.all(np.diff(f) > 0)
    assert np.allclose(spec(t + np.pi) - f, np.pi, atol=1e-12)
    # [0, pi) up to rounding: a rotation by -1e-200 stays at f(0) = -1e-200
    assert -1e-15 <= float(spec(0.0)) < np.pi
