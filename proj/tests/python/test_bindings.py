import math

import numpy as np
import pytest

import fracplate as fp


def test_gamma_and_ml_basics():
    assert fp.gamma(5.0) == 24.0
    assert fp.mittag_leffler(1.5, 1.0, 0.0) == 1.0
    assert fp.mittag_leffler(1.0, 1.0, 1.0) == pytest.approx(math.e, abs=1e-14)
    value, err, method = fp.ml_eval(2.0, 1.0, -math.pi**2)
    assert value == pytest.approx(-1.0, abs=1e-12)
    assert err >= 0.0
    assert method in {"TaylorSeries", "AsymptoticExpansion", "IntegralRepresentation"}


def test_series_oracle_agrees():
    for z in (-1.0, -10.0, -30.0):
        assert fp.mittag_leffler(1.5, 2.0, z) == pytest.approx(fp.ml_series_oracle(1.5, 2.0, z, 700), abs=1e-10)


def test_errors_are_value_errors():
    with pytest.raises(fp.DomainError):
        fp.gamma(-2.0)
    with pytest.raises(ValueError):
        fp.solve(fp.Domain.parse("interval:pi"), 2, 2.5, [1.0], [0.0])


def test_modes():
    sq = fp.Domain.parse("rectangle:pi,pi")
    modes = fp.eigenmodes(sq, 4)
    assert [m.mu for m in modes] == [2.0, 5.0, 5.0, 8.0]
    assert list(modes[1].index) == [1, 2]
    assert modes[3].lambda_ == 64.0


def test_rl_integral_power_rule():
    t = fp.graded_grid(1.0, 2049, 2.0)
    out = fp.rl_integral(t, t**2, 0.5)
    exact = fp.gamma(3.0) / fp.gamma(3.5)
    assert out[-1] == pytest.approx(exact, rel=1e-6)
    assert out[0] == 0.0


def test_gagliardo_of_identity():
    t = np.linspace(0.0, 1.0, 4097)
    assert fp.gagliardo_seminorm(t, t, 0.5) == pytest.approx(1.0, abs=0.02)


def test_solution_and_residuals():
    line = fp.Domain.parse("interval:pi")
    s = fp.solve(line, 4, 1.5, [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0])
    assert s.coefficient(0, 0.0) == 1.0
    x = 0.7
    expect = fp.mittag_leffler(1.5, 1.0, -(0.5**1.5)) * math.sqrt(2 / math.pi) * math.sin(x)
    assert s.u(0.5, x) == pytest.approx(expect, abs=1e-14)
    assert fp.mode_ode_residual(s, 0) <= 5e-3
    assert fp.filtered_identity_relative(s) <= 1e-3
    e = fp.trace_energy(s)
    assert e == pytest.approx(fp.trace_energy(s, lifted=True), rel=1e-15)


def test_static_identity():
    sq = fp.Domain.parse("rectangle:pi,pi")
    assert fp.static_identity_relative(sq, [1.0 / (n * n) for n in range(1, 17)]) <= 1e-8


def test_probe_report_shape():
    rep = fp.direct_inequality_probe(fp.Domain.parse("interval:pi"), 1.5, 1.0, "decay:1.5", [8, 16], seed=42, nodes=257)
    assert set(rep["details"]["per_N"]) == {"8", "16"}
    assert rep["metrics"]["growth_max"] > 0.0
    again = fp.direct_inequality_probe(fp.Domain.parse("interval:pi"), 1.5, 1.0, "decay:1.5", [8, 16], seed=42, nodes=257)
    assert rep == again


def test_u1_sweep_positive():
    r = fp.u1_sweep_ratios(8)
    assert len(r) == 8
    assert all(v > 0 and math.isfinite(v) for v in r)
