import numpy as np
import pytest

from e3real.dynamics import (
    FlowSpec,
    IntegratorConfig,
    convergence_exponent,
    fixed_step_solution,
    implicit_midpoint_step,
    integrate,
    rk45_adaptive,
    rk4_step,
)
from e3real.e3 import CASIMIR_K1, CASIMIR_K2, GyrostatParams, ZhukovskiiIntegral, e3_flat_field
from e3real.errors import IntegrationError, ValidationError
from e3real.scenarios import build_flow, build_system


def oscillator(x):
    return np.array([x[1], -x[0]])


def euler_invariants(H):
    out = []
    for name, F in (("H", H), ("K1", CASIMIR_K1), ("K2", CASIMIR_K2), ("J2", ZhukovskiiIntegral())):
        out.append((name, lambda x, F=F: F.value(x[:3], x[3:])))
    return out


class TestSteppers:
    def test_rk4_oscillator_period(self):
        x = fixed_step_solution(oscillator, [1.0, 0.0], 2 * np.pi, 2 * np.pi / 1000)
        assert abs(x[0] - 1.0) < 1e-9

    def test_rk4_zero_field(self):
        x = np.array([0.3, -1.2])
        assert np.array_equal(rk4_step(lambda y: np.zeros(2), x, 0.1), x)

    def test_implicit_midpoint_zero_field(self):
        x = np.array([0.3, -1.2])
        assert np.array_equal(implicit_midpoint_step(lambda y: np.zeros(2), x, 0.1), x)

    def test_implicit_midpoint_preserves_quadratic_energy(self):
        x = np.array([1.0, 0.0])
        for _ in range(1000):
            x = implicit_midpoint_step(oscillator, x, 0.05)
        assert abs(x @ x - 1.0) < 1e-12

    def test_rk45_energy(self):
        traj = rk45_adaptive(oscillator, [1.0, 0.0], 100.0, rtol=1e-10, atol=1e-12)
        energy = np.sum(traj.states**2, axis=1)
        assert np.max(np.abs(energy - 1.0)) < 1e-8
        assert traj.times[-1] == 100.0

    def test_rk45_constant_field_takes_few_steps(self):
        traj = rk45_adaptive(lambda y: np.array([1.0]), [0.0], 50.0, max_step=10.0)
        assert np.isclose(traj.final_state[0], 50.0)
        assert traj.stats["rejected"] == 0
        # a small first step, then steps grow to the cap
        assert traj.stats["accepted"] <= 11

    def test_rk45_blow_up_fails(self):
        with pytest.raises(IntegrationError):
            rk45_adaptive(lambda y: y * y, [1.0], 2.0)

    def test_rk4_order(self):
        x0 = np.array([1.0, 0.5, 0.2, 0.0, 0.6, 0.8])
        f = e3_flat_field(GyrostatParams.euler((1, 2, 3)))
        ref = fixed_step_solution(f, x0, 1.0, 1 / 2048)
        slope, _ = convergence_exponent(f, x0, 1.0, [1 / 16, 1 / 32, 1 / 64, 1 / 128], ref)
        assert 3.7 <= slope <= 4.3


class TestConfig:
    def test_unknown_method(self):
        with pytest.raises(ValidationError):
            IntegratorConfig(method="euler")

    def test_negative_dt(self):
        with pytest.raises(ValidationError):
            IntegratorConfig(dt=-1.0)

    def test_bad_stride(self):
        with pytest.raises(ValidationError):
            IntegratorConfig(record_stride=0)


class TestIntegrate:
    def test_euler_top_drift(self):
        H = GyrostatParams.euler((1, 2, 3))
        flow = FlowSpec("e3", e3_flat_field(H))
        x0 = np.array([1.0, 0.5, 0.2, 0.0, 0.6, 0.8])
        traj, rep = integrate(flow, x0, IntegratorConfig(dt=1e-3, t_max=10.0), euler_invariants(H))
        assert len(traj) == 10001
        assert max(rep.max_abs.values()) < 1e-8

    def test_zero_field(self):
        flow = FlowSpec("e3", lambda x: np.zeros_like(x))
        x0 = np.arange(6.0)
        traj, rep = integrate(flow, x0, IntegratorConfig(dt=0.1, t_max=1.0),
                              [("sum", lambda x: float(np.sum(x)))])
        assert np.all(traj.states == x0)
        assert rep.max_abs["sum"] == 0.0

    def test_record_stride(self):
        flow = FlowSpec("e3", lambda x: np.zeros_like(x))
        traj, _ = integrate(flow, np.zeros(6), IntegratorConfig(dt=1e-3, t_max=1.0, record_stride=100))
        assert len(traj) == 11

    def test_monopole_guard_terminates(self):
        system = build_system("euler", {"inertia": (1, 1, 1)})
        realized = build_flow(system, "monopole", mu=0.0)
        # Drive y straight through the origin.
        flow = FlowSpec("monopole", lambda x: np.r_[0.0, 0.0, 0.0, 0.0, 0.0, -1.0],
                        guard=realized.flow.guard)
        traj, rep = integrate(flow, np.r_[0, 0, 0, 0, 0, 0.5], IntegratorConfig(dt=1e-3, t_max=2.0))
        assert traj.terminated_early and rep.terminated_early
        assert traj.times[-1] < 0.51

    def test_deterministic(self):
        system = build_system("kovalevskaya", {"I": 2.0, "chi1": 1.0, "chi2": 0.5})
        realized = build_flow(system, "e3")
        cfg = IntegratorConfig(dt=1e-2, t_max=2.0)
        x0 = np.array([0.3, 0.2, 0.5, 0.4, 0.1, 0.9])
        a, _ = integrate(realized.flow, x0, cfg, realized.invariants)
        b, _ = integrate(realized.flow, x0, cfg, realized.invariants)
        assert np.array_equal(a.states, b.states) and np.array_equal(a.invariants, b.invariants)

    def test_rk45_driver(self):
        H = GyrostatParams.euler((1, 2, 3))
        flow = FlowSpec("e3", e3_flat_field(H))
        x0 = np.array([1.0, 0.5, 0.2, 0.0, 0.6, 0.8])
        traj, rep = integrate(flow, x0, IntegratorConfig(method="rk45", dt=0.1, t_max=10.0, rtol=1e-11,
                                                        atol=1e-13), euler_invariants(H))
        assert max(rep.max_abs.values()) < 1e-8
        assert np.isclose(traj.times[-1], 10.0)
