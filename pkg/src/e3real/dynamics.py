"""Integration engine shared by every phase space.

States are flat real vectors; a ``FlowSpec`` bundles the vector field with the
domain guard, the optional constraint projection and the optional chart switch
used near the excluded point of the Moser chart.  ``integrate`` never raises
mid-run for domain exits: it returns the partial trajectory with
``terminated_early`` set.

RK4 and implicit midpoint are written out here because they are a few lines
each.  The adaptive method delegates to scipy's Dormand-Prince 4(5) stepper.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import RK45

from .errors import DomainError, IntegrationError, StiffnessError, ValidationError

METHODS = ("rk4", "rk45", "implicit-midpoint")
MIN_STEP = 1e-14


@dataclass(frozen=True)
class ChartSwitch:
    """Alternative chart used while ``needs_switch`` holds.

    ``to_alt``/``from_alt`` convert states, ``alt_field`` is the vector field in
    the alternative chart and ``alt_project`` (optional) repairs constraints
    there.  ``release`` decides when to return to the primary chart; it should
    be stricter than ``needs_switch`` to avoid chattering.
    """

    needs_switch: Callable
    release: Callable
    to_alt: Callable
    from_alt: Callable
    alt_field: Callable
    alt_project: Optional[Callable] = None


@dataclass(frozen=True)
class FlowSpec:
    space: str
    field: Callable
    params: dict = field(default_factory=dict)
    guard: Optional[Callable] = None
    project: Optional[Callable] = None
    chart_switch: Optional[ChartSwitch] = None
    canonical: bool = False


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"
    dt: float = 1e-3
    t_max: float = 10.0
    rtol: float = 1e-9
    atol: float = 1e-12
    projection: bool = False
    record_stride: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (self.dt > 0 and self.t_max > 0):
            raise ValidationError("dt and t_max must be positive")
        if self.dt > self.t_max:
            raise ValidationError("dt must not exceed t_max")
        if not (self.rtol > 0 and self.atol > 0):
            raise ValidationError("rk45 tolerances must be positive")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValidationError("record_stride must be a positive integer")


class Trajectory:
    """Sample times, state snapshots and invariant snapshots (read-only arrays)."""

    def __init__(self, times, states, invariant_names=(), invariants=None,
                 terminated_early=False, message="", stats=None):
        self.times = np.array(times, dtype=float)
        self.states = np.array(states, dtype=float).reshape(len(self.times), -1)
        self.invariant_names = tuple(invariant_names)
        if invariants is None:
            invariants = np.zeros((len(self.times), len(self.invariant_names)))
        self.invariants = np.array(invariants, dtype=float).reshape(
            len(self.times), len(self.invariant_names)
        )
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValidationError("trajectory times must be strictly increasing")
        for a in (self.times, self.states, self.invariants):
            a.setflags(write=False)
        self.terminated_early = bool(terminated_early)
        self.message = message
        self.stats = dict(stats or {})

    def __len__(self):
        return len(self.times)

    @property
    def final_state(self):
        return self.states[-1]

    def interpolate(self, t):
        """Linear interpolation between stored samples."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.stack([np.interp(t, self.times, col) for col in self.states.T], axis=-1)
        return out

    def invariant(self, name):
        return self.invariants[:, self.invariant_names.index(name)]


@dataclass(frozen=True)
class DriftReport:
    max_abs: dict
    max_rel: dict
    wall_time: float
    steps: int
    rejected_steps: int = 0
    terminated_early: bool = False
    message: str = ""

    def as_dict(self):
        return {
            "max_abs_drift": dict(self.max_abs),
            "max_rel_drift": dict(self.max_rel),
            "wall_time": self.wall_time,
            "steps": self.steps,
            "rejected_steps": self.rejected_steps,
            "terminated_early": self.terminated_early,
            "message": self.message,
        }


REL_FLOOR = 1e-8


def drift_report(traj, wall_time=0.0, steps=0, rejected=0):
    """Absolute drift max|I(t) - I(0)|; relative drift divides by |I(0)| unless
    |I(0)| <= 1e-8, where the absolute value is reported instead."""
    max_abs, max_rel = {}, {}
    for k, name in enumerate(traj.invariant_names):
        col = traj.invariants[:, k]
        d = float(np.max(np.abs(col - col[0]))) if len(col) else 0.0
        max_abs[name] = d
        max_rel[name] = d / abs(col[0]) if abs(col[0]) > REL_FLOOR else d
    return DriftReport(max_abs, max_rel, wall_time, steps, rejected,
                       traj.terminated_early, traj.message)


# ---------------------------------------------------------------------------
# Steppers
# ---------------------------------------------------------------------------


def _finite(x, where):
    if not np.all(np.isfinite(x)):
        raise IntegrationError(f"non-finite state produced by {where}")
    return x


def rk4_step(f, x, dt):
    """Classical four-stage Runge-Kutta step for an autonomous field."""
    if not dt > 0:
        raise ValidationError("dt must be positive")
    k1 = f(x)
    k2 = f(x + 0.5 * dt * k1)
    k3 = f(x + 0.5 * dt * k2)
    k4 = f(x + dt * k3)
    return _finite(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), "rk4_step")


def implicit_midpoint_step(f, x, dt, tol=1e-13, max_iter=50):
    """x1 = x0 + dt f((x0 + x1)/2) solved by fixed-point iteration.

    Symplectic for constant Poisson tensors (the twistor chart, the Moser chart
    and the monopole chart with mu = 0).  Elsewhere it is an ordinary
    second-order method.
    """
    if not dt > 0:
        raise ValidationError("dt must be positive")
    x = np.asarray(x, dtype=float)
    x1 = x + dt * f(x)
    for _ in range(max_iter):
        x_new = x + dt * f(0.5 * (x + x1))
        if not np.all(np.isfinite(x_new)):
            break
        if np.max(np.abs(x_new - x1)) <= tol * max(1.0, np.max(np.abs(x_new))):
            return x_new
        x1 = x_new
    raise IntegrationError(f"implicit midpoint did not converge in {max_iter} iterations")


def rk45_adaptive(f, x0, t_max, rtol=1e-9, atol=1e-12, max_step=np.inf, first_step=None):
    """Adaptive Dormand-Prince 4(5) integration on [0, t_max].

    Returns a Trajectory over the accepted steps; ``stats`` holds accepted and
    rejected step counts.  A step size below 1e-14 raises StiffnessError.
    """
    if not (rtol > 0 and atol > 0):
        raise ValidationError("tolerances must be positive")
    solver = RK45(lambda t, y: f(y), 0.0, np.asarray(x0, dtype=float), t_max,
                  rtol=rtol, atol=atol, max_step=max_step, first_step=first_step)
    nfev_init = solver.nfev
    times, states = [0.0], [solver.y.copy()]
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise StiffnessError(f"rk45 failed: {message}")
        if not np.all(np.isfinite(solver.y)):
            raise IntegrationError("non-finite state produced by rk45")
        times.append(solver.t)
        states.append(solver.y.copy())
        if solver.status == "running" and solver.step_size < MIN_STEP:
            raise StiffnessError(f"rk45 step size collapsed to {solver.step_size:.3e}")
    accepted = len(times) - 1
    # Each attempt of the FSAL pair costs six evaluations.
    rejected = max(0, (solver.nfev - nfev_init) // 6 - accepted)
    return Trajectory(times, states, stats={"accepted": accepted, "rejected": rejected,
                                            "nfev": solver.nfev})


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


class _ChartState:
    """Tracks whether the integration currently runs in the alternative chart."""

    def __init__(self, flow, x):
        self.flow = flow
        self.alt = False
        self.x = np.asarray(x, dtype=float)

    def primary(self):
        if not self.alt:
            return self.x
        return self.flow.chart_switch.from_alt(self.x)

    def maybe_switch(self):
        cs = self.flow.chart_switch
        if cs is None:
            return
        if not self.alt and cs.needs_switch(self.x):
            self.x, self.alt = cs.to_alt(self.x), True
        elif self.alt:
            try:
                back = cs.from_alt(self.x)
            except DomainError:
                return
            if cs.release(back):
                self.x, self.alt = back, False

    def field(self):
        return self.flow.chart_switch.alt_field if self.alt else self.flow.field

    def project(self):
        if self.alt:
            return self.flow.chart_switch.alt_project
        return self.flow.project


def _guard_ok(flow, x):
    return flow.guard is None or bool(flow.guard(x))


def integrate(flow, s0, cfg, invariants=()):
    """Integrate ``flow`` from ``s0`` with ``cfg``.

    ``invariants`` is a sequence of (name, function of the flat state).  The
    invariant values are recorded with every stored sample.  Returns
    (Trajectory, DriftReport).
    """
    names = tuple(n for n, _ in invariants)
    funcs = [fn for _, fn in invariants]
    x0 = np.asarray(s0, dtype=float).copy()
    if not _guard_ok(flow, x0):
        raise DomainError(f"initial state lies outside the {flow.space} domain")
    started = time.perf_counter()

    def inv(x):
        return [float(fn(x)) for fn in funcs]

    if cfg.method == "rk45":
        return _integrate_rk45(flow, x0, cfg, names, inv, started)

    stepper = rk4_step if cfg.method == "rk4" else implicit_midpoint_step
    n_steps = max(1, int(math.ceil(cfg.t_max / cfg.dt - 1e-9)))
    chart = _ChartState(flow, x0)
    times, states, values = [0.0], [x0.copy()], [inv(x0)]
    early, message, steps = False, "", 0
    t = 0.0
    for k in range(1, n_steps + 1):
        h = min(cfg.dt, cfg.t_max - t) if k == n_steps else cfg.dt
        try:
            chart.maybe_switch()
            x_new = stepper(chart.field(), chart.x, h)
            proj = chart.project()
            if cfg.projection and proj is not None:
                x_new = proj(x_new)
            chart.x = x_new
            primary = chart.primary()
        except (DomainError, IntegrationError, FloatingPointError, ZeroDivisionError) as exc:
            early, message = True, f"terminated at t={t:.6g}: {exc}"
            break
        if not _guard_ok(flow, primary):
            early, message = True, f"terminated at t={t + h:.6g}: state left the {flow.space} domain"
            break
        steps += 1
        t = k * cfg.dt if k < n_steps else cfg.t_max
        if k % cfg.record_stride == 0 or k == n_steps:
            times.append(t)
            states.append(primary.copy())
            values.append(inv(primary))
    traj = Trajectory(times, states, names, values, early, message)
    report = drift_report(traj, time.perf_counter() - started, steps)
    return traj, report


def _integrate_rk45(flow, x0, cfg, names, inv, started):
    early, message = False, ""

    def guarded(x):
        if not _guard_ok(flow, x):
            raise DomainError(f"state left the {flow.space} domain")
        return flow.field(x)

    try:
        raw = rk45_adaptive(guarded, x0, cfg.t_max, cfg.rtol, cfg.atol)
        times, states, stats = list(raw.times), list(raw.states), raw.stats
    except (DomainError, FloatingPointError, ZeroDivisionError) as exc:
        # Fall back to the last consistent prefix: re-run with a recording hook.
        times, states, stats = _rk45_prefix(guarded, x0, cfg)
        early, message = True, f"terminated at t={times[-1]:.6g}: {exc}"
    keep = list(range(0, len(times), cfg.record_stride))
    if keep[-1] != len(times) - 1:
        keep.append(len(times) - 1)
    sel_states = []
    for i in keep:
        x = states[i]
        if cfg.projection and flow.project is not None:
            x = flow.project(x)
        sel_states.append(x)
    values = [inv(x) for x in sel_states]
    traj = Trajectory([times[i] for i in keep], sel_states, names, values, early, message, stats)
    return traj, drift_report(traj, time.perf_counter() - started,
                              stats.get("accepted", 0), stats.get("rejected", 0))


def _rk45_prefix(f, x0, cfg):
    solver = RK45(lambda t, y: f(y), 0.0, x0, cfg.t_max, rtol=cfg.rtol, atol=cfg.atol)
    times, states = [0.0], [x0.copy()]
    try:
        while solver.status == "running":
            solver.step()
            if solver.status == "failed":
                break
            times.append(solver.t)
            states.append(solver.y.copy())
    except (DomainError, FloatingPointError, ZeroDivisionError):
        pass
    return times, states, {"accepted": len(times) - 1, "rejected": 0}


# ---------------------------------------------------------------------------
# Order of accuracy
# ---------------------------------------------------------------------------


def fixed_step_solution(f, x0, t_end, dt, stepper=rk4_step):
    n = int(round(t_end / dt))
    if abs(n * dt - t_end) > 1e-9 * t_end:
        raise ValidationError("t_end must be an integer multiple of dt")
    x = np.asarray(x0, dtype=float)
    for _ in range(n):
        x = stepper(f, x, dt)
    return x


def convergence_exponent(f, x0, t_end, dts, reference):
    """Least-squares slope of log(error) against log(dt) for RK4."""
    errs = [np.max(np.abs(fixed_step_solution(f, x0, t_end, dt) - reference)) for dt in dts]
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    return float(slope), errs
