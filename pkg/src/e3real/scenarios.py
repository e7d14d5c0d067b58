"""Named integrable scenarios and their flows on each realization.

A scenario fixes the e(3)* Hamiltonian and, where one exists, the extra
integral.  ``build_flow`` lifts it to a realization and returns the flow, the
invariants to monitor and the projection back to e(3)* (used by the
J-relatedness check).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .dynamics import ChartSwitch, FlowSpec
from .e3 import (
    CASIMIR_K1,
    CASIMIR_K2,
    ClebschIntegral,
    GyrostatParams,
    KovalevskayaIntegral,
    LinearPotential,
    LMGHamiltonian,
    ZhukovskiiIntegral,
    e3_flat_field,
)
from .errors import DomainError, UsageError, ValidationError
from .reduced import (
    POLE_SWITCH,
    embedded_from_moser,
    embedded_constraints,
    herm_from_p,
    monopole_field,
    momentum_e3_mu_with_jacobian,
    moser_from_embedded,
    phi_embedding,
    project_embedded,
    sphere_embedded_field,
    sphere_moser_field,
    spinor_from_vector,
    twistor_to_sphere_section,
)
from .twistor import real_a2_with_jacobian, real_e3_with_jacobian, twistor_real_field

REALIZATIONS = ("e3", "twistor", "monopole", "sphere", "sphere-embedded")

# Flows stop when the state comes this close to an excluded locus.
FLOW_GUARD = 1e-8


@dataclass(frozen=True)
class ScenarioInfo:
    name: str
    required: tuple
    optional: tuple
    case: str


SCENARIOS = {
    "euler": ScenarioInfo("euler", ("inertia",), (), "Euler top: free rigid body, no potential"),
    "kovalevskaya": ScenarioInfo(
        "kovalevskaya", ("I", "chi1", "chi2"), (),
        "Kovalevskaya top: I1 = I2 = 2 I3 = I, linear potential chi1 G1 + chi2 G2",
    ),
    "zhukovskii": ScenarioInfo(
        "zhukovskii", ("inertia", "lambda"), (), "Zhukovskii gyrostat: rotor lambda, no potential"
    ),
    "clebsch": ScenarioInfo(
        "clebsch", ("inertia", "eps"), (), "Clebsch case: quadratic potential eps/2 sum I_k G_k^2"
    ),
    "lmg": ScenarioInfo(
        "lmg", ("eps", "V", "W"), (), "Lipkin-Meshkov-Glick model, a limit of the Zhukovskii gyrostat"
    ),
    "custom": ScenarioInfo(
        "custom", ("inertia",), ("lambda", "chi"), "general gyrostat with a linear potential"
    ),
}


# Parameters used by the verification suites and as CLI examples.
DEFAULT_PARAMS = {
    "euler": {"inertia": (1.0, 2.0, 3.0)},
    "kovalevskaya": {"I": 2.0, "chi1": 1.0, "chi2": 0.5},
    "zhukovskii": {"inertia": (1.0, 2.0, 3.0), "lambda": (0.3, -0.2, 0.5)},
    "clebsch": {"inertia": (1.0, 2.0, 3.0), "eps": 0.7},
    "lmg": {"eps": 0.5, "V": 0.3, "W": 1.0},
    "custom": {"inertia": (1.0, 2.0, 3.0), "lambda": (0.1, 0.0, 0.2), "chi": (0.0, 0.0, 1.0)},
}


@dataclass(frozen=True)
class System:
    name: str
    hamiltonian: object
    integral: Optional[object]
    params: dict


def _vec(params, key, n=3):
    v = np.asarray(params[key], dtype=float).reshape(-1)
    if v.shape != (n,) or not np.all(np.isfinite(v)):
        raise ValidationError(f"{key} must have {n} finite components")
    return v


def _num(params, key):
    v = float(params[key])
    if not np.isfinite(v):
        raise ValidationError(f"{key} must be finite")
    return v


def build_system(name, params):
    """Hamiltonian and extra integral for a scenario; raises on missing fields."""
    if name not in SCENARIOS:
        raise UsageError(f"unknown scenario {name!r}; expected one of {sorted(SCENARIOS)}")
    info = SCENARIOS[name]
    missing = [k for k in info.required if params.get(k) is None]
    if missing:
        raise ValidationError(f"scenario {name} requires {', '.join(missing)}")
    if name == "euler":
        inertia = _vec(params, "inertia")
        return System(name, GyrostatParams.euler(inertia), ZhukovskiiIntegral(), params)
    if name == "kovalevskaya":
        I, c1, c2 = _num(params, "I"), _num(params, "chi1"), _num(params, "chi2")
        return System(name, GyrostatParams.kovalevskaya(I, c1, c2),
                      KovalevskayaIntegral(I, c1, c2), params)
    if name == "zhukovskii":
        H = GyrostatParams.zhukovskii(_vec(params, "inertia"), _vec(params, "lambda"))
        return System(name, H, ZhukovskiiIntegral(), params)
    if name == "clebsch":
        inertia, eps = _vec(params, "inertia"), _num(params, "eps")
        return System(name, GyrostatParams.clebsch(inertia, eps), ClebschIntegral(inertia, eps), params)
    if name == "lmg":
        H = LMGHamiltonian(_num(params, "eps"), _num(params, "V"), _num(params, "W"))
        return System(name, H, None, params)
    lam = _vec(params, "lambda") if params.get("lambda") is not None else np.zeros(3)
    chi = _vec(params, "chi") if params.get("chi") is not None else np.zeros(3)
    H = GyrostatParams(_vec(params, "inertia"), lam, LinearPotential(chi), name="custom")
    return System(name, H, None, params)


def e3_functions(system):
    """Named e(3)* functions monitored on every realization."""
    out = [("H", system.hamiltonian), ("K1", CASIMIR_K1), ("K2", CASIMIR_K2)]
    if system.integral is not None:
        out.append(("K_extra", system.integral))
    return out


@dataclass(frozen=True)
class RealizedFlow:
    flow: FlowSpec
    invariants: list
    to_e3: Callable
    chart_labels: tuple


def _compose(F, to_e3):
    def f(x):
        v = to_e3(x)
        return F.value(v[:3], v[3:])

    return f


def build_flow(system, realization, mu=None, nu=None):
    """Lift ``system`` to ``realization``; mu is needed for the monopole and nu for
    the sphere."""
    H = system.hamiltonian
    if realization == "e3":
        to_e3 = lambda x: np.asarray(x[:6], dtype=float)  # noqa: E731
        flow = FlowSpec("e3", e3_flat_field(H))
        extra = []
        labels = ("J1", "J2", "J3", "Gamma1", "Gamma2", "Gamma3")
    elif realization == "twistor":
        to_e3 = lambda x: real_e3_with_jacobian(x)[0]  # noqa: E731
        flow = FlowSpec("twistor", twistor_real_field(H), guard=_twistor_guard, canonical=True)
        extra = [("J0", lambda x: real_a2_with_jacobian(x)[0][0]),
                 ("Gamma0", lambda x: real_a2_with_jacobian(x)[0][1])]
        labels = ("q0", "q1", "q2", "q3", "pi0", "pi1", "pi2", "pi3")
    elif realization == "monopole":
        if mu is None:
            raise ValidationError("monopole realization requires mu")
        mu = float(mu)
        to_e3 = lambda x: momentum_e3_mu_with_jacobian(x, mu)[0]  # noqa: E731
        flow = FlowSpec("monopole", monopole_field(H, mu), params={"mu": mu},
                        guard=_monopole_guard, canonical=(mu == 0.0))
        extra = [("Gamma0_tilde", lambda x: -float(np.linalg.norm(x[3:6])))]
        labels = ("p1", "p2", "p3", "y1", "y2", "y3")
    elif realization in ("sphere", "sphere-embedded"):
        if nu is None or not nu < 0:
            raise ValidationError("sphere realization requires nu < 0")
        rho = float(np.sqrt(-2.0 * nu))
        if realization == "sphere":
            to_e3 = lambda x: real_e3_with_jacobian(_moser_to_embedded(x, rho))[0]  # noqa: E731
            j0 = lambda x: real_a2_with_jacobian(_moser_to_embedded(x, rho))[0][0]  # noqa: E731
            flow = FlowSpec("sphere-moser", sphere_moser_field(H, nu), params={"nu": nu},
                            chart_switch=_moser_switch(H, nu, rho), canonical=True)
            extra = [("J0_tilde", j0)]
            labels = ("y1", "y2", "y3", "p1", "p2", "p3")
        else:
            to_e3 = lambda x: real_e3_with_jacobian(x)[0]  # noqa: E731
            flow = FlowSpec("sphere-embedded", sphere_embedded_field(H, nu), params={"nu": nu},
                            guard=_twistor_guard, project=lambda x: project_embedded(x, rho))
            extra = [("J0_tilde", lambda x: real_a2_with_jacobian(x)[0][0]),
                     ("norm_residual", lambda x: embedded_constraints(x, rho)[0]),
                     ("tangency_residual", lambda x: embedded_constraints(x, rho)[1])]
            labels = ("q0", "q1", "q2", "q3", "pi0", "pi1", "pi2", "pi3")
    else:
        raise UsageError(f"unknown realization {realization!r}; expected one of {REALIZATIONS}")
    invariants = [(n, _compose(F, to_e3)) for n, F in e3_functions(system)] + extra
    return RealizedFlow(flow, invariants, to_e3, labels)


def _twistor_guard(x):
    return float(np.linalg.norm(x[:4])) > FLOW_GUARD


def _monopole_guard(x):
    return float(np.linalg.norm(x[3:6])) > FLOW_GUARD


def _moser_to_embedded(x, rho):
    return embedded_from_moser(x[:3], x[3:6], rho)


def _moser_switch(H, nu, rho):
    def from_alt(z):
        y, p = moser_from_embedded(project_embedded(z, rho), rho, rtol=1e-6)
        return np.concatenate([y, p])

    return ChartSwitch(
        needs_switch=lambda x: float(np.linalg.norm(x[:3])) > POLE_SWITCH,
        release=lambda x: float(np.linalg.norm(x[:3])) < 0.1 * POLE_SWITCH,
        to_alt=lambda x: _moser_to_embedded(x, rho),
        from_alt=from_alt,
        alt_field=sphere_embedded_field(H, nu),
        alt_project=lambda z: project_embedded(z, rho),
    )


# ---------------------------------------------------------------------------
# Fibre points over a given (J, Gamma)
# ---------------------------------------------------------------------------


def monopole_from_e3(J, Gamma):
    """(mu, p, y) with momentum_e3_mu(p, y) = (J, Gamma) and p.y = 0.

    y = -Gamma, mu = -J.Gamma/|Gamma| and p = y x J_perp/|y|^2 where
    J_perp = J - mu y/|y|.  The fibre coordinate p.y is set to zero.
    """
    J = np.asarray(J, dtype=float)
    G = np.asarray(Gamma, dtype=float)
    r = float(np.linalg.norm(G))
    if r <= FLOW_GUARD:
        raise DomainError("a fibre point needs Gamma != 0")
    y = -G
    mu = -float(J @ G) / r
    J_perp = J - mu * y / r
    p = np.cross(y, J_perp) / (r * r)
    return mu, p, y


def twistor_from_e3(J, Gamma):
    """Twistor point over (J, Gamma) built with Phi; its J^0 level is mu.

    Gauge: the monopole fibre coordinate is zero and zeta has its larger
    component real and non-negative.
    """
    mu, p, y = monopole_from_e3(J, Gamma)
    zeta = spinor_from_vector(-y)
    return phi_embedding(herm_from_p(p), zeta, mu)


def sphere_from_e3(J, Gamma):
    """(nu, Moser y, Moser p) over (J, Gamma) with nu = -|Gamma|."""
    w = twistor_from_e3(J, Gamma)
    nu = -float(np.linalg.norm(Gamma))
    rho = np.sqrt(-2.0 * nu)
    x8 = twistor_to_sphere_section(w.as_real())
    y, p = moser_from_embedded(x8, rho)
    return nu, y, p


def embedded_from_e3(J, Gamma):
    w = twistor_from_e3(J, Gamma)
    return -float(np.linalg.norm(Gamma)), twistor_to_sphere_section(w.as_real())
