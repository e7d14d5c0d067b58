"""Numerical certification of the structural claims.

Every check samples seeded random points, evaluates a residual and compares it
with a threshold.  Structural checks gate; the regression report compares the
printed expansions (``printed``) with the composed maps and never gates on the
size of a deviation.  It does gate on the set of deviating rows: that set is
hard-coded below, so a new deviation, or a known one that disappears, fails.

Error models
------------
* Bracket, Poisson-map and equivariance residuals are absolute; sample points
  are kept in bounded regions so round-off stays near 1e-13.
* Involution residuals are divided by max(1, |dF| |P| |dG|), the size of the
  round-off a bracket of those gradients can carry.
* Regression deviations are max |printed - composed| / max(1, |composed|).
"""

import json
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm

from . import printed as pr
from .algebra import (
    CAL_A,
    CAL_J,
    CAL_L,
    CAL_T,
    LEVI_CIVITA,
    commutator,
    u22_compose,
    u22_coordinate,
    u22_coordinate_gradient,
)
from .dynamics import IntegratorConfig, integrate
from .e3 import (
    ClebschIntegral,
    GyrostatParams,
    KovalevskayaIntegral,
    LMGHamiltonian,
    audit_gradient,
    e3_poisson_tensor,
    e3_poisson_tensor_derivative,
    lmg_as_zhukovskii,
    lp_bracket_e3,
)
from .errors import UsageError, ValidationError
from .groups import (
    E3GroupElement,
    coadjoint_e3,
    equivariance_check,
    lambda_action,
    random_group_element,
    random_su2,
    random_traceless_hermitian,
    sigma_action,
    su2_to_so3,
    su2_to_so3_printed,
)
from .reduced import (
    MOSER_POISSON,
    MonopoleState,
    embedded_constraints,
    embedded_from_moser,
    embedded_from_moser_with_jacobian,
    j0_tilde_moser_function,
    momentum_e3_mu_with_jacobian,
    momentum_e3_nu_moser_with_jacobian,
    monopole_bracket,
    monopole_field,
    monopole_poisson_tensor,
    monopole_poisson_tensor_derivative,
    moser_from_embedded,
    phi_embedding,
)
from .scenarios import (
    DEFAULT_PARAMS,
    build_flow,
    build_system,
    embedded_from_e3,
    monopole_from_e3,
    twistor_from_e3,
)
from .twistor import (
    REAL_QUADRATICS,
    TWISTOR_POISSON,
    TwistorState,
    _polarize,
    ab_to_spinor,
    momentum_a2,
    momentum_e3,
    momentum_e3_upper,
    momentum_u22,
    real_a2_with_jacobian,
    real_e3_with_jacobian,
    spinor_to_ab,
)

SUITES = (
    "brackets", "jacobi", "poisson-maps", "dual-pair", "equivariance",
    "relatedness", "involution", "gradients", "charts", "regression",
)

THRESHOLDS = {
    "brackets": 1e-10,
    "jacobi": 1e-9,
    "poisson-maps": 1e-9,
    "dual-pair": 1e-10,
    "equivariance": 1e-10,
    "equivariance.su2_homomorphism": 1e-12,
    "relatedness": 1e-5,
    "involution": 1e-8,
    "gradients": 1e-5,
    "charts": 1e-12,
    "charts.embedded_drift_free": 1e-8,
    "charts.embedded_drift_projected": 1e-12,
    "regression": 1e-9,
}

MONOPOLE_MUS = (0.0, 0.7, 2.0)
INVOLUTION_SCENARIOS = ("euler", "kovalevskaya", "zhukovskii", "clebsch", "lmg")
INVOLUTION_REALIZATIONS = ("e3", "twistor", "monopole", "sphere")
REDUCED_MU = 0.7
REDUCED_NU = -1.0


# ---------------------------------------------------------------------------
# Configuration and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    samples: int = 100
    seed: int = 0
    tol: dict = field(default_factory=dict)
    global_tol: Optional[float] = None
    zeta_bounds: tuple = (0.1, 3.0)
    y_bounds: tuple = (0.1, 5.0)
    gamma_min: float = 0.1

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}; expected one of {SUITES + ('all',)}")
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValidationError("samples must be a positive integer")
        for lo, hi in (self.zeta_bounds, self.y_bounds):
            if not 0 < lo < hi:
                raise ValidationError("sampling bounds must satisfy 0 < low < high")
        if not self.gamma_min > 0:
            raise ValidationError("gamma_min must be positive")
        for v in list(self.tol.values()) + ([self.global_tol] if self.global_tol is not None else []):
            if not v > 0:
                raise ValidationError("tolerances must be positive")

    def threshold(self, check, suite):
        """Per-check override, then per-suite override, then the global one."""
        for key in (check, suite):
            if key in self.tol:
                return float(self.tol[key])
        if self.global_tol is not None:
            return float(self.global_tol)
        return THRESHOLDS.get(check, THRESHOLDS[suite])


@dataclass
class CheckResult:
    check: str
    residual: float
    threshold: float
    samples: int
    seed: int
    gating: bool = True
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(np.isfinite(self.residual) and self.residual < self.threshold)

    def as_dict(self):
        out = {
            "check": self.check,
            "residual": float(self.residual),
            "threshold": float(self.threshold),
            "pass": self.passed,
            "samples": int(self.samples),
            "seed": int(self.seed),
            "gating": self.gating,
        }
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class VerifyReport:
    suite: str
    seed: int
    samples: int
    results: list

    @property
    def passed(self):
        return all(r.passed for r in self.results if r.gating)

    def result(self, name):
        for r in self.results:
            if r.check == name:
                return r
        raise KeyError(name)

    def as_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "samples": self.samples,
            "pass": self.passed,
            "results": [r.as_dict() for r in sorted(self.results, key=lambda r: r.check)],
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


class Sampler:
    """Seeded random points kept away from the excluded loci."""

    def __init__(self, cfg, salt=0):
        self.cfg = cfg
        self.rng = np.random.default_rng([cfg.seed, salt])

    def _direction(self, n):
        v = self.rng.normal(size=n)
        return v / np.linalg.norm(v)

    def twistor(self):
        lo, hi = self.cfg.zeta_bounds
        z = self._direction(4) * self.rng.uniform(lo, hi)
        zeta = z[:2] + 1j * z[2:]
        theta = self.rng.normal(size=2) + 1j * self.rng.normal(size=2)
        return TwistorState(theta, zeta)

    def twistor_real(self):
        return self.twistor().as_real()

    def e3(self):
        G = self._direction(3) * self.rng.uniform(self.cfg.gamma_min, 3.0)
        return np.concatenate([self.rng.normal(size=3), G])

    def monopole(self):
        lo, hi = self.cfg.y_bounds
        y = self._direction(3) * self.rng.uniform(lo, hi)
        return np.concatenate([self.rng.normal(size=3), y])

    def moser(self):
        return np.concatenate([1.5 * self.rng.normal(size=3), self.rng.normal(size=3)])

    def u22(self):
        return u22_compose(*(self.rng.normal(size=4) for _ in range(4)))


def _result(cfg, suite, name, residual, samples, gating=True, details=None):
    return CheckResult(name, float(residual), cfg.threshold(name, suite), int(samples),
                       cfg.seed, gating, details or {})


# ---------------------------------------------------------------------------
# Bracket tables
# ---------------------------------------------------------------------------


def _e3_table(x):
    """Printed coordinate brackets of e(3)*, as a 6x6 matrix."""
    J, G = x[:3], x[3:]
    T = np.zeros((6, 6))
    T[:3, :3] = LEVI_CIVITA @ J
    T[:3, 3:] = LEVI_CIVITA @ G
    T[3:, :3] = LEVI_CIVITA @ G
    return T


def _e3_bracket_matrix(x):
    eye = np.eye(6)
    grads = [(e[:3], e[3:]) for e in eye]
    return np.array([[lp_bracket_e3(a, b, x) for b in grads] for a in grads])


def bracket_table_check(space, cfg):
    """Coordinate brackets against the printed relations on one space."""
    suite, n = "brackets", cfg.samples
    smp = Sampler(cfg, 11)
    if space == "e3":
        # Coordinate pairs, then random linear functions (bilinearity).
        res = 0.0
        for _ in range(n):
            x = smp.e3()
            res = max(res, np.max(np.abs(_e3_bracket_matrix(x) - _e3_table(x))))
            a, b = smp.rng.normal(size=6), smp.rng.normal(size=6)
            got = lp_bracket_e3((a[:3], a[3:]), (b[:3], b[3:]), x)
            res = max(res, abs(got - a @ _e3_table(x) @ b))
        return _result(cfg, suite, "brackets.e3", res, n)
    if space == "e3a2":
        # Lie-Poisson bracket of u(2,2)* on the covariant coordinates J_mu, Gamma_mu.
        names = [("J", m) for m in range(4)] + [("Gamma", m) for m in range(4)]
        X = [u22_coordinate_gradient(a, m) for a, m in names]
        res = 0.0
        for _ in range(n):
            rho = smp.u22()
            got = np.array([[np.trace(rho @ commutator(a, b)).real for b in X] for a in X])
            c = {nm: u22_coordinate(rho, *nm) for nm in names}
            x = np.array([c[("J", k)] for k in (1, 2, 3)] + [c[("Gamma", k)] for k in (1, 2, 3)])
            want = np.zeros((8, 8))
            idx = [1, 2, 3, 5, 6, 7]
            want[np.ix_(idx, idx)] = _e3_table(x)
            res = max(res, np.max(np.abs(got - want)))
            a, b = smp.rng.normal(size=8), smp.rng.normal(size=8)
            Xa = sum(c_ * X_ for c_, X_ in zip(a, X))
            Xb = sum(c_ * X_ for c_, X_ in zip(b, X))
            res = max(res, abs(np.trace(rho @ commutator(Xa, Xb)).real - a @ want @ b))
        return _result(cfg, suite, "brackets.e3a2", res, n)
    if space == "monopole":
        res, worst = 0.0, {}
        for mu in MONOPOLE_MUS:
            for _ in range(n):
                x = smp.monopole()
                y = x[3:]
                r = np.linalg.norm(y)
                eye = np.eye(6)
                got = np.array([[_mono_br(a, b, x, mu) for b in eye] for a in eye])
                want = np.zeros((6, 6))
                want[:3, 3:] = np.eye(3)
                want[3:, :3] = -np.eye(3)
                want[:3, :3] = -(mu / r**3) * (LEVI_CIVITA @ y)
                a, b = smp.rng.normal(size=6), smp.rng.normal(size=6)
                d = max(np.max(np.abs(got - want)), abs(_mono_br(a, b, x, mu) - a @ want @ b))
                res = max(res, d)
                worst[str(mu)] = max(worst.get(str(mu), 0.0), float(d))
        return _result(cfg, suite, "brackets.monopole", res, n * len(MONOPOLE_MUS),
                       details={"max_residual_by_mu": worst})
    if space == "u22":
        return u22_sector_check(cfg)
    raise UsageError(f"unknown bracket space {space!r}")


def _mono_br(a, b, x, mu):
    return monopole_bracket((a[:3], a[3:]), (b[:3], b[3:]), MonopoleState(x[:3], x[3:]), mu)


_SECTOR_QUOTE = "Lie-Poisson brackets of the coordinates functions $L_\\mu$"
_SECTOR_QUOTE_K = "Lie-Poisson brackets of the coordinates functions $K_\\mu $"


def _eps_sum(k, l, c, name, factor=1.0):
    return factor * sum(LEVI_CIVITA[k - 1, l - 1, m - 1] * c[(name, m)] for m in (1, 2, 3))


# family -> (left name, right name, index ranges, printed value, citation)
U22_SECTOR_ROWS = {
    "JL": ("J", "L", "kl", lambda k, l, c: _eps_sum(k, l, c, "L"), _SECTOR_QUOTE),
    "GL": ("Gamma", "L", "kl", lambda k, l, c: _eps_sum(k, l, c, "Gamma", 1j), _SECTOR_QUOTE),
    "LL": ("L", "L", "kl", lambda k, l, c: _eps_sum(k, l, c, "J"), _SECTOR_QUOTE),
    "G0L": ("Gamma", "L", "0mu", lambda k, l, c: c[("Gamma", l)], _SECTOR_QUOTE),
    "J0L": ("J", "L", "0mu", lambda k, l, c: 0.0, _SECTOR_QUOTE),
    "L0L": ("L", "L", "0k", lambda k, l, c: 0.0, _SECTOR_QUOTE),
    "L0J": ("L", "J", "0k", lambda k, l, c: 0.0, _SECTOR_QUOTE),
    "KK": ("K", "K", "munu", lambda k, l, c: 0.0, _SECTOR_QUOTE_K),
    "LK": ("L", "K", "kl", lambda k, l, c: _eps_sum(k, l, c, "K", -1j), _SECTOR_QUOTE_K),
    "GK": ("Gamma", "K", "kl", lambda k, l, c: _eps_sum(k, l, c, "J", 0.5), _SECTOR_QUOTE_K),
    "JK": ("J", "K", "kl", lambda k, l, c: _eps_sum(k, l, c, "K"), _SECTOR_QUOTE_K),
    "J0K": ("J", "K", "0k", lambda k, l, c: 0.0, _SECTOR_QUOTE_K),
    "G0K": ("Gamma", "K", "0k", lambda k, l, c: 0.0, _SECTOR_QUOTE_K),
    "L0K": ("L", "K", "0k", lambda k, l, c: 0.0, _SECTOR_QUOTE_K),
}

# Families whose printed relation disagrees with the bracket induced by J_u.
U22_KNOWN_DEVIATIONS = frozenset({"GL", "LL", "LK", "GK", "G0L", "G0K", "L0K"})


def _index_pairs(kind):
    if kind == "kl":
        return [(k, l) for k in (1, 2, 3) for l in (1, 2, 3)]
    if kind == "0mu":
        return [(0, m) for m in range(4)]
    if kind == "0k":
        return [(0, k) for k in (1, 2, 3)]
    return [(a, b) for a in range(4) for b in range(4)]


def u22_sector_check(cfg):
    """Printed L and K sector relations against the u(2,2)* bracket.

    Each family's deviation is reported; the gating residual is the largest
    deviation among families expected to hold, and a known deviation that
    vanishes is also flagged.
    """
    suite, n = "brackets", cfg.samples
    smp = Sampler(cfg, 12)
    names = [(a, m) for a in ("J", "Gamma", "L", "K") for m in range(4)]
    grads = {nm: u22_coordinate_gradient(*nm) for nm in names}
    dev = {f: 0.0 for f in U22_SECTOR_ROWS}
    for _ in range(n):
        rho = smp.u22()
        c = {nm: u22_coordinate(rho, *nm) for nm in names}
        for fam, (left, right, kind, printed_value, _) in U22_SECTOR_ROWS.items():
            for k, l in _index_pairs(kind):
                got = np.trace(rho @ commutator(grads[(left, k)], grads[(right, l)])).real
                dev[fam] = max(dev[fam], abs(got - printed_value(k, l, c)))
    thr = cfg.threshold("brackets.u22_sectors", suite)
    observed = {f for f, d in dev.items() if d >= thr}
    unexpected = observed - U22_KNOWN_DEVIATIONS
    vanished = U22_KNOWN_DEVIATIONS - observed
    residual = max([dev[f] for f in dev if f not in U22_KNOWN_DEVIATIONS] or [0.0])
    if vanished:
        residual = max(residual, 1.0)
    table = [
        {"row": f, "deviation": float(d), "expected": "deviates" if f in U22_KNOWN_DEVIATIONS else "match",
         "citation": U22_SECTOR_ROWS[f][4]}
        for f, d in sorted(dev.items())
    ]
    return CheckResult("brackets.u22_sectors", residual, thr, n, cfg.seed, True,
                       {"deviation_table": table, "unexpected": sorted(unexpected),
                        "vanished": sorted(vanished)})


# ---------------------------------------------------------------------------
# Jacobi identity
# ---------------------------------------------------------------------------


def _jacobi_residual(P, dP):
    """max |sum_n P_in dP_jk/dx_n + cyclic| over all index triples."""
    t = np.einsum("in,jkn->ijk", P, dP)
    return float(np.max(np.abs(t + t.transpose(1, 2, 0) + t.transpose(2, 0, 1))))


def jacobi_check(space, cfg):
    suite, n = "jacobi", cfg.samples
    smp = Sampler(cfg, 21)
    if space == "e3":
        dP = e3_poisson_tensor_derivative()
        res = max(_jacobi_residual(e3_poisson_tensor(smp.e3()), dP) for _ in range(n))
        return _result(cfg, suite, "jacobi.e3", res, n)
    if space == "u22":
        X = [u22_coordinate_gradient(a, m) for a in ("J", "Gamma", "L", "K") for m in range(4)]
        res = 0.0
        for _ in range(n):
            rho = smp.u22()
            for a in range(16):
                for b in range(a + 1, 16):
                    ab = commutator(X[a], X[b])
                    for c in range(b + 1, 16):
                        cyc = (commutator(ab, X[c]) + commutator(commutator(X[b], X[c]), X[a])
                               + commutator(commutator(X[c], X[a]), X[b]))
                        res = max(res, abs(np.trace(rho @ cyc).real))
        return _result(cfg, suite, "jacobi.u22", res, n)
    if space == "twistor":
        dP = np.zeros((8, 8, 8))
        res = max(_jacobi_residual(TWISTOR_POISSON, dP) for _ in range(n))
        return _result(cfg, suite, "jacobi.twistor", res, n, details={"note": "constant tensor"})
    if space == "monopole":
        res, worst = 0.0, {}
        for mu in MONOPOLE_MUS:
            for _ in range(n):
                x = smp.monopole()
                s = MonopoleState(x[:3], x[3:])
                d = _jacobi_residual(monopole_poisson_tensor(s, mu),
                                     monopole_poisson_tensor_derivative(s, mu))
                res = max(res, d)
                worst[str(mu)] = max(worst.get(str(mu), 0.0), d)
        return _result(cfg, suite, "jacobi.monopole", res, n * len(MONOPOLE_MUS),
                       details={"max_residual_by_mu": worst})
    if space == "moser":
        res = max(_jacobi_residual(MOSER_POISSON, np.zeros((6, 6, 6))) for _ in range(n))
        return _result(cfg, suite, "jacobi.moser", res, n, details={"note": "constant tensor"})
    raise UsageError(f"unknown space {space!r}")


# ---------------------------------------------------------------------------
# Poisson maps, dual pair, image conditions
# ---------------------------------------------------------------------------

_U22_NAMES = [(a, m) for a in ("J", "Gamma", "L", "K") for m in range(4)]


def _u22_coords_of_twistor(x):
    rho = momentum_u22(TwistorState.from_real(x))
    return np.array([u22_coordinate(rho, *nm) for nm in _U22_NAMES])


_U22_QUADRATICS = None


def _u22_quadratics():
    global _U22_QUADRATICS
    if _U22_QUADRATICS is None:
        _U22_QUADRATICS = _polarize(_u22_coords_of_twistor, 8, 16)
    return _U22_QUADRATICS


def poisson_map_check(map_name, cfg):
    """Upstairs bracket of lifted coordinates minus the downstairs bracket at the image."""
    suite = "poisson-maps"
    n = 2 * cfg.samples
    smp = Sampler(cfg, 31)
    res = 0.0
    if map_name == "J_e":
        for _ in range(n):
            vals, jac = real_e3_with_jacobian(smp.twistor_real())
            res = max(res, np.max(np.abs(jac @ TWISTOR_POISSON @ jac.T - e3_poisson_tensor(vals))))
    elif map_name == "J_e_mu":
        for mu in (REDUCED_MU, 2.0):
            for _ in range(n // 2):
                x = smp.monopole()
                vals, jac = momentum_e3_mu_with_jacobian(x, mu)
                P = monopole_poisson_tensor(MonopoleState(x[:3], x[3:]), mu)
                res = max(res, np.max(np.abs(jac @ P @ jac.T - e3_poisson_tensor(vals))))
    elif map_name == "J_e_nu":
        for _ in range(n):
            vals, jac = momentum_e3_nu_moser_with_jacobian(smp.moser(), REDUCED_NU)
            res = max(res, np.max(np.abs(jac @ MOSER_POISSON @ jac.T - e3_poisson_tensor(vals))))
    elif map_name == "J_u":
        Q = _u22_quadratics()
        X = [u22_coordinate_gradient(*nm) for nm in _U22_NAMES]
        for _ in range(n):
            x = smp.twistor_real()
            jac = Q @ x
            rho = momentum_u22(TwistorState.from_real(x))
            down = np.array([[np.trace(rho @ commutator(a, b)).real for b in X] for a in X])
            res = max(res, np.max(np.abs(jac @ TWISTOR_POISSON @ jac.T - down)))
    else:
        raise UsageError(f"unknown map {map_name!r}")
    return _result(cfg, suite, f"poisson-maps.{map_name}", res, n)


def image_conditions_check(cfg):
    """(G0)^2 - |G|^2 = 0, G0 <= 0 and G0 J0 - G.J = 0, relative residuals."""
    n = 10 * cfg.samples
    smp = Sampler(cfg, 32)
    res = 0.0
    for _ in range(n):
        s = smp.twistor()
        e = momentum_e3(s)
        J0, G0 = momentum_a2(s)
        g2 = e.Gamma @ e.Gamma
        r1 = abs(G0 * G0 - g2) / max(1.0, G0 * G0 + g2)
        r2 = max(G0, 0.0) / max(1.0, abs(G0))
        scale = max(1.0, abs(G0 * J0) + np.linalg.norm(e.Gamma) * np.linalg.norm(e.J))
        r3 = abs(G0 * J0 - e.Gamma @ e.J) / scale
        res = max(res, r1, r2, r3)
    return _result(cfg, "poisson-maps", "poisson-maps.image_conditions", res, n)


def dual_pair_check(cfg):
    """{F o J_a, G o J_e} for the a(2) coordinates against every e(3) coordinate,
    and the a(2) self-pair."""
    n = 2 * cfg.samples
    smp = Sampler(cfg, 41)
    res, pairs = 0.0, {}
    labels_e = ["J1", "J2", "J3", "Gamma1", "Gamma2", "Gamma3"]
    for _ in range(n):
        x = smp.twistor_real()
        _, je = real_e3_with_jacobian(x)
        _, ja = real_a2_with_jacobian(x)
        cross = ja @ TWISTOR_POISSON @ je.T
        self_pair = ja[0] @ TWISTOR_POISSON @ ja[1]
        for i, a in enumerate(("J0", "Gamma0")):
            for j, b in enumerate(labels_e):
                key = f"{a},{b}"
                pairs[key] = max(pairs.get(key, 0.0), abs(float(cross[i, j])))
        pairs["J0,Gamma0"] = max(pairs.get("J0,Gamma0", 0.0), abs(float(self_pair)))
        res = max(res, np.max(np.abs(cross)), abs(self_pair))
    return _result(cfg, "dual-pair", "dual-pair.a2_e3", res, n, details={"max_by_pair": pairs})


# ---------------------------------------------------------------------------
# Equivariance
# ---------------------------------------------------------------------------


def equivariance_checks(cfg):
    suite, n = "equivariance", cfg.samples
    smp = Sampler(cfg, 51)
    out = []
    for name in ("J_e", "J_u", "J_a"):
        res = 0.0
        for _ in range(n):
            g = random_group_element(smp.rng, special=(name == "J_e"))
            res = max(res, equivariance_check(name, g, smp.twistor()))
        out.append(_result(cfg, suite, f"equivariance.{name}", res, n))
    res = 0.0
    for _ in range(n):
        A1, A2 = random_su2(smp.rng), random_su2(smp.rng)
        res = max(res, np.max(np.abs(su2_to_so3(A1 @ A2) - su2_to_so3(A1) @ su2_to_so3(A2))))
    out.append(_result(cfg, suite, "equivariance.su2_homomorphism", res, n))
    res = 0.0
    for _ in range(n):
        g = random_group_element(smp.rng, special=True)
        P = random_traceless_hermitian(smp.rng)
        zeta = smp.twistor().zeta
        mu = float(smp.rng.normal())
        lhs = phi_embedding(*lambda_action(g, P, zeta), mu)
        rhs = sigma_action(g, phi_embedding(P, zeta, mu))
        res = max(res, np.max(np.abs(lhs.as_real() - rhs.as_real())))
    out.append(_result(cfg, suite, "equivariance.phi_intertwines", res, n))
    return out


# ---------------------------------------------------------------------------
# J-relatedness
# ---------------------------------------------------------------------------

RELATEDNESS_CASES = (
    ("zhukovskii", "twistor"),
    ("kovalevskaya", "monopole"),
    ("clebsch", "sphere"),
)


def _related_initial(realization, smp):
    """Upstairs initial state and the matching (mu, nu) levels."""
    x = smp.e3()
    J, G = x[:3], x[3:]
    if realization == "twistor":
        return twistor_from_e3(J, G).as_real(), None, None
    if realization == "monopole":
        target = -REDUCED_MU * np.linalg.norm(G)
        J = J + (target - J @ G) / (G @ G) * G
        mu, p, y = monopole_from_e3(J, G)
        return np.concatenate([p, y]), mu, None
    if realization in ("sphere", "sphere-embedded"):
        G = G / np.linalg.norm(G) * (-REDUCED_NU)
        nu, x8 = embedded_from_e3(J, G)
        if realization == "sphere-embedded":
            return x8, None, nu
        y, p = moser_from_embedded(x8, np.sqrt(-2.0 * nu))
        return np.concatenate([y, p]), None, nu
    raise UsageError(f"no relatedness initial state for {realization!r}")


def j_relatedness_check(scenario, realization, cfg, t_max=5.0, dt=1e-4):
    """Integrate upstairs, project, compare with the e(3)* trajectory (sup norm)."""
    smp = Sampler(cfg, 61)
    system = build_system(scenario, DEFAULT_PARAMS[scenario])
    x0, mu, nu = _related_initial(realization, smp)
    up = build_flow(system, realization, mu=mu, nu=nu)
    down = build_flow(system, "e3")
    icfg = IntegratorConfig("rk4", dt, t_max, record_stride=100)
    traj_up, rep_up = integrate(up.flow, x0, icfg)
    traj_dn, rep_dn = integrate(down.flow, up.to_e3(x0), icfg)
    if traj_up.terminated_early or traj_dn.terminated_early:
        res = float("inf")
    else:
        proj = np.array([up.to_e3(s) for s in traj_up.states])
        res = float(np.max(np.abs(proj - traj_dn.states)))
    details = {"scenario": scenario, "realization": realization, "t_max": t_max, "dt": dt}
    if mu is not None:
        details["mu"] = mu
    if nu is not None:
        details["nu"] = nu
    return _result(cfg, "relatedness", f"relatedness.{scenario}.{realization}", res, 1,
                   details=details)


# ---------------------------------------------------------------------------
# Involution
# ---------------------------------------------------------------------------


def _declared(system, realization, x):
    """Chart gradients of the declared integral set and the Poisson tensor at x."""
    fns = [("H", system.hamiltonian), ("K1", None), ("K2", None)]
    if system.integral is not None:
        fns.append(("K_extra", system.integral))
    if realization == "e3":
        vals, jac, P = x, np.eye(6), e3_poisson_tensor(x)
    elif realization == "twistor":
        vals, jac = real_e3_with_jacobian(x)
        P = TWISTOR_POISSON
    elif realization == "monopole":
        vals, jac = momentum_e3_mu_with_jacobian(x, REDUCED_MU)
        P = monopole_poisson_tensor(MonopoleState(x[:3], x[3:]), REDUCED_MU)
    elif realization == "sphere":
        vals, jac = momentum_e3_nu_moser_with_jacobian(x, REDUCED_NU)
        P = MOSER_POISSON
    else:
        raise UsageError(f"unknown realization {realization!r}")
    J, G = vals[:3], vals[3:]
    grads = {}
    for name, F in fns:
        if name == "K1":
            g = np.concatenate([G, J])
        elif name == "K2":
            g = np.concatenate([np.zeros(3), 2.0 * G])
        else:
            g = np.concatenate(F.grad(J, G))
        grads[name] = g @ jac
    if realization == "twistor":
        _, ja = real_a2_with_jacobian(x)
        grads["J0"], grads["Gamma0"] = ja[0], ja[1]
    elif realization == "monopole":
        y = x[3:]
        grads["Gamma0_tilde"] = np.concatenate([np.zeros(3), -y / np.linalg.norm(y)])
    elif realization == "sphere":
        grads["J0_tilde"] = j0_tilde_moser_function(REDUCED_NU)(x)[1]
    return grads, P


def involution_check(scenario, realization, cfg):
    smp = Sampler(cfg, 71)
    system = build_system(scenario, DEFAULT_PARAMS[scenario])
    draw = {"e3": smp.e3, "twistor": smp.twistor_real, "monopole": smp.monopole,
            "sphere": smp.moser}[realization]
    n = cfg.samples
    res, worst = 0.0, {}
    for _ in range(n):
        grads, P = _declared(system, realization, draw())
        pnorm = np.linalg.norm(P, 2)
        names = list(grads)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                ga, gb = grads[a], grads[b]
                scale = max(1.0, np.linalg.norm(ga) * pnorm * np.linalg.norm(gb))
                d = abs(float(ga @ P @ gb)) / scale
                key = f"{a},{b}"
                worst[key] = max(worst.get(key, 0.0), d)
                res = max(res, d)
    return _result(cfg, "involution", f"involution.{scenario}.{realization}", res, n,
                   details={"max_by_pair": worst})


# ---------------------------------------------------------------------------
# Gradient audits
# ---------------------------------------------------------------------------


def _jacobian_audit(fn, points):
    """Audit every row of a (values, jacobian) function."""
    worst = 0.0
    m = len(fn(points[0])[0])
    for i in range(m):
        worst = max(worst, audit_gradient(lambda x: fn(x)[0][i], lambda x: fn(x)[1][i], points))
    return worst


def gradient_audit(cfg):
    suite = "gradients"
    smp = Sampler(cfg, 81)
    n = max(1, cfg.samples // 10)
    out = []
    e3_pts = np.array([smp.e3() for _ in range(n)])
    for scen in ("euler", "kovalevskaya", "zhukovskii", "clebsch", "lmg", "custom"):
        system = build_system(scen, DEFAULT_PARAMS[scen])
        fns = [("H", system.hamiltonian)]
        if system.integral is not None:
            fns.append(("K_extra", system.integral))
        for label, F in fns:
            r = audit_gradient(lambda x: F.value(x[:3], x[3:]),
                               lambda x: np.concatenate(F.grad(x[:3], x[3:])), e3_pts)
            out.append(_result(cfg, suite, f"gradients.{scen}.{label}", r, n))
    tw = np.array([smp.twistor_real() for _ in range(n)])
    out.append(_result(cfg, suite, "gradients.momentum_e3_real", _jacobian_audit(real_e3_with_jacobian, tw), n))
    out.append(_result(cfg, suite, "gradients.momentum_a2_real", _jacobian_audit(real_a2_with_jacobian, tw), n))
    mono = np.array([smp.monopole() for _ in range(n)])
    out.append(_result(cfg, suite, "gradients.momentum_e3_mu",
                       _jacobian_audit(lambda x: momentum_e3_mu_with_jacobian(x, REDUCED_MU), mono), n))
    mos = np.array([smp.moser() for _ in range(n)])
    out.append(_result(cfg, suite, "gradients.momentum_e3_nu",
                       _jacobian_audit(lambda x: momentum_e3_nu_moser_with_jacobian(x, REDUCED_NU), mos), n))
    out.append(_result(cfg, suite, "gradients.embedded_from_moser",
                       _jacobian_audit(lambda x: embedded_from_moser_with_jacobian(x, 1.3), mos), n))
    worst = 0.0
    for x in mono:
        for i in range(6):
            for j in range(6):
                worst = max(worst, audit_gradient(
                    lambda z: monopole_poisson_tensor(MonopoleState(z[:3], z[3:]), 2.0)[i, j],
                    lambda z: monopole_poisson_tensor_derivative(MonopoleState(z[:3], z[3:]), 2.0)[i, j],
                    x[None, :]))
    out.append(_result(cfg, suite, "gradients.monopole_tensor_derivative", worst, n))
    return out


# ---------------------------------------------------------------------------
# Coordinate machinery
# ---------------------------------------------------------------------------


def chart_checks(cfg):
    suite, n = "charts", cfg.samples
    smp = Sampler(cfg, 91)
    out = []
    res = 0.0
    for _ in range(n):
        x = smp.twistor_real()
        res = max(res, np.max(np.abs(TwistorState.from_real(x).as_real() - x)) / max(1.0, np.max(np.abs(x))))
    out.append(_result(cfg, suite, "charts.spinor_real_roundtrip", res, n))
    res = 0.0
    for _ in range(n):
        s = smp.twistor()
        back = ab_to_spinor(*spinor_to_ab(s))
        res = max(res, np.max(np.abs(back.as_real() - s.as_real())) / max(1.0, np.max(np.abs(s.as_real()))))
    out.append(_result(cfg, suite, "charts.ab_roundtrip", res, n))
    res = 0.0
    rho = np.sqrt(-2.0 * REDUCED_NU)
    for _ in range(n):
        x6 = smp.moser()
        y, p = moser_from_embedded(embedded_from_moser(x6[:3], x6[3:], rho), rho)
        res = max(res, np.max(np.abs(np.concatenate([y, p]) - x6)) / max(1.0, np.max(np.abs(x6))))
    out.append(_result(cfg, suite, "charts.moser_roundtrip", res, n))
    out.extend(embedded_drift_checks(cfg))
    return out


def embedded_drift_checks(cfg, t_max=10.0, dt=1e-3):
    """Constraint drift of the embedded T*S^3 flow with and without projection."""
    smp = Sampler(cfg, 92)
    system = build_system("clebsch", DEFAULT_PARAMS["clebsch"])
    x0, _, nu = _related_initial("sphere-embedded", smp)
    rho = np.sqrt(-2.0 * nu)
    out = []
    for label, projection in (("free", False), ("projected", True)):
        flow = build_flow(system, "sphere-embedded", nu=nu).flow
        cfg_i = IntegratorConfig("rk4", dt, t_max, projection=projection, record_stride=10)
        traj, _ = integrate(flow, x0, cfg_i)
        res = 0.0
        for x in traj.states:
            c_norm, c_tan = (abs(v) for v in embedded_constraints(x, rho))
            res = max(res, c_norm / rho**2, c_tan / max(1.0, rho * np.linalg.norm(x[4:])))
        if traj.terminated_early:
            res = float("inf")
        out.append(_result(cfg, "charts", f"charts.embedded_drift_{label}", res, 1,
                           details={"t_max": t_max, "dt": dt, "nu": nu}))
    return out


# ---------------------------------------------------------------------------
# Regression report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegressionRow:
    id: str
    description: str
    citation: str
    expected: str  # "match" or "deviates"
    evaluate: object
    reading: str = ""


def _rel(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


_INERTIA = np.array([1.0, 2.0, 3.0])
_LAMBDA = np.array([0.3, -0.2, 0.5])
_KOV = (2.0, 1.0, 0.5)
_EPS = 0.7


def _over(n, draw, fn):
    return max(fn(draw()) for _ in range(n))


def _row_real(fn_printed, fn_composed):
    def ev(smp, n):
        return _over(n, smp.twistor_real, lambda x: _rel(fn_printed(x), fn_composed(x)))

    return ev


def _lower(x):
    return momentum_e3(TwistorState.from_real(x))


def _row_ab(fn_printed, fn_composed):
    def ev(smp, n):
        def one(s):
            a, b = spinor_to_ab(s)
            return _rel(fn_printed(a, b), fn_composed(s))

        return _over(n, smp.twistor, one)

    return ev


def _gyro():
    return GyrostatParams(_INERTIA, _LAMBDA)


def _row_mono(fn_printed, fn_composed):
    def ev(smp, n):
        return _over(n, smp.monopole, lambda x: _rel(fn_printed(x[:3], x[3:]), fn_composed(x)))

    return ev


def _mono_e3(x):
    vals, _ = momentum_e3_mu_with_jacobian(x, REDUCED_MU)
    return vals[:3], vals[3:]


def _row_moser(fn_printed, fn_composed):
    def ev(smp, n):
        return _over(n, smp.moser, lambda x: _rel(fn_printed(x[:3], x[3:]), fn_composed(x)))

    return ev


def _moser_e3(x):
    vals, _ = momentum_e3_nu_moser_with_jacobian(x, REDUCED_NU)
    return vals[:3], vals[3:]


_RHO = float(np.sqrt(-2.0 * REDUCED_NU))


def _gamma0_flow_dev(smp, n):
    A = TWISTOR_POISSON.T @ REAL_QUADRATICS[7]
    E = expm(A)

    def one(x):
        s = TwistorState.from_real(x)
        theta_p, _ = pr.gamma0_flow(s.theta, s.zeta, 1.0)
        actual = TwistorState.from_real(E @ x)
        return _rel(np.concatenate([theta_p.real, theta_p.imag]),
                    np.concatenate([actual.theta.real, actual.theta.imag]))

    return _over(n, smp.twistor_real, one)


def _j0_flow_dev(smp, n):
    A = TWISTOR_POISSON.T @ REAL_QUADRATICS[6]
    E = expm(A)

    def one(x):
        s = TwistorState.from_real(x)
        z_p = pr.j0_tilde_flow(s.zeta, 1.0)
        actual = TwistorState.from_real(E @ x).zeta
        return _rel(np.concatenate([z_p.real, z_p.imag]), np.concatenate([actual.real, actual.imag]))

    return _over(n, smp.twistor_real, one)


def _covering_dev(smp, n):
    worst = 0.0
    for _ in range(n):
        A1, A2 = random_su2(smp.rng), random_su2(smp.rng)
        O = su2_to_so3_printed
        worst = max(worst, float(np.max(np.abs(O(A1 @ A2) - O(A1) @ O(A2)))))
    return worst


def _printed_equivariance_dev(smp, n):
    worst = 0.0
    for _ in range(n):
        g = random_group_element(smp.rng, special=True)
        w = smp.twistor()
        lhs = momentum_e3(sigma_action(g, w)).as_array()
        rhs = coadjoint_e3(E3GroupElement(su2_to_so3_printed(g.A), g.translation_vector),
                           momentum_e3(w)).as_array()
        worst = max(worst, _rel(lhs, rhs))
    return worst


def _dual_basis_dev(smp, n):
    basis = {"J": CAL_J, "L": CAL_L, "T": CAL_T, "A": CAL_A}
    elements = [(k, m) for k in basis for m in range(4)]
    worst = 0.0
    for k, m in elements:
        dual_name, factor = pr.DUAL_BASIS_FACTORS[k]
        D = factor * basis[dual_name][m]
        for k2, m2 in elements:
            want = 1.0 if (k2, m2) == (k, m) else 0.0
            worst = max(worst, abs(np.trace(basis[k2][m2] @ D).real - want))
    return worst


def _abstract_sign_dev(smp, n):
    def one(x):
        J, G = _mono_e3(x)
        return abs(J @ G - REDUCED_MU * np.linalg.norm(G)) / max(1.0, REDUCED_MU * np.linalg.norm(G))

    return _over(n, smp.monopole, one)


def _upper_poisson_dev(smp, n):
    def one(x):
        vals, jac = real_e3_with_jacobian(x)
        # the upper-index map is -J_e: same lifted brackets, tensor at -image
        return float(np.max(np.abs(jac @ TWISTOR_POISSON @ jac.T - e3_poisson_tensor(-vals))))

    return _over(n, smp.twistor_real, one)


def _printed_mono_map_poisson_dev(smp, n):
    def one(x):
        flipped = np.concatenate([-x[:3], x[3:]])
        vals, jac = momentum_e3_mu_with_jacobian(flipped, REDUCED_MU)
        jac = jac.copy()
        jac[:, :3] *= -1.0
        P = monopole_poisson_tensor(MonopoleState(x[:3], x[3:]), REDUCED_MU)
        return float(np.max(np.abs(jac @ P @ jac.T - e3_poisson_tensor(vals))))

    return _over(n, smp.monopole, one)


def _moser_form_dev(smp, n):
    def one(x):
        vals, jac = momentum_e3_nu_moser_with_jacobian(x, REDUCED_NU)
        return float(np.max(np.abs(jac @ (-MOSER_POISSON) @ jac.T - e3_poisson_tensor(vals))))

    return _over(n, smp.moser, one)


def _lmg_dev(smp, n):
    eps, V, W, delta = 0.5, 0.3, 1.0, 1e-6
    gyro, const = lmg_as_zhukovskii(eps, V, W, delta, quadratic_scale=1.0)
    lmg = LMGHamiltonian(eps, V, W)

    def one(x):
        J, G = x[:3], x[3:]
        return _rel(gyro.value(J, G) - const, lmg.value(J, G))

    return _over(n, smp.e3, one)


_Q_NJOT = "The vector components  $\\vec{J}:\\mathbb{T}\\to \\mathbb{R}^3$"
_Q_A2REAL = "of the momentum map $\\textbf{J}_a: \\mathbb{T} \\to \\mathbb{R}\\times \\mathbb{R} $ written in $(q, \\pi)$"
_Q_AB = "depend on $(a,b)$"
_Q_AB_HAM = "J_0 & = -\\frac{1}{2}(a^+a - b^+b)"
_Q_CALKA = "for Kovalevskaya case distinguished by conditions $I_1=I_2 =2I_3$"
_Q_REALH = "written in real canonical coordinates $(q,\\pi)\\in \\mathbb{R}^4 \\times \\mathbb{R}^4$"
_Q_MONO = "we obtain the Hamiltonian"
_Q_MONO_INT = "for Kovalevskaya case one has"
_Q_MONO_FIELD = "The Hamilton equations given by"
_Q_MOSER = "assume the forms"
_Q_MOSER_H = "which written in the Moser coordinates $(\\vec{y}, \\vec{p})$"
_Q_SPHERE_INT = "the third integrals of motion for the lifting of Kovalevska, Zhukovski and Clebsh Hamiltonians"
_Q_ACT5 = "The Hamiltonian flow $\\sigma_t : \\widetilde{\\mathbb{T}}\\to \\widetilde{\\mathbb{T}}$ generated by $\\Gamma_0$"
_Q_ACT524 = "generated by $\\tilde{J}_0$ is the following"
_Q_ORT = "where the matrix elements of the rotation $O\\in SO(3)$ depend on $A\\in SU(2)$"
_Q_DUAL = "in the dual basis"
_Q_ABSTRACT = "defined by $\\vec{J}\\cdot \\vec{\\Gamma} = \\mu ||\\vec{\\Gamma}||$"
_Q_UPPER = "The vector components  $\\vec{J}:\\mathbb{T}\\to \\mathbb{R}^3$"
_Q_LMG = "if one takes $\\frac{1}{I_1}= W+V$"


def _build_rows():
    K = KovalevskayaIntegral(*_KOV)
    C = ClebschIntegral(_INERTIA, _EPS)
    H = _gyro()
    H0 = GyrostatParams(_INERTIA)
    mono_field = monopole_field(H, REDUCED_MU)
    j0t = j0_tilde_moser_function(REDUCED_NU)
    mu = REDUCED_MU
    up = lambda s: momentum_e3_upper(s)  # noqa: E731
    lo = lambda s: momentum_e3(s)  # noqa: E731
    return [
        RegressionRow("real.J", "J(q, pi) expansion vs J_e composed with the real chart", _Q_NJOT,
                      "match", _row_real(pr.real_J, lambda x: _lower(x).J)),
        RegressionRow("real.Gamma", "Gamma(q, pi) expansion vs composition; third component swaps q1 and q2",
                      _Q_NJOT, "deviates", _row_real(pr.real_Gamma, lambda x: _lower(x).Gamma)),
        RegressionRow("real.J0", "J0(q, pi) expansion vs composition", _Q_A2REAL, "match",
                      _row_real(pr.real_J0, lambda x: momentum_a2(TwistorState.from_real(x))[0])),
        RegressionRow("real.Gamma0", "Gamma0(q, pi) = -|q|^2/2 vs composition", _Q_A2REAL, "match",
                      _row_real(pr.real_Gamma0, lambda x: momentum_a2(TwistorState.from_real(x))[1])),
        RegressionRow("real.H", "G-matrix Hamiltonian (U = 0) vs H o J_e", _Q_REALH, "match",
                      _row_real(lambda x: pr.real_hamiltonian(x, _INERTIA, _LAMBDA),
                                lambda x: H.value(*_lower(x).as_array().reshape(2, 3))),
                      reading="the nonexistent pi_4 read as pi_2"),
        RegressionRow("ab.J", "J(a, b) vs the upper-index spinor display", _Q_AB, "match",
                      _row_ab(pr.ab_J, lambda s: up(s).J)),
        RegressionRow("ab.Gamma", "Gamma(a, b) vs the upper-index spinor display (it equals the lower-index one)",
                      _Q_AB, "deviates", _row_ab(pr.ab_Gamma, lambda s: up(s).Gamma)),
        RegressionRow("ab.J0", "J0(a, b) vs composition (opposite sign)", _Q_AB_HAM, "deviates",
                      _row_ab(pr.ab_J0, lambda s: momentum_a2(s)[0])),
        RegressionRow("ab.Gamma0", "Gamma0(a, b) vs composition", _Q_AB_HAM, "match",
                      _row_ab(pr.ab_Gamma0, lambda s: momentum_a2(s)[1])),
        RegressionRow("ab.H", "four-wave Hamiltonian (U = 0) vs H composed with the upper-index display", _Q_AB,
                      "match", _row_ab(lambda a, b: pr.ab_hamiltonian(a, b, _INERTIA, _LAMBDA),
                                       lambda s: H.value(up(s).J, up(s).Gamma))),
        RegressionRow("ab.kovalevskaya", "Kovalevskaya integral in (a, b) vs K o J_e", _Q_CALKA, "deviates",
                      _row_ab(lambda a, b: pr.ab_kovalevskaya(a, b, *_KOV),
                              lambda s: K.value(lo(s).J, lo(s).Gamma))),
        RegressionRow("ab.zhukovskii", "Zhukovskii integral in (a, b) vs J^2 o J_e", _Q_CALKA, "match",
                      _row_ab(pr.ab_zhukovskii, lambda s: lo(s).J @ lo(s).J)),
        RegressionRow("ab.clebsch", "Clebsch integral in (a, b) vs K o J_e", _Q_CALKA, "match",
                      _row_ab(lambda a, b: pr.ab_clebsch(a, b, _INERTIA, _EPS),
                              lambda s: C.value(lo(s).J, lo(s).Gamma))),
        RegressionRow("monopole.map", "printed (y x p + mu y/|y|, -y) vs the Poisson map (p x y + mu y/|y|, -y)",
                      _Q_MONO, "deviates",
                      _row_mono(lambda p, y: pr.monopole_map(p, y, mu),
                                lambda x: momentum_e3_mu_with_jacobian(x, mu)[0])),
        RegressionRow("monopole.map_poisson", "Poisson residual of the printed monopole map for the printed bracket",
                      _Q_MONO, "deviates", _printed_mono_map_poisson_dev),
        RegressionRow("monopole.H", "printed lifted Hamiltonian vs H o J_e,mu", _Q_MONO, "deviates",
                      _row_mono(lambda p, y: pr.monopole_hamiltonian(p, y, mu, _INERTIA, _LAMBDA),
                                lambda x: H.value(*_mono_e3(x)))),
        RegressionRow("monopole.kovalevskaya", "printed lifted Kovalevskaya integral vs K o J_e,mu",
                      _Q_MONO_INT, "deviates",
                      _row_mono(lambda p, y: pr.monopole_kovalevskaya(p, y, mu, *_KOV),
                                lambda x: K.value(*_mono_e3(x))),
                      reading="u_2 p_2 - y_3 p_2 read as y_2 p_3 - y_3 p_2"),
        RegressionRow("monopole.zhukovskii", "(y x p)^2 + mu^2 vs J^2 o J_e,mu", _Q_MONO_INT, "match",
                      _row_mono(lambda p, y: pr.monopole_zhukovskii(p, y, mu),
                                lambda x: (lambda J, G: J @ J)(*_mono_e3(x)))),
        RegressionRow("monopole.clebsch", "printed lifted Clebsch integral vs K o J_e,mu", _Q_MONO_INT, "match",
                      _row_mono(lambda p, y: pr.monopole_clebsch(p, y, mu, _INERTIA, _EPS),
                                lambda x: C.value(*_mono_e3(x)))),
        RegressionRow("monopole.field", "printed Hamilton equations (U = 0) vs the bracket-derived field",
                      _Q_MONO_FIELD, "deviates",
                      _row_mono(lambda p, y: pr.monopole_field(p, y, mu, _INERTIA, _LAMBDA), mono_field)),
        RegressionRow("moser.J", "J(y, p) in Moser coordinates vs composition", _Q_MOSER, "match",
                      _row_moser(pr.moser_J, lambda x: _moser_e3(x)[0])),
        RegressionRow("moser.Gamma", "Gamma(y) in Moser coordinates vs composition; third row has the q1/q2 swap",
                      _Q_MOSER, "deviates",
                      _row_moser(lambda y, p: pr.moser_Gamma(y, _RHO), lambda x: _moser_e3(x)[1])),
        RegressionRow("moser.J0_tilde", "J0-tilde polynomial vs J0 on the embedded chart", _Q_MOSER, "deviates",
                      _row_moser(pr.moser_j0_tilde, lambda x: j0t(x)[0])),
        RegressionRow("moser.H", "S132 Hamiltonian (U = 0, lambda = 0) vs H o J_e,nu", _Q_MOSER_H, "match",
                      _row_moser(lambda y, p: pr.moser_hamiltonian(y, p, _INERTIA),
                                 lambda x: H0.value(*_moser_e3(x))),
                      reading="-(y.p)/2 read as -(y.p) y/2"),
        RegressionRow("moser.kovalevskaya", "sphere Kovalevskaya integral vs K o J_e,nu", _Q_SPHERE_INT, "match",
                      _row_moser(lambda y, p: pr.moser_kovalevskaya(y, p, _RHO, *_KOV),
                                 lambda x: K.value(*_moser_e3(x)))),
        RegressionRow("moser.zhukovskii", "sphere Zhukovskii integral vs J^2 o J_e,nu", _Q_SPHERE_INT, "match",
                      _row_moser(pr.moser_zhukovskii, lambda x: (lambda J, G: J @ J)(*_moser_e3(x)))),
        RegressionRow("moser.clebsch", "sphere Clebsch integral vs K o J_e,nu (inherits the Gamma row)",
                      _Q_SPHERE_INT, "deviates",
                      _row_moser(lambda y, p: pr.moser_clebsch(y, p, _RHO, _INERTIA, _EPS),
                                 lambda x: C.value(*_moser_e3(x))),
                      reading="(y - 1)^2 read as (y^2 - 1)^2"),
        RegressionRow("flow.Gamma0", "theta + t zeta vs the Gamma0 flow at t = 1 (actual theta - t zeta)", _Q_ACT5,
                      "deviates", _gamma0_flow_dev),
        RegressionRow("flow.J0_tilde", "e^{it} zeta vs the J0 flow at t = 1 (actual phase t/2)", _Q_ACT524,
                      "deviates", _j0_flow_dev),
        RegressionRow("structure.su2_covering", "printed trace formula is not a homomorphism", _Q_ORT, "deviates",
                      _covering_dev),
        RegressionRow("structure.equivariance_form", "J_e o Sigma_g vs printed (O(A), +T) coadjoint image",
                      _Q_ORT, "deviates", _printed_equivariance_dev),
        RegressionRow("structure.dual_basis", "printed dual basis under the trace pairing", _Q_DUAL, "deviates",
                      _dual_basis_dev),
        RegressionRow("structure.abstract_mu_sign", "J.Gamma = +mu|Gamma| on the image of J_e,mu", _Q_ABSTRACT,
                      "deviates", _abstract_sign_dev),
        RegressionRow("structure.upper_index_poisson", "Poisson residual of the upper-index display map",
                      _Q_UPPER, "deviates", _upper_poisson_dev),
        RegressionRow("structure.moser_form", "Poisson residual of J_e,nu under the dp^dq orientation", _Q_MOSER,
                      "deviates", _moser_form_dev),
        RegressionRow("structure.lmg_limit", "printed LMG identification vs H_LMG (delta = 1e-6)", _Q_LMG,
                      "deviates", _lmg_dev),
    ]


def known_deviations():
    return frozenset(r.id for r in _build_rows() if r.expected == "deviates")


def printed_regression_report(cfg):
    """Deviation table of every printed expansion.  The only gating aspect is
    whether the set of deviating rows equals the hard-coded one."""
    smp = Sampler(cfg, 101)
    n = cfg.samples
    thr = cfg.threshold("regression", "regression")
    table, mismatched = [], []
    for row in _build_rows():
        d = float(row.evaluate(smp, n))
        observed = "deviates" if d >= thr else "match"
        entry = {"row": row.id, "description": row.description, "deviation": d,
                 "expected": row.expected, "observed": observed, "citation": row.citation}
        if row.reading:
            entry["reading"] = row.reading
        table.append(entry)
        if observed != row.expected:
            mismatched.append(row.id)
    deviations = [CheckResult(f"regression.{e['row']}", e["deviation"], thr, n, cfg.seed, False)
                  for e in table]
    summary = CheckResult("regression.allowlist", float(len(mismatched)), 0.5, n, cfg.seed, True,
                          {"deviation_table": table, "mismatched": mismatched})
    return [summary] + deviations


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _suite_checks(suite, cfg):
    if suite == "brackets":
        return [bracket_table_check(s, cfg) for s in ("e3", "e3a2", "monopole", "u22")]
    if suite == "jacobi":
        return [jacobi_check(s, cfg) for s in ("e3", "u22", "twistor", "monopole", "moser")]
    if suite == "poisson-maps":
        return [poisson_map_check(m, cfg) for m in ("J_e", "J_e_mu", "J_e_nu", "J_u")] + [
            image_conditions_check(cfg)]
    if suite == "dual-pair":
        return [dual_pair_check(cfg)]
    if suite == "equivariance":
        return equivariance_checks(cfg)
    if suite == "relatedness":
        return [j_relatedness_check(s, r, cfg) for s, r in RELATEDNESS_CASES]
    if suite == "involution":
        return [involution_check(s, r, cfg) for s in INVOLUTION_SCENARIOS for r in INVOLUTION_REALIZATIONS]
    if suite == "gradients":
        return gradient_audit(cfg)
    if suite == "charts":
        return chart_checks(cfg)
    if suite == "regression":
        return printed_regression_report(cfg)
    raise UsageError(f"unknown suite {suite!r}")


def run_suite(cfg):
    """Run one suite (or all) and merge results sorted by check name."""
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    results = []
    for name in names:
        results.extend(_suite_checks(name, cfg))
    results.sort(key=lambda r: r.check)
    return VerifyReport(cfg.suite, cfg.seed, cfg.samples, results)


def timed_run(cfg):
    started = time.perf_counter()
    report = run_suite(cfg)
    return report, time.perf_counter() - started
