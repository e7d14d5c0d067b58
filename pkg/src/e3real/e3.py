"""The Lie-Poisson space e(3)* of the heavy top and gyrostat.

Points are pairs (J, Gamma) of 3-vectors.  The bracket is

    {F, G} = J.(dF/dJ x dG/dJ) + Gamma.(dF/dJ x dG/dGamma + dF/dGamma x dG/dJ),

so that {J_k, J_l} = eps_klm J_m, {J_k, Gamma_l} = eps_klm Gamma_m and the Gamma's
commute.  Time evolution follows dF/dt = {H, F}, which gives

    dJ/dt = J x dH/dJ + Gamma x dH/dGamma,    dGamma/dt = Gamma x dH/dJ.

Every Hamiltonian and integral here is an ``E3Function``: a value and an
analytic gradient (dF/dJ, dF/dGamma).  Lifted versions on the realizations are
built by composing with a momentum map, so the same objects drive all phase
spaces.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import LEVI_CIVITA, cross3
from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class E3State:
    J: np.ndarray
    Gamma: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.J, dtype=float).reshape(3)
        G = np.asarray(self.Gamma, dtype=float).reshape(3)
        if not (np.all(np.isfinite(J)) and np.all(np.isfinite(G))):
            raise ValidationError("E3State components must be finite")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "Gamma", G)

    def as_array(self):
        return np.concatenate([self.J, self.Gamma])

    @classmethod
    def from_array(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x[:3], x[3:6])


def split_state(s):
    """Accept an E3State or a flat length-6 array and return (J, Gamma)."""
    if isinstance(s, E3State):
        return s.J, s.Gamma
    x = np.asarray(s, dtype=float)
    return x[:3], x[3:6]


class E3Function:
    """A smooth function on e(3)* with an analytic gradient."""

    def __init__(self, name, value, grad):
        self.name = name
        self._value = value
        self._grad = grad

    def value(self, J, Gamma):
        return float(self._value(J, Gamma))

    def grad(self, J, Gamma):
        gJ, gG = self._grad(J, Gamma)
        return np.asarray(gJ, dtype=float), np.asarray(gG, dtype=float)

    def __call__(self, s):
        return self.value(*split_state(s))

    def __repr__(self):
        return f"E3Function({self.name!r})"


# ---------------------------------------------------------------------------
# Bracket and Casimirs
# ---------------------------------------------------------------------------


def lp_bracket_e3(gradF, gradG, s):
    """Lie-Poisson bracket of two functions given their (dJ, dGamma) gradients at s."""
    J, G = split_state(s)
    FJ, FG = (np.asarray(v, dtype=float) for v in gradF)
    GJ, GG = (np.asarray(v, dtype=float) for v in gradG)
    return float(J @ cross3(FJ, GJ) + G @ (cross3(FJ, GG) + cross3(FG, GJ)))


def e3_poisson_tensor(s):
    """6x6 matrix P with {F, G} = grad F . P . grad G in the (J, Gamma) ordering."""
    J, G = split_state(s)
    P = np.zeros((6, 6))
    P[:3, :3] = LEVI_CIVITA @ J
    P[:3, 3:] = LEVI_CIVITA @ G
    P[3:, :3] = LEVI_CIVITA @ G
    return P


def e3_poisson_tensor_derivative(s=None):
    """dP[i, j]/dx[n]; constant because the bracket is linear."""
    dP = np.zeros((6, 6, 6))
    dP[:3, :3, :3] = LEVI_CIVITA
    dP[:3, 3:, 3:] = LEVI_CIVITA
    dP[3:, :3, 3:] = LEVI_CIVITA
    return dP


def casimirs(s):
    """(K1, K2) = (Gamma.J, Gamma^2)."""
    J, G = split_state(s)
    return float(G @ J), float(G @ G)


CASIMIR_K1 = E3Function("K1", lambda J, G: G @ J, lambda J, G: (G, J))
CASIMIR_K2 = E3Function("K2", lambda J, G: G @ G, lambda J, G: (np.zeros(3), 2.0 * G))


# ---------------------------------------------------------------------------
# Potentials and the gyrostat family
# ---------------------------------------------------------------------------


class ZeroPotential:
    kind = "zero"

    def value(self, G, inertia):
        return 0.0

    def grad(self, G, inertia):
        return np.zeros(3)


@dataclass(frozen=True)
class LinearPotential:
    """U = chi . Gamma for a fixed body vector chi."""

    chi: np.ndarray
    kind: str = field(default="linear", init=False)

    def __post_init__(self):
        object.__setattr__(self, "chi", np.asarray(self.chi, dtype=float).reshape(3))

    def value(self, G, inertia):
        return float(self.chi @ G)

    def grad(self, G, inertia):
        return self.chi


@dataclass(frozen=True)
class ClebschPotential:
    """U = eps/2 (I_1 Gamma_1^2 + I_2 Gamma_2^2 + I_3 Gamma_3^2)."""

    eps: float
    kind: str = field(default="clebsch", init=False)

    def value(self, G, inertia):
        return 0.5 * self.eps * float(inertia @ (G * G))

    def grad(self, G, inertia):
        return self.eps * inertia * G


class CustomPotential:
    """User potential with a user gradient; the gradient is audited on construction."""

    kind = "custom"

    def __init__(self, U, gradU, audit_points=None, rel_tol=1e-5, seed=0):
        self._U = U
        self._gradU = gradU
        points = audit_points
        if points is None:
            points = np.random.default_rng(seed).normal(size=(8, 3))
        worst = audit_gradient(lambda G: U(G), lambda G: gradU(G), points)
        if worst > rel_tol:
            raise ValidationError(
                f"custom potential gradient fails finite-difference audit (rel err {worst:.2e})"
            )

    def value(self, G, inertia):
        return float(self._U(G))

    def grad(self, G, inertia):
        return np.asarray(self._gradU(G), dtype=float)


def audit_gradient(f, grad, points, scale_floor=1.0):
    """Worst relative error of ``grad`` against central differences of ``f``.

    The step is h = 1e-6 * max(1, |x|); the error is measured relative to
    max(1, |grad|).
    """
    worst = 0.0
    for x in np.atleast_2d(np.asarray(points, dtype=float)):
        h = 1e-6 * max(scale_floor, float(np.linalg.norm(x)))
        fd = np.empty_like(x)
        for i in range(x.size):
            e = np.zeros_like(x)
            e[i] = h
            fd[i] = (f(x + e) - f(x - e)) / (2 * h)
        g = np.asarray(grad(x), dtype=float).reshape(x.shape)
        err = np.max(np.abs(fd - g)) / max(1.0, float(np.max(np.abs(g))))
        worst = max(worst, float(err))
    return worst


class GyrostatParams(E3Function):
    """H = 1/2 (J + lambda)^T I^{-1} (J + lambda) + U(Gamma)."""

    def __init__(self, inertia, lam=(0.0, 0.0, 0.0), potential=None, name="gyrostat"):
        inertia = np.asarray(inertia, dtype=float).reshape(3)
        if np.any(inertia <= 0) or not np.all(np.isfinite(inertia)):
            raise ValidationError(f"inertia moments must be positive, got {inertia.tolist()}")
        self.inertia = inertia
        self.inv_inertia = 1.0 / inertia
        self.lam = np.asarray(lam, dtype=float).reshape(3)
        self.potential = potential if potential is not None else ZeroPotential()
        super().__init__(name, self._h, self._dh)

    def _h(self, J, G):
        M = J + self.lam
        return 0.5 * float(M @ (self.inv_inertia * M)) + self.potential.value(G, self.inertia)

    def _dh(self, J, G):
        return self.inv_inertia * (J + self.lam), self.potential.grad(G, self.inertia)

    @classmethod
    def euler(cls, inertia):
        return cls(inertia, name="euler")

    @classmethod
    def kovalevskaya(cls, I, chi1, chi2):
        """I_1 = I_2 = I and I_3 = I/2, so the printed J_3^2/I term is reproduced."""
        return cls(
            (I, I, 0.5 * I),
            potential=LinearPotential((chi1, chi2, 0.0)),
            name="kovalevskaya",
        )

    @classmethod
    def zhukovskii(cls, inertia, lam):
        return cls(inertia, lam, name="zhukovskii")

    @classmethod
    def clebsch(cls, inertia, eps):
        return cls(inertia, potential=ClebschPotential(eps), name="clebsch")


def hamiltonian_gyrostat(p, s):
    """Value and gradient (dH/dJ, dH/dGamma) of the gyrostat Hamiltonian."""
    J, G = split_state(s)
    return p.value(J, G), p.grad(J, G)


class LMGHamiltonian(E3Function):
    """H = eps J_3 + V (J_1^2 - J_2^2) + W (J_1^2 + J_2^2)."""

    def __init__(self, eps, V, W):
        self.eps, self.V, self.W = float(eps), float(V), float(W)
        super().__init__("lmg", self._h, self._dh)

    def _h(self, J, G):
        a, b = self.W + self.V, self.W - self.V
        return self.eps * J[2] + a * J[0] ** 2 + b * J[1] ** 2

    def _dh(self, J, G):
        a, b = self.W + self.V, self.W - self.V
        return np.array([2 * a * J[0], 2 * b * J[1], self.eps]), np.zeros(3)


def hamiltonian_lmg(eps, V, W, s):
    J, G = split_state(s)
    return LMGHamiltonian(eps, V, W).value(J, G)


def lmg_as_zhukovskii(eps, V, W, delta, quadratic_scale=1.0):
    """Zhukovskii gyrostat approximating the LMG Hamiltonian as delta -> 0.

    The printed identification is 1/I_1 = W + V, 1/I_2 = W - V, 1/I_3 = delta,
    lambda = (0, 0, eps/delta) (``quadratic_scale=1``).  That choice yields only
    half of the quadratic LMG terms; ``quadratic_scale=2`` gives the exact limit.
    Returns the gyrostat and the constant lambda_3^2/(2 I_3) to subtract.
    """
    inv = np.array([quadratic_scale * (W + V), quadratic_scale * (W - V), delta])
    if np.any(inv <= 0):
        raise ValidationError("LMG limit needs W > |V| and delta > 0")
    lam3 = eps / delta
    gyro = GyrostatParams(1.0 / inv, (0.0, 0.0, lam3), name="zhukovskii")
    return gyro, 0.5 * lam3 * lam3 * delta


# ---------------------------------------------------------------------------
# Hamilton equations
# ---------------------------------------------------------------------------


def e3_vector_field_generic(dH_dJ, dH_dG, s):
    """dJ = J x dH/dJ + Gamma x dH/dGamma, dGamma = Gamma x dH/dJ."""
    J, G = split_state(s)
    return cross3(J, dH_dJ) + cross3(G, dH_dG), cross3(G, dH_dJ)


def e3_vector_field(p, s):
    """Hamilton equations for any E3Function ``p`` (gyrostat, LMG, ...)."""
    J, G = split_state(s)
    return e3_vector_field_generic(*p.grad(J, G), np.concatenate([J, G]))


def e3_flat_field(h):
    """Vector field on flat length-6 arrays, for the integrators."""

    def f(x):
        J, G = x[:3], x[3:]
        gJ, gG = h.grad(J, G)
        dJ, dG = e3_vector_field_generic(gJ, gG, x)
        return np.concatenate([dJ, dG])

    return f


# ---------------------------------------------------------------------------
# Case integrals
# ---------------------------------------------------------------------------


class KovalevskayaIntegral(E3Function):
    """K = ((J1^2 - J2^2)/(2I) + chi2 G2 - chi1 G1)^2 + (J1 J2 / I - chi1 G2 - chi2 G1)^2."""

    def __init__(self, I, chi1, chi2):
        self.I, self.chi1, self.chi2 = float(I), float(chi1), float(chi2)
        super().__init__("kovalevskaya", self._k, self._dk)

    def _parts(self, J, G):
        I, c1, c2 = self.I, self.chi1, self.chi2
        A = (J[0] ** 2 - J[1] ** 2) / (2 * I) + c2 * G[1] - c1 * G[0]
        B = J[0] * J[1] / I - c1 * G[1] - c2 * G[0]
        return A, B

    def _k(self, J, G):
        A, B = self._parts(J, G)
        return A * A + B * B

    def _dk(self, J, G):
        I, c1, c2 = self.I, self.chi1, self.chi2
        A, B = self._parts(J, G)
        dA_dJ = np.array([J[0] / I, -J[1] / I, 0.0])
        dA_dG = np.array([-c1, c2, 0.0])
        dB_dJ = np.array([J[1] / I, J[0] / I, 0.0])
        dB_dG = np.array([-c2, -c1, 0.0])
        return 2 * A * dA_dJ + 2 * B * dB_dJ, 2 * A * dA_dG + 2 * B * dB_dG


class ZhukovskiiIntegral(E3Function):
    """K = J^2."""

    def __init__(self):
        super().__init__("zhukovskii", lambda J, G: J @ J, lambda J, G: (2.0 * J, np.zeros(3)))


class ClebschIntegral(E3Function):
    """K = J^2/2 - eps/2 (I2 I3 G1^2 + I3 I1 G2^2 + I1 I2 G3^2)."""

    def __init__(self, inertia, eps):
        I1, I2, I3 = np.asarray(inertia, dtype=float).reshape(3)
        self.weights = np.array([I2 * I3, I3 * I1, I1 * I2])
        self.eps = float(eps)
        super().__init__("clebsch", self._k, self._dk)

    def _k(self, J, G):
        return 0.5 * float(J @ J) - 0.5 * self.eps * float(self.weights @ (G * G))

    def _dk(self, J, G):
        return J.copy(), -self.eps * self.weights * G


def integral_kovalevskaya(s, I, chi1, chi2):
    return KovalevskayaIntegral(I, chi1, chi2)(s)


def integral_zhukovskii(s):
    return ZhukovskiiIntegral()(s)


def integral_clebsch(s, inertia, eps):
    return ClebschIntegral(inertia, eps)(s)


# ---------------------------------------------------------------------------
# Coadjoint-orbit bookkeeping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitParams:
    mu: float
    nu: float

    def __post_init__(self):
        if not self.nu < 0:
            raise ValidationError(f"orbit label nu must be negative, got {self.nu}")


def j_ae(s):
    """(mu, nu) = (-Gamma.J/|Gamma|, -|Gamma|)."""
    J, G = split_state(s)
    r = float(np.linalg.norm(G))
    if r == 0.0:
        raise DomainError("j_ae is undefined at Gamma = 0")
    return -float(G @ J) / r, -r


def delta_map(mu, nu):
    """(mu, nu) -> (mu nu, nu^2); composed with j_ae this gives the Casimirs."""
    return mu * nu, nu * nu


def orbit_contains(o, s, rtol=1e-9):
    J, G = split_state(s)
    c1, c2 = float(G @ J), float(G @ G)
    mu, nu = (o.mu, o.nu) if isinstance(o, OrbitParams) else o
    t1, t2 = delta_map(mu, nu)
    ok1 = abs(c1 - t1) <= rtol * max(1.0, abs(t1))
    ok2 = abs(c2 - t2) <= rtol * max(1.0, abs(t2))
    return bool(ok1 and ok2)
