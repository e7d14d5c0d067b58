"""Reduced realizations of e(3)*: the monopole phase space, T*S^3 and the slice M_{mu,nu}.

Monopole space
    Points (p, y) with y != 0 and bracket
        {f, g}_mu = df/dp . dg/dy - df/dy . dg/dp - (mu/|y|^3) y . (df/dp x dg/dp).
    The Poisson realization for this bracket is J_{e,mu}(p, y) = (p x y + mu y/|y|, -y)
    in lower-index components.  The image satisfies J.Gamma = -mu |Gamma| and a
    potential U(Gamma) is evaluated at Gamma = -y.  The printed display
    (y x p + mu y/|y|, -y) is kept as ``momentum_e3_mu_printed`` for regression.

T*S^3
    Embedded chart (q, pi) in R^8 with |q| = rho, q.pi = 0 and rho = sqrt(-2 nu),
    or Moser chart (y, p) from stereographic projection.  Both carry the
    restriction of the twistor form, so in the Moser chart {y_k, p_l} = delta_kl.

Flows follow dF/dt = {h, F} everywhere, matching the e(3)* Hamilton equations.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import LEVI_CIVITA, SIGMA, cross3, is_hermitian
from .e3 import E3State
from .errors import DomainError, ValidationError
from .twistor import (
    TWISTOR_POISSON,
    TwistorState,
    case_integral,
    momentum_a2_real,
    real_a2_with_jacobian,
    real_e3_with_jacobian,
)

Y_GUARD = 1e-12
POLE_SWITCH = 1e6


# ---------------------------------------------------------------------------
# Monopole phase space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonopoleState:
    p: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(3)
        y = np.asarray(self.y, dtype=float).reshape(3)
        if np.linalg.norm(y) <= Y_GUARD:
            raise DomainError("monopole state requires y != 0")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "y", y)

    def as_array(self):
        return np.concatenate([self.p, self.y])

    @classmethod
    def from_array(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x[:3], x[3:6])


def _py(s):
    if isinstance(s, MonopoleState):
        return s.p, s.y
    x = np.asarray(s, dtype=float)
    p, y = x[:3], x[3:6]
    if np.linalg.norm(y) <= Y_GUARD:
        raise DomainError("monopole state requires y != 0")
    return p, y


def monopole_poisson_tensor(s, mu):
    """6x6 tensor in the (p, y) ordering."""
    _, y = _py(s)
    r = np.linalg.norm(y)
    P = np.zeros((6, 6))
    P[:3, 3:] = np.eye(3)
    P[3:, :3] = -np.eye(3)
    P[:3, :3] = -(mu / r**3) * (LEVI_CIVITA @ y)
    return P


def monopole_poisson_tensor_derivative(s, mu):
    """dP[i, j]/dx[n] for the monopole tensor."""
    _, y = _py(s)
    r = np.linalg.norm(y)
    d_unit = np.eye(3) / r**3 - 3.0 * np.outer(y, y) / r**5  # d(y_m/r^3)/dy_n
    dP = np.zeros((6, 6, 6))
    dP[:3, :3, 3:] = -mu * np.einsum("klm,mn->kln", LEVI_CIVITA, d_unit)
    return dP


def monopole_bracket(gradF, gradG, s, mu):
    """{f, g}_mu from (d/dp, d/dy) gradient pairs."""
    _, y = _py(s)
    Fp, Fy = (np.asarray(v, dtype=float) for v in gradF)
    Gp, Gy = (np.asarray(v, dtype=float) for v in gradG)
    r = np.linalg.norm(y)
    return float(Fp @ Gy - Fy @ Gp - (mu / r**3) * (y @ cross3(Fp, Gp)))


def momentum_e3_mu(s, mu):
    """Lower-index realization (p x y + mu y/|y|, -y)."""
    p, y = _py(s)
    r = np.linalg.norm(y)
    return E3State(cross3(p, y) + (mu / r) * y, -y)


def momentum_e3_mu_printed(s, mu):
    """The printed display (y x p + mu y/|y|, -y); not a Poisson map for mu != 0."""
    p, y = _py(s)
    r = np.linalg.norm(y)
    return E3State(cross3(y, p) + (mu / r) * y, -y)


def momentum_e3_mu_with_jacobian(x, mu):
    """Flat (J, Gamma) and the 6x6 Jacobian with respect to (p, y)."""
    p, y = x[:3], x[3:6]
    r = np.sqrt(y @ y)
    u = y / r
    J = cross3(p, y) + mu * u
    jac = np.zeros((6, 6))
    jac[:3, :3] = LEVI_CIVITA @ y
    jac[:3, 3:] = -(LEVI_CIVITA @ p) + (mu / r) * (np.eye(3) - np.outer(u, u))
    jac[3:, 3:] = -np.eye(3)
    return np.concatenate([J, -y]), jac


def gamma0_tilde(s):
    _, y = _py(s)
    return -float(np.linalg.norm(y))


def r_flow(s, t):
    """Flow of Gamma0-tilde: (p + t y/|y|, y)."""
    p, y = _py(s)
    return MonopoleState(p + t * y / np.linalg.norm(y), y)


def monopole_hamiltonian(H, mu, s):
    e = momentum_e3_mu(s, mu)
    return H.value(e.J, e.Gamma)


def monopole_lifted_function(F, mu):
    """(value, gradient) of F o J_{e,mu} on flat (p, y)."""

    def f(x):
        vals, jac = momentum_e3_mu_with_jacobian(x, mu)
        gJ, gG = F.grad(vals[:3], vals[3:])
        return F.value(vals[:3], vals[3:]), np.concatenate([gJ, gG]) @ jac

    return f


def monopole_pullback(x, mu, gJ, gG):
    """(dh/dp, dh/dy) for h = H o J_{e,mu}, given dH/dJ and dH/dGamma."""
    p, y = x[:3], x[3:6]
    r = np.sqrt(y @ y)
    u = y / r
    hp = cross3(y, gJ)
    hy = cross3(gJ, p) + (mu / r) * (gJ - u * (u @ gJ)) - gG
    return hp, hy


def monopole_field(H, mu):
    """Flat vector field on (p, y): dx_i = {h, x_i}_mu, i.e.
    dy = dh/dp and dp = -dh/dy - (mu/|y|^3) y x dh/dp."""

    def f(x):
        p, y = x[:3], x[3:6]
        r = np.sqrt(y @ y)
        gJ, gG = H.grad(cross3(p, y) + (mu / r) * y, -y)
        hp, hy = monopole_pullback(x, mu, gJ, gG)
        dp = -hy - (mu / r**3) * cross3(y, hp)
        return np.concatenate([dp, hp])

    return f


def monopole_vector_field(H, mu, s):
    """(dp/dt, dy/dt) for the lifted Hamiltonian H o J_{e,mu}."""
    p, y = _py(s)
    dx = monopole_field(H, mu)(np.concatenate([p, y]))
    return dx[:3], dx[3:]


def monopole_integral(kind, params, mu, s):
    K = case_integral(kind, params)
    e = momentum_e3_mu(s, mu)
    return K.value(e.J, e.Gamma)


# ---------------------------------------------------------------------------
# The slice M_{mu,nu} and the embedding Phi
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducedParams:
    mu: float
    nu: float

    def __post_init__(self):
        if not self.nu < 0:
            raise ValidationError(f"reduction level nu must be negative, got {self.nu}")

    @property
    def rho(self):
        return float(np.sqrt(-2.0 * self.nu))


def m_slice_contains(s, o, rtol=1e-9):
    """p.y = 0 and y^2 = nu^2."""
    p, y = _py(s)
    scale = max(1.0, o.nu**2)
    return bool(
        abs(p @ y) <= rtol * max(1.0, np.linalg.norm(p) * np.linalg.norm(y))
        and abs(y @ y - o.nu**2) <= rtol * scale
    )


def slice_projection(s):
    """Move along the Gamma0-tilde flow to the unique point with p.y = 0."""
    p, y = _py(s)
    t_star = -float(p @ y) / np.linalg.norm(y)
    return r_flow(s, t_star)


def momentum_e3_mu_nu(s, o):
    if not m_slice_contains(s, o):
        raise ValidationError("state is not on the slice M_{mu,nu}")
    return momentum_e3_mu(s, o.mu)


def phi_embedding(P, zeta, mu, tol=1e-12):
    """Phi(P, zeta) = ((P - i mu/(zeta^+ zeta)) zeta, zeta) for traceless Hermitian P.

    J_e o Phi = J_{e,mu} o quotient_coordinates, and J^0 o Phi = mu.
    """
    P = np.asarray(P, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex).reshape(2)
    n2 = float(np.vdot(zeta, zeta).real)
    if n2 <= Y_GUARD**2:
        raise DomainError("Phi requires zeta != 0")
    if abs(np.trace(P)) > tol or not is_hermitian(P, tol):
        raise ValidationError("Phi requires a traceless Hermitian P")
    theta = P @ zeta - (1j * mu / n2) * zeta
    return TwistorState(theta, zeta)


def quotient_coordinates(P, zeta):
    """(p, y) with p = Tr(sigma P)/2 and y = -zeta^+ sigma zeta."""
    P = np.asarray(P, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    p = np.array([0.5 * np.trace(sk @ P).real for sk in SIGMA[1:]])
    y = np.array([-(zeta.conj() @ sk @ zeta).real for sk in SIGMA[1:]])
    return MonopoleState(p, y)


def herm_from_p(p):
    """Traceless P with Tr(sigma P)/2 = p."""
    return np.tensordot(np.asarray(p, dtype=float), SIGMA[1:], axes=1)


def spinor_from_vector(y):
    """A spinor zeta with zeta^+ sigma zeta = y; the free phase is fixed by making
    the larger component real and non-negative."""
    y = np.asarray(y, dtype=float)
    r = float(np.linalg.norm(y))
    if r <= Y_GUARD:
        raise DomainError("cannot build a spinor for y = 0")
    # zeta1-bar zeta2 = (y1 - i y2)/2, |zeta1|^2 = (r + y3)/2, |zeta2|^2 = (r - y3)/2
    c = 0.5 * (y[0] - 1j * y[1])
    if y[2] >= 0:
        z1 = np.sqrt(0.5 * (r + y[2]))
        return np.array([z1, c / z1], dtype=complex)
    z2 = np.sqrt(0.5 * (r - y[2]))
    return np.array([np.conj(c) / z2, z2], dtype=complex)


# ---------------------------------------------------------------------------
# T*S^3: stereographic and Moser coordinates
# ---------------------------------------------------------------------------


def stereo_to_sphere(y, rho):
    """(q0, q_vec) = rho/(1 + y^2) (y^2 - 1, 2 y)."""
    y = np.asarray(y, dtype=float)
    y2 = y @ y
    out = np.empty(4)
    out[0] = rho * (y2 - 1.0) / (1.0 + y2)
    out[1:] = (2.0 * rho / (1.0 + y2)) * y
    return out


def sphere_to_stereo(q, rho, tol=1e-14):
    """y = q_vec/(rho - q0); undefined at the north pole (rho, 0)."""
    q = np.asarray(q, dtype=float)
    denom = rho - q[0]
    if denom <= tol * rho:
        raise DomainError("the north pole has no stereographic image")
    return q[1:] / denom


def moser_momenta(y, p, rho):
    """(pi0, pi_vec) = ((y.p), ((y^2 + 1)/2) p - (y.p) y)/rho."""
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=float)
    yp = y @ p
    out = np.empty(4)
    out[0] = yp / rho
    out[1:] = (0.5 * (y @ y + 1.0) * p - yp * y) / rho
    return out


def embedded_constraints(x, rho):
    """Residuals (|q|^2 - rho^2, q.pi)."""
    q, pi = x[:4], x[4:]
    return float(q @ q - rho * rho), float(q @ pi)


def check_embedded(x, rho, rtol=1e-9):
    c_norm, c_tan = embedded_constraints(x, rho)
    scale = max(1.0, rho * rho)
    pscale = max(1.0, rho * float(np.linalg.norm(x[4:])))
    if abs(c_norm) > rtol * scale or abs(c_tan) > rtol * pscale:
        raise ValidationError(
            f"state violates |q| = rho, q.pi = 0 (residuals {c_norm:.2e}, {c_tan:.2e})"
        )


def moser_from_embedded(x, rho, rtol=1e-9):
    """Inverse of the Moser map: p = rho(4y(pi0 - pi.y)/(y^2 + 1)^2 + 2 pi/(y^2 + 1))."""
    x = np.asarray(x, dtype=float)
    check_embedded(x, rho, rtol)
    q, pi = x[:4], x[4:]
    y = sphere_to_stereo(q, rho)
    y2 = y @ y
    p = rho * (4.0 * y * (pi[0] - pi[1:] @ y) / (y2 + 1.0) ** 2 + 2.0 * pi[1:] / (y2 + 1.0))
    return y, p


def embedded_from_moser(y, p, rho):
    return np.concatenate([stereo_to_sphere(y, rho), moser_momenta(y, p, rho)])


def embedded_from_moser_with_jacobian(x6, rho):
    """(q, pi) from Moser (y, p) and the 8x6 Jacobian d(q, pi)/d(y, p)."""
    y, p = x6[:3], x6[3:]
    y2 = y @ y
    d = 1.0 + y2
    yp = y @ p
    q = np.concatenate([[rho * (y2 - 1.0) / d], 2.0 * rho * y / d])
    pi = np.concatenate([[yp / rho], (0.5 * d * p - yp * y) / rho])
    jac = np.zeros((8, 6))
    jac[0, :3] = 4.0 * rho * y / d**2
    jac[1:4, :3] = 2.0 * rho * (np.eye(3) / d - 2.0 * np.outer(y, y) / d**2)
    jac[4, :3] = p / rho
    jac[4, 3:] = y / rho
    jac[5:8, :3] = (np.outer(p, y) - np.outer(y, p) - yp * np.eye(3)) / rho
    jac[5:8, 3:] = (0.5 * d * np.eye(3) - np.outer(y, y)) / rho
    return np.concatenate([q, pi]), jac


MOSER_POISSON = np.block([[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]])


@dataclass(frozen=True)
class SphereStateMoser:
    y: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float).reshape(3))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(3))

    def as_array(self):
        return np.concatenate([self.y, self.p])


@dataclass(frozen=True)
class SphereStateEmbedded:
    q: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float).reshape(4))
        object.__setattr__(self, "pi", np.asarray(self.pi, dtype=float).reshape(4))

    def as_array(self):
        return np.concatenate([self.q, self.pi])


def _embedded_point(s, nu, validate=True):
    rho = np.sqrt(-2.0 * nu)
    if isinstance(s, SphereStateMoser):
        return embedded_from_moser(s.y, s.p, rho)
    x = s.as_array() if isinstance(s, SphereStateEmbedded) else np.asarray(s, dtype=float)
    if validate:
        check_embedded(x, rho)
    return x


def momentum_e3_nu(s, nu):
    """J_{e,nu}: the lower-index twistor realization evaluated on the embedded chart."""
    if not nu < 0:
        raise ValidationError("nu must be negative")
    x = _embedded_point(s, nu)
    vals, _ = real_e3_with_jacobian(x)
    return E3State(vals[:3], vals[3:])


def momentum_e3_nu_moser_with_jacobian(x6, nu):
    rho = np.sqrt(-2.0 * nu)
    x8, emb_jac = embedded_from_moser_with_jacobian(x6, rho)
    vals, jac = real_e3_with_jacobian(x8)
    return vals, jac @ emb_jac


def j0_tilde(s, nu):
    """J^0 on the embedded chart; generates the U(1) fibre action of J_{e,nu}."""
    return momentum_a2_real(_embedded_point(s, nu))[0]


def j0_tilde_moser_function(nu):
    rho = np.sqrt(-2.0 * nu)

    def f(x6):
        x8, emb_jac = embedded_from_moser_with_jacobian(x6, rho)
        vals, jac = real_a2_with_jacobian(x8)
        return float(vals[0]), jac[0] @ emb_jac

    return f


def sphere_lifted_function(F, nu):
    """(value, gradient) of F o J_{e,nu} in the Moser chart."""

    def f(x6):
        vals, jac = momentum_e3_nu_moser_with_jacobian(x6, nu)
        gJ, gG = F.grad(vals[:3], vals[3:])
        return F.value(vals[:3], vals[3:]), np.concatenate([gJ, gG]) @ jac

    return f


def sphere_hamiltonian(H, nu, s):
    e = momentum_e3_nu(s, nu)
    return H.value(e.J, e.Gamma)


def sphere_integral(kind, params, nu, s):
    K = case_integral(kind, params)
    e = momentum_e3_nu(s, nu)
    return K.value(e.J, e.Gamma)


def moser_pullback(x6, rho, g8):
    """g8 @ d(q, pi)/d(y, p) without forming the 8x6 Jacobian."""
    y, p = x6[:3], x6[3:6]
    d = 1.0 + y @ y
    yp = y @ p
    gq0, gq, gp0, gp = g8[0], g8[1:4], g8[4], g8[5:8]
    gy = (
        (4.0 * rho * gq0 / d**2) * y
        + (2.0 * rho / d) * gq
        - (4.0 * rho * (y @ gq) / d**2) * y
        + (gp0 / rho) * p
        + ((gp @ p) * y - (gp @ y) * p - yp * gp) / rho
    )
    gpp = (gp0 * y + 0.5 * d * gp - (y @ gp) * y) / rho
    return np.concatenate([gy, gpp])


def sphere_moser_field(H, nu):
    """Canonical Hamilton equations in the Moser chart: dy = -dh/dp, dp = dh/dy."""
    rho = np.sqrt(-2.0 * nu)

    def f(x6):
        x8 = embedded_from_moser(x6[:3], x6[3:6], rho)
        vals, jac = real_e3_with_jacobian(x8)
        gJ, gG = H.grad(vals[:3], vals[3:])
        g = moser_pullback(x6, rho, gJ @ jac[:3] + gG @ jac[3:])
        return np.concatenate([-g[3:], g[:3]])

    return f


def sphere_embedded_field(H, nu):
    """Reduced flow on the embedded chart.

    The twistor field of h = H o J_e does not keep q.pi = 0 by itself.  Adding
    a multiple of the Gamma0 direction (0, q), along which J_e is constant,
    restores tangency:  dpi = dh/dq + c q with c = -(q.dh/dq - pi.dh/dpi)/|q|^2.
    """

    def f(x8):
        vals, jac = real_e3_with_jacobian(x8)
        gJ, gG = H.grad(vals[:3], vals[3:])
        grad_h = gJ @ jac[:3] + gG @ jac[3:]
        dx = grad_h @ TWISTOR_POISSON
        q, pi = x8[:4], x8[4:]
        c = -(q @ grad_h[:4] - pi @ grad_h[4:]) / (q @ q)
        dx[4:] += c * q
        return dx

    return f


def sphere_vector_field(H, nu, s):
    """(dy/dt, dp/dt) in the Moser chart."""
    x6 = s.as_array() if isinstance(s, SphereStateMoser) else np.asarray(s, dtype=float)
    dx = sphere_moser_field(H, nu)(x6)
    return dx[:3], dx[3:]


def project_embedded(x, rho):
    """Normalize q to radius rho, then remove the q component of pi."""
    x = np.array(x, dtype=float)
    q = x[:4] * (rho / np.linalg.norm(x[:4]))
    pi = x[4:] - (q @ x[4:]) / (rho * rho) * q
    return np.concatenate([q, pi])


def twistor_to_sphere_section(s):
    """Slide a twistor point along the Gamma0 flow until q.pi = 0."""
    x = s.as_real() if isinstance(s, TwistorState) else np.asarray(s, dtype=float)
    q, pi = x[:4], x[4:]
    return np.concatenate([q, pi - (q @ pi) / (q @ q) * q])
