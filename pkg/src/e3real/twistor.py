"""Twistor space C^2 x C^2 as a symplectic realization of e(3)*.

State: spinors (theta, zeta), or the real chart (q, pi) in R^8 from
``algebra.spinor_to_real``.  The bracket reads

    {f, g} = df/dzeta^+ . dg/dtheta - dg/dzeta^+ . df/dtheta
             - (df/dtheta^+ . dg/dzeta - dg/dtheta^+ . df/dzeta),

which in the real chart is the canonical {q_mu, pi_nu} = delta_mu_nu.
Flows follow dF/dt = {h, F}, i.e. dq/dt = -dh/dpi and dpi/dt = dh/dq.

Index convention
----------------
The spinor displays give the upper-index components

    J^k = (i/2)(zeta^+ s_k theta - theta^+ s_k zeta),   Gamma^k = -zeta^+ s_k zeta.

The e(3)* bracket table holds for the lower-index coordinates
J_k = -J^k, Gamma_k = -Gamma^k, so the Poisson realization is the lower-index
map.  ``momentum_e3`` returns it; ``momentum_e3_upper`` keeps the literal
display.  Scalars built from both (Casimirs, J^0, Gamma^0, the image conditions)
are identical in either convention.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA, SQRT2, real_to_spinor, spinor_to_real
from .e3 import (
    CASIMIR_K1,
    CASIMIR_K2,
    ClebschIntegral,
    E3State,
    KovalevskayaIntegral,
    ZhukovskiiIntegral,
)
from .errors import DomainError, UsageError, ValidationError

PUNCTURE_TOL = 1e-12

# Poisson tensor of the real chart: {f, g} = grad f . P . grad g.
TWISTOR_POISSON = np.block(
    [[np.zeros((4, 4)), np.eye(4)], [-np.eye(4), np.zeros((4, 4))]]
)


@dataclass(frozen=True)
class TwistorState:
    theta: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=complex).reshape(2)
        ze = np.asarray(self.zeta, dtype=complex).reshape(2)
        if not (np.all(np.isfinite(th)) and np.all(np.isfinite(ze))):
            raise ValidationError("twistor state components must be finite")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "zeta", ze)

    @property
    def punctured(self):
        """True when zeta != 0, i.e. the point lies in the open dense subset."""
        return bool(np.linalg.norm(self.zeta) >= PUNCTURE_TOL)

    def as_real(self):
        return spinor_to_real(self.theta, self.zeta)

    @classmethod
    def from_real(cls, x):
        return cls(*real_to_spinor(x))


def as_twistor(s):
    if isinstance(s, TwistorState):
        return s
    x = np.asarray(s)
    if x.shape == (8,) and not np.iscomplexobj(x):
        return TwistorState.from_real(x)
    theta, zeta = s
    return TwistorState(theta, zeta)


def require_punctured(s):
    if not s.punctured:
        raise DomainError("operation requires zeta != 0")


# ---------------------------------------------------------------------------
# Momentum maps
# ---------------------------------------------------------------------------


def momentum_u22(s):
    """J = i w w^* in block form [[-theta zeta^+, theta theta^+], [-zeta zeta^+, zeta theta^+]]."""
    s = as_twistor(s)
    th, ze = s.theta[:, None], s.zeta[:, None]
    return np.block(
        [
            [-th @ ze.conj().T, th @ th.conj().T],
            [-ze @ ze.conj().T, ze @ th.conj().T],
        ]
    )


def twistor_norm(s):
    """i w^* w with w^* = w^+ phi, the scalar in J^2 = (i w^* w) J.

    w^* w = i(zeta^+ theta - theta^+ zeta) is real, so the result is purely
    imaginary (it equals 2i J^0).
    """
    s = as_twistor(s)
    return 1j * (1j * (np.vdot(s.zeta, s.theta) - np.vdot(s.theta, s.zeta)))


def momentum_u2h2(s):
    """Hermitian matrices (J, Gamma) = (i(theta zeta^+ - zeta theta^+), -2 zeta zeta^+)."""
    s = as_twistor(s)
    th, ze = s.theta[:, None], s.zeta[:, None]
    Jm = 1j * (th @ ze.conj().T - ze @ th.conj().T)
    Gm = -2.0 * ze @ ze.conj().T
    return Jm, Gm


def momentum_e3_upper(s):
    """Upper-index (J^k, Gamma^k) exactly as displayed for the spinor chart."""
    s = as_twistor(s)
    th, ze = s.theta, s.zeta
    J = np.array([(0.5j * (ze.conj() @ sk @ th - th.conj() @ sk @ ze)).real for sk in SIGMA[1:]])
    G = np.array([-(ze.conj() @ sk @ ze).real for sk in SIGMA[1:]])
    return E3State(J, G)


def momentum_e3(s):
    """The Poisson realization J_e: lower-index components (J_k, Gamma_k)."""
    up = momentum_e3_upper(s)
    return E3State(-up.J, -up.Gamma)


def momentum_a2(s):
    """(J^0, Gamma^0) = ((i/2)(zeta^+ theta - theta^+ zeta), -zeta^+ zeta)."""
    s = as_twistor(s)
    th, ze = s.theta, s.zeta
    J0 = (0.5j * (np.vdot(ze, th) - np.vdot(th, ze))).real
    G0 = -float(np.vdot(ze, ze).real)
    return float(J0), G0


def momentum_u_four_vectors(s):
    """Covariant four-vectors (J_mu, Gamma_mu) of J_u."""
    e = momentum_e3(s)
    J0, G0 = momentum_a2(s)
    return np.concatenate([[J0], e.J]), np.concatenate([[G0], e.Gamma])


def image_conditions(J4, G4, rtol=1e-9):
    """(Gamma^0)^2 - |Gamma|^2 = 0, Gamma^0 <= 0 and Gamma^0 J^0 - Gamma.J = 0.

    The expressions are invariant under lowering the spatial indices of both
    four-vectors, so either convention may be passed.
    """
    J4 = np.asarray(J4, dtype=float)
    G4 = np.asarray(G4, dtype=float)
    scale_g = max(1.0, G4[0] ** 2 + G4[1:] @ G4[1:])
    scale_jg = max(1.0, abs(G4[0] * J4[0]) + np.linalg.norm(G4[1:]) * np.linalg.norm(J4[1:]))
    light_like = abs(G4[0] ** 2 - G4[1:] @ G4[1:]) <= rtol * scale_g
    past = G4[0] <= rtol * np.sqrt(scale_g)
    orthogonal = abs(G4[0] * J4[0] - G4[1:] @ J4[1:]) <= rtol * scale_jg
    return bool(light_like and past and orthogonal)


# ---------------------------------------------------------------------------
# Real-chart quadratic forms, derived from the spinor formulas by polarization
# ---------------------------------------------------------------------------


def _covariant_coordinates(x):
    s = TwistorState.from_real(x)
    e = momentum_e3(s)
    J0, G0 = momentum_a2(s)
    return np.concatenate([e.J, e.Gamma, [J0, G0]])


def _polarize(f, n=8, m=8):
    """Symmetric matrices Q[c] with f(x)[c] = x.Q[c].x / 2 for a quadratic map f."""
    eye = np.eye(n)
    diag = np.array([f(eye[i]) for i in range(n)])
    Q = np.zeros((m, n, n))
    for i in range(n):
        Q[:, i, i] = 2.0 * diag[i]
        for j in range(i + 1, n):
            v = f(eye[i] + eye[j]) - diag[i] - diag[j]
            Q[:, i, j] = v
            Q[:, j, i] = v
    return Q


# Order: J_1..J_3, Gamma_1..Gamma_3 (lower index), J^0, Gamma^0.
REAL_QUADRATICS = _polarize(_covariant_coordinates)
_Q_E3 = np.ascontiguousarray(REAL_QUADRATICS[:6])
_Q_A2 = np.ascontiguousarray(REAL_QUADRATICS[6:])


def real_e3_with_jacobian(x):
    """Lower-index (J, Gamma) at x in R^8 and the 6x8 Jacobian."""
    jac = _Q_E3 @ x
    return 0.5 * (jac @ x), jac


def real_a2_with_jacobian(x):
    jac = _Q_A2 @ x
    return 0.5 * (jac @ x), jac


def momentum_e3_real(p):
    """J_e on the real chart, by composition with ``real_to_spinor``."""
    return momentum_e3(TwistorState.from_real(p))


def momentum_a2_real(p):
    return momentum_a2(TwistorState.from_real(p))


# ---------------------------------------------------------------------------
# Brackets
# ---------------------------------------------------------------------------


def wirtinger_from_real(grad8):
    """Real gradient on (q, pi) to Wirtinger derivatives
    (d/dtheta, d/dzeta, d/dtheta-bar, d/dzeta-bar) of a real function."""
    g = np.asarray(grad8, dtype=float)
    gq, gp = g[:4], g[4:]
    d_zeta = (SQRT2 / 2) * (gq[:2] - 1j * gq[2:])
    d_theta = (SQRT2 / 2) * (gp[:2] - 1j * gp[2:])
    return d_theta, d_zeta, d_theta.conj(), d_zeta.conj()


def twistor_bracket(gradF, gradG, s=None):
    """Twistor bracket from Wirtinger gradient 4-tuples (d_theta, d_zeta, d_theta_bar, d_zeta_bar).

    The value is real for real functions; an imaginary part above 1e-10 is an error.
    """
    Ft, Fz, Ftb, Fzb = (np.asarray(v, dtype=complex) for v in gradF)
    Gt, Gz, Gtb, Gzb = (np.asarray(v, dtype=complex) for v in gradG)
    value = Fzb @ Gt - Gzb @ Ft - (Ftb @ Gz - Gtb @ Fz)
    if abs(value.imag) > 1e-10:
        raise ValidationError(f"bracket of real functions has imaginary part {value.imag:.3e}")
    return float(value.real)


def real_bracket(grad_f, grad_g):
    """Canonical bracket on R^8: {f, g} = df/dq . dg/dpi - df/dpi . dg/dq."""
    return float(grad_f @ TWISTOR_POISSON @ grad_g)


# ---------------------------------------------------------------------------
# Lifted Hamiltonians, integrals and flows
# ---------------------------------------------------------------------------


def lifted_hamiltonian(H, s):
    """H o J_e for any E3Function H."""
    e = momentum_e3(s)
    return H.value(e.J, e.Gamma)


def ab_to_spinor(a, b):
    """(theta, zeta) = ((a + i b-bar)/sqrt2, (b-bar + i a)/sqrt2)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return TwistorState((a + 1j * b.conj()) / SQRT2, (b.conj() + 1j * a) / SQRT2)


def spinor_to_ab(s):
    """Inverse of ``ab_to_spinor``."""
    s = as_twistor(s)
    a = (s.theta - 1j * s.zeta) / SQRT2
    b = ((s.zeta - 1j * s.theta) / SQRT2).conj()
    return a, b


INTEGRAL_KINDS = ("J0", "Gamma0", "kovalevskaya", "zhukovskii", "clebsch", "K1", "K2")


def case_integral(kind, params=None):
    """E3Function for a named case integral; ``params`` is a dict."""
    params = params or {}
    if kind == "kovalevskaya":
        return KovalevskayaIntegral(params["I"], params["chi1"], params["chi2"])
    if kind == "zhukovskii":
        return ZhukovskiiIntegral()
    if kind == "clebsch":
        return ClebschIntegral(params["inertia"], params["eps"])
    if kind == "K1":
        return CASIMIR_K1
    if kind == "K2":
        return CASIMIR_K2
    raise UsageError(f"unknown integral kind {kind!r}")


def lifted_integral(kind, params, s):
    """Integral of motion on twistor space, computed by composition."""
    if kind == "J0":
        return momentum_a2(s)[0]
    if kind == "Gamma0":
        return momentum_a2(s)[1]
    K = case_integral(kind, params)
    e = momentum_e3(s)
    return K.value(e.J, e.Gamma)


def lifted_real_function(F):
    """(value, gradient) on R^8 of F o J_e for an E3Function F."""

    def f(x):
        vals, jac = real_e3_with_jacobian(x)
        gJ, gG = F.grad(vals[:3], vals[3:])
        return F.value(vals[:3], vals[3:]), np.concatenate([gJ, gG]) @ jac

    return f


def twistor_real_field(H):
    """Flat vector field on R^8 for h = H o J_e."""
    P = TWISTOR_POISSON

    def f(x):
        vals, jac = real_e3_with_jacobian(x)
        gJ, gG = H.grad(vals[:3], vals[3:])
        grad_h = gJ @ jac[:3] + gG @ jac[3:]
        return grad_h @ P

    return f


def twistor_vector_field(H, s):
    """Complex velocities (d theta/dt, d zeta/dt) of the lifted flow."""
    s = as_twistor(s)
    dx = twistor_real_field(H)(s.as_real())
    d_theta = (dx[4:6] + 1j * dx[6:8]) / SQRT2
    d_zeta = (dx[0:2] + 1j * dx[2:4]) / SQRT2
    return d_theta, d_zeta
