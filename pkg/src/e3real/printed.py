"""Literal transcriptions of the expanded formulas from the source text.

Nothing in the package computes with these.  They exist only so that the
regression report can measure how far each printed expansion is from the
composed (authoritative) quantity.  Where a symbol is unreadable the chosen
reading is stated in the docstring; no other correction is applied.

Charts: (a, b) from ``spinor_to_ab``; (q, pi) from ``spinor_to_real``;
monopole (p, y); Moser (y, p).
"""

import numpy as np

from .algebra import SIGMA, cross3

_SIG = SIGMA[1:]


def _bil(u, v):
    """u^T sigma v for each sigma_k, no conjugation."""
    return np.array([u @ s @ v for s in _SIG])


# ---------------------------------------------------------------------------
# Real canonical chart
# ---------------------------------------------------------------------------


def real_J(x):
    q0, q1, q2, q3, p0, p1, p2, p3 = x
    return 0.5 * np.array(
        [
            q0 * p3 + q1 * p2 - q2 * p1 - q3 * p0,
            q0 * p1 - q1 * p0 + q2 * p3 - q3 * p2,
            q0 * p2 - q1 * p3 - q2 * p0 + q3 * p1,
        ]
    )


def real_Gamma(x):
    q0, q1, q2, q3 = x[:4]
    return np.array(
        [q0 * q1 + q2 * q3, q1 * q2 - q0 * q3, 0.5 * (q0**2 + q1**2 - q2**2 - q3**2)]
    )


def real_J0(x):
    q0, q1, q2, q3, p0, p1, p2, p3 = x
    return 0.5 * (q2 * p0 + q3 * p1 - q0 * p2 - q1 * p3)


def real_Gamma0(x):
    return -0.5 * float(x[:4] @ x[:4])


def real_G_matrix(q, inertia):
    q0, q1, q2, q3 = q
    a, b, c = 1.0 / np.asarray(inertia, dtype=float)
    return np.array(
        [
            [q3**2 * a + q1**2 * b + q2**2 * c, q2 * q3 * a - q0 * q1 * b - q2 * q3 * c,
             -q1 * q3 * a + q1 * q3 * b - q0 * q2 * c, -q0 * q3 * a - q1 * q2 * b + q1 * q2 * c],
            [q2 * q3 * a - q0 * q1 * b - q2 * q3 * c, q2**2 * a + q0**2 * b + q3**2 * c,
             -q1 * q2 * a - q0 * q3 * b + q0 * q3 * c, -q0 * q2 * a + q0 * q2 * b - q1 * q3 * c],
            [-q1 * q3 * a + q1 * q3 * b - q0 * q2 * c, -q1 * q2 * a - q0 * q3 * b + q0 * q3 * c,
             q1**2 * a + q3**2 * b + q0**2 * c, q0 * q1 * a - q2 * q3 * b - q0 * q1 * c],
            [-q0 * q3 * a - q1 * q2 * b + q1 * q2 * c, -q0 * q2 * a + q0 * q2 * b - q1 * q3 * c,
             q0 * q1 * a - q2 * q3 * b - q0 * q1 * c, q0**2 * a + q2**2 * b + q1**2 * c],
        ]
    )


def real_hamiltonian(x, inertia, lam):
    """Kinetic G-matrix form with U = 0; the nonexistent 'pi_4' is read as pi_2."""
    q, p = x[:4], x[4:]
    q0, q1, q2, q3 = q
    p0, p1, p2, p3 = p
    I1, I2, I3 = inertia
    l1, l2, l3 = lam
    return (
        p @ real_G_matrix(q, inertia) @ p / 8.0
        + l1 / (2 * I1) * (q0 * p3 + q1 * p2 - q2 * p1 - q3 * p0 + l1)
        + l2 / (2 * I2) * (q0 * p1 - q1 * p0 + q2 * p3 - q3 * p2 + l2)
        + l3 / (2 * I3) * (q0 * p2 - q1 * p3 - q2 * p0 + q3 * p1 + l3)
    )


# ---------------------------------------------------------------------------
# Complex (a, b) chart
# ---------------------------------------------------------------------------


def ab_J(a, b):
    return (0.5 * (np.array([a.conj() @ s @ a for s in _SIG]) - _bil(b, b.conj()))).real


def ab_Gamma(a, b):
    v = 0.5 * (
        _bil(b, b.conj())
        + np.array([a.conj() @ s @ a for s in _SIG])
        - 1j * np.array([a.conj() @ s @ b.conj() for s in _SIG])
        + 1j * _bil(b, a)
    )
    return v.real


def ab_J0(a, b):
    return 0.5 * float(np.sum(np.abs(b) ** 2) - np.sum(np.abs(a) ** 2))


def ab_Gamma0(a, b):
    a1, a2 = a
    b1, b2 = b
    v = -0.5 * (
        np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2)
        + 1j * (b1 * a1 + b2 * a2 - np.conj(b1) * np.conj(a1) - np.conj(b2) * np.conj(a2))
    )
    return float(v.real)


def ab_hamiltonian(a, b, inertia, lam):
    """The expanded four-wave Hamiltonian with U = 0."""
    a1, a2 = a
    b1, b2 = b
    A1, A2, B1, B2 = np.conj(a1), np.conj(a2), np.conj(b1), np.conj(b2)
    I1, I2, I3 = inertia
    l1, l2, l3 = lam
    n = lambda z: abs(z) ** 2  # noqa: E731
    t1 = (1 / I1 - 1 / I2) / 8 * (
        a1**2 * A2**2 + A1**2 * a2**2 + b1**2 * B2**2 + B1**2 * b2**2
        - 2 * A1 * a2 * b1 * B2 - 2 * a1 * A2 * B1 * b2
    )
    t2 = (1 / I1 + 1 / I2) / 8 * (
        2 * n(a1) * n(a2) + 2 * n(b1) * n(b2) - 2 * A1 * a2 * B1 * b2 - 2 * a1 * A2 * b1 * B2
    )
    t3 = (n(a1) - n(a2) - n(b1) + n(b2)) ** 2 / (8 * I3)
    t4 = l1 / (2 * I1) * (A1 * a2 + a1 * A2 - B1 * b2 - b1 * B2)
    t5 = 1j * l2 / (2 * I2) * (A1 * a2 - a1 * A2 + B1 * b2 - b1 * B2)
    t6 = l3 / (2 * I3) * (n(a1) - n(a2) - n(b1) + n(b2))
    t7 = l1**2 / (2 * I1) + l2**2 / (2 * I2) + l3**2 / (2 * I3)
    return float(np.real(t1 + t2 + t3 + t4 + t5 + t6 + t7))


def ab_kovalevskaya(a, b, I, chi1, chi2):
    """Literal, including the '\\bar a_2 a_2 b_1 \\bar b_2' factor of the last line."""
    a1, a2 = a
    b1, b2 = b
    A1, A2, B1, B2 = np.conj(a1), np.conj(a2), np.conj(b1), np.conj(b2)
    n = lambda z: abs(z) ** 2  # noqa: E731
    t1 = (n(a1) * n(a2) + n(b1) * n(b2) - A1 * a2 * B1 * b2 - a1 * A2 * b1 * B2) ** 2 / (4 * I**2)
    t2 = (chi1**2 + chi2**2) * (
        n(a1) * n(b2) + n(a2) * n(b1) + n(a1) * n(a2) + n(b1) * n(b2)
        - a1 * a2 * b1 * b2 - A1 * A2 * B1 * B2 + a1 * A2 * B1 * b2 + A1 * a2 * b1 * B2
        + 1j * (a1 * b1 - A1 * B1) * (n(a2) + n(b2)) + 1j * (a2 * b2 - A2 * B2) * (n(a1) + n(b1))
    )
    t3 = chi2 / (2 * I) * (
        (a1 * b2 - A2 * B1 - 1j * (B1 * b2 + a1 * A2)) * (A1**2 * a2**2 + b1**2 * B2**2 - A1 * a2 * b1 * B2)
        + (A1 * B2 - a2 * b1 + 1j * (b1 * B2 + A1 * a2)) * (a1**2 * A2**2 + B1**2 * b2**2 - a1 * A2 * B1 * b2)
    )
    t4 = -chi1 / (2 * I) * (
        (b1 * B2 + A1 * a2 + 1j * (a2 * b1 - A1 * B2)) * (a1**2 * A2**2 + B1**2 * b2**2 - a1 * A2 * B1 * b2)
        + (B1 * b2 + a1 * A2 + 1j * (a1 * b2 - A2 * B1)) * (A1**2 * a2**2 + b1**2 * B2**2 - A2 * a2 * b1 * B2)
    )
    return float(np.real(t1 + t2 + t3 + t4))


def ab_zhukovskii(a, b):
    a1, a2 = a
    b1, b2 = b
    n = lambda z: abs(z) ** 2  # noqa: E731
    v = (
        0.25 * (n(a1) - n(a2) - n(b1) + n(b2)) ** 2 + n(a1) * n(a2) + n(b1) * n(b2)
        - np.conj(a1) * a2 * np.conj(b1) * b2 - a1 * np.conj(a2) * b1 * np.conj(b2)
    )
    return float(np.real(v))


def ab_clebsch(a, b, inertia, eps):
    a1, a2 = a
    b1, b2 = b
    A1, A2, B1, B2 = np.conj(a1), np.conj(a2), np.conj(b1), np.conj(b2)
    I1, I2, I3 = inertia
    n = lambda z: abs(z) ** 2  # noqa: E731
    kin = (
        (n(a1) - n(a2) - n(b1) + n(b2)) ** 2 + 4 * n(a1) * n(a2) + 4 * n(b1) * n(b2)
        - 4 * A1 * a2 * B1 * b2 - 4 * a1 * A2 * b1 * B2
    )
    g1 = b1 * B2 + B1 * b2 + a1 * A2 + A1 * a2 + 1j * (a1 * b2 + a2 * b1 - A1 * B2 - A2 * B1)
    g2 = a1 * b2 + A1 * B2 - a2 * b1 - A2 * B1 + 1j * (b1 * B2 - B1 * b2 + A1 * a2 - a1 * A2)
    g3 = n(a1) - n(a2) + n(b1) - n(b2) + 1j * (a1 * b1 - a2 * b2 - A1 * B1 + A2 * B2)
    pot = I2 * I3 * g1**2 + I3 * I1 * g2**2 + I1 * I2 * g3**2
    return float(np.real((kin - eps * pot) / 8))


# ---------------------------------------------------------------------------
# Monopole chart
# ---------------------------------------------------------------------------


def monopole_map(p, y, mu):
    r = np.linalg.norm(y)
    return np.concatenate([cross3(y, p) + (mu / r) * y, -y])


def monopole_hamiltonian(p, y, mu, inertia, lam, U=lambda g: 0.0):
    r = np.linalg.norm(y)
    M = cross3(y, p) + (mu / r) * y + np.asarray(lam, dtype=float)
    return 0.5 * float(M @ (M / np.asarray(inertia, dtype=float))) + U(-y)


def monopole_kovalevskaya(p, y, mu, I, chi1, chi2):
    """The undefined symbol in 'u_2 p_2 - y_3 p_2' is read as the first
    component of y x p, that is y_2 p_3 - y_3 p_2."""
    y1, y2, y3 = y
    p1, p2, p3 = p
    r = np.linalg.norm(y)
    first = (
        ((y2 * p3 - y3 * p2) ** 2 - (y2 * p1 - y1 * p3) ** 2 + mu**2 / r**2 * (y1**2 - y2**2)
         + 2 * mu / r * (2 * y1 * y2 * p3 - y1 * y3 * p2 - y2 * y3 * p1)) / (2 * I)
        + chi1 * y1 - chi2 * y2
    )
    second = (
        (y2 * p3 - y3 * p2 + mu / r * y1) * (y3 * p1 - y1 * p3 + mu / r * y2) / I
        + chi1 * y2 + chi2 * y1
    )
    return first**2 + second**2


def monopole_zhukovskii(p, y, mu):
    c = cross3(y, p)
    return float(c @ c) + mu**2


def monopole_clebsch(p, y, mu, inertia, eps):
    I1, I2, I3 = inertia
    c = cross3(y, p)
    return 0.5 * (float(c @ c) + mu**2) - 0.5 * eps * (
        I2 * I3 * y[0] ** 2 + I3 * I1 * y[1] ** 2 + I1 * I2 * y[2] ** 2
    )


def monopole_field(p, y, mu, inertia, lam):
    """The printed Hamilton equations (they carry no potential term)."""
    inv = 1.0 / np.asarray(inertia, dtype=float)
    r = np.linalg.norm(y)
    M = cross3(y, p) + (mu / r) * y + np.asarray(lam, dtype=float)
    dp = (
        cross3(inv * cross3(y, p), p)
        + (mu / r) * (cross3(inv * y, p) - inv * M)
        + (mu / r**3) * float(M @ (inv * y)) * y
    )
    dy = cross3(inv * M, y)
    return np.concatenate([dp, dy])


# ---------------------------------------------------------------------------
# Moser chart
# ---------------------------------------------------------------------------


def _moser_rows(y, p):
    y1, y2, y3 = y
    p1, p2, p3 = p
    s = 0.5 * (y @ y - 1.0)
    yp = y @ p
    return np.array(
        [
            s * p3 - yp * y3 + y1 * p2 - y2 * p1,
            s * p1 - yp * y1 + y2 * p3 - y3 * p2,
            s * p2 - yp * y2 + y3 * p1 - y1 * p3,
        ]
    )


def _moser_gamma_rows(y):
    y1, y2, y3 = y
    t = y @ y - 1.0
    return np.array(
        [t * y1 + 2 * y2 * y3, -t * y3 + 2 * y1 * y2, 0.25 * t * t + y1**2 - y2**2 - y3**2]
    )


def moser_J(y, p):
    return 0.5 * _moser_rows(y, p)


def moser_Gamma(y, rho):
    return 2 * rho**2 / (1 + y @ y) ** 2 * _moser_gamma_rows(y)


def moser_j0_tilde(y, p):
    y1, y2, y3 = y
    p1, p2, p3 = p
    return -0.5 * (0.5 * (y @ y - 1.0) * p2 + (y @ p) * y2 - y3 * p1 + y1 * p3)


S132 = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def moser_hamiltonian(y, p, inertia):
    """U = 0 and lambda = 0; the scalar term '-(y.p)/2' is read as -(y.p) y/2."""
    M = S132 @ ((y @ y - 1.0) / 4 * p - 0.5 * (y @ p) * y + 0.5 * cross3(y, p))
    return 0.5 * float(M @ (M / np.asarray(inertia, dtype=float)))


def moser_kovalevskaya(y, p, rho, I, chi1, chi2):
    r1, r2, _ = _moser_rows(y, p)
    y1, y2, y3 = y
    t = y @ y - 1.0
    w = 2 * rho**2 / (1 + y @ y) ** 2
    u = 2 * y1 * y2 - t * y3
    v = 2 * y2 * y3 + t * y1
    first = (r1**2 - r2**2) / (8 * I) + w * (chi2 * u - chi1 * v)
    second = r1 * r2 / (4 * I) - w * (chi1 * u + chi2 * v)
    return first**2 + second**2


def moser_zhukovskii(y, p):
    c = cross3(y, p)
    return 0.25 * ((y @ y - 1.0) ** 2 / 4 * (p @ p) + (y @ p) ** 2 + c @ c)


def moser_clebsch(y, p, rho, inertia, eps):
    """'(y - 1)^2' in the last potential term is read as (y^2 - 1)^2."""
    I1, I2, I3 = inertia
    c = cross3(y, p)
    kin = ((y @ y - 1.0) ** 2 / 4 * (p @ p) + (y @ p) ** 2 + c @ c) / 8
    g = _moser_gamma_rows(y)
    pot = I2 * I3 * g[0] ** 2 + I3 * I1 * g[1] ** 2 + I1 * I2 * g[2] ** 2
    return kin - 2 * eps * rho**4 / (1 + y @ y) ** 4 * pot


# ---------------------------------------------------------------------------
# Flows and structural statements
# ---------------------------------------------------------------------------


def gamma0_flow(theta, zeta, t):
    return theta + t * zeta, zeta


def j0_tilde_flow(zeta, t):
    return np.exp(1j * t) * zeta


# Dual basis as displayed: J* = J, L* = L, T* = A/2, A* = T/2.
DUAL_BASIS_FACTORS = {"J": ("J", 1.0), "L": ("L", 1.0), "T": ("A", 0.5), "A": ("T", 0.5)}


def lmg_identification(eps, V, W, delta):
    """1/I_1 = W + V, 1/I_2 = W - V, 1/I_3 = delta, lambda = (0, 0, eps/delta)."""
    return np.array([1 / (W + V), 1 / (W - V), 1 / delta]), np.array([0.0, 0.0, eps / delta])
