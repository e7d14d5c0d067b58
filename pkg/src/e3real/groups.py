"""Symmetry groups: U(2) x| H(2) acting on twistor space, the coadjoint actions,
the Lambda action on (P, zeta) and the SU(2) -> SO(3) covering.

Orientation of the induced E(3) action
--------------------------------------
The covering map used here is O(A)_kl = Tr(sigma_k A sigma_l A^+)/2, the matrix
of X -> A X A^+ on traceless Hermitian matrices.  It is a homomorphism.  The
printed trace formula Tr(sigma_k A^+ sigma_l A)/2 is its transpose, which
reverses products; it is kept as ``su2_to_so3_printed`` for the regression
report.  With the lower-index realization J_e,

    J_e(Sigma_g w) = O(A)(J - T x Gamma),   Gamma_e(Sigma_g w) = O(A) Gamma,

where T is the spatial part of the Hermitian translation.  In the printed form
O(J + T x Gamma), O Gamma this is the E(3) element (O(A), -T), which is what
``e3_image_of`` returns.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA, commutator, cross3, four_vector_from_herm2, is_hermitian
from .e3 import E3State
from .errors import UsageError, ValidationError
from .twistor import TwistorState, as_twistor, momentum_a2, momentum_e3, momentum_u2h2

GROUP_TOL = 1e-10


@dataclass(frozen=True)
class GroupElementU2H2:
    """g = (A, T) with A unitary and T Hermitian."""

    A: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex).reshape(2, 2)
        T = np.asarray(self.T, dtype=complex).reshape(2, 2)
        if np.max(np.abs(A @ A.conj().T - np.eye(2))) > GROUP_TOL:
            raise ValidationError("A is not unitary")
        if not is_hermitian(T, GROUP_TOL):
            raise ValidationError("T is not Hermitian")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "T", T)

    @property
    def special(self):
        """Membership in SU(2) x| H_0(2): det A = 1 and Tr T = 0."""
        return bool(
            abs(np.linalg.det(self.A) - 1.0) <= GROUP_TOL and abs(np.trace(self.T)) <= GROUP_TOL
        )

    @property
    def translation_vector(self):
        """Spatial components T^k of T = T^mu sigma_mu."""
        return four_vector_from_herm2(self.T, GROUP_TOL)[1:]

    @classmethod
    def identity(cls):
        return cls(np.eye(2), np.zeros((2, 2)))

    def inverse(self):
        # (A, T)^{-1} = (A^{-1}, -A T A^{-1}) under the semidirect law below.
        Ainv = self.A.conj().T
        return GroupElementU2H2(Ainv, -self.A @ self.T @ Ainv)


def compose(g1, g2):
    """(A1, T1)(A2, T2) = (A1 A2, T2 + A2^{-1} T1 (A2^+)^{-1})."""
    A2inv = g2.A.conj().T
    return GroupElementU2H2(g1.A @ g2.A, g2.T + A2inv @ g1.T @ A2inv.conj().T)


@dataclass(frozen=True)
class E3GroupElement:
    O: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        O = np.asarray(self.O, dtype=float).reshape(3, 3)
        T = np.asarray(self.T, dtype=float).reshape(3)
        if np.max(np.abs(O.T @ O - np.eye(3))) > GROUP_TOL or np.linalg.det(O) < 0:
            raise ValidationError("O is not a proper rotation")
        object.__setattr__(self, "O", O)
        object.__setattr__(self, "T", T)


def sigma_action(g, s):
    """Sigma_g(theta, zeta) = (A(theta + T zeta), A zeta)."""
    s = as_twistor(s)
    return TwistorState(g.A @ (s.theta + g.T @ s.zeta), g.A @ s.zeta)


def coadjoint_u2h2(g, J, Gamma):
    """(A(J + (i/2)[Gamma, T])A^+, A Gamma A^+) on Hermitian matrices.

    This is the transformation law of momentum_u2h2 under sigma_action.
    """
    J = np.asarray(J, dtype=complex)
    Gamma = np.asarray(Gamma, dtype=complex)
    if not (is_hermitian(J, 1e-9) and is_hermitian(Gamma, 1e-9)):
        raise ValidationError("coadjoint_u2h2 expects Hermitian inputs")
    A, Ad = g.A, g.A.conj().T
    Jn = A @ (J + 0.5j * commutator(Gamma, g.T)) @ Ad
    return Jn, A @ Gamma @ Ad


def coadjoint_e3(g, s):
    """(O(J + T x Gamma), O Gamma)."""
    return E3State(g.O @ (s.J + cross3(g.T, s.Gamma)), g.O @ s.Gamma)


def _trace_rotation(A, B, tol):
    A = np.asarray(A, dtype=complex)
    if abs(np.linalg.det(A) - 1.0) > tol:
        raise ValidationError("su2_to_so3 requires det A = 1")
    return np.array(
        [[0.5 * np.trace(SIGMA[k] @ A @ SIGMA[l] @ B).real for l in (1, 2, 3)] for k in (1, 2, 3)]
    )


def su2_to_so3(A, tol=1e-10):
    """O_kl = Tr(sigma_k A sigma_l A^+)/2, a homomorphism with kernel {1, -1}.

    With the sigma_2 used throughout, diag(e^{i a}, e^{-i a}) maps to
    [[cos 2a, -sin 2a, 0], [sin 2a, cos 2a, 0], [0, 0, 1]].
    """
    A = np.asarray(A, dtype=complex)
    return _trace_rotation(A, A.conj().T, tol)


def su2_to_so3_printed(A, tol=1e-10):
    """The printed Tr(sigma_k A^+ sigma_l A)/2; equals su2_to_so3(A).T."""
    A = np.asarray(A, dtype=complex)
    return _trace_rotation(A.conj().T, A, tol)


def e3_image_of(g):
    """E(3) element whose printed coadjoint action reproduces J_e o Sigma_g."""
    if abs(np.trace(g.T)) > GROUP_TOL:
        raise ValidationError("translation must be traceless for the E(3) image")
    A = g.A
    det = np.linalg.det(A)
    A = A / np.sqrt(det)  # the U(1) phase acts trivially on e(3)*
    return E3GroupElement(su2_to_so3(A), -g.translation_vector)


def lambda_action(g, P, zeta):
    """Lambda_g(P, zeta) = (A(P + T)A^+, A zeta) for traceless P and T."""
    P = np.asarray(P, dtype=complex)
    if abs(np.trace(P)) > GROUP_TOL or abs(np.trace(g.T)) > GROUP_TOL:
        raise ValidationError("lambda_action requires traceless P and T")
    if not is_hermitian(P, GROUP_TOL):
        raise ValidationError("P must be Hermitian")
    return g.A @ (P + g.T) @ g.A.conj().T, g.A @ np.asarray(zeta, dtype=complex)


EQUIVARIANT_MAPS = ("J_u", "J_e", "J_a")


def equivariance_check(map_name, g, point):
    """Max-norm residual of J(Sigma_g w) minus the induced coadjoint image of J(w)."""
    w = as_twistor(point)
    gw = sigma_action(g, w)
    if map_name == "J_u":
        lhs = momentum_u2h2(gw)
        rhs = coadjoint_u2h2(g, *momentum_u2h2(w))
        return float(max(np.max(np.abs(a - b)) for a, b in zip(lhs, rhs)))
    if map_name == "J_e":
        lhs = momentum_e3(gw)
        rhs = coadjoint_e3(e3_image_of(g), momentum_e3(w))
        return float(np.max(np.abs(lhs.as_array() - rhs.as_array())))
    if map_name == "J_a":
        return float(np.max(np.abs(np.subtract(momentum_a2(gw), momentum_a2(w)))))
    raise UsageError(f"unknown momentum map {map_name!r}; expected one of {EQUIVARIANT_MAPS}")


# ---------------------------------------------------------------------------
# Seeded samplers
# ---------------------------------------------------------------------------


def random_su2(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    a, b = v / np.linalg.norm(v)
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def random_traceless_hermitian(rng, scale=1.0):
    return np.tensordot(scale * rng.normal(size=3), SIGMA[1:], axes=1)


def random_group_element(rng, special=True):
    A = random_su2(rng)
    if special:
        T = random_traceless_hermitian(rng)
    else:
        A = np.exp(1j * rng.uniform(0, 2 * np.pi)) * A
        T = np.tensordot(rng.normal(size=4), SIGMA, axes=1)
    return GroupElementU2H2(A, T)


def random_phase_element(rng):
    return GroupElementU2H2(np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.eye(2), np.zeros((2, 2)))


def random_twistor(rng):
    return TwistorState(
        rng.normal(size=2) + 1j * rng.normal(size=2), rng.normal(size=2) + 1j * rng.normal(size=2)
    )


def random_e3_element(rng):
    from scipy.spatial.transform import Rotation

    return E3GroupElement(Rotation.random(random_state=rng).as_matrix(), rng.normal(size=3))
