import numpy as np
import pytest

from e3real.algebra import SIGMA
from e3real.e3 import E3State, casimirs
from e3real.errors import UsageError, ValidationError
from e3real.groups import (
    E3GroupElement,
    GroupElementU2H2,
    coadjoint_e3,
    coadjoint_u2h2,
    compose,
    equivariance_check,
    lambda_action,
    random_group_element,
    random_phase_element,
    random_su2,
    random_traceless_hermitian,
    random_twistor,
    sigma_action,
    su2_to_so3,
    su2_to_so3_printed,
)
from e3real.reduced import herm_from_p, phi_embedding
from e3real.twistor import TwistorState, momentum_a2

W0 = TwistorState([1, 0], [0, 1])


class TestSigmaAction:
    def test_identity(self, rng):
        w = random_twistor(rng)
        v = sigma_action(GroupElementU2H2.identity(), w)
        assert np.allclose(v.theta, w.theta) and np.allclose(v.zeta, w.zeta)

    def test_translation(self, rng):
        w = random_twistor(rng)
        T = random_traceless_hermitian(rng)
        v = sigma_action(GroupElementU2H2(np.eye(2), T), w)
        assert np.allclose(v.zeta, w.zeta) and np.allclose(v.theta, w.theta + T @ w.zeta)

    def test_phase_quarter_turn(self):
        v = sigma_action(GroupElementU2H2(1j * np.eye(2), np.zeros((2, 2))), W0)
        assert np.allclose(v.theta, [1j, 0]) and np.allclose(v.zeta, [0, 1j])
        assert np.allclose(momentum_a2(v), momentum_a2(W0))

    def test_left_action(self, rng):
        g1, g2 = random_group_element(rng, special=False), random_group_element(rng, special=False)
        w = random_twistor(rng)
        a = sigma_action(compose(g1, g2), w)
        b = sigma_action(g1, sigma_action(g2, w))
        assert np.allclose(a.theta, b.theta) and np.allclose(a.zeta, b.zeta)

    def test_invalid_element(self):
        with pytest.raises(ValidationError):
            GroupElementU2H2(2 * np.eye(2), np.zeros((2, 2)))


class TestCoadjoint:
    def test_u2h2_identity(self, rng):
        J, G = random_traceless_hermitian(rng), random_traceless_hermitian(rng)
        Jn, Gn = coadjoint_u2h2(GroupElementU2H2.identity(), J, G)
        assert np.allclose(Jn, J) and np.allclose(Gn, G)

    def test_u2h2_rotation_only(self, rng):
        A = random_su2(rng)
        J, G = random_traceless_hermitian(rng), random_traceless_hermitian(rng)
        Jn, Gn = coadjoint_u2h2(GroupElementU2H2(A, np.zeros((2, 2))), J, G)
        assert np.allclose(Jn, A @ J @ A.conj().T) and np.allclose(Gn, A @ G @ A.conj().T)

    def test_u2h2_translation_shift(self):
        # (i/2)[sigma_3, sigma_1] = sigma_2 with the sigma_2 used here.
        Jn, _ = coadjoint_u2h2(GroupElementU2H2(np.eye(2), SIGMA[1]), np.zeros((2, 2)), SIGMA[3])
        assert np.allclose(Jn, SIGMA[2])

    def test_e3_identity(self, rng):
        s = E3State(rng.normal(size=3), rng.normal(size=3))
        out = coadjoint_e3(E3GroupElement(np.eye(3), np.zeros(3)), s)
        assert np.allclose(out.as_array(), s.as_array())

    def test_e3_translation(self, rng):
        s = E3State(rng.normal(size=3), rng.normal(size=3))
        T = rng.normal(size=3)
        out = coadjoint_e3(E3GroupElement(np.eye(3), T), s)
        assert np.allclose(out.Gamma, s.Gamma) and np.allclose(out.J, s.J + np.cross(T, s.Gamma))
        assert np.isclose(casimirs(out)[0], casimirs(s)[0])

    def test_e3_half_turn(self):
        O = np.diag([-1.0, -1.0, 1.0])
        out = coadjoint_e3(E3GroupElement(O, np.zeros(3)), E3State([1, 0, 0], [0, 1, 0]))
        assert np.allclose(out.J, [-1, 0, 0]) and np.allclose(out.Gamma, [0, -1, 0])


class TestCovering:
    def test_identity_and_minus_identity(self):
        assert np.allclose(su2_to_so3(np.eye(2)), np.eye(3))
        assert np.allclose(su2_to_so3(-np.eye(2)), np.eye(3))

    def test_diagonal_rotates_about_axis_three(self):
        a = 0.3
        O = su2_to_so3(np.diag([np.exp(1j * a), np.exp(-1j * a)]))
        c, s = np.cos(2 * a), np.sin(2 * a)
        assert np.allclose(O, [[c, -s, 0], [s, c, 0], [0, 0, 1]])

    def test_homomorphism(self, rng):
        worst = 0.0
        for _ in range(100):
            A, B = random_su2(rng), random_su2(rng)
            worst = max(worst, np.max(np.abs(su2_to_so3(A @ B) - su2_to_so3(A) @ su2_to_so3(B))))
        assert worst < 1e-12

    def test_printed_formula_is_transpose(self, rng):
        A = random_su2(rng)
        assert np.allclose(su2_to_so3_printed(A), su2_to_so3(A).T)

    def test_non_unit_determinant(self):
        with pytest.raises(ValidationError):
            su2_to_so3(np.diag([1j, 1j]))


class TestLambdaAction:
    def test_identity(self, rng):
        P = random_traceless_hermitian(rng)
        zeta = rng.normal(size=2) + 0j
        P2, z2 = lambda_action(GroupElementU2H2.identity(), P, zeta)
        assert np.allclose(P2, P) and np.allclose(z2, zeta)

    def test_translation_only(self, rng):
        P, T = random_traceless_hermitian(rng), random_traceless_hermitian(rng)
        P2, _ = lambda_action(GroupElementU2H2(np.eye(2), T), P, [1, 0])
        assert np.allclose(P2, P + T)

    def test_phi_intertwines(self, rng):
        worst = 0.0
        for _ in range(50):
            g = random_group_element(rng)
            P = herm_from_p(rng.normal(size=3))
            zeta = rng.normal(size=2) + 1j * rng.normal(size=2)
            mu = rng.normal()
            a = phi_embedding(*lambda_action(g, P, zeta), mu)
            b = sigma_action(g, phi_embedding(P, zeta, mu))
            worst = max(worst, np.max(np.abs(a.theta - b.theta)), np.max(np.abs(a.zeta - b.zeta)))
        assert worst < 1e-10


class TestEquivariance:
    def test_identity_residual_zero(self, rng):
        w = random_twistor(rng)
        for name in ("J_u", "J_e", "J_a"):
            assert equivariance_check(name, GroupElementU2H2.identity(), w) == 0.0

    def test_random_J_e(self, rng):
        worst = max(equivariance_check("J_e", random_group_element(rng), random_twistor(rng)) for _ in range(100))
        assert worst < 1e-10

    def test_phase_J_a_invariant(self, rng):
        worst = max(equivariance_check("J_a", random_phase_element(rng), random_twistor(rng)) for _ in range(100))
        assert worst < 1e-12

    def test_unknown_map(self, rng):
        with pytest.raises(UsageError):
            equivariance_check("J_x", GroupElementU2H2.identity(), random_twistor(rng))
