import numpy as np
import pytest

from e3real.e3 import GyrostatParams, e3_poisson_tensor
from e3real.errors import UsageError
from e3real.twistor import (
    TWISTOR_POISSON,
    TwistorState,
    ab_to_spinor,
    image_conditions,
    lifted_hamiltonian,
    lifted_integral,
    momentum_a2,
    momentum_e3,
    momentum_e3_real,
    momentum_e3_upper,
    momentum_u22,
    real_a2_with_jacobian,
    real_bracket,
    real_e3_with_jacobian,
    spinor_to_ab,
    twistor_norm,
)

W0 = TwistorState([1, 0], [0, 1])


def random_state(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return TwistorState(z[0], z[1])


class TestMomentumU22:
    def test_null_level(self):
        J = momentum_u22(TwistorState([1, 2j], [0, 0]))
        assert np.allclose(J[2:, :], 0)
        assert np.allclose(J[:2, :2], 0)

    def test_hand_blocks(self):
        J = momentum_u22(W0)
        assert np.allclose(J[:2, :2], [[0, -1], [0, 0]])
        assert np.allclose(J[2:, 2:], [[0, 0], [1, 0]])

    def test_quadratic_identity(self, rng):
        for _ in range(100):
            s = random_state(rng)
            J = momentum_u22(s)
            assert np.max(np.abs(J @ J - twistor_norm(s) * J)) < 1e-12 * max(1, np.abs(J).max() ** 2)


class TestMomentumE3:
    def test_hand_state_upper(self):
        e = momentum_e3_upper(W0)
        assert np.allclose(e.J, [0, 1, 0]) and np.allclose(e.Gamma, [0, 0, 1])

    def test_hand_state_theta_zero_upper(self):
        e = momentum_e3_upper(TwistorState([0, 0], [1, 0]))
        assert np.allclose(e.J, 0) and np.allclose(e.Gamma, [0, 0, -1])

    def test_lower_index_is_negated_display(self, rng):
        s = random_state(rng)
        lo, up = momentum_e3(s), momentum_e3_upper(s)
        assert np.allclose(lo.J, -up.J) and np.allclose(lo.Gamma, -up.Gamma)

    def test_null_level(self):
        e = momentum_e3(TwistorState([1, 1j], [0, 0]))
        assert np.allclose(e.J, 0) and np.allclose(e.Gamma, 0)

    def test_poisson_map(self, rng):
        worst = 0.0
        for _ in range(50):
            x = rng.normal(size=8)
            val, jac = real_e3_with_jacobian(x)
            worst = max(worst, np.max(np.abs(jac @ TWISTOR_POISSON @ jac.T - e3_poisson_tensor(val))))
        assert worst < 1e-12

    def test_coordinate_bracket_at_hand_state(self):
        _, jac = real_e3_with_jacobian(W0.as_real())
        assert abs(real_bracket(jac[0], jac[1]) - momentum_e3_real(W0.as_real()).J[2]) < 1e-14
        assert abs(momentum_e3_real(W0.as_real()).J[2]) < 1e-15


class TestMomentumA2:
    def test_hand_state(self):
        assert np.allclose(momentum_a2(W0), (0.0, -1.0))

    def test_zeta_i_theta(self):
        assert np.isclose(momentum_a2(TwistorState([1, 0], [1j, 0]))[0], 1.0)

    def test_null_level(self):
        assert momentum_a2(TwistorState([1, 0], [0, 0])) == (0.0, 0.0)

    def test_real_chart_gamma0(self):
        assert np.isclose(real_a2_with_jacobian(np.array([1, 1, 1, 1, 0, 0, 0, 0.0]))[0][1], -2.0)

    def test_real_chart_origin(self):
        e = momentum_e3_real(np.zeros(8))
        assert np.allclose(e.J, 0) and np.allclose(e.Gamma, 0)


class TestImageConditions:
    def test_random_states_satisfy(self, rng):
        for _ in range(1000):
            s = random_state(rng)
            up = momentum_e3_upper(s)
            J0, G0 = momentum_a2(s)
            assert image_conditions(np.r_[J0, up.J], np.r_[G0, up.Gamma])

    def test_future_gamma0_fails(self):
        assert not image_conditions([0, 0, 1, 0], [1, 0, 0, 1])

    def test_hand_state(self):
        assert image_conditions([0, 0, 1, 0], [-1, 0, 0, 1])


class TestLiftedFunctions:
    def test_euler_energy_at_hand_state(self):
        assert np.isclose(lifted_hamiltonian(GyrostatParams((1, 1, 1)), W0), 0.5)

    def test_null_level_energy(self):
        H = GyrostatParams((1, 2, 3), (1.0, 0.0, 0.0))
        assert np.isclose(lifted_hamiltonian(H, TwistorState([1, 0], [0, 0])), 0.5)

    def test_zhukovskii_at_hand_state(self):
        assert np.isclose(lifted_integral("zhukovskii", None, W0), 1.0)

    def test_casimirs_factor_through_a2(self, rng):
        for _ in range(100):
            s = random_state(rng)
            J0, G0 = momentum_a2(s)
            assert np.isclose(lifted_integral("K1", None, s), J0 * G0, atol=1e-12)
            assert np.isclose(lifted_integral("K2", None, s), G0 * G0, atol=1e-12)

    def test_null_level_gamma_integrals(self):
        s = TwistorState([1, 0.5j], [0, 0])
        assert lifted_integral("K2", None, s) == 0.0
        assert lifted_integral("Gamma0", None, s) == 0.0

    def test_unknown_kind(self):
        with pytest.raises(UsageError):
            lifted_integral("bogus", None, W0)


class TestABChart:
    def test_hand_value(self):
        s = ab_to_spinor([np.sqrt(2), 0], [0, 0])
        assert np.allclose(s.theta, [1, 0]) and np.allclose(s.zeta, [1j, 0])

    def test_origin(self):
        s = ab_to_spinor([0, 0], [0, 0])
        assert np.allclose(s.theta, 0) and np.allclose(s.zeta, 0)

    def test_round_trip(self, rng):
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        a2, b2 = spinor_to_ab(ab_to_spinor(a, b))
        assert np.max(np.abs(a2 - a)) < 1e-15 and np.max(np.abs(b2 - b)) < 1e-15
