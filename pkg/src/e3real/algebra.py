"""Pauli matrices, Hermitian 2x2 matrices, the Lie-Poisson space u(2,2) and the
spinor/real chart dictionary.

The Pauli matrices are taken verbatim from the source text, including its
sigma_2 = [[0, i], [-i, 0]].  With that choice the basis is left handed:
[sigma_1, sigma_2] = -2i sigma_3.  Every structure constant used elsewhere is
regenerated from these matrices by brute force (see ``pauli_product_table``)
rather than copied from a textbook.

Four-vectors x^mu and Hermitian matrices are related by X = x^mu sigma_mu and
x^mu = Tr(sigma_mu X)/2.  Because every sigma_mu squares to the identity and the
four matrices are trace-orthogonal, the inverse formula needs no correction for
the unusual sigma_2.
"""

import numpy as np

from .errors import ValidationError

SQRT2 = np.sqrt(2.0)

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, 1j], [-1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# Minkowski metric used to lower four-vector indices.
ETA = np.diag([1.0, -1.0, -1.0, -1.0])

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0

HERMITIAN_TOL = 1e-12


def pauli_basis():
    """Return (sigma_0, sigma_1, sigma_2, sigma_3) as fresh 2x2 complex arrays."""
    return tuple(s.copy() for s in SIGMA)


def cross3(a, b):
    """Cross product of two 3-vectors; faster than np.cross for single vectors."""
    a1, a2, a3 = a[0], a[1], a[2]
    b1, b2, b3 = b[0], b[1], b[2]
    return np.array([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])


def pauli_product_table():
    """Coefficients c[k, l, mu] with sigma_k sigma_l = sum_mu c[k, l, mu] sigma_mu.

    Obtained by multiplying the matrices and projecting with the trace, so the
    table reflects whatever orientation the printed matrices carry.
    """
    table = np.zeros((4, 4, 4), dtype=complex)
    for k in range(4):
        for l in range(4):
            prod = SIGMA[k] @ SIGMA[l]
            for mu in range(4):
                table[k, l, mu] = 0.5 * np.trace(SIGMA[mu] @ prod)
    return table


def commutator_structure_constants():
    """Real array f[k, l, m] (k, l, m = 1..3 mapped to 0..2) with
    [sigma_k, sigma_l] = 2i f[k, l, m] sigma_m.

    For the printed matrices f = -epsilon.
    """
    table = pauli_product_table()
    f = np.zeros((3, 3, 3))
    for k in range(3):
        for l in range(3):
            coeff = table[k + 1, l + 1, 1:] - table[l + 1, k + 1, 1:]
            f[k, l] = (coeff / 2j).real
    return f


def is_hermitian(X, tol=HERMITIAN_TOL):
    X = np.asarray(X)
    return bool(np.max(np.abs(X - X.conj().T)) <= tol)


def symmetrize_herm2(X):
    """Repair accumulated drift by projecting onto the Hermitian part."""
    X = np.asarray(X, dtype=complex)
    return 0.5 * (X + X.conj().T)


def herm2_from_four_vector(x):
    """X = x^mu sigma_mu."""
    x = np.asarray(x, dtype=float)
    if x.shape != (4,) or not np.all(np.isfinite(x)):
        raise ValidationError(f"four-vector must be 4 finite reals, got {x!r}")
    return np.tensordot(x, SIGMA, axes=1)


def four_vector_from_herm2(X, tol=HERMITIAN_TOL):
    """x^mu = Tr(sigma_mu X) / 2 for Hermitian X."""
    X = np.asarray(X, dtype=complex)
    if X.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {X.shape}")
    if not is_hermitian(X, tol):
        raise ValidationError("matrix is not Hermitian within tolerance")
    return 0.5 * np.einsum("mij,ji->m", SIGMA, X).real


def minkowski_square(x):
    """eta_{mu nu} x^mu x^nu, which equals det(X)."""
    x = np.asarray(x, dtype=float)
    return float(x @ ETA @ x)


def lower_index(x):
    """x_mu = eta_{mu nu} x^nu."""
    return ETA @ np.asarray(x, dtype=float)


# ---------------------------------------------------------------------------
# u(2,2) in the anti-diagonal representation
# ---------------------------------------------------------------------------

# Twistor metric phi = i [[0, -sigma_0], [sigma_0, 0]]; phi is Hermitian and squares to 1.
PHI = 1j * np.block([[np.zeros((2, 2)), -np.eye(2)], [np.eye(2), np.zeros((2, 2))]])

_Z2 = np.zeros((2, 2), dtype=complex)


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]])


CAL_J = np.array([0.5 * _block(1j * s, _Z2, _Z2, 1j * s) for s in SIGMA])
CAL_L = np.array([0.5 * _block(s, _Z2, _Z2, -s) for s in SIGMA])
CAL_T = np.array([_block(_Z2, s, _Z2, _Z2) for s in SIGMA])
CAL_A = np.array([_block(_Z2, _Z2, s, _Z2) for s in SIGMA])

# Real basis of u(2,2), ordered J_0..J_3, L_0..L_3, T_0..T_3, A_0..A_3.
U22_BASIS = np.concatenate([CAL_J, CAL_L, CAL_T, CAL_A])

U22_TOL = 1e-12


def u22_star(rho):
    """rho* = phi rho^+ phi."""
    rho = np.asarray(rho, dtype=complex)
    return PHI @ rho.conj().T @ PHI


def is_u22(rho, tol=U22_TOL):
    rho = np.asarray(rho, dtype=complex)
    return rho.shape == (4, 4) and bool(np.max(np.abs(rho + u22_star(rho))) <= tol)


def validate_u22(rho, tol=U22_TOL):
    rho = np.asarray(rho, dtype=complex)
    if not is_u22(rho, tol):
        raise ValidationError("matrix is not in u(2,2): rho + phi rho^+ phi != 0")
    return rho


def repair_u22(rho):
    """Project onto u(2,2) by removing the self-adjoint part."""
    rho = np.asarray(rho, dtype=complex)
    return 0.5 * (rho - u22_star(rho))


def u22_compose(J, Gamma, L, K):
    """Build rho = 1/2 [[L + iJ, K], [Gamma, -L + iJ]] from four-vectors."""
    Jm, Gm, Lm, Km = (herm2_from_four_vector(v) for v in (J, Gamma, L, K))
    return 0.5 * _block(Lm + 1j * Jm, Km, Gm, -Lm + 1j * Jm)


def u22_decompose(rho, tol=1e-10):
    """Inverse of ``u22_compose``; returns the four-vectors (J, Gamma, L, K)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {rho.shape}")
    top, bottom = 2.0 * rho[:2, :2], 2.0 * rho[2:, 2:]
    Jm = (top + bottom) / 2j
    Lm = (top - bottom) / 2.0
    Km, Gm = 2.0 * rho[:2, 2:], 2.0 * rho[2:, :2]
    return tuple(four_vector_from_herm2(M, tol) for M in (Jm, Gm, Lm, Km))


def u22_pairing(X, Y):
    """Ad-invariant scalar product Tr(XY); real on u(2,2)."""
    value = np.trace(np.asarray(X) @ np.asarray(Y))
    if abs(value.imag) > 1e-10:
        raise ValidationError(f"pairing has imaginary part {value.imag:.3e}")
    return float(value.real)


def commutator(X, Y):
    return X @ Y - Y @ X


def u22_lp_bracket(F_grad, G_grad, rho):
    """Lie-Poisson bracket {F, G}(rho) = Tr(rho [dF, dG])."""
    dF, dG = F_grad(rho), G_grad(rho)
    return float(np.trace(rho @ commutator(dF, dG)).real)


def u22_vector_field(H_grad, rho):
    """Hamilton equation d rho/dt = [rho, dH/drho]."""
    return commutator(rho, H_grad(rho))


def _coordinate_gradients():
    """Elements X_c of u(2,2) with c(rho) = Tr(X_c rho) for every block coordinate.

    Solved against the real basis so nothing about signs is assumed.
    """
    gram = np.array([[np.trace(a @ b).real for b in U22_BASIS] for a in U22_BASIS])
    grads = {}
    for name, slot in (("J", 0), ("Gamma", 1), ("L", 2), ("K", 3)):
        for mu in range(4):
            rhs = np.array([u22_decompose(b)[slot][mu] for b in U22_BASIS])
            coeffs = np.linalg.solve(gram, rhs)
            grads[(name, mu)] = np.tensordot(coeffs, U22_BASIS, axes=1)
    return grads


_UPPER_GRADIENTS = _coordinate_gradients()


def u22_coordinate_gradient(name, mu, lower=True):
    """Gradient (in u(2,2)) of the coordinate function name^mu or name_mu.

    ``name`` is one of "J", "Gamma", "L", "K".  With ``lower=True`` the index is
    lowered with the Minkowski metric, which flips the sign of the spatial
    components.
    """
    X = _UPPER_GRADIENTS[(name, mu)]
    if lower and mu > 0:
        return -X
    return X.copy()


def u22_coordinate(rho, name, mu, lower=True):
    return float(np.trace(u22_coordinate_gradient(name, mu, lower) @ rho).real)


# ---------------------------------------------------------------------------
# Spinor and real canonical charts of the twistor space
# ---------------------------------------------------------------------------


def spinor_to_real(theta, zeta):
    """(theta, zeta) in C^2 x C^2 to (q_0..q_3, pi_0..pi_3) in R^8.

    (q_0, q_1) = sqrt2 Re zeta, (q_2, q_3) = sqrt2 Im zeta and likewise pi from theta.
    """
    theta = np.asarray(theta, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    q = SQRT2 * np.concatenate([zeta.real, zeta.imag])
    pi = SQRT2 * np.concatenate([theta.real, theta.imag])
    return np.concatenate([q, pi])


def real_to_spinor(point):
    """Inverse of ``spinor_to_real``; returns (theta, zeta)."""
    x = np.asarray(point, dtype=float)
    q, pi = x[:4], x[4:]
    zeta = (q[:2] + 1j * q[2:]) / SQRT2
    theta = (pi[:2] + 1j * pi[2:]) / SQRT2
    return theta, zeta
