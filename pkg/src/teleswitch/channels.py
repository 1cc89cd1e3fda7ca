"""Generalized depolarizing channels and teleportation fidelity functionals.

The standard teleportation protocol through an imperfect resource state chi
acts on the teleported qubit as Lambda[rho] = sum_i p_i sigma_i rho sigma_i,
where the weights p_i are the overlaps of chi with the Bell basis. The
isotropic model fixes p1 = p2 = p3 = p and p0 = 1 - 3p with p in [0, 1/3].
"""
from dataclasses import dataclass

import numpy as np

from .linalg import (
    assert_density_matrix,
    clamp_psd_eigenvalues,
    det2,
    hermitian_eigensystem,
    normalize_state,
    projector,
    tensor_product,
)

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)

WEIGHT_SUM_TOL = 1e-9

# |det| below this is float noise around an exact zero (pure states); the
# sqrt term is non-differentiable there, so tiny values carry no information
DET_CLAMP = 1e-14


@dataclass(frozen=True)
class PauliWeights:
    """Probability weights (p0, p1, p2, p3) of a generalized depolarizing channel."""

    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        ps = self.as_array()
        if np.any(ps < -1e-12) or np.any(ps > 1 + 1e-12):
            raise ValueError(f"weights outside [0,1]: {ps}")
        if abs(ps.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {ps.sum()}, not 1")

    def as_array(self):
        return np.array([self.p0, self.p1, self.p2, self.p3], dtype=float)


@dataclass(frozen=True)
class DepolarizingChannel:
    """A generalized depolarizing channel with Kraus operators K_i = sqrt(p_i) sigma_i."""

    weights: PauliWeights

    @property
    def kraus(self):
        ps = self.weights.as_array()
        return tuple(np.sqrt(ps[i]) * PAULI[i] for i in range(4))


def isotropic_weights(p):
    """Weights (1-3p, p, p, p) for p in [0, 1/3]."""
    if not 0.0 <= p <= 1 / 3 + 1e-12:
        raise ValueError(f"p={p} outside [0, 1/3]")
    p = min(p, 1 / 3)
    return PauliWeights(1 - 3 * p, p, p, p)


def isotropic_channel(p):
    return DepolarizingChannel(isotropic_weights(p))


def bell_basis():
    """The four Bell states (B0, B1, B2, B3) with B0 the singlet.

    B0 = (|01> - |10>)/sqrt(2) and B_i = (I o sigma_i) B0 for i = 1, 2, 3,
    so that weight i of a resource state conjugates the input by sigma_i.
    """
    singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    basis = [singlet]
    for i in (1, 2, 3):
        basis.append(tensor_product(SIGMA_0, PAULI[i]) @ singlet)
    return tuple(normalize_state(b) for b in basis)


def weights_from_resource(chi):
    """Bell-basis overlaps p_i = <B_i| chi |B_i> of a two-qubit resource state."""
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (4, 4):
        raise ValueError(f"resource state must be 4x4, got {chi.shape}")
    overlaps = [float(np.real(b.conj() @ chi @ b)) for b in bell_basis()]
    if abs(sum(overlaps) - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"overlaps sum to {sum(overlaps)}; resource state not normalized")
    return PauliWeights(*overlaps)


def bell_diagonal_state(weights):
    """The Bell-diagonal two-qubit state with the given weights."""
    return sum(p * projector(b) for p, b in zip(weights.as_array(), bell_basis()))


def werner_state(x):
    """x |psi-><psi-| + (1-x) I/4."""
    singlet = bell_basis()[0]
    return x * projector(singlet) + (1 - x) * np.eye(4, dtype=complex) / 4


def apply_channel(channel, rho):
    """Lambda[rho] = sum_i p_i sigma_i rho sigma_i on a qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a qubit state, got shape {rho.shape}")
    assert_density_matrix(rho)
    ps = channel.weights.as_array()
    out = np.zeros((2, 2), dtype=complex)
    for p, s in zip(ps, PAULI):
        out += p * (s @ rho @ s)
    return out


def _clamped_det(rho):
    d = det2(rho).real
    if abs(d) < DET_CLAMP:
        return 0.0
    if d < 0:
        raise ValueError(f"determinant {d:.3e} is negative beyond rounding")
    return d


def qubit_fidelity(rho, sigma):
    """F = Tr(rho sigma) + 2 sqrt(det rho * det sigma) for qubit states."""
    rho = assert_density_matrix(np.asarray(rho, dtype=complex))
    sigma = assert_density_matrix(np.asarray(sigma, dtype=complex))
    if rho.shape != (2, 2) or sigma.shape != (2, 2):
        raise ValueError("qubit_fidelity needs 2x2 density matrices")
    f = float(np.real(np.trace(rho @ sigma))) + 2 * np.sqrt(
        _clamped_det(rho) * _clamped_det(sigma)
    )
    return float(min(max(f, 0.0), 1.0 + 1e-10))


def general_fidelity(rho, sigma):
    """Squared Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    assert_density_matrix(rho)
    assert_density_matrix(sigma)
    w, v = hermitian_eigensystem(rho)
    w = clamp_psd_eigenvalues(w)
    sqrt_rho = (v * np.sqrt(w)) @ v.conj().T
    inner = sqrt_rho @ sigma @ sqrt_rho
    ev = clamp_psd_eigenvalues(np.linalg.eigvalsh(inner))
    return float(np.sum(np.sqrt(ev)) ** 2)


def no_switch_fidelity(p, n):
    """Teleportation fidelity of n sequential isotropic channels, 1/2 + (1-4p)^n / 2.

    Accepts a scalar or an array of noise weights.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-15) or np.any(p > 1 / 3 + 1e-12):
        raise ValueError(f"p outside [0, 1/3]")
    out = 0.5 + 0.5 * (1 - 4 * p) ** n
    return float(out) if out.ndim == 0 else out


def no_switch_threshold(n):
    """The noise level above which n sequential channels drop to F <= 2/3.

    Solves 1/2 + (1-4p)^n / 2 = 2/3, i.e. p = (1 - 3^(-1/n))/4.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return (1 - 3.0 ** (-1.0 / n)) / 4
