"""Orbital entanglement generated by photon exchange.

Two photons prepared in orbital states ``phi`` and ``psi`` (each a qubit in
the {short, long} delay-line basis) reach detectors 3 and 4 either directly
or exchanged.  The exchange amplitude carries the geometric phase factor
``exp(i Omega / 2)``, so ``Omega`` tunes the entanglement of the output pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DegenerateError, InvalidState

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _normalised_array(values, size: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    if arr.shape != (size,):
        raise InvalidState(f"{what} needs {size} amplitudes, got {arr.shape}")
    if abs(np.linalg.norm(arr) - 1.0) > 1e-12:
        raise InvalidState(f"{what} is not normalised: norm {np.linalg.norm(arr)!r}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class OrbitalState:
    """``alpha |S> + beta |L>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _normalised_array(self.amplitudes, 2, "orbital state"))

    @classmethod
    def from_unnormalised(cls, alpha: complex, beta: complex) -> "OrbitalState":
        vec = np.array([alpha, beta], dtype=complex)
        return cls(vec / np.linalg.norm(vec))


SHORT = OrbitalState([1, 0])
LONG = OrbitalState([0, 1])


@dataclass(frozen=True, eq=False)
class TwoPhotonOrbitalState:
    """Amplitudes on ``|SS>, |SL>, |LS>, |LL>`` (subsystem 3 first)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _normalised_array(self.amplitudes, 4, "two-photon state"))

    @classmethod
    def product(cls, first: OrbitalState, second: OrbitalState) -> "TwoPhotonOrbitalState":
        return cls(np.kron(first.amplitudes, second.amplitudes))

    def as_matrix(self) -> np.ndarray:
        """Coefficient matrix ``c[i3, i4]``."""
        return self.amplitudes.reshape(2, 2)


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    matrix: np.ndarray

    def __post_init__(self):
        rho = np.array(self.matrix, dtype=complex)
        if rho.shape != (2, 2):
            raise InvalidState("reduced density must be 2x2")
        if not np.allclose(rho, rho.conj().T, rtol=0, atol=1e-10):
            raise InvalidState("reduced density is not Hermitian")
        if abs(np.trace(rho) - 1) > 1e-10:
            raise InvalidState("reduced density does not have unit trace")
        eig = np.linalg.eigvalsh(rho)
        if eig.min() < -1e-10 or eig.max() > 1 + 1e-10:
            raise InvalidState(f"reduced density eigenvalues {eig} outside [0, 1]")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)

    def eigenvalues(self) -> np.ndarray:
        return np.clip(np.linalg.eigvalsh(self.matrix), 0.0, 1.0)


def output_state(phi: OrbitalState, psi: OrbitalState, omega: float) -> TwoPhotonOrbitalState:
    """Normalised ``|phi>_3 |psi>_4 + exp(i omega/2) |psi>_3 |phi>_4``."""
    direct = np.kron(phi.amplitudes, psi.amplitudes)
    exchange = np.kron(psi.amplitudes, phi.amplitudes)
    vec = direct + np.exp(0.5j * omega) * exchange
    norm = np.linalg.norm(vec)
    if norm <= 1e-10:
        raise DegenerateError("direct and exchange amplitudes cancel; output state vanishes")
    return TwoPhotonOrbitalState(vec / norm)


def reduced_density(state: TwoPhotonOrbitalState, subsystem: Literal["three", "four"]) -> ReducedDensity:
    """Partial trace keeping ``subsystem``."""
    c = state.as_matrix()
    if subsystem == "three":
        rho = c @ c.conj().T
    elif subsystem == "four":
        rho = c.T @ c.conj()
    else:
        raise InvalidState(f"subsystem must be 'three' or 'four', not {subsystem!r}")
    return ReducedDensity(0.5 * (rho + rho.conj().T))


def von_neumann_entropy(rho: ReducedDensity) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    lam = rho.eigenvalues()
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def correlation_tensor(state: TwoPhotonOrbitalState) -> np.ndarray:
    """``T_ij = <sigma_i (x) sigma_j>``."""
    vec = state.amplitudes
    return np.array([[np.vdot(vec, np.kron(si, sj) @ vec).real for sj in _PAULI] for si in _PAULI])


def chsh_max(state: TwoPhotonOrbitalState) -> float:
    """Largest CHSH value over all local qubit measurements.

    Uses the closed two-qubit criterion ``2 sqrt(t1 + t2)`` with ``t1, t2``
    the two largest eigenvalues of ``T^T T``.
    """
    t = correlation_tensor(state)
    top = np.sort(np.linalg.eigvalsh(t.T @ t))[::-1][:2]
    return float(2.0 * np.sqrt(max(top.sum(), 0.0)))


def chsh_value(state: TwoPhotonOrbitalState, a, a2, b, b2) -> float:
    """CHSH combination ``E(a,b) + E(a,b') + E(a',b) - E(a',b')``.

    Measurement settings are Bloch-sphere directions (3-vectors).
    """
    vec = state.amplitudes

    def obs(direction) -> np.ndarray:
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        return sum(di * si for di, si in zip(d, _PAULI))

    def corr(x, y) -> float:
        return np.vdot(vec, np.kron(obs(x), obs(y)) @ vec).real

    return float(corr(a, b) + corr(a, b2) + corr(a2, b) - corr(a2, b2))


def entropy_sweep(phi: OrbitalState, psi: OrbitalState, omegas) -> np.ndarray:
    """Entanglement entropy of the output state along a sweep of ``Omega``."""
    return np.array([
        von_neumann_entropy(reduced_density(output_state(phi, psi, om), "three"))
        for om in omegas
    ])
