"""Brute-force check of the Wick engine in a truncated Fock space.

The oracle never forms a coherence matrix or a permanent.  It builds the
annihilation operators of every source polarisation mode on the truncated
product space, forms the detector operators as the same linear combinations
the optics prescribe, and evaluates ``Tr[rho :N_b1 ... N_bk:]`` with the
thermal density matrix ``rho = exp(-beta H) / Z`` restricted to at most
``n_max`` photons per mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .correlator import ExperimentSetup, source_to_detector_modes
from .errors import CapacityError, InvalidState

DEFAULT_NMAX = 6
DEFAULT_MAX_DIMENSION = 200_000


@dataclass(frozen=True)
class OracleResult:
    value: float
    truncation_error: float
    n_max: int
    coarse_value: float


def thermal_populations(n_b: float, n_max: int) -> np.ndarray:
    """Geometric photon-number distribution truncated at ``n_max`` and renormalised."""
    if n_b == 0:
        p = np.zeros(n_max + 1)
        p[0] = 1.0
        return p
    ratio = n_b / (1.0 + n_b)
    p = ratio ** np.arange(n_max + 1)
    return p / p.sum()


def _lowering(n_max: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n_max + 1)), offsets=1, format="csr")


def _mode_operators(n_modes: int, n_max: int) -> list[sp.csr_matrix]:
    eye = sp.identity(n_max + 1, format="csr")
    a = _lowering(n_max)
    ops = []
    for j in range(n_modes):
        factors = [a if i == j else eye for i in range(n_modes)]
        ops.append(reduce(lambda x, y: sp.kron(x, y, format="csr"), factors))
    return ops


def _moment(setup: ExperimentSetup, detectors: Sequence[int], n_max: int) -> float:
    n_modes = 2 * setup.geometry.n_sources
    a_ops = _mode_operators(n_modes, n_max)
    m = source_to_detector_modes(setup)

    pops = [thermal_populations(n, n_max) for n in setup.occupations for _ in range(2)]
    sqrt_rho = np.sqrt(reduce(np.kron, pops))

    def detector_op(row: int) -> sp.csr_matrix:
        out = sp.csr_matrix(a_ops[0].shape, dtype=complex)
        for j, coeff in enumerate(m[row]):
            if coeff != 0:
                out = out + coeff * a_ops[j]
        return out

    rows = {(b, alpha): detector_op(2 * b + alpha) for b in set(detectors) for alpha in (0, 1)}
    total = 0.0
    for alphas in product((0, 1), repeat=len(detectors)):
        # <n| D^+ D |n> with D the product of the detector annihilators
        vec = sp.diags(sqrt_rho, format="csr")
        for b, alpha in zip(detectors, alphas):
            vec = rows[(b, alpha)] @ vec
        total += float(np.sum(np.abs(vec.data) ** 2))
    return total


def fock_oracle_moment(
    setup: ExperimentSetup,
    detectors: Sequence[int],
    n_max: int = DEFAULT_NMAX,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
) -> OracleResult:
    """``<: prod_b N_b :>`` by explicit operator algebra.

    The truncation error is estimated as the change from an ``n_max - 1`` run.
    """
    if n_max < 1:
        raise InvalidState("n_max must be >= 1")
    detectors = list(detectors)
    if not detectors:
        raise InvalidState("detector multiset must be nonempty")
    dim = (n_max + 1) ** (2 * setup.geometry.n_sources)
    if dim > max_dimension:
        raise CapacityError(f"Fock space dimension {dim} exceeds cap {max_dimension}")
    value = _moment(setup, detectors, n_max)
    coarse = _moment(setup, detectors, n_max - 1)
    return OracleResult(value=value, truncation_error=abs(value - coarse), n_max=n_max,
                        coarse_value=coarse)
