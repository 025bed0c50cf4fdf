"""Permutation-symmetric (collective-spin) sector helpers.

For N qubits, the symmetric sector is spanned by the N+1 states |k> with k
spins flipped from the reference configuration.  Hamiltonians built from
uniform single-spin terms and functions of the total magnetization are block
diagonal in this sector, which turns 2^N problems into (N+1)-dimensional ones
exactly.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln


def collective_sx_matrix(n_qubits: int) -> np.ndarray:
    """Matrix of sum_i sigma_i^x on the symmetric states |k>, k = 0..N."""
    n = n_qubits
    m = np.zeros((n + 1, n + 1))
    for k in range(n):
        c = math.sqrt((k + 1) * (n - k))
        m[k + 1, k] = c
        m[k, k + 1] = c
    return m


def collective_sz_values(n_qubits: int) -> np.ndarray:
    """Eigenvalues of sum_i sigma_i^z on |k>: N - 2k."""
    return np.array([n_qubits - 2 * k for k in range(n_qubits + 1)], dtype=float)


def symmetric_state_weights(n_qubits: int) -> np.ndarray:
    """sqrt(C(N,k)) / 2^(N/2): coefficients of |+>^N over the |k> states."""
    n = n_qubits
    k = np.arange(n + 1)
    logc = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return np.exp(0.5 * logc - 0.5 * n * math.log(2.0))


def embed_symmetric_vector(n_qubits: int, coeffs: np.ndarray) -> np.ndarray:
    """Expand a symmetric-sector vector into the full 2^N z basis.

    |k> has amplitude C(N,k)^(-1/2) on every basis state with k set bits.
    """
    n = n_qubits
    dim = 2 ** n
    counts = np.array([bin(b).count("1") for b in range(dim)])
    logc = gammaln(n + 1) - gammaln(np.arange(n + 1) + 1) - gammaln(n - np.arange(n + 1) + 1)
    norm = np.exp(-0.5 * logc)
    out = np.asarray(coeffs, dtype=np.complex128)[counts] * norm[counts]
    return out
