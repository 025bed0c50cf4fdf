"""Reduced, orthogonalized bases for the projector ("needle in a haystack")
annealing problem.

The low-energy physics near the first-order transition lives in the span of
the marked state |G> and the paramagnet states with up to n_max local
excitations.  These raw states are not quite orthogonal (each paramagnet
state overlaps |G> at order 2^{-N/2}); we orthogonalize them exactly with a
Gram-Schmidt pass so that truncation is the only approximation left.

Coordinates: set member 0 is |G>; members 1.. are the excitation states
ordered by shell and lexicographic site combination.  The orthonormal basis
is expressed over the set members by an upper-triangular matrix C with
C^T Gram C = I (Cholesky of the Gram matrix), which reproduces sequential
Gram-Schmidt starting from |G>.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import scipy.linalg


def _z_signs(n_qubits: int, target: int) -> np.ndarray:
    """c_i = <G| sigma_i^z |G> = +1 if target bit i is 0 else -1."""
    return np.array([1 - 2 * ((target >> i) & 1) for i in range(n_qubits)])


class ReducedGroverBasis:
    """Orthogonalized {|G>, |0>, |i>, |ij>, ...} truncated at n_max excitations."""

    def __init__(self, n_qubits: int, n_max: int, target: int = 0, dim_cap: int = 4096):
        if n_max > n_qubits:
            raise ValueError("n_max cannot exceed the qubit count")
        self.n_qubits = n_qubits
        self.n_max = n_max
        self.target = target
        self.z = _z_signs(n_qubits, target)

        self.subsets = []
        for n in range(n_max + 1):
            self.subsets.extend(itertools.combinations(range(n_qubits), n))
        self.dim = 1 + len(self.subsets)
        if self.dim > dim_cap:
            raise ValueError(f"reduced basis dimension {self.dim} exceeds cap {dim_cap}")
        self._index = {s: 1 + i for i, s in enumerate(self.subsets)}

        root = 2.0 ** (-n_qubits / 2.0)
        self.eta = np.array([np.prod(self.z[list(s)]) if s else 1.0 for s in self.subsets])
        self.g = root * self.eta  # <S|G> per excitation member
        self.shell = np.array([len(s) for s in self.subsets])

        gram = np.eye(self.dim)
        gram[0, 1:] = self.g
        gram[1:, 0] = self.g
        chol = scipy.linalg.cholesky(gram, lower=True)
        self.coords = scipy.linalg.solve_triangular(chol, np.eye(self.dim), lower=True).T

        self._u = np.concatenate(([1.0], self.g))  # <a|G> over set members
        self._h0_set = self._build_h0_set()
        self._hg_set = -0.5 * n_qubits * np.outer(self._u, self._u)
        self.h0 = self._compress(self._h0_set)
        self.hg = self._compress(self._hg_set)

    # -- set-coordinate matrices (exact inner products of raw members) ------

    def _compress(self, m):
        return self.coords.conj().T @ m @ self.coords

    def _build_h0_set(self):
        n = self.n_qubits
        diag = -(n - 2 * self.shell) / 2.0
        m = np.zeros((self.dim, self.dim))
        m[1:, 1:] = np.diag(diag)
        m[0, 1:] = diag * self.g  # H_0 |S> is an eigenstate, so this is exact
        m[1:, 0] = m[0, 1:]
        return m

    def sigma_x_set(self, site):
        m = np.zeros((self.dim, self.dim))
        for s, a in self._index.items():
            m[a, a] = -1.0 if site in s else 1.0
            m[a, 0] = self.g[a - 1] * (-1.0 if site in s else 1.0)
            m[0, a] = m[a, 0]
        return m

    def sigma_y_set(self, site):
        m = np.zeros((self.dim, self.dim), dtype=np.complex128)
        zi = self.z[site]
        for s, a in self._index.items():
            if site in s:
                partner = tuple(x for x in s if x != site)
                b = self._index.get(partner)
                if b is not None:
                    m[b, a] = 1j
                    m[a, b] = -1j
            col = 1j * zi * self.g[a - 1] * (-1.0 if site in s else 1.0)
            m[a, 0] = col
            m[0, a] = np.conj(col)
        return m

    def sigma_x(self, site):
        return self._compress(self.sigma_x_set(site))

    def sigma_y(self, site):
        return self._compress(self.sigma_y_set(site))

    def hamiltonian(self, s: float):
        return (1.0 - s) * self.h0 + s * self.hg

    def grover_h0_element(self, subset) -> float:
        """<G| H_0 |S> = -(N - 2n) (prod_i c_i) / 2^(N/2+1) for |S| = n."""
        n = self.n_qubits
        eta = np.prod(self.z[list(subset)]) if subset else 1.0
        return -(n - 2 * len(subset)) * eta / 2.0 ** (n / 2.0 + 1.0)

    # -- dense embedding for verification on small N ------------------------

    def set_vectors_dense(self):
        n = self.n_qubits
        dim = 2 ** n
        if dim > 4096:
            raise ValueError("dense embedding limited to N <= 12")
        b = np.arange(dim)
        signs = np.array([1 - 2 * ((b >> i) & 1) for i in range(n)])  # s_i(b)
        vecs = np.zeros((dim, self.dim))
        vecs[self.target, 0] = 1.0
        plus = np.full(dim, 2.0 ** (-n / 2.0))
        for idx, s in enumerate(self.subsets):
            v = plus.copy()
            for i in s:
                v = v * signs[i]
            vecs[:, 1 + idx] = v
        return vecs

    def basis_vectors_dense(self):
        return self.set_vectors_dense() @ self.coords

    def gram_matrix(self):
        v = self.basis_vectors_dense()
        return v.T @ v


class SymmetricReducedBasis:
    """Reduced basis symmetrized over the undriven spins.

    With m driven spins and an all-zeros target, the dynamics of a state that
    starts permutation-symmetric over the undriven spins stays in the sector
    labeled by (A, k): A the flipped subset of driven spins, k the number of
    flipped undriven spins, |A| + k <= n_max.  This is an exact restriction
    of ReducedGroverBasis, at a dimension small enough for long evolutions.
    """

    def __init__(self, n_qubits: int, n_max: int, n_driven: int):
        if n_driven > n_qubits:
            raise ValueError("more driven spins than qubits")
        self.n_qubits = n_qubits
        self.n_max = n_max
        self.n_driven = n_driven
        nu = n_qubits - n_driven

        self.labels = []
        for a_mask in range(2 ** n_driven):
            na = bin(a_mask).count("1")
            for k in range(min(n_max - na, nu) + 1):
                self.labels.append((a_mask, k))
        self.dim = 1 + len(self.labels)
        self._index = {lab: 1 + i for i, lab in enumerate(self.labels)}

        root = 2.0 ** (-n_qubits / 2.0)
        self.g = np.array(
            [math.sqrt(math.comb(nu, k)) * root for (_, k) in self.labels]
        )
        self.shell = np.array(
            [bin(a).count("1") + k for (a, k) in self.labels]
        )

        gram = np.eye(self.dim)
        gram[0, 1:] = self.g
        gram[1:, 0] = self.g
        chol = scipy.linalg.cholesky(gram, lower=True)
        self.coords = scipy.linalg.solve_triangular(chol, np.eye(self.dim), lower=True).T

        self._u = np.concatenate(([1.0], self.g))
        diag = -(n_qubits - 2 * self.shell) / 2.0
        h0 = np.zeros((self.dim, self.dim))
        h0[1:, 1:] = np.diag(diag)
        h0[0, 1:] = diag * self.g
        h0[1:, 0] = h0[0, 1:]
        self.h0 = self._compress(h0)
        self.hg = self._compress(-0.5 * n_qubits * np.outer(self._u, self._u))

    def _compress(self, m):
        return self.coords.conj().T @ m @ self.coords

    def sigma_x(self, driven_index):
        m = np.zeros((self.dim, self.dim))
        for (a_mask, k), a in self._index.items():
            inside = (a_mask >> driven_index) & 1
            sgn = -1.0 if inside else 1.0
            m[a, a] = sgn
            m[a, 0] = self.g[a - 1] * sgn
            m[0, a] = m[a, 0]
        return self._compress(m)

    def sigma_y(self, driven_index):
        m = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for (a_mask, k), a in self._index.items():
            inside = (a_mask >> driven_index) & 1
            partner = self._index.get((a_mask ^ (1 << driven_index), k))
            if partner is not None:
                m[partner, a] = 1j if inside else -1j
            col = 1j * self.g[a - 1] * (-1.0 if inside else 1.0)
            m[a, 0] = col
            m[0, a] = np.conj(col)
        return self._compress(m)

    def hamiltonian(self, s: float):
        return (1.0 - s) * self.h0 + s * self.hg
