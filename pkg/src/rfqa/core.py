"""State vectors, time-dependent Hamiltonians, and norm-preserving propagation.

All Hamiltonians in scope are diagonal-plus-single-spin-flip in the chosen
basis, so the matrix-free apply costs O(N 2^N) per call.  Dense matrices are
only materialized for small dimensions (tests, exact diagonalization).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

DENSE_CAP = 2 ** 14

TWO_LEVEL = "two_level"
FULL_Z_BASIS = "full_z_basis"
REDUCED_GROVER_BASIS = "reduced_grover_basis"


class DimensionMismatchError(ValueError):
    pass


class StepUnderflowError(RuntimeError):
    def __init__(self, t, h):
        super().__init__(f"integration step underflow at t={t} (h={h})")
        self.t = t
        self.h = h


class HermiticityError(ValueError):
    pass


class DenseCapError(ValueError):
    pass


@dataclass
class QuantumState:
    """Normalized complex amplitude vector over a labeled basis."""

    amplitudes: np.ndarray
    basis_kind: str = FULL_Z_BASIS
    norm_tol: float = 1e-9

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.ndim != 1:
            raise ValueError("amplitudes must be a 1-d vector")
        n = np.linalg.norm(self.amplitudes)
        if abs(n - 1.0) > self.norm_tol:
            raise ValueError(f"state norm {n} deviates from 1 beyond {self.norm_tol}")
        if self.basis_kind == TWO_LEVEL and self.dim != 2:
            raise ValueError("two_level basis requires dimension 2")
        if self.basis_kind == FULL_Z_BASIS and 2 ** self.n_qubits != self.dim:
            raise ValueError("full_z_basis dimension must be a power of two")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.dim)))

    def overlap(self, other: "QuantumState") -> complex:
        return complex(np.vdot(other.amplitudes, self.amplitudes))

    def fidelity(self, other: "QuantumState") -> float:
        return abs(self.overlap(other)) ** 2

    def copy(self) -> "QuantumState":
        return QuantumState(self.amplitudes.copy(), self.basis_kind)


def basis_state(dim: int, index: int, basis_kind: str = FULL_Z_BASIS) -> QuantumState:
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return QuantumState(amps, basis_kind)


def paramagnet_ground_state(n_qubits: int) -> QuantumState:
    """|+>^N, the ground state of -1/2 sum_i sigma_i^x."""
    dim = 2 ** n_qubits
    amps = np.full(dim, 2.0 ** (-n_qubits / 2.0), dtype=np.complex128)
    return QuantumState(amps, FULL_Z_BASIS)


# ---------------------------------------------------------------------------
# Operator descriptors


class DiagonalOp:
    """Real diagonal operator given by its diagonal vector."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.float64)
        self.dim = self.values.shape[0]

    def apply(self, psi):
        return self.values * psi

    def dense(self):
        return np.diag(self.values).astype(np.complex128)

    def norm_bound(self):
        return float(np.max(np.abs(self.values))) if self.dim else 0.0


class SpinFlipOp:
    """sigma_i^x or sigma_i^y acting on an N-qubit z basis (bit 0 = qubit 0)."""

    def __init__(self, site: int, axis: str, n_qubits: int):
        if axis not in ("x", "y"):
            raise ValueError("axis must be 'x' or 'y'")
        self.site = site
        self.axis = axis
        self.n_qubits = n_qubits
        self.dim = 2 ** n_qubits
        self._mask = 1 << site

    def apply(self, psi):
        idx = np.arange(self.dim) ^ self._mask
        flipped = psi[idx]
        if self.axis == "x":
            return flipped
        bits = (np.arange(self.dim) >> self.site) & 1
        return 1j * (2 * bits - 1) * flipped

    def dense(self):
        m = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for j in range(self.dim):
            k = j ^ self._mask
            if self.axis == "x":
                m[k, j] = 1.0
            else:
                bit = (k >> self.site) & 1
                m[k, j] = 1j * (2 * bit - 1)
        return m

    def norm_bound(self):
        return 1.0


class DenseOp:
    """Explicit Hermitian matrix, for small bases (two-level, reduced Grover)."""

    def __init__(self, matrix, hermiticity_tol: float = 1e-10):
        m = np.asarray(matrix, dtype=np.complex128)
        dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if dev > hermiticity_tol * max(1.0, np.max(np.abs(m))):
            raise HermiticityError(f"matrix deviates from Hermitian by {dev}")
        self.matrix = m
        self.dim = m.shape[0]
        self._norm = float(np.linalg.norm(m, 2)) if self.dim <= 2048 else float(
            np.linalg.norm(m, np.inf)
        )

    def apply(self, psi):
        return self.matrix @ psi

    def dense(self):
        return self.matrix.copy()

    def norm_bound(self):
        return self._norm


# ---------------------------------------------------------------------------
# Drive envelopes.  Each exposes max_abs and max_frequency for step control.


@dataclass
class SineEnvelope:
    """amplitude * sin(2 pi f t + phase)."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __call__(self, t):
        return self.amplitude * np.sin(2.0 * np.pi * self.frequency * t + self.phase)

    @property
    def max_abs(self):
        return abs(self.amplitude)

    @property
    def max_frequency(self):
        return self.frequency


@dataclass
class CosineEnvelope:
    """amplitude * cos(2 pi f t + phase)."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __call__(self, t):
        return self.amplitude * np.cos(2.0 * np.pi * self.frequency * t + self.phase)

    @property
    def max_abs(self):
        return abs(self.amplitude)

    @property
    def max_frequency(self):
        return self.frequency


@dataclass
class TrigOfSineEnvelope:
    """scale * trig(alpha_bar * ramp(t) * sin(2 pi f t)).

    trig is 'sin' or 'cos'; ramp is tanh(t / ramp_time) when ramp_time is set,
    otherwise 1.  This is the per-spin modulation of a transverse field whose
    direction rotates in the x-y plane.
    """

    trig: str
    alpha_bar: float
    frequency: float
    scale: float = 1.0
    ramp_time: float | None = None

    def __post_init__(self):
        if self.trig not in ("sin", "cos"):
            raise ValueError("trig must be 'sin' or 'cos'")

    def _angle(self, t):
        a = self.alpha_bar
        if self.ramp_time is not None:
            a = a * np.tanh(t / self.ramp_time)
        return a * np.sin(2.0 * np.pi * self.frequency * t)

    def __call__(self, t):
        ang = self._angle(t)
        return self.scale * (np.sin(ang) if self.trig == "sin" else np.cos(ang))

    @property
    def max_abs(self):
        return abs(self.scale)

    @property
    def max_frequency(self):
        # harmonic content extends to roughly (|alpha|+2) f
        return self.frequency * (abs(self.alpha_bar) + 2.0)


@dataclass
class EnvelopeHint:
    """Wrap an arbitrary callable with the bounds needed for step control."""

    func: object
    max_abs: float
    max_frequency: float = 0.0

    def __call__(self, t):
        return self.func(t)


class TimeDependentHamiltonian:
    """Static diagonal plus (operator, coefficient) terms, some drive-modulated.

    Terms are (op, coeff) pairs where coeff is a float (static) or an envelope
    with max_abs / max_frequency attributes.  H(t) is Hermitian by construction
    for real coefficients and the operator kinds above.
    """

    def __init__(self, dim, static_diag=None, terms=()):
        self.dim = dim
        if static_diag is None:
            static_diag = np.zeros(dim)
        self.static_diag = np.asarray(static_diag, dtype=np.float64)
        if self.static_diag.shape != (dim,):
            raise DimensionMismatchError("static_diag length must equal dim")
        self.terms = []
        for op, coeff in terms:
            if op.dim != dim:
                raise DimensionMismatchError("term dimension mismatch")
            self.terms.append((op, coeff))

    def coefficient_at(self, coeff, t):
        if callable(coeff):
            v = coeff(t)
            if not np.isfinite(v):
                raise ValueError(f"drive envelope not finite at t={t}")
            return float(v)
        return float(coeff)

    def apply(self, psi, t):
        """H(t) psi for a raw complex vector psi."""
        if psi.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"state dim {psi.shape[-1]} != hamiltonian dim {self.dim}"
            )
        out = self.static_diag * psi
        for op, coeff in self.terms:
            c = self.coefficient_at(coeff, t)
            if c != 0.0:
                out = out + c * op.apply(psi)
        return out

    def dense(self, t):
        if self.dim > DENSE_CAP:
            raise DenseCapError(f"dense reconstruction over cap ({self.dim})")
        m = np.diag(self.static_diag).astype(np.complex128)
        for op, coeff in self.terms:
            m += self.coefficient_at(coeff, t) * op.dense()
        return m

    def diag_shift(self):
        """Midpoint of the static diagonal range; subtracting it tightens the
        norm bound without changing physics (global phase)."""
        if self.dim == 0:
            return 0.0
        return float(0.5 * (self.static_diag.max() + self.static_diag.min()))

    def norm_bound(self):
        """Cheap upper bound on ||H(t) - shift|| from summed coefficients."""
        shift = self.diag_shift()
        bound = float(np.max(np.abs(self.static_diag - shift))) if self.dim else 0.0
        for op, coeff in self.terms:
            amp = coeff.max_abs if hasattr(coeff, "max_abs") else abs(float(coeff))
            bound += amp * op.norm_bound()
        return bound

    def max_drive_frequency(self):
        f = 0.0
        for _, coeff in self.terms:
            if hasattr(coeff, "max_frequency"):
                f = max(f, coeff.max_frequency)
        return f


def apply_hamiltonian(h: TimeDependentHamiltonian, state: QuantumState, t: float):
    """H(t)|psi> as a raw (generally unnormalized) vector."""
    if state.dim != h.dim:
        raise DimensionMismatchError(f"state dim {state.dim} != {h.dim}")
    return h.apply(state.amplitudes, t)


# ---------------------------------------------------------------------------
# Propagation


@dataclass
class StepControl:
    """Fixed-step RK4 control.

    h = min(eps_step / ||H||_bound, 1 / (freq_factor * f_max)).  The default
    eps_step favors throughput; tighten it when a drift budget below ~1e-6
    per 1e3 time units is required.
    """

    eps_step: float = 0.05
    freq_factor: float = 50.0
    renorm_interval: int = 1000
    min_step: float = 1e-12
    max_steps: int = 500_000_000


@dataclass
class EvolveDiagnostics:
    n_steps: int = 0
    step_size: float = 0.0
    cumulative_drift: float = 0.0
    max_drift: float = 0.0
    renormalizations: int = 0


def _choose_step(h: TimeDependentHamiltonian, control: StepControl) -> float:
    bound = h.norm_bound()
    step = control.eps_step / bound if bound > 0 else np.inf
    fmax = h.max_drive_frequency()
    if fmax > 0:
        step = min(step, 1.0 / (control.freq_factor * fmax))
    return step


def evolve(
    state: QuantumState,
    h: TimeDependentHamiltonian,
    t0: float,
    t1: float,
    step_control: StepControl | None = None,
):
    """Integrate i d|psi>/dt = H(t)|psi> from t0 to t1 (hbar = 1).

    Classical fixed-step RK4 with periodic renormalization; the state is
    renormalized at output and the accumulated pre-renormalization norm
    drift is recorded in the returned diagnostics.
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    if state.dim != h.dim:
        raise DimensionMismatchError(f"state dim {state.dim} != {h.dim}")
    control = step_control or StepControl()
    diag = EvolveDiagnostics()
    if t1 == t0:
        return state.copy(), diag

    span = t1 - t0
    raw_step = _choose_step(h, control)
    if not np.isfinite(raw_step):
        raw_step = span
    n_steps = max(1, int(math.ceil(span / raw_step)))
    if n_steps > control.max_steps:
        raise StepUnderflowError(t0, span / n_steps)
    dt = span / n_steps
    if dt < control.min_step * max(1.0, abs(t1)):
        raise StepUnderflowError(t0, dt)
    diag.n_steps = n_steps
    diag.step_size = dt

    shift = h.diag_shift()
    ham = h
    if shift != 0.0:
        ham = TimeDependentHamiltonian(h.dim, h.static_diag - shift, h.terms)

    psi = state.amplitudes.copy()
    t = t0
    since_renorm = 0
    for step in range(n_steps):
        k1 = -1j * ham.apply(psi, t)
        k2 = -1j * ham.apply(psi + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = -1j * ham.apply(psi + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = -1j * ham.apply(psi + dt * k3, t + dt)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + (step + 1) * dt
        since_renorm += 1
        if since_renorm >= control.renorm_interval:
            norm = np.linalg.norm(psi)
            drift = abs(norm - 1.0)
            diag.cumulative_drift += drift
            diag.max_drift = max(diag.max_drift, drift)
            psi /= norm
            diag.renormalizations += 1
            since_renorm = 0

    norm = np.linalg.norm(psi)
    drift = abs(norm - 1.0)
    diag.cumulative_drift += drift
    diag.max_drift = max(diag.max_drift, drift)
    psi /= norm
    if shift != 0.0:
        psi = psi * np.exp(-1j * shift * span)
    return QuantumState(psi, state.basis_kind), diag


# ---------------------------------------------------------------------------
# Exact diagonalization


def eigensystem(h_dense, dense_cap: int = DENSE_CAP, hermiticity_tol: float = 1e-9):
    """Eigenvalues (ascending) and eigenvectors of a dense Hermitian matrix.

    Residuals ||H v - lam v|| <= 1e-9 ||H|| are spot-checked for small
    dimensions; above that the LAPACK guarantee is relied upon.
    """
    m = np.asarray(h_dense)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if m.shape[0] > dense_cap:
        raise DenseCapError(f"dimension {m.shape[0]} exceeds dense cap {dense_cap}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > hermiticity_tol * scale:
        raise HermiticityError(f"input deviates from Hermitian by {dev}")
    vals, vecs = scipy.linalg.eigh(m)
    if m.shape[0] <= 1024:
        hnorm = np.linalg.norm(m, 2)
        resid = np.linalg.norm(m @ vecs - vecs * vals, axis=0)
        if hnorm > 0 and np.max(resid) > 1e-9 * hnorm:
            raise RuntimeError(f"eigenpair residual {np.max(resid)} over tolerance")
    return vals, vecs
