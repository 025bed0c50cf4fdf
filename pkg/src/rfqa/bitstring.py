"""Tunneling between near-classical bit-string minima under transverse-field
magnitude modulation.

Deep in a spin-glass phase, an anneal that ramps a longitudinal bias drives
an N-spin tunneling event between two polarized minima |G> and |E>.  The
tunneling matrix element is an N-th order process through all sequences of
single-spin flips, so the minimum gap is proportional to the product of all
transverse fields:

    Delta_min ~ N! prod_i kappa_i / chi_{N-1},   chi_p = prod_{m<=p} eps_m,

with eps_m the mean excitation energy m flips from the minimum.  Modulating
the field magnitudes kappa_i -> kappa_i (1 + abar_i sin(w_i t)) therefore
modulates the gap multiplicatively,

    Delta(t) ~ Delta_min prod_i (M0 + alpha_i sin(w_i t)),

with (M0, alpha) effective parameters that lag the bare modulation.  The
sidebands at all tone combinations mix the two wells incoherently, boosting
the solution rate by M0^N (1 + alpha^2/2)^N.  The testbed is the
all-to-all-connected ferromagnet (AAFM)

    H = -(1/N)(sum_i sz_i)^2 + ((1-2s)/2N) sum_i sz_i - kappa sum_i sx_i,

annealed by s(t) = t/t_f from the all-down to the all-up well.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import DENSE_CAP, DenseCapError
from .kernels import evolve_aafm
from .rng import rng_stream
from .symmetric import collective_sx_matrix, collective_sz_values


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass
class SpinGlassSpec:
    """Classical Ising energy sum_ij J_ij sz_i sz_j + sum_i beta_i sz_i with
    per-site transverse fields kappa_i."""

    n_qubits: int
    couplings: np.ndarray
    fields: np.ndarray | None = None
    kappas: np.ndarray | float = 0.5

    def __post_init__(self):
        n = self.n_qubits
        self.couplings = np.asarray(self.couplings, dtype=float)
        if self.couplings.shape != (n, n):
            raise ValueError("couplings must be an N x N matrix")
        if not np.allclose(self.couplings, self.couplings.T):
            raise ValueError("couplings must be symmetric")
        if np.any(np.abs(np.diag(self.couplings)) > 1e-12):
            raise ValueError("couplings must have zero diagonal")
        if self.fields is None:
            self.fields = np.zeros(n)
        self.fields = np.asarray(self.fields, dtype=float)
        if np.isscalar(self.kappas) or np.ndim(self.kappas) == 0:
            self.kappas = np.full(n, float(self.kappas))
        self.kappas = np.asarray(self.kappas, dtype=float)
        if not (np.all(np.isfinite(self.couplings))
                and np.all(np.isfinite(self.fields))
                and np.all(np.isfinite(self.kappas))):
            raise ValueError("spin-glass parameters must be finite")

    def classical_energy(self, bits: int) -> float:
        """Energy of the z-basis configuration given as a bit mask
        (bit i set means sz_i = -1)."""
        n = self.n_qubits
        sz = np.array([1.0 - 2.0 * ((bits >> i) & 1) for i in range(n)])
        return float(sz @ self.couplings @ sz + self.fields @ sz)


def aafm_spec(n_qubits: int, s: float = 0.5, kappa: float = 0.5) -> SpinGlassSpec:
    """SpinGlassSpec for the all-to-all ferromagnet at annealing parameter s."""
    n = n_qubits
    j = np.full((n, n), -1.0 / n)
    np.fill_diagonal(j, 0.0)
    beta = np.full(n, (1.0 - 2.0 * s) / (2.0 * n))
    return SpinGlassSpec(n, j, beta, kappa)


@dataclass
class TunnelingModel:
    """Perturbative N-spin tunneling summary: mean excitation energies,
    cumulative products, and the resulting gap estimate."""

    eps_n: np.ndarray
    chi: np.ndarray
    delta_min: float


@dataclass
class RfqamDrive:
    """Transverse-field magnitude modulation: kappa_i(t) = kappa (1 +
    abar_i sin(w_i t)) with signed bare amplitudes |abar| < 1."""

    bare_amplitude: float
    m0: float = 1.0
    alpha: float | None = None
    signs: np.ndarray | None = None
    frequencies: np.ndarray | None = None
    groups: list = field(default_factory=list)

    def __post_init__(self):
        if not 0.0 <= abs(self.bare_amplitude) < 1.0:
            raise ValueError("magnitude modulation requires |abar| < 1")
        if not 0.0 < self.m0 <= 1.0:
            raise ValueError("M0 must lie in (0, 1]")
        if self.alpha is None:
            self.alpha = abs(self.bare_amplitude)


# ---------------------------------------------------------------------------
# perturbative gap and rate predictors
# ---------------------------------------------------------------------------

def tunneling_model(spec: SpinGlassSpec, ground: int, excited: int) -> TunnelingModel:
    """Perturbative tunneling data between two configurations differing in
    every bit, with eps_n averaged over all C(N,n) intermediate shells by
    exact enumeration."""
    n = spec.n_qubits
    if ground ^ excited != (1 << n) - 1:
        raise ValueError("the two minima must differ in all N bits")
    if n > 16:
        raise ValueError("exact shell enumeration limited to N <= 16")
    e_ground = spec.classical_energy(ground)
    eps = np.zeros(n + 1)
    import itertools
    for k in range(1, n):
        vals = [spec.classical_energy(
                    ground ^ sum(1 << i for i in sites))
                for sites in itertools.combinations(range(n), k)]
        eps[k] = float(np.mean(vals)) - e_ground
    if np.any(eps[1:n] <= 0):
        raise ValueError(
            "non-positive mean excitation energy: a low-energy flip path "
            "violates the perturbative product approximation")
    chi = np.cumprod(eps[1:n])  # chi[p-1] = prod_{m<=p} eps_m
    # two degenerate minima coupled at Nth order split by twice the
    # effective matrix element (N! flip orderings, averaged denominators)
    delta = 2.0 * math.factorial(n) * float(np.prod(spec.kappas)) / chi[-1]
    return TunnelingModel(eps[1:n], chi, delta)


def delta_min_perturbative(spec: SpinGlassSpec, ground: int = 0,
                           excited: int | None = None) -> float:
    """Perturbative minimum gap 2 N! (prod_i kappa_i) / chi_{N-1}."""
    if spec.n_qubits == 1:
        return 2.0 * float(spec.kappas[0])
    if excited is None:
        excited = (1 << spec.n_qubits) - 1 - ground
    return tunneling_model(spec, ground, excited).delta_min


def predict_rfqam_rate(delta_min: float, w_window: float, m0: float,
                       alpha: float, n_qubits: int):
    """Driven tunneling rate from the modulated-gap expansion.

    Returns (sum_form, closed_form):
        Gamma_T = (Delta_min^2 / W) M0^N sum_n C(N,n) (alpha^2/2)^n
                = (Delta_min^2 / W) M0^N (1 + alpha^2/2)^N.
    """
    n = n_qubits
    x = alpha ** 2 / 2.0
    terms = [math.comb(n, k) * x ** k for k in range(n + 1)]
    sum_form = delta_min ** 2 / w_window * m0 ** n * math.fsum(terms)
    closed_form = delta_min ** 2 / w_window * m0 ** n * (1.0 + x) ** n
    return sum_form, closed_form


def phase_lock_spectrum(m0: float, alpha: float, p_group: int,
                        n_harmonics: int = 64):
    """Harmonic content of the phase-locked gap envelope (M0 + alpha
    sin th)^P over one period.

    Returns (squared harmonic amplitudes for harmonics 0..n_harmonics,
    total squared weight excluding DC).  Amplitude convention: harmonic k
    carries |c_k|^2 + |c_-k|^2 from the complex Fourier series, so the
    P=1 envelope has first-harmonic squared weight 2 (alpha/2)^2 =
    alpha^2/2, matching the per-tone weight in the rate expansion.
    """
    if p_group < 1:
        raise ValueError("group size must be >= 1")
    n_grid = max(8 * (p_group + n_harmonics), 256)
    theta = 2.0 * math.pi * np.arange(n_grid) / n_grid
    signal = (m0 + alpha * np.sin(theta)) ** p_group
    coeffs = np.fft.rfft(signal) / n_grid
    nh = min(n_harmonics, len(coeffs) - 1)
    weights = np.empty(nh + 1)
    weights[0] = abs(coeffs[0]) ** 2
    weights[1:] = 2.0 * np.abs(coeffs[1:nh + 1]) ** 2
    total = float(np.sum(weights[1:]))
    return weights, total


def phase_lock_asymptotic(m0: float, alpha: float, p_group: int,
                          subtract_power: bool = True) -> float:
    """Quoted scaling of the total phase-locked drive weight:
    ((M0+alpha)^P - M0^P)^2 / sqrt(P) (subtract_power=False uses the
    printed variant with a bare M0 subtrahend)."""
    sub = m0 ** p_group if subtract_power else m0
    return ((m0 + alpha) ** p_group - sub) ** 2 / math.sqrt(p_group)


# ---------------------------------------------------------------------------
# AAFM construction and ED helpers
# ---------------------------------------------------------------------------

def aafm_diagonals(n_qubits: int):
    """(quadratic, bias) diagonal pieces of the AAFM over the 2^N z basis;
    the bias carries the unit coefficient (1-2s)."""
    n = n_qubits
    dim = 1 << n
    b = np.arange(dim)
    ones = np.zeros(dim, dtype=np.int64)
    for i in range(n):
        ones += (b >> i) & 1
    msum = (n - 2 * ones).astype(float)  # sum_i sz_i per configuration
    quad = -msum ** 2 / n
    bias = msum / (2.0 * n)
    return quad, bias


def aafm_symmetric_h(n_qubits: int, s: float, kappa: float) -> np.ndarray:
    """AAFM restricted to the permutation-symmetric sector (exact for a
    uniform static transverse field)."""
    n = n_qubits
    msum = collective_sz_values(n)
    h = np.diag(-msum ** 2 / n + (1.0 - 2.0 * s) / (2.0 * n) * msum)
    h += -kappa * collective_sx_matrix(n)
    return h


def aafm_dense_h(n_qubits: int, s: float, kappas) -> np.ndarray:
    """Full 2^N AAFM matrix with per-site transverse fields."""
    n = n_qubits
    dim = 1 << n
    if dim > DENSE_CAP:
        raise DenseCapError(f"2^{n} exceeds the dense cap {DENSE_CAP}")
    if np.isscalar(kappas) or np.ndim(kappas) == 0:
        kappas = np.full(n, float(kappas))
    quad, bias = aafm_diagonals(n)
    h = np.diag(quad + (1.0 - 2.0 * s) * bias)
    b = np.arange(dim)
    for i in range(n):
        h[b, b ^ (1 << i)] += -kappas[i]
    return h


def aafm_min_gap(n_qubits: int, kappa: float, kappas=None):
    """Minimum AAFM gap over s.

    By well-to-well symmetry the gap is minimal at s = 1/2; with per-site
    fields (kappas given) the full basis is used, otherwise the symmetric
    sector suffices.
    """
    if kappas is None:
        vals = np.linalg.eigvalsh(aafm_symmetric_h(n_qubits, 0.5, kappa))
    else:
        vals = np.linalg.eigvalsh(aafm_dense_h(n_qubits, 0.5, kappas))
    return float(vals[1] - vals[0])


def effective_params(n_qubits: int, kappa: float, bare_amplitude: float,
                     n_phases: int = 24):
    """Measured gap response to modulating one transverse field.

    Scales kappa_1 by (1 + abar sin(phi)) over a phase grid, recomputes the
    ED minimum gap, and fits Delta(phi)/Delta_min to M0 + alpha sin(phi).
    Returns (M0, alpha, residual RMS of the sinusoidal fit).
    """
    if not 0.0 <= abs(bare_amplitude) < 1.0:
        raise ValueError("|abar| < 1 required")
    base = aafm_min_gap(n_qubits, kappa)
    phis = 2.0 * math.pi * np.arange(n_phases) / n_phases
    resp = np.empty(n_phases)
    kappas = np.full(n_qubits, kappa)
    for i, phi in enumerate(phis):
        k = kappas.copy()
        k[0] = kappa * (1.0 + bare_amplitude * math.sin(phi))
        resp[i] = aafm_min_gap(n_qubits, kappa, kappas=k) / base
    m0 = float(np.mean(resp))
    alpha = 2.0 * float(np.mean(resp * np.sin(phis)))
    residual = float(np.sqrt(np.mean(
        (resp - m0 - alpha * np.sin(phis)) ** 2)))
    return m0, alpha, residual


# ---------------------------------------------------------------------------
# annealing experiment
# ---------------------------------------------------------------------------

@dataclass
class AnnealCurve:
    t_finals: np.ndarray
    probability: np.ndarray
    std_error: np.ndarray
    n_tone_sets: int
    n_failed: int = 0
    per_set: np.ndarray | None = None  # (tone set, t_f) success curves


def run_rfqam_anneal(n_qubits: int, kappa: float, drive: RfqamDrive | None,
                     t_finals, n_tone_sets: int = 100, seed: int = 0,
                     eps_step: float = 0.1,
                     freq_range=None) -> AnnealCurve:
    """Anneal the AAFM from the s=0 ground state to s=1 and record the
    overlap with the exact s=1 ground state for each runtime.

    drive=None (or zero amplitude) gives the deterministic static baseline;
    otherwise each tone set draws signed amplitudes +-abar and per-spin
    cycle counts u_i uniform in [2, 20], realized at every runtime as the
    angular frequency w_i = 2 pi u_i / t_f.  Scaling the frequencies with
    the runtime keeps each tone resolved (>= 2 full periods) at every
    t_f: a fixed absolute window would leave the slow tones stuck near
    their sin ~ 0 start at short runtimes and lose the drive enhancement,
    while tones much faster than the local excitation gap heat the system
    out of the two-well manifold.  All tones start at sin = 0 so the
    initial state is the exact undriven ground state (no phase quench).
    Pass freq_range to override the cycle-count window (2, 20).
    """
    n = n_qubits
    dim = 1 << n
    if dim > DENSE_CAP:
        raise DenseCapError(f"2^{n} exceeds the dense cap {DENSE_CAP}")
    t_finals = np.atleast_1d(np.asarray(t_finals, dtype=float))

    quad, bias = aafm_diagonals(n)
    # states and spectral norm for the step size
    h0 = aafm_dense_h(n, 0.0, kappa)
    vals0, vecs0 = np.linalg.eigh(h0)
    psi0 = vecs0[:, 0].astype(np.complex128)
    h1 = aafm_dense_h(n, 1.0, kappa)
    vals1, vecs1 = np.linalg.eigh(h1)
    target = vecs1[:, 0].astype(np.complex128)
    shift = 0.5 * (vals0[0] + vals0[-1])
    quad = quad - shift
    hnorm = 0.5 * (vals0[-1] - vals0[0]) + kappa * n * abs(
        drive.bare_amplitude if drive else 0.0)
    h = eps_step / hnorm

    static = drive is None or drive.bare_amplitude == 0.0
    sets = 1 if static else n_tone_sets
    rng = rng_stream(seed, 3)
    proj = np.arange(0)  # populations not sampled during the anneal
    per_set = np.full((sets, len(t_finals)), np.nan)
    n_failed = 0
    if freq_range is None:
        freq_range = (2.0, 20.0)
    phases = np.zeros(n)
    for iset in range(sets):
        if static:
            abars = np.zeros(n)
            cycles = np.ones(n)
        else:
            signs = rng.choice(np.array([-1.0, 1.0]), size=n)
            abars = drive.bare_amplitude * signs
            cycles = rng.uniform(freq_range[0], freq_range[1], size=n)
        for it, tf in enumerate(t_finals):
            omegas = 2.0 * math.pi * cycles / tf
            h_t = h if static else min(
                h, 2.0 * math.pi / (50.0 * float(np.max(omegas))))
            _, _, psi, drift = evolve_aafm(
                psi0.copy(), n, quad, bias, tf, kappa, abars, omegas,
                phases, tf, h_t, proj, 1 << 30)
            if drift > 1e-5:
                n_failed += 1
                continue
            per_set[iset, it] = abs(np.vdot(target, psi)) ** 2
    probs = np.nanmean(per_set, axis=0)
    counts = np.sum(~np.isnan(per_set), axis=0)
    if sets > 1:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            spread = np.nanstd(per_set, axis=0, ddof=1)
        errs = np.where(counts > 1,
                        spread / np.sqrt(np.maximum(counts, 1)), 0.0)
    else:
        errs = np.zeros_like(probs)
    return AnnealCurve(t_finals, probs, errs, sets, n_failed, per_set)


def tunneling_rate(curve: AnnealCurve, driven: bool):
    """Total incoherent rate Gamma_T of an anneal curve.

    Gamma_T is defined by fitting the tone-set ENSEMBLE MEAN to
    P = P_max (1 - exp(-4 pi Gamma_T t_f)): individual tone sets evolve
    coherently (their success curves oscillate and can exceed 1/2), and
    only the ensemble average follows the incoherent law.  P_max is left
    free in (0, 1]: the ensemble saturates near 1/2 only as t_f -> inf,
    and clamping it at 1/2 on a grid that ends before saturation biases
    the rate.  The static curve is a coherent sweep saturating at 1
    (P_max fixed).  Returns (gamma, gamma_se) from the weighted fit.
    """
    from .fits import extract_rate
    fit = extract_rate(curve.t_finals, curve.probability,
                       curve.std_error if driven else None,
                       p_max_bound=1.0,
                       fix_p_max=not driven)
    return fit.gamma, fit.gamma_se
