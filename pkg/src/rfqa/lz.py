"""Landau-Zener sweeps of a two-level system through many oscillating
transverse tones.

The model is
    H(t) = (eps(t)/2) sz + (2 sum_i Omega_i cos(w_i t + phi_i)) sx,
with the bias eps swept linearly from -W/2 to +W/2 over t_f.  Each tone of
Rabi frequency Omega_i whose (angular) frequency lies inside the swept
energy window contributes an incoherent mixing channel, so the excited
population follows

    P1(t_f) = 0.5 (1 - exp(-4 pi Gamma_T t_f)),
    Gamma_T = sum_{in-window} |Omega_i|^2 / W,

independent of how the total drive power is split among tones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import lz_sweep_batch
from .rng import rng_stream


@dataclass
class ToneSet:
    """Oscillating transverse tones: Rabi frequencies (signed), angular
    frequencies, and phases."""

    rabi: np.ndarray
    frequencies: np.ndarray
    phases: np.ndarray | None = None

    def __post_init__(self):
        self.rabi = np.atleast_1d(np.asarray(self.rabi, dtype=float))
        self.frequencies = np.atleast_1d(
            np.asarray(self.frequencies, dtype=float))
        if len(self.rabi) != len(self.frequencies):
            raise ValueError("one frequency per tone required")
        if self.phases is None:
            self.phases = np.zeros(len(self.rabi))
        self.phases = np.atleast_1d(np.asarray(self.phases, dtype=float))
        if len(self.phases) != len(self.rabi):
            raise ValueError("one phase per tone required")

    def __len__(self):
        return len(self.rabi)

    def in_window(self, w_window: float) -> np.ndarray:
        """Mask of tones whose frequency lies inside the swept range.

        The instantaneous splitting |eps| covers [0, W/2] during the sweep,
        so only tones with |w_i| <= W/2 become resonant.
        """
        return np.abs(self.frequencies) <= 0.5 * w_window


@dataclass
class LzSweep:
    """One sweep specification: window width, duration, longitudinal noise."""

    w_window: float
    t_f: float
    noise_amplitude: float = 0.0
    noise_kind: str = "none"
    noise_correlation_time: float = 10.0

    def __post_init__(self):
        if self.w_window <= 0:
            raise ValueError("window width must be positive")
        if self.t_f < 0:
            raise ValueError("sweep time must be non-negative")
        if self.noise_amplitude < 0:
            raise ValueError("noise amplitude must be non-negative")
        if self.noise_kind not in ("none", "random_telegraph", "gaussian_ou"):
            raise ValueError("unknown noise kind")
        if self.noise_correlation_time <= 0:
            raise ValueError("noise correlation time must be positive")


@dataclass
class HeatingParams:
    """Inputs of the off-resonant heating bound for drive ramps.

    The per-cycle excitation probability decays exponentially in
    delta_local^2 / (alpha kappa omega); k_fit is the model-dependent
    proportionality constant (an input, never derived).
    """

    delta_local: float
    alpha: float
    kappa: float
    k_fit: float
    n_qubits: int
    c_exponent: float
    gamma: float = 1.0
    delta_margin: float = 0.2

    def __post_init__(self):
        if self.delta_local <= 0 or self.alpha <= 0 or self.delta_margin <= 0:
            raise ValueError("delta_local, alpha, delta_margin must be positive")


def lz_static_probability(omega: float, w_window: float, t_f: float) -> float:
    """Transfer probability of a static avoided crossing of half-gap Omega
    swept over window W in time t_f: 1 - exp(-2 pi Omega^2 t_f / W)."""
    if omega < 0 or w_window <= 0 or t_f < 0:
        raise ValueError("arguments must be non-negative, window positive")
    return 1.0 - math.exp(-2.0 * math.pi * omega ** 2 * t_f / w_window)


def gamma_total(tones: ToneSet, w_window: float) -> float:
    """Incoherent mixing rate of a driven sweep.

    A real cosine tone inside the window crosses resonance twice per sweep
    (once at each sign of the bias), so each in-window tone carries weight
    2 |Omega_i|^2.  For tone sets drawn uniformly over the full range
    [0, W] -- where only the lower half resonates -- the expected rate is
    sum_all |Omega_i|^2 / W, the figure-of-merit quoted with the collapse
    law P1 = 0.5 (1 - exp(-4 pi Gamma_T t_f)).
    """
    mask = tones.in_window(w_window)
    return 2.0 * float(np.sum(tones.rabi[mask] ** 2)) / w_window


def multi_tone_p1(tones: ToneSet, sweep: LzSweep) -> float:
    """Analytic driven-sweep excitation probability, saturating at 1/2."""
    g = gamma_total(tones, sweep.w_window)
    return 0.5 * (1.0 - math.exp(-4.0 * math.pi * g * sweep.t_f))


def noise_broadened_rate(omega: float, w_window: float, w_r: float,
                         gamma_prime: float = 0.0) -> float:
    """Mixing rate with longitudinal noise of RMS magnitude W_r.

    The fictitious Lorentzian linewidth is replaced by max(Gamma', W_r):
        Gamma = 4 Omega^2 arctan(W / max(Gamma', W_r)) / W,
    recovering 2 pi Omega^2 / W as the linewidth vanishes and crossing
    over to ~ Delta_min^2 / W_r for W_r >> W.
    """
    if w_window <= 0 or w_r < 0 or gamma_prime < 0:
        raise ValueError("window positive; widths non-negative")
    width = max(gamma_prime, w_r)
    if width == 0.0:
        return 2.0 * math.pi * omega ** 2 / w_window
    return 4.0 * omega ** 2 * math.atan(w_window / width) / w_window


def heating_bounds(p: HeatingParams, omega_0: float):
    """Off-resonant heating bound: per-cycle excitation probability P_E and
    total no-excitation survival P_NE over a full anneal.

    With drive frequency omega = omega_0 / N^(gamma + delta), the per-spin
    per-cycle error is P_E = exp(-k_fit delta_local^2 / (alpha kappa omega))
    and the anneal of exp(c N^gamma) / N^(gamma+delta) cycles survives with
    P_NE ~ (1 - N P_E)^cycles.
    """
    n = p.n_qubits
    omega = omega_0 / n ** (p.gamma + p.delta_margin)
    pe = math.exp(-p.k_fit * p.delta_local ** 2 / (p.alpha * p.kappa * omega))
    pe = min(max(pe, 0.0), 1.0)
    base = 1.0 - n * pe
    if base < 0.0:
        raise ValueError("heating-dominated regime: N * P_E exceeds 1")
    cycles = math.exp(p.c_exponent * n ** p.gamma) / n ** (p.gamma + p.delta_margin)
    log_pne = cycles * math.log(base) if base > 0.0 else -math.inf
    pne = math.exp(log_pne) if log_pne > -745.0 else 0.0
    return pe, min(max(pne, 0.0), 1.0)


def draw_tone_set(n_tones: int, rabi_magnitude: float, w_window: float,
                  rng) -> ToneSet:
    """Random tone set for a sweep: signed equal-magnitude Rabi amplitudes,
    frequencies uniform over the full energetic range (0, W) -- of which
    only the lower half becomes resonant during the sweep -- and random
    phases."""
    signs = rng.choice(np.array([-1.0, 1.0]), size=n_tones)
    freqs = rng.uniform(0.0, w_window, size=n_tones)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=n_tones)
    return ToneSet(rabi_magnitude * signs, freqs, phases)


@dataclass
class LzEstimate:
    probability: np.ndarray
    std_error: np.ndarray
    t_finals: np.ndarray
    n_traces: int


def _noise_paths(sweep: LzSweep, n_traces: int, t_max: float, rng):
    """Per-trace piecewise-constant longitudinal noise of RMS amplitude W_r."""
    if sweep.noise_kind == "none" or sweep.noise_amplitude == 0.0:
        return np.zeros((n_traces, 1)), 0.0
    tau = sweep.noise_correlation_time
    dt = tau / 4.0
    n_samp = max(2, int(math.ceil(t_max / dt)) + 1)
    if sweep.noise_kind == "random_telegraph":
        flips = rng.random((n_traces, n_samp)) < (dt / tau)
        signs = np.cumsum(flips, axis=1) % 2
        start = rng.choice(np.array([-1.0, 1.0]), size=(n_traces, 1))
        paths = sweep.noise_amplitude * start * (1.0 - 2.0 * signs)
    else:  # gaussian_ou
        rho = math.exp(-dt / tau)
        sigma = sweep.noise_amplitude
        paths = np.empty((n_traces, n_samp))
        paths[:, 0] = rng.normal(0.0, sigma, size=n_traces)
        innov = rng.normal(0.0, sigma * math.sqrt(1.0 - rho * rho),
                           size=(n_traces, n_samp - 1))
        for j in range(1, n_samp):
            paths[:, j] = rho * paths[:, j - 1] + innov[:, j - 1]
    return paths, dt


def simulate_lz(tones: ToneSet | None, sweep: LzSweep, seed: int = 0,
                n_traces: int = 300, t_finals=None, n_tones: int | None = None,
                rabi_magnitude: float | None = None,
                eps_step: float = 0.05) -> LzEstimate:
    """Monte-Carlo estimate of the sweep excitation probability.

    Either pass an explicit ToneSet (re-randomizing only phases per trace)
    or pass n_tones and rabi_magnitude to redraw frequencies, signs, and
    phases each trace.  Returns mean and standard error of |<1|psi>|^2 at
    each t_f.
    """
    if t_finals is None:
        t_finals = np.array([sweep.t_f])
    t_finals = np.atleast_1d(np.asarray(t_finals, dtype=float))
    if n_traces < 1:
        raise ValueError("need at least one trace")
    if tones is None and (n_tones is None or rabi_magnitude is None):
        raise ValueError("pass a ToneSet or (n_tones, rabi_magnitude)")
    rng = rng_stream(seed, 2)
    k = len(tones) if tones is not None else n_tones

    means = np.empty(len(t_finals))
    errs = np.empty(len(t_finals))
    w = sweep.w_window
    # resolve the fastest oscillation: tones up to W/2 plus the bias ramp
    h = min(eps_step / (0.5 * w + 1.0), 2.0 * math.pi / (50.0 * 0.5 * w))
    for it, tf in enumerate(t_finals):
        if tf <= 0.0:
            means[it] = 0.0
            errs[it] = 0.0
            continue
        amps = np.empty((n_traces, k))
        freqs = np.empty((n_traces, k))
        phases = rng.uniform(0.0, 2.0 * math.pi, size=(n_traces, k))
        for r in range(n_traces):
            if tones is not None:
                amps[r] = 2.0 * tones.rabi
                freqs[r] = tones.frequencies
                phases[r] = tones.phases + phases[r]
            else:
                ts = draw_tone_set(k, rabi_magnitude, w, rng)
                amps[r] = 2.0 * ts.rabi
                freqs[r] = ts.frequencies
                phases[r] = ts.phases
        noise, noise_dt = _noise_paths(sweep, n_traces, tf, rng)
        out = np.empty(n_traces)
        lz_sweep_batch(amps, freqs, phases,
                       np.full(n_traces, k, dtype=np.int64), w,
                       np.full(n_traces, tf), h, noise, noise_dt, out)
        means[it] = float(np.mean(out))
        errs[it] = float(np.std(out, ddof=1) / math.sqrt(n_traces))
    return LzEstimate(means, errs, t_finals, n_traces)
