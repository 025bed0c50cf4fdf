"""Weighted fits for incoherent-rate curves and scaling exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit


@dataclass
class RateFit:
    gamma: float
    gamma_se: float
    p_max: float
    p_max_se: float


def _saturating(t, gamma, p_max):
    return p_max * (1.0 - np.exp(-4.0 * math.pi * gamma * t))


def extract_rate(t_finals, probability, std_error=None,
                 p_max_bound: float = 0.5,
                 fix_p_max: bool = False) -> RateFit:
    """Fit P(t_f) = P_max (1 - exp(-4 pi Gamma t_f)) by weighted least
    squares.

    p_max_bound caps the saturation level: 0.5 for incoherent driven mixing
    (equal dressed populations), 1.0 for a coherent static sweep.
    fix_p_max pins the saturation at p_max_bound exactly, leaving a
    one-parameter rate fit; this keeps the rate identifiable for curves that
    never leave the linear regime and is the right estimator when curves
    from an ensemble are fitted one at a time before averaging (fitting the
    ensemble mean instead under-counts the fast members once they saturate).
    """
    t = np.asarray(t_finals, dtype=float)
    p = np.asarray(probability, dtype=float)
    if len(t) < 2:
        raise ValueError("need at least two runtimes to fit a rate")
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("probabilities must lie in [0, 1]")
    sigma = None
    if std_error is not None:
        se = np.asarray(std_error, dtype=float)
        floor = max(1e-12, 0.05 * float(np.max(se)) if np.max(se) > 0 else 1e-12)
        sigma = np.maximum(se, floor)
    # linear-regime initialization: P ~ 4 pi Gamma P_max t
    slope = max(float(np.sum(p * t) / np.sum(t * t)), 1e-300)
    g0 = min(slope / (4.0 * math.pi * p_max_bound), 0.9e12)
    if fix_p_max:
        popt, pcov = curve_fit(
            lambda tt, g: _saturating(tt, g, p_max_bound), t, p, p0=[g0],
            sigma=sigma, absolute_sigma=sigma is not None,
            bounds=([0.0], [np.inf]), maxfev=20000)
        return RateFit(float(popt[0]), float(np.sqrt(pcov[0, 0])),
                       p_max_bound, 0.0)
    popt, pcov = curve_fit(
        _saturating, t, p, p0=[g0, p_max_bound],
        sigma=sigma, absolute_sigma=sigma is not None,
        bounds=([0.0, 1e-9], [np.inf, p_max_bound]), maxfev=20000)
    perr = np.sqrt(np.diag(pcov))
    return RateFit(float(popt[0]), float(perr[0]),
                   float(popt[1]), float(perr[1]))


@dataclass
class ExponentFit:
    exponent: float
    exponent_se: float
    prefactor_log2: float


def fit_exponent(n_values, rates, rate_se=None) -> ExponentFit:
    """Weighted least-squares fit of log2(rate) = a - b N; returns the decay
    exponent b (rate ~ 2^{-bN}) with its standard error."""
    n = np.asarray(n_values, dtype=float)
    r = np.asarray(rates, dtype=float)
    if np.any(r <= 0):
        raise ValueError("rates must be positive to fit a log-linear law")
    y = np.log2(r)
    if rate_se is not None:
        se = np.asarray(rate_se, dtype=float)
        w = (r / np.maximum(se, 1e-300) / math.log(2.0)) ** 2
    else:
        w = np.ones_like(y)
    sw = np.sum(w)
    nbar = np.sum(w * n) / sw
    ybar = np.sum(w * y) / sw
    sxx = np.sum(w * (n - nbar) ** 2)
    slope = np.sum(w * (n - nbar) * (y - ybar)) / sxx
    inter = ybar - slope * nbar
    resid = y - inter - slope * n
    dof = max(len(n) - 2, 1)
    chi2 = np.sum(w * resid ** 2)
    # scale errors by reduced chi^2 when scatter exceeds the quoted errors
    scale = max(chi2 / dof, 1.0) if rate_se is not None else chi2 / dof
    slope_se = math.sqrt(scale / sxx)
    return ExponentFit(float(-slope), float(slope_se), float(inter))
