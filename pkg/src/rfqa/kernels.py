"""Compiled inner loops for the driven-evolution workloads.

All kernels are numba-jitted and cache-compiled.  They implement fixed-step
RK4 for the time-dependent Schrodinger equation in three representations:

- small dense reduced bases (projector-problem Rabi runs),
- the full 2^N z basis with matrix-free spin-flip application (diabatic-jump
  and ferromagnet anneals),
- batched two-level systems (multi-tone bias-sweep traces).

The drive phase convention everywhere is theta_i(t) = abar_i * sin(w_i t)
with w_i an angular frequency, so a tone is resonant between two levels
separated by energy w_i (hbar = 1).
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


# ---------------------------------------------------------------------------
# dense reduced-basis kernel (direction-modulated drive on m spins)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _dense_drive_h(h0, xs, ys, pref, abars, omegas, ramp_tau, t, out):
    dim = h0.shape[0]
    for a in range(dim):
        for b in range(dim):
            out[a, b] = h0[a, b]
    for j in range(xs.shape[0]):
        amp = abars[j]
        if ramp_tau > 0.0:
            amp = amp * np.tanh(t / ramp_tau)
        th = amp * np.sin(omegas[j] * t)
        cx = pref * (1.0 - np.cos(th))
        cy = -pref * np.sin(th)
        for a in range(dim):
            for b in range(dim):
                out[a, b] += cx * xs[j, a, b] + cy * ys[j, a, b]


@njit(cache=True)
def _matvec(h, v, out):
    dim = h.shape[0]
    for a in range(dim):
        acc = 0.0 + 0.0j
        for b in range(dim):
            acc += h[a, b] * v[b]
        out[a] = acc


@njit(cache=True)
def evolve_reduced_overlap(h0, xs, ys, pref, abars, omegas, ramp_tau,
                           psi0, gvec, t_final, h_step, sample_every):
    """RK4 evolution of a reduced-basis state under the rotated-field drive.

    Returns (times, overlap, psi_final, norm_drift): overlap[k] is
    |<gvec|psi(times[k])>|^2 sampled every `sample_every` steps.
    """
    dim = psi0.shape[0]
    n_steps = int(np.ceil(t_final / h_step))
    h = t_final / n_steps
    n_samp = n_steps // sample_every + 1
    times = np.empty(n_samp)
    overlap = np.empty(n_samp)
    psi = psi0.copy()
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    tmp = np.empty(dim, np.complex128)
    ham = np.empty((dim, dim), np.complex128)
    t = 0.0
    isamp = 0
    max_drift = 0.0
    for step in range(n_steps):
        _dense_drive_h(h0, xs, ys, pref, abars, omegas, ramp_tau, t, ham)
        _matvec(ham, psi, k1)
        for a in range(dim):
            tmp[a] = psi[a] - 1j * 0.5 * h * k1[a]
        _dense_drive_h(h0, xs, ys, pref, abars, omegas, ramp_tau, t + 0.5 * h, ham)
        _matvec(ham, tmp, k2)
        for a in range(dim):
            tmp[a] = psi[a] - 1j * 0.5 * h * k2[a]
        _matvec(ham, tmp, k3)
        _dense_drive_h(h0, xs, ys, pref, abars, omegas, ramp_tau, t + h, ham)
        for a in range(dim):
            tmp[a] = psi[a] - 1j * h * k3[a]
        _matvec(ham, tmp, k4)
        for a in range(dim):
            psi[a] = psi[a] - 1j * (h / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])
        t += h
        if (step + 1) % 1000 == 0:
            nrm = 0.0
            for a in range(dim):
                nrm += psi[a].real ** 2 + psi[a].imag ** 2
            nrm = np.sqrt(nrm)
            drift = abs(nrm - 1.0)
            if drift > max_drift:
                max_drift = drift
            for a in range(dim):
                psi[a] = psi[a] / nrm
        if (step + 1) % sample_every == 0:
            ov = 0.0 + 0.0j
            for a in range(dim):
                ov += np.conj(gvec[a]) * psi[a]
            if isamp < n_samp:
                times[isamp] = t
                overlap[isamp] = ov.real ** 2 + ov.imag ** 2
                isamp += 1
    return times[:isamp], overlap[:isamp], psi, max_drift


# ---------------------------------------------------------------------------
# full 2^N kernels for the projector ("Grover") problem
# ---------------------------------------------------------------------------

@njit(cache=True)
def _grover_apply(psi, out, n, target, s, pref, cos_th, sin_th):
    """out = H(t) psi for H = (1-s)H_D + s H_G on the full z basis.

    H_D = -kappa sum_i [cos th_i sx_i + sin th_i sy_i], kappa = 1/2 folded
    into pref = (1-s)*kappa; H_G = -(n/2)|G><G|.
    sy_i |b> = i (-1)^{b_i} |b ^ (1<<i)>  with b_i the target-frame bit.
    """
    dim = psi.shape[0]
    for b in range(dim):
        out[b] = 0.0 + 0.0j
    out[target] = -0.5 * n * s * psi[target]
    for i in range(n):
        mask = 1 << i
        ci = cos_th[i]
        si = sin_th[i]
        for b in range(dim):
            src = b ^ mask
            # sigma_x contribution
            val = ci * psi[src]
            # sigma_y: <b| sy |src> = i if src bit set(=b bit clear) else -i
            if b & mask:
                val += -1j * si * psi[src]
            else:
                val += 1j * si * psi[src]
            out[b] += -pref * val


@njit(cache=True)
def evolve_grover_jump(psi0, n, target, s, abars, omegas, ramp_tau,
                       t_final, h_step):
    """Full-basis RK4 under H(s) with rotated-field drives; returns psi(t_f).

    abars may be zero (baseline).  Drive amplitudes ramp as tanh(t/ramp_tau)
    when ramp_tau > 0.
    """
    dim = psi0.shape[0]
    n_steps = int(np.ceil(t_final / h_step))
    h = t_final / n_steps
    psi = psi0.copy()
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    tmp = np.empty(dim, np.complex128)
    cos_th = np.empty(n)
    sin_th = np.empty(n)
    pref = (1.0 - s) * 0.5
    t = 0.0
    max_drift = 0.0
    for step in range(n_steps):
        for stage in range(4):
            if stage == 0:
                ts = t
                src = psi
            elif stage == 1:
                ts = t + 0.5 * h
                for a in range(dim):
                    tmp[a] = psi[a] - 1j * 0.5 * h * k1[a]
                src = tmp
            elif stage == 2:
                ts = t + 0.5 * h
                for a in range(dim):
                    tmp[a] = psi[a] - 1j * 0.5 * h * k2[a]
                src = tmp
            else:
                ts = t + h
                for a in range(dim):
                    tmp[a] = psi[a] - 1j * h * k3[a]
                src = tmp
            for i in range(n):
                amp = abars[i]
                if ramp_tau > 0.0:
                    amp = amp * np.tanh(ts / ramp_tau)
                th = amp * np.sin(omegas[i] * ts)
                cos_th[i] = np.cos(th)
                sin_th[i] = np.sin(th)
            if stage == 0:
                _grover_apply(src, k1, n, target, s, pref, cos_th, sin_th)
            elif stage == 1:
                _grover_apply(src, k2, n, target, s, pref, cos_th, sin_th)
            elif stage == 2:
                _grover_apply(src, k3, n, target, s, pref, cos_th, sin_th)
            else:
                _grover_apply(src, k4, n, target, s, pref, cos_th, sin_th)
        for a in range(dim):
            psi[a] = psi[a] - 1j * (h / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])
        t += h
        if (step + 1) % 1000 == 0:
            nrm = 0.0
            for a in range(dim):
                nrm += psi[a].real ** 2 + psi[a].imag ** 2
            nrm = np.sqrt(nrm)
            drift = abs(nrm - 1.0)
            if drift > max_drift:
                max_drift = drift
            for a in range(dim):
                psi[a] = psi[a] / nrm
    return psi, max_drift


# ---------------------------------------------------------------------------
# all-to-all ferromagnet kernel (magnitude-modulated drive)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _aafm_apply(psi, out, n, diag, bias, bias_coeff, kappa, amps):
    dim = psi.shape[0]
    for b in range(dim):
        out[b] = (diag[b] + bias_coeff * bias[b]) * psi[b]
    for i in range(n):
        mask = 1 << i
        ai = -kappa * amps[i]
        for b in range(dim):
            out[b] += ai * psi[b ^ mask]


@njit(cache=True)
def evolve_aafm(psi0, n, diag, bias, t_anneal, kappa, abars, omegas, phases,
                t_final, h_step, proj, sample_every):
    """RK4 for the ferromagnet with
    kappa_i(t) = kappa (1 + abar_i sin(w_i t + phi_i)).

    diag holds the static diagonal part (magnetization terms, pre-shifted);
    bias is an extra diagonal multiplied by (1 - 2 t / t_anneal), the linear
    annealing ramp of the longitudinal field (pass t_anneal <= 0 to freeze
    the bias coefficient at 1).
    Records P(t) = sum_{b in proj} |psi_b|^2 at the sampled times; proj is
    an index array (the target-well states).
    """
    dim = psi0.shape[0]
    n_steps = int(np.ceil(t_final / h_step))
    h = t_final / n_steps
    n_samp = n_steps // sample_every + 1
    times = np.empty(n_samp)
    pops = np.empty(n_samp)
    psi = psi0.copy()
    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)
    tmp = np.empty(dim, np.complex128)
    amps = np.empty(n)
    t = 0.0
    isamp = 0
    max_drift = 0.0
    for step in range(n_steps):
        for stage in range(4):
            if stage == 0:
                ts = t
                src = psi
            elif stage == 1:
                ts = t + 0.5 * h
                for a in range(dim):
                    tmp[a] = psi[a] - 1j * 0.5 * h * k1[a]
                src = tmp
            elif stage == 2:
                ts = t + 0.5 * h
                for a in range(dim):
                    tmp[a] = psi[a] - 1j * 0.5 * h * k2[a]
                src = tmp
            else:
                ts = t + h
                for a in range(dim):
                    tmp[a] = psi[a] - 1j * h * k3[a]
                src = tmp
            for i in range(n):
                amps[i] = 1.0 + abars[i] * np.sin(omegas[i] * ts + phases[i])
            if t_anneal > 0.0:
                bc = 1.0 - 2.0 * ts / t_anneal
            else:
                bc = 1.0
            if stage == 0:
                _aafm_apply(src, k1, n, diag, bias, bc, kappa, amps)
            elif stage == 1:
                _aafm_apply(src, k2, n, diag, bias, bc, kappa, amps)
            elif stage == 2:
                _aafm_apply(src, k3, n, diag, bias, bc, kappa, amps)
            else:
                _aafm_apply(src, k4, n, diag, bias, bc, kappa, amps)
        for a in range(dim):
            psi[a] = psi[a] - 1j * (h / 6.0) * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a])
        t += h
        if (step + 1) % 1000 == 0:
            nrm = 0.0
            for a in range(dim):
                nrm += psi[a].real ** 2 + psi[a].imag ** 2
            nrm = np.sqrt(nrm)
            drift = abs(nrm - 1.0)
            if drift > max_drift:
                max_drift = drift
            for a in range(dim):
                psi[a] = psi[a] / nrm
        if (step + 1) % sample_every == 0 and isamp < n_samp:
            p = 0.0
            for q in range(proj.shape[0]):
                c = psi[proj[q]]
                p += c.real ** 2 + c.imag ** 2
            times[isamp] = t
            pops[isamp] = p
            isamp += 1
    return times[:isamp], pops[:isamp], psi, max_drift


# ---------------------------------------------------------------------------
# two-level multi-tone bias-sweep kernel
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def lz_sweep_batch(amps_all, omegas_all, phases_all, n_tones, w_window,
                   t_finals, h_step, noise_all, noise_dt, out_p1):
    """Batch of driven two-level sweeps.

    Trace r evolves i dpsi/dt = H psi with
      H = (eps(t)/2) sz + sum_k amps[r,k] cos(omegas[r,k] t + phases[r,k]) sx,
    eps(t) swept linearly from -W/2 .. +W/2 over t in [0, t_final[r]],
    starting from the diabatic state psi0 = (1, 0); out_p1[r] is the final
    population |<1|psi(t_f)>|^2 of the other diabatic state.

    noise_all[r] holds a piecewise-constant longitudinal offset sampled
    every noise_dt added to eps(t); pass noise_dt <= 0 for no noise.
    """
    n_traces = t_finals.shape[0]
    for r in prange(n_traces):
        tf = t_finals[r]
        if tf <= 0.0:
            out_p1[r] = 0.0
            continue
        n_steps = int(np.ceil(tf / h_step))
        h = tf / n_steps
        a0 = 1.0 + 0.0j
        a1 = 0.0 + 0.0j
        t = 0.0
        nt = n_tones[r]
        k0s = np.empty(4, np.complex128)
        k1s = np.empty(4, np.complex128)
        for step in range(n_steps):
            b0 = a0
            b1 = a1
            for stage in range(4):
                if stage == 0:
                    ts = t
                    c0, c1 = a0, a1
                elif stage == 1:
                    ts = t + 0.5 * h
                    c0 = a0 - 1j * 0.5 * h * k0s[0]
                    c1 = a1 - 1j * 0.5 * h * k1s[0]
                elif stage == 2:
                    ts = t + 0.5 * h
                    c0 = a0 - 1j * 0.5 * h * k0s[1]
                    c1 = a1 - 1j * 0.5 * h * k1s[1]
                else:
                    ts = t + h
                    c0 = a0 - 1j * h * k0s[2]
                    c1 = a1 - 1j * h * k1s[2]
                eps = w_window * (ts / tf - 0.5)
                if noise_dt > 0.0:
                    idx = int(ts / noise_dt)
                    if idx >= noise_all.shape[1]:
                        idx = noise_all.shape[1] - 1
                    eps += noise_all[r, idx]
                ox = 0.0
                for k in range(nt):
                    ox += amps_all[r, k] * np.cos(omegas_all[r, k] * ts + phases_all[r, k])
                k0s[stage] = 0.5 * eps * c0 + ox * c1
                k1s[stage] = ox * c0 - 0.5 * eps * c1
            a0 = b0 - 1j * (h / 6.0) * (k0s[0] + 2.0 * k0s[1] + 2.0 * k0s[2] + k0s[3])
            a1 = b1 - 1j * (h / 6.0) * (k1s[0] + 2.0 * k1s[1] + 2.0 * k1s[2] + k1s[3])
            t += h
            if (step + 1) % 5000 == 0:
                nrm = np.sqrt(a0.real ** 2 + a0.imag ** 2 + a1.real ** 2 + a1.imag ** 2)
                a0 = a0 / nrm
                a1 = a1 / nrm
        out_p1[r] = a1.real ** 2 + a1.imag ** 2
