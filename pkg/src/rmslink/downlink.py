"""Downlink multi-user SDMA sum-rate maximization.

Alternating optimization over surface beamformers and feed power, each
half-step a successive-convex-approximation ascent: the sum rate is written
as a difference of log terms, the subtracted interference term is
linearized at the current iterate (a tangent upper bound, so the surrogate
minorizes the true objective), and the surrogate is climbed by projected
gradient with a backtracking line search.  Every accepted step weakly
increases the true sum rate, which makes the outer objective trace
monotone by construction.

Model relaxation (documented): per-element instantaneous amplitude limits
are replaced by unit-norm beamformers plus a total feed power budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kern
from .errors import ConfigError, DegenerateChannelError

_LN2 = math.log(2.0)
_STEP_FLOOR = 1e-14


@dataclass
class DlSolution:
    beamformers: np.ndarray  # (M, K), unit-norm columns
    powers: np.ndarray  # (K,) watts
    rates: np.ndarray  # (K,) bits/s/Hz
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    @property
    def sum_rate(self) -> float:
        return float(self.objective_trace[-1])


def sinr(k: int, beamformers: np.ndarray, powers: np.ndarray, channels: np.ndarray,
         noise_power: float) -> float:
    """SINR of user k: p_k |h_k^T w_k|^2 over interference plus noise."""
    if noise_power <= 0.0:
        raise ConfigError(f"noise power must be positive, got {noise_power}")
    z = channels[k] @ beamformers
    gains = (z.real ** 2 + z.imag ** 2) * powers
    signal = gains[k]
    return float(signal / (gains.sum() - signal + noise_power))


def sum_rate(beamformers: np.ndarray, powers: np.ndarray, channels: np.ndarray,
             noise_power: float) -> float:
    """Sum_k log2(1 + SINR_k)."""
    if noise_power <= 0.0:
        raise ConfigError(f"noise power must be positive, got {noise_power}")
    return kern.dl_sum_rate(channels, beamformers, np.asarray(powers, dtype=float),
                            noise_power)


def equal_allocation(total_power: float, num_users: int) -> np.ndarray:
    if num_users < 1:
        raise ConfigError(f"need at least one user, got {num_users}")
    return np.full(num_users, total_power / num_users)


def zf_beamformers(channels: np.ndarray) -> np.ndarray:
    """Unit-norm columns of the right pseudo-inverse: h_j^T w_k = 0 for j != k."""
    k, m = channels.shape
    if k > m:
        raise DegenerateChannelError(f"zero forcing needs M >= K, got K={k}, M={m}")
    if np.linalg.matrix_rank(channels, tol=None) < k:
        raise DegenerateChannelError("channel matrix is rank deficient")
    w = np.linalg.pinv(channels)
    return w / np.linalg.norm(w, axis=0, keepdims=True)


def matched_beamformers(channels: np.ndarray) -> np.ndarray:
    """Per-user matched filters conj(h_k)/||h_k|| as columns."""
    w = np.conj(channels).T
    return w / np.linalg.norm(w, axis=0, keepdims=True)


def random_solution_dl(rng: np.random.Generator, total_power: float, num_users: int,
                       num_elements: int):
    """Random unit-norm beamformers and a uniform simplex power split."""
    w = rng.standard_normal((num_elements, num_users)) \
        + 1j * rng.standard_normal((num_elements, num_users))
    w /= np.linalg.norm(w, axis=0, keepdims=True)
    p = total_power * rng.dirichlet(np.ones(num_users))
    return w, p


def project_power_simplex(powers: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection onto {p >= 0, sum p <= total}."""
    clipped = np.maximum(powers, 0.0)
    if clipped.sum() <= total:
        return clipped
    u = np.sort(powers)[::-1]
    css = np.cumsum(u) - total
    idx = np.arange(1, powers.size + 1)
    rho = idx[u - css / idx > 0][-1]
    theta = css[rho - 1] / rho
    return np.maximum(powers - theta, 0.0)


def optimize_power_sca(beamformers: np.ndarray, channels: np.ndarray, total_power: float,
                       noise_power: float, tol: float = 1e-8, max_rounds: int = 30,
                       max_inner: int = 200, start: np.ndarray | None = None):
    """Power allocation at fixed beamformers.

    Each round linearizes the (concave-in-p) interference log at the current
    point, leaving a concave surrogate over the power simplex that is
    maximized by projected gradient with backtracking; the minorize-maximize
    argument makes the true sum rate non-decreasing across rounds.
    Returns (powers, converged).
    """
    if total_power <= 0.0:
        raise ConfigError(f"total power must be positive, got {total_power}")
    gains = np.asarray(kern.cross_gains(channels, beamformers))
    k = gains.shape[0]
    diag = np.diagonal(gains).copy()
    p = equal_allocation(total_power, k) if start is None else np.asarray(start, dtype=float)

    def surrogate_parts(q, alpha):
        tot = gains @ q
        value = float(np.sum(np.log2(noise_power + tot))
                      - np.sum(alpha * (tot - diag * q)))
        return value, tot

    rate = kern.dl_sum_rate_from_gains(gains, p, noise_power)
    inner_left = max_inner
    converged = False
    step = total_power  # rescaled against the gradient norm on first use
    for _ in range(max_rounds):
        interf = gains @ p - diag * p
        alpha = 1.0 / ((interf + noise_power) * _LN2)
        lin_grad = gains.T @ alpha - diag * alpha  # constant part, d(alpha.I)/dq
        s_val, tot = surrogate_parts(p, alpha)
        q = p
        while inner_left > 0:
            inner_left -= 1
            grad = gains.T @ (1.0 / ((noise_power + tot) * _LN2)) - lin_grad
            gnorm = float(np.linalg.norm(grad))
            if gnorm == 0.0:
                break
            step = min(step, 10.0 * total_power / gnorm)
            improved = False
            while step > _STEP_FLOOR * total_power:
                cand = project_power_simplex(q + step * grad, total_power)
                c_val, c_tot = surrogate_parts(cand, alpha)
                if c_val > s_val + 1e-15:
                    q, s_val, tot = cand, c_val, c_tot
                    step *= 1.5
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
        new_rate = kern.dl_sum_rate_from_gains(gains, q, noise_power)
        improvement = new_rate - rate
        if new_rate > rate:  # keep q only on measured improvement
            p, rate = q, new_rate
        if improvement <= tol * max(1.0, abs(new_rate)):
            converged = True
            break
        if inner_left <= 0:
            break
    return p, converged


def optimize_beamformers_sca(powers: np.ndarray, channels: np.ndarray, noise_power: float,
                             tol: float = 1e-8, max_steps: int = 200,
                             start: np.ndarray | None = None):
    """Beamformers at fixed powers: one projected-gradient ascent step per
    linearization round, re-normalizing each column to the unit sphere, with
    a reject-and-shrink line search on the true sum rate.  Returns
    (beamformers, converged).
    """
    p = np.asarray(powers, dtype=float)
    w = matched_beamformers(channels) if start is None else np.array(start, dtype=complex)
    rate = kern.dl_sum_rate(channels, w, p, noise_power)
    h_conj_t = np.conj(channels).T
    step = 1.0
    converged = False
    for _ in range(max_steps):
        z = channels @ w
        power_gain = (z.real ** 2 + z.imag ** 2) * p[None, :]
        total = power_gain.sum(axis=1)
        interf = total - np.diagonal(power_gain)
        v = 1.0 / ((noise_power + total) * _LN2)
        alpha = 1.0 / ((noise_power + interf) * _LN2)
        coef = z * (v[:, None] - alpha[:, None])
        np.fill_diagonal(coef, np.diagonal(z) * v)  # no self-interference term
        grad = h_conj_t @ (coef * p[None, :])
        gnorm = float(np.linalg.norm(grad))
        if gnorm == 0.0:
            converged = True
            break
        step = min(step, 10.0 / gnorm)
        accepted = False
        while step > _STEP_FLOOR:
            cand = w + step * grad
            cand /= np.linalg.norm(cand, axis=0, keepdims=True)
            c_rate = kern.dl_sum_rate(channels, cand, p, noise_power)
            if c_rate > rate + 1e-15:
                gain = c_rate - rate
                w, rate = cand, c_rate
                step *= 1.5
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        if gain <= tol * max(1.0, abs(rate)):
            converged = True
            break
    return w, converged


def alternating_optimize_dl(channels: np.ndarray, total_power: float, noise_power: float,
                            tol: float = 1e-4, max_outer: int = 50,
                            restarts: bool = True) -> DlSolution:
    """Joint beamformer/power optimization by alternating the two SCA
    half-steps (beamformers first) from matched filters and equal power.

    The surrogate fixed points are local, so with `restarts` the same
    alternation also runs from the zero-forcing beamformers (when M >= K)
    and from each single-user point (all power on one user, matched
    beamformers) — those cover the strong-interference regime whose optimum
    sits on the power-simplex boundary.  The best endpoint wins and the
    reported trace is the winning run's, still monotone.
    """
    k, m = channels.shape
    best: DlSolution | None = None
    starts: list[tuple[np.ndarray | None, np.ndarray | None]] = [(None, None)]
    if restarts:
        if k <= m:
            try:
                starts.append((zf_beamformers(channels), None))
            except DegenerateChannelError:
                pass
        for j in range(k):
            p0 = np.zeros(k)
            p0[j] = total_power
            starts.append((None, p0))
    for w_start, p_start in starts:
        sol = _alternate_from(channels, total_power, noise_power, tol, max_outer,
                              w_start, p_start)
        if best is None or sol.sum_rate > best.sum_rate:
            best = sol
    return best


def _alternate_from(channels, total_power, noise_power, tol, max_outer, w_start,
                    p_start=None) -> DlSolution:
    k = channels.shape[0]
    w = matched_beamformers(channels) if w_start is None else w_start
    p = equal_allocation(total_power, k) if p_start is None else np.asarray(p_start, float)
    trace = [sum_rate(w, p, channels, noise_power)]
    converged = False
    iterations = 0
    for outer in range(1, max_outer + 1):
        iterations = outer
        w, _ = optimize_beamformers_sca(p, channels, noise_power, start=w)
        p, _ = optimize_power_sca(w, channels, total_power, noise_power, start=p)
        new_rate = sum_rate(w, p, channels, noise_power)
        trace.append(new_rate)
        if new_rate - trace[-2] <= tol * max(1.0, abs(new_rate)):
            converged = True
            break
    rates = np.array([math.log2(1.0 + sinr(i, w, p, channels, noise_power))
                      for i in range(k)])
    return DlSolution(beamformers=w, powers=p, rates=rates, objective_trace=trace,
                      iterations=iterations, converged=converged)
