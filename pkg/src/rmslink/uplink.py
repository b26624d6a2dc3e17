"""Uplink OFDMA sum-rate maximization.

Joint subcarrier assignment, per-user power allocation, and transmissive
coefficient design.  Assignment/power use Lagrangian dual decomposition
(per-user budget duals, diminishing subgradient steps) with primal
recovery: every dual iterate's assignment, the incumbent, and a greedy
count allocation are water-filled and the best true sum rate wins.  The
coefficient step is projected gradient ascent on the surface amplitudes
(elementwise |f_m| <= 1 clip) with a monotone line search.

One coefficient is shared across all subcarriers and each user's cascaded
channel is frequency-flat, so the per-user gain g_k = |f^T c_k|^2 is the
same on every subcarrier it wins.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kern
from .errors import ConfigError, DegenerateChannelError
from .system import TransmissiveCoefficient

_LN2 = math.log(2.0)
_STEP_FLOOR = 1e-14


@dataclass
class UlProblem:
    cascades: np.ndarray  # (K, M) cascaded channels, rows c_k
    num_subcarriers: int
    budgets: np.ndarray  # (K,) watts per user
    noise_power: float  # watts per subcarrier

    def __post_init__(self):
        self.cascades = np.asarray(self.cascades, dtype=complex)
        if self.cascades.ndim != 2:
            raise ConfigError("cascades must be a (K, M) array")
        k = self.cascades.shape[0]
        self.budgets = np.broadcast_to(np.asarray(self.budgets, dtype=float), (k,)).copy()
        if np.any(self.budgets <= 0.0):
            raise ConfigError("all user power budgets must be positive")
        if self.noise_power <= 0.0:
            raise ConfigError(f"noise power must be positive, got {self.noise_power}")
        if self.num_subcarriers < 1:
            raise ConfigError("need at least one subcarrier")
        if self.num_subcarriers < k:
            warnings.warn(f"fewer subcarriers ({self.num_subcarriers}) than users ({k})",
                          stacklevel=2)

    @property
    def num_users(self) -> int:
        return self.cascades.shape[0]


@dataclass
class UlSolution:
    assignment: np.ndarray  # (K, N) 0/1
    powers: np.ndarray  # (K, N) watts
    coefficient: TransmissiveCoefficient
    sum_rate: float
    objective_trace: list[float] = field(default_factory=list)
    dual_trace: list[np.ndarray] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


@dataclass
class DualResult:
    assignment: np.ndarray
    powers: np.ndarray
    sum_rate: float
    converged: bool
    lambda_final: np.ndarray


@dataclass
class CoefficientResult:
    coefficient: TransmissiveCoefficient
    converged: bool
    trace: list[float] = field(default_factory=list)


def effective_gain(coefficient: TransmissiveCoefficient, cascade: np.ndarray) -> float:
    """End-to-end power gain |f^T c|^2 for one user."""
    z = np.asarray(cascade, dtype=complex) @ coefficient.values
    return float(z.real ** 2 + z.imag ** 2)


def aligned_coefficient(cascade: np.ndarray) -> TransmissiveCoefficient:
    """Full-amplitude coefficient phase-aligned to one cascaded channel:
    f_m = e^{-j arg(c_m)}, achieving gain (sum_m |c_m|)^2."""
    c = np.asarray(cascade, dtype=complex)
    phase = np.where(np.abs(c) > 0.0, np.exp(-1j * np.angle(c)), 1.0 + 0.0j)
    return TransmissiveCoefficient.from_values(phase)


def ul_sum_rate(problem: UlProblem, assignment: np.ndarray, powers: np.ndarray,
                coefficient: TransmissiveCoefficient) -> float:
    """Sum over assigned (user, subcarrier) pairs of log2(1 + p g / sigma^2)."""
    return _rate_from(problem, assignment, powers, coefficient.values)


def _rate_from(problem, assignment, powers, coefficient_values) -> float:
    users, active_powers = _flatten_active(assignment, powers)
    if users.size == 0:
        return 0.0
    return kern.ul_objective(problem.cascades, coefficient_values, users, active_powers,
                             problem.noise_power)


def _flatten_active(assignment, powers):
    owners, subs = np.nonzero(assignment)
    return owners.astype(np.int64), powers[owners, subs]


def waterfill_user(gains: np.ndarray, budget: float, noise_power: float) -> np.ndarray:
    """Exact KKT water-filling of one user's budget over its subcarriers.

    Solves max sum log2(1 + g_n p_n / sigma^2) s.t. sum p_n = budget, p >= 0:
    p_n = max(0, mu - sigma^2/g_n) with the water level mu computed in closed
    form from the sorted noise floors.
    """
    g = np.asarray(gains, dtype=float)
    if g.size == 0:
        return np.zeros(0)
    if np.any(g <= 0.0):
        raise DegenerateChannelError("water-filling needs positive gains")
    if budget <= 0.0:
        raise ConfigError(f"budget must be positive, got {budget}")
    floors = noise_power / g
    order = np.argsort(floors)
    sorted_floors = floors[order]
    prefix = np.cumsum(sorted_floors)
    # largest active set m such that the implied level clears its highest floor
    mu = (budget + prefix[0]) / 1.0
    for m in range(g.size, 0, -1):
        level = (budget + prefix[m - 1]) / m
        if level > sorted_floors[m - 1]:
            mu = level
            break
    return np.maximum(0.0, mu - floors)


def _rate_of_count(count: int, gain: float, budget: float, noise_power: float) -> float:
    """Rate from splitting a flat-gain user's budget over `count` subcarriers."""
    if count == 0 or gain <= 0.0:
        return 0.0
    return count * math.log2(1.0 + gain * budget / (count * noise_power))


def _greedy_counts(gains, budgets, num_subcarriers, noise_power):
    """Optimal per-user subcarrier counts for flat gains: allocate slots one at
    a time to the largest marginal rate increment (concave in count, so greedy
    is exact)."""
    k = gains.size
    counts = np.zeros(k, dtype=np.int64)
    for _ in range(num_subcarriers):
        best_k, best_inc = -1, 0.0
        for u in range(k):
            if gains[u] <= 0.0:
                continue
            inc = (_rate_of_count(counts[u] + 1, gains[u], budgets[u], noise_power)
                   - _rate_of_count(counts[u], gains[u], budgets[u], noise_power))
            if inc > best_inc + 1e-15:
                best_k, best_inc = u, inc
        if best_k < 0:
            break
        counts[best_k] += 1
    return counts


def _owner_to_assignment(owner: np.ndarray, num_users: int) -> np.ndarray:
    x = np.zeros((num_users, owner.size), dtype=np.int8)
    assigned = owner >= 0
    x[owner[assigned], np.nonzero(assigned)[0]] = 1
    return x


def _counts_to_owner(counts: np.ndarray, num_subcarriers: int) -> np.ndarray:
    owner = np.full(num_subcarriers, -1, dtype=np.int64)
    pos = 0
    for u, c in enumerate(counts):
        owner[pos:pos + c] = u
        pos += c
    return owner


def _waterfill_assignment(owner, gains, problem, coefficient_values):
    """Per-user water-filling on an owner vector; returns (powers, sum_rate).

    The rate is evaluated through the same kernel as every other objective in
    this module so candidate comparisons are free of cross-evaluator jitter.
    """
    k = problem.num_users
    powers = np.zeros((k, owner.size))
    for u in range(k):
        subs = np.nonzero(owner == u)[0]
        if subs.size == 0 or gains[u] <= 0.0:
            continue
        powers[u, subs] = waterfill_user(np.full(subs.size, gains[u]),
                                         problem.budgets[u], problem.noise_power)
    assignment = _owner_to_assignment(owner, k)
    return assignment, powers, _rate_from(problem, assignment, powers, coefficient_values)


def dual_assign_and_power(problem: UlProblem, coefficient: TransmissiveCoefficient,
                          step_scale: float = 1.0, max_iter: int = 100,
                          incumbent: tuple[np.ndarray, np.ndarray] | None = None
                          ) -> DualResult:
    """Subcarrier assignment and power allocation at a fixed coefficient.

    Outer subgradient loop on per-user budget duals lambda_k (init K/P_k,
    steps step_scale/(1+t)); inner per-subcarrier auction: each user bids
    p* = clip(1/(lambda_k ln2) - sigma^2/g_k, 0, P_k) with marginal value
    log2(1 + g_k p*/sigma^2) - lambda_k p*, ties to the lowest index.
    Primal recovery keeps the best water-filled candidate among all dual
    assignments, the incumbent's assignment, and the greedy count
    allocation; ties keep the earlier candidate.
    """
    gains = np.asarray(kern.ul_gains(problem.cascades, coefficient.values))
    k, n = problem.num_users, problem.num_subcarriers
    budgets, sigma2 = problem.budgets, problem.noise_power
    positive = gains > 0.0

    best_x, best_powers, best_rate = None, None, -1.0

    def consider(owner):
        nonlocal best_x, best_powers, best_rate
        x, powers, rate = _waterfill_assignment(owner, gains, problem, coefficient.values)
        if rate > best_rate:
            best_x, best_powers, best_rate = x, powers, rate

    if incumbent is not None:
        inc_owner = np.full(n, -1, dtype=np.int64)
        owners, subs = np.nonzero(incumbent[0])
        inc_owner[subs] = owners
        consider(inc_owner)
    consider(_counts_to_owner(_greedy_counts(gains, budgets, n, sigma2), n))

    lam = k / budgets
    converged = False
    for t in range(max_iter):
        pstar = np.zeros(k)
        with np.errstate(divide="ignore"):
            raw = 1.0 / (np.maximum(lam, 1e-300) * _LN2) - np.where(
                positive, sigma2 / np.where(positive, gains, 1.0), np.inf)
        pstar[positive] = np.clip(raw[positive], 0.0, budgets[positive])
        value = np.where(positive,
                         np.log2(1.0 + gains * pstar / sigma2) - lam * pstar, 0.0)
        winner = int(np.argmax(value))  # flat gains: one winner takes every subcarrier
        owner = np.full(n, winner, dtype=np.int64)
        consider(owner)
        demand = np.zeros(k)
        demand[winner] = n * pstar[winner]
        violation = np.max(np.maximum(0.0, demand - budgets) / budgets)
        if violation < 1e-6:
            converged = True
            break
        lam = np.maximum(0.0, lam + step_scale / (1.0 + t) * (demand - budgets))

    return DualResult(assignment=best_x, powers=best_powers, sum_rate=best_rate,
                      converged=converged, lambda_final=lam)


def _clip_amplitudes(values: np.ndarray) -> np.ndarray:
    amp = np.abs(values)
    return np.where(amp > 1.0, values / np.maximum(amp, 1e-300), values)


def update_coefficient(problem: UlProblem, assignment: np.ndarray, powers: np.ndarray,
                       start: TransmissiveCoefficient, tol: float = 1e-6,
                       max_iter: int = 200) -> CoefficientResult:
    """Projected gradient ascent on the coefficient at fixed (x, p).

    Wirtinger gradient w.r.t. conj(f) is sum_k beta_k (f^T c_k) conj(c_k)
    with beta_k the per-user sum of p/((sigma^2 + p g_k) ln2) over assigned
    subcarriers; amplitudes are clipped back to the unit disk after each
    step and a reject-and-shrink line search keeps the objective monotone.
    """
    users, active_powers = _flatten_active(assignment, powers)
    f = start.values
    if users.size == 0:
        return CoefficientResult(coefficient=start, converged=True, trace=[0.0])
    sigma2 = problem.noise_power
    cascades = problem.cascades
    conj_c = np.conj(cascades)

    def objective(vec):
        return kern.ul_objective(cascades, vec, users, active_powers, sigma2)

    obj = objective(f)
    trace = [obj]
    step = 1.0
    converged = False
    for _ in range(max_iter):
        z = cascades @ f
        g = z.real ** 2 + z.imag ** 2
        w = active_powers / ((sigma2 + active_powers * g[users]) * _LN2)
        beta = np.bincount(users, weights=w, minlength=cascades.shape[0])
        grad = conj_c.T @ (beta * z)
        gnorm = float(np.linalg.norm(grad))
        if gnorm == 0.0:
            converged = True
            break
        step = min(step, 10.0 / gnorm)
        accepted = False
        while step > _STEP_FLOOR:
            cand = _clip_amplitudes(f + step * grad)
            c_obj = objective(cand)
            if c_obj > obj + 1e-15:
                gain = c_obj - obj
                f, obj = cand, c_obj
                trace.append(obj)
                step *= 1.5
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        if gain <= tol * max(1.0, abs(obj)):
            converged = True
            break
    return CoefficientResult(coefficient=TransmissiveCoefficient.from_values(f),
                             converged=converged, trace=trace)


def _initial_coefficient(problem: UlProblem) -> TransmissiveCoefficient:
    """Phase-aligned to the strongest user's cascade (largest aligned gain),
    amplitudes all one; ties to the lowest user index."""
    strength = np.sum(np.abs(problem.cascades), axis=1)
    return aligned_coefficient(problem.cascades[int(np.argmax(strength))])


def _run_rounds(problem: UlProblem, tol: float, max_outer: int) -> UlSolution:
    f = _initial_coefficient(problem)
    incumbent = None
    trace: list[float] = []
    dual_trace: list[np.ndarray] = []
    assignment = powers = None
    converged = False
    iterations = 0
    for outer in range(1, max_outer + 1):
        iterations = outer
        dres = dual_assign_and_power(problem, f, incumbent=incumbent)
        cres = update_coefficient(problem, dres.assignment, dres.powers, f)
        rate = ul_sum_rate(problem, dres.assignment, dres.powers, cres.coefficient)
        dual_trace.append(dres.lambda_final)
        if trace and rate < trace[-1]:
            # a decrease is excluded up to floating-point jitter (incumbent
            # passing + monotone line searches): treat as a tie, keep the
            # incumbent point
            trace.append(trace[-1])
            converged = True
            break
        assignment, powers, f = dres.assignment, dres.powers, cres.coefficient
        trace.append(rate)
        if outer > 1 and trace[-1] - trace[-2] <= tol * max(1.0, abs(trace[-1])):
            converged = True
            break
        if max_outer == 1:
            # one-pass run: report the iterative ascent's flag; subgradient
            # convergence is carried separately in dual_trace / DualResult
            converged = cres.converged
        incumbent = (assignment, powers)
    return UlSolution(assignment=assignment, powers=powers, coefficient=f,
                      sum_rate=trace[-1], objective_trace=trace, dual_trace=dual_trace,
                      iterations=iterations, converged=converged)


def alternating_optimize_ul(problem: UlProblem, tol: float = 1e-4,
                            max_outer: int = 50) -> UlSolution:
    """Alternate dual_assign_and_power and update_coefficient from the
    documented initialization until the joint improvement drops below tol.

    Round one reproduces three_stage exactly; later rounds pass the
    incumbent (x, p) into the dual primal recovery, so the trace is
    non-decreasing and the result dominates three_stage pointwise.
    """
    return _run_rounds(problem, tol, max_outer)


def three_stage(problem: UlProblem) -> UlSolution:
    """One pass of assignment/power then coefficient design, no outer loop."""
    return _run_rounds(problem, tol=0.0, max_outer=1)


def random_coefficient(problem: UlProblem, rng: np.random.Generator) -> UlSolution:
    """Benchmark: uniform random phases, beta = 1, then one dual solve."""
    f = TransmissiveCoefficient.from_values(
        np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, problem.cascades.shape[1])))
    dres = dual_assign_and_power(problem, f)
    return UlSolution(assignment=dres.assignment, powers=dres.powers, coefficient=f,
                      sum_rate=dres.sum_rate, objective_trace=[dres.sum_rate],
                      dual_trace=[dres.lambda_final], iterations=1,
                      converged=dres.converged)


def random_allocation(problem: UlProblem, rng: np.random.Generator) -> UlSolution:
    """Benchmark: uniform random assignment, simplex-uniform powers within each
    user budget, random-phase coefficient.  Draw order: assignment, then
    per-user powers by user index, then phases."""
    k, n = problem.num_users, problem.num_subcarriers
    owner = rng.integers(0, k, size=n).astype(np.int64)
    powers = np.zeros((k, n))
    for u in range(k):
        subs = np.nonzero(owner == u)[0]
        if subs.size:
            powers[u, subs] = problem.budgets[u] * rng.dirichlet(np.ones(subs.size))
    f = TransmissiveCoefficient.from_values(
        np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, problem.cascades.shape[1])))
    assignment = _owner_to_assignment(owner, k)
    rate = ul_sum_rate(problem, assignment, powers, f)
    return UlSolution(assignment=assignment, powers=powers, coefficient=f, sum_rate=rate,
                      objective_trace=[rate], iterations=0, converged=True)
