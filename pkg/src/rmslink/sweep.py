"""Seeded Monte Carlo sweep driver and CSV persistence.

Reproduces the sum-rate-versus-element-count style experiments: for each
array size M and trial index, one channel realization is drawn from a seed
derived with SHA-256 (documented below) and shared by every algorithm so
comparisons are paired.  Rows are buffered and written in deterministic
(M, trial, algorithm) sort order regardless of worker completion order,
which makes the CSV byte-identical across runs and across --jobs settings.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import draw_realization, effective_dl_channel, near_field_channel
from .downlink import (alternating_optimize_dl, equal_allocation, optimize_beamformers_sca,
                       optimize_power_sca, random_solution_dl, sum_rate, zf_beamformers)
from .errors import ConfigError
from .estimation import (PilotSchedule, ls_cascaded_estimate, nmse, separate_channels,
                         simulate_pilot_rx)
from .system import SystemConfig
from .uplink import (UlProblem, alternating_optimize_ul, random_allocation,
                     random_coefficient, three_stage)

CSV_HEADER = "scenario,algorithm,M,trial,seed,metric,iterations,converged"
CHANEST_HEADER = "snr_db,trial,nmse_cascaded,nmse_separated"

DL_ALGORITHMS = ("proposed", "ea", "zf", "ra")
UL_ALGORITHMS = ("proposed", "three_stage", "random_coefficient", "random_allocation")

# rng streams per trial: default_rng(seed) drives the channel realization,
# default_rng([seed, salt]) drives each randomized algorithm
_SALT_DL_RA = 1
_SALT_UL_RAND_COEF = 1
_SALT_UL_RAND_ALLOC = 2


@dataclass(frozen=True)
class SweepConfig:
    """Flat sweep configuration; powers in dBm here, converted to watts at
    the SystemConfig boundary.  `users=None` resolves per scenario (dl: 4,
    ul: 5, chanest: 1)."""

    users: int | None = None
    elements_sweep: tuple[int, ...] = (9, 16, 25, 36, 49)
    spacing_wavelengths: float = 0.5
    wavelength_m: float = 0.04
    feed_distance_m: float = 0.1
    user_distance_min_m: float = 20.0
    user_distance_max_m: float = 50.0
    rice_factor_db: float = 3.0
    noise_power_dbm: float = -90.0
    dl_total_power_dbm: float = 30.0
    ul_user_power_dbm: float = 20.0
    subcarriers: int = 16
    trials: int = 100
    master_seed: int = 1234


_INT_KEYS = {"users", "subcarriers", "trials", "master_seed"}
_FLOAT_KEYS = {"spacing_wavelengths", "wavelength_m", "feed_distance_m",
               "user_distance_min_m", "user_distance_max_m", "rice_factor_db",
               "noise_power_dbm", "dl_total_power_dbm", "ul_user_power_dbm"}


def parse_config(path) -> SweepConfig:
    """Parse a flat `key = value` config file; unknown keys are hard errors."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, text = line.partition("=")
        key, text = key.strip(), text.strip()
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        if key not in _INT_KEYS and key not in _FLOAT_KEYS and key != "elements_sweep":
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(text)
            elif key in _FLOAT_KEYS:
                values[key] = float(text)
            else:
                values[key] = tuple(int(tok) for tok in text.split(","))
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {text!r}") from exc
    return SweepConfig(**values)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def derive_trial_seed(master_seed: int, scenario: str, num_elements: int, trial: int) -> int:
    """Stable per-trial seed: first 8 bytes (big-endian) of
    SHA-256(\"{master_seed}:{scenario}:{num_elements}:{trial}\").

    Independent of algorithm name so all algorithms in a trial share one
    channel realization.
    """
    digest = hashlib.sha256(
        f"{master_seed}:{scenario}:{num_elements}:{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def resolve_users(cfg: SweepConfig, scenario: str) -> int:
    if cfg.users is not None:
        return cfg.users
    return {"dl": 4, "ul": 5, "chanest": 1}[scenario]


def system_config(cfg: SweepConfig, scenario: str, num_elements: int) -> SystemConfig:
    return SystemConfig(
        num_users=resolve_users(cfg, scenario),
        num_elements=num_elements,
        element_spacing=cfg.spacing_wavelengths,
        wavelength=cfg.wavelength_m,
        feed_distance=cfg.feed_distance_m,
        user_distance_min=cfg.user_distance_min_m,
        user_distance_max=cfg.user_distance_max_m,
        rice_factor=db_to_linear(cfg.rice_factor_db),
        noise_power=dbm_to_watts(cfg.noise_power_dbm),
        dl_total_power=dbm_to_watts(cfg.dl_total_power_dbm),
        ul_user_power=dbm_to_watts(cfg.ul_user_power_dbm),
        num_subcarriers=cfg.subcarriers,
    )


def _record(scenario, algorithm, m, trial, seed, metric, iterations, converged):
    return (scenario, algorithm, m, trial, seed, float(metric), int(iterations),
            bool(converged))


def dl_trial_records(cfg: SweepConfig, num_elements: int, trial: int) -> list[tuple]:
    seed = derive_trial_seed(cfg.master_seed, "dl", num_elements, trial)
    sys_cfg = system_config(cfg, "dl", num_elements)
    realization = draw_realization(sys_cfg, np.random.default_rng(seed))
    heff = effective_dl_channel(realization)
    power, sigma2 = sys_cfg.dl_total_power, sys_cfg.noise_power
    rows = []

    proposed = alternating_optimize_dl(heff, power, sigma2)
    rows.append(_record("dl", "proposed", num_elements, trial, seed, proposed.sum_rate,
                        proposed.iterations, proposed.converged))

    p_eq = equal_allocation(power, sys_cfg.num_users)
    w_ea, ea_ok = optimize_beamformers_sca(p_eq, heff, sigma2)
    rows.append(_record("dl", "ea", num_elements, trial, seed,
                        sum_rate(w_ea, p_eq, heff, sigma2), 1, ea_ok))

    w_zf = zf_beamformers(heff)
    p_zf, zf_ok = optimize_power_sca(w_zf, heff, power, sigma2)
    rows.append(_record("dl", "zf", num_elements, trial, seed,
                        sum_rate(w_zf, p_zf, heff, sigma2), 1, zf_ok))

    w_ra, p_ra = random_solution_dl(np.random.default_rng([seed, _SALT_DL_RA]), power,
                                    sys_cfg.num_users, num_elements)
    rows.append(_record("dl", "ra", num_elements, trial, seed,
                        sum_rate(w_ra, p_ra, heff, sigma2), 0, True))
    return rows


def ul_trial_records(cfg: SweepConfig, num_elements: int, trial: int) -> list[tuple]:
    seed = derive_trial_seed(cfg.master_seed, "ul", num_elements, trial)
    sys_cfg = system_config(cfg, "ul", num_elements)
    realization = draw_realization(sys_cfg, np.random.default_rng(seed))
    problem = UlProblem(cascades=realization.cascade.matrix,
                        num_subcarriers=sys_cfg.num_subcarriers,
                        budgets=np.full(sys_cfg.num_users, sys_cfg.ul_user_power),
                        noise_power=sys_cfg.noise_power)
    rows = []
    proposed = alternating_optimize_ul(problem)
    rows.append(_record("ul", "proposed", num_elements, trial, seed, proposed.sum_rate,
                        proposed.iterations, proposed.converged))
    bench = three_stage(problem)
    rows.append(_record("ul", "three_stage", num_elements, trial, seed, bench.sum_rate,
                        bench.iterations, bench.converged))
    rc = random_coefficient(problem,
                            np.random.default_rng([seed, _SALT_UL_RAND_COEF]))
    rows.append(_record("ul", "random_coefficient", num_elements, trial, seed,
                        rc.sum_rate, rc.iterations, True))
    ra = random_allocation(problem,
                           np.random.default_rng([seed, _SALT_UL_RAND_ALLOC]))
    rows.append(_record("ul", "random_allocation", num_elements, trial, seed,
                        ra.sum_rate, ra.iterations, ra.converged))
    return rows


def _trial_records(scenario: str, cfg: SweepConfig, num_elements: int, trial: int):
    if scenario == "dl":
        return dl_trial_records(cfg, num_elements, trial)
    if scenario == "ul":
        return ul_trial_records(cfg, num_elements, trial)
    raise ConfigError(f"unknown sweep scenario {scenario!r}")


def sweep_records(cfg: SweepConfig, scenario: str, jobs: int = 1) -> list[tuple]:
    """All records for one scenario, sorted by (M, trial, algorithm)."""
    tasks = [(num_elements, trial) for num_elements in cfg.elements_sweep
             for trial in range(cfg.trials)]
    rows: list[tuple] = []
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_trial_records, scenario, cfg, m, t) for m, t in tasks]
            for fut in futures:
                rows.extend(fut.result())
    else:
        for num_elements, trial in tasks:
            rows.extend(_trial_records(scenario, cfg, num_elements, trial))
    rows.sort(key=lambda r: (r[2], r[3], r[1]))
    return rows


def write_records(path, rows) -> None:
    lines = [CSV_HEADER]
    for scenario, algorithm, m, trial, seed, metric, iterations, converged in rows:
        lines.append(f"{scenario},{algorithm},{m},{trial},{seed},{metric:.17g},"
                     f"{iterations},{'true' if converged else 'false'}")
    Path(path).write_text("\n".join(lines) + "\n")


def run_sweep(config, scenario: str, out_path, jobs: int = 1):
    """Run one scenario sweep and persist the CSV; returns the output path."""
    cfg = parse_config(config) if not isinstance(config, SweepConfig) else config
    if scenario not in ("dl", "ul"):
        raise ConfigError(f"unknown sweep scenario {scenario!r}")
    write_records(out_path, sweep_records(cfg, scenario, jobs=jobs))
    return out_path


def chanest_records(cfg: SweepConfig, snr_db_list) -> list[tuple]:
    """NMSE of cascaded and separated least-squares estimates per pilot SNR.

    Pilot SNR is defined as P_p * ||c||^2 / sigma^2; per trial one channel
    is drawn, then noise is drawn per SNR point in listed order.
    """
    num_elements = cfg.elements_sweep[0]
    sys_cfg = system_config(cfg, "chanest", num_elements)
    sigma2 = sys_cfg.noise_power
    rows = []
    for trial in range(cfg.trials):
        seed = derive_trial_seed(cfg.master_seed, "chanest", num_elements, trial)
        rng = np.random.default_rng(seed)
        realization = draw_realization(sys_cfg, rng)
        cascade = realization.cascade.matrix[0]
        truth_far = cascade / realization.near.vector
        for snr_db in snr_db_list:
            pilot_power = db_to_linear(snr_db) * sigma2 / float(
                np.sum(np.abs(cascade) ** 2))
            sched = PilotSchedule.dft(num_elements, pilot_power=pilot_power)
            y = simulate_pilot_rx(cascade, sched, sigma2, rng)
            est = ls_cascaded_estimate(y, sched)
            separated = separate_channels(est, realization.near)
            rows.append((float(snr_db), trial, nmse(est.vector, cascade),
                         nmse(separated, truth_far)))
    return rows


def write_chanest_records(path, rows) -> None:
    lines = [CHANEST_HEADER]
    for snr_db, trial, nm_c, nm_s in rows:
        lines.append(f"{snr_db:.17g},{trial},{nm_c:.17g},{nm_s:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def default_config_text() -> str:
    """A config file with every key at its default, for --help docs and tests."""
    base = SweepConfig()
    lines = [
        "# sweep configuration (flat key = value)",
        f"elements_sweep = {','.join(str(m) for m in base.elements_sweep)}",
        f"spacing_wavelengths = {base.spacing_wavelengths}",
        f"wavelength_m = {base.wavelength_m}",
        f"feed_distance_m = {base.feed_distance_m}",
        f"user_distance_min_m = {base.user_distance_min_m}",
        f"user_distance_max_m = {base.user_distance_max_m}",
        f"rice_factor_db = {base.rice_factor_db}",
        f"noise_power_dbm = {base.noise_power_dbm}",
        f"dl_total_power_dbm = {base.dl_total_power_dbm}",
        f"ul_user_power_dbm = {base.ul_user_power_dbm}",
        f"subcarriers = {base.subcarriers}",
        f"trials = {base.trials}",
        f"master_seed = {base.master_seed}",
    ]
    return "\n".join(lines) + "\n"
