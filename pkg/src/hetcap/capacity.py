"""Effective capacity: exact Monte Carlo estimate and the Jensen lower bound.

The exact estimator averages (1+SINR)^-beta over joint draws of UE
placements and fading, with beta = theta * T_f * BW * log2(e) so natural
logs reproduce the bits-per-block definition. The lower bound freezes the
interference at its mean and only averages over the desired signal power,
which makes its cost independent of the network size.

Trials are split into fixed-size chunks, each with an RNG substream keyed by
(seed, chunk index), and partial results are reduced in chunk order, so
estimates are bit-identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .channel import (D_MIN, DuplexConfig, DuplexMode, QoSConfig,
                      path_loss_gain, rsi_power)
from .geometry import NetworkTopology, disk_points_xy
from .interference import total_mean_interference

#: Trials per RNG substream; fixed so results never depend on worker count.
CHUNK_TRIALS = 8192

#: spawn_key namespaces keeping the signal and interference streams of the
#: lower bound disjoint from the exact-MC trial streams.
_STREAM_TRIALS = 0
_STREAM_LB_SIGNAL = 1


@dataclass(frozen=True)
class ECEstimate:
    """Effective capacity in bits per block with its Monte Carlo error."""

    ec: float
    std_error: float
    trials: int
    theta: float
    mode: DuplexMode
    method: str  # exact_mc | lower_bound_analytic | lower_bound_simulated
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.ec < 0 or self.std_error < 0:
            raise ValueError("ec and std_error must be >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class GParams:
    """Parameters of the capacity-expectation kernel g(s, I)."""

    a: float      # RSI plus noise, watts
    beta: float

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise ValueError("a must be > 0")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")


def g(s, interference, params: GParams):
    """Capacity-expectation kernel (1 + s/(I+a))^-beta, in (0, 1]."""
    return (1.0 + s / (interference + params.a)) ** (-params.beta)


def g_second_derivative(s, interference, params: GParams):
    """d^2 g / dI^2 written exactly as derived: negative wherever g is concave."""
    denom = interference + params.a
    return (params.beta * s / denom**4
            * (1.0 + s / denom) ** (-(params.beta + 2.0))
            * (-2.0 * denom + (params.beta - 1.0) * s))


def g_concavity_check(params: GParams, s, i_grid) -> bool:
    """True iff g is concave in I over the grid.

    Checks the sign of the closed-form second derivative and the sharper
    sufficient condition beta < 1 + 2/SINR at every grid point.
    """
    s = np.asarray(s, dtype=float)
    i_grid = np.asarray(i_grid, dtype=float)
    d2 = g_second_derivative(s, i_grid, params)
    sinr = s / (i_grid + params.a)
    with np.errstate(divide="ignore"):
        sharper = params.beta < 1.0 + 2.0 / sinr
    return bool(np.all(d2 <= 0.0) and np.all(sharper))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    bound: float


def check_theta_constraint(qos: QoSConfig) -> CheckResult:
    """Whether theta stays within the beta <= 1 guarantee of the lower bound."""
    return CheckResult(qos.theta <= qos.theta_bound, qos.theta_bound)


@dataclass(frozen=True)
class TrialComponents:
    """Per-trial signal and interference powers of the tagged downlink UE.

    The three arrays are aligned per trial. RSI and noise are not included;
    they are added by the reduction so one component set serves every
    (eta, kappa, mode) combination with common random numbers.
    """

    signal: np.ndarray
    bs_interference: np.ndarray
    ue_interference: np.ndarray

    @property
    def trials(self) -> int:
        return len(self.signal)


@dataclass(frozen=True)
class _KernelSpec:
    """Plain-array picture of a topology, picklable for worker processes."""

    tagged_center: tuple[float, float]
    tagged_radius: float
    tagged_power: float
    tagged_alpha: float
    bs_xy: np.ndarray        # (n_bs, 2): macro first, then non-tagged cells
    bs_power: np.ndarray
    bs_alpha: np.ndarray
    other_xy: np.ndarray     # (n_other, 2): non-tagged cell centers
    other_radius: np.ndarray
    other_alpha: np.ndarray
    ue_tx_power: float
    seed: int
    freeze_fading: bool = False
    pin_positions: bool = False


def _kernel_spec(topology: NetworkTopology, ue_tx_power: float, seed: int,
                 freeze_fading: bool, pin_positions: bool) -> _KernelSpec:
    tagged = topology.tagged_cell
    others = [c for k, c in enumerate(topology.small_cells)
              if k != topology.tagged_index]
    bs_xy = np.array([topology.macro_bs.position] + [c.center for c in others],
                     dtype=float).reshape(-1, 2)
    bs_power = np.array([topology.macro_bs.power] + [c.power for c in others])
    bs_alpha = np.array([topology.macro_bs.alpha] + [c.alpha for c in others])
    other_xy = np.array([c.center for c in others], dtype=float).reshape(-1, 2)
    return _KernelSpec(
        tagged.center, tagged.radius, tagged.power, tagged.alpha,
        bs_xy, bs_power, bs_alpha,
        other_xy, np.array([c.radius for c in others]),
        np.array([c.alpha for c in others]),
        ue_tx_power, seed, freeze_fading, pin_positions)


def _simulate_chunk(spec: _KernelSpec, chunk: int, n: int) -> tuple[np.ndarray, ...]:
    """Simulate one trial chunk. Draw order is fixed; see module docstring."""
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=spec.seed, spawn_key=(_STREAM_TRIALS, chunk)))
    if spec.pin_positions:
        r_t = np.full(n, spec.tagged_radius / 2.0)
        th_t = np.zeros(n)
    else:
        r_t = spec.tagged_radius * np.sqrt(rng.random(n))
        th_t = 2.0 * np.pi * rng.random(n)
    h_sig = np.ones(n) if spec.freeze_fading else rng.exponential(size=n)
    signal = spec.tagged_power * h_sig * path_loss_gain(r_t, spec.tagged_alpha)

    ue_x, ue_y = disk_points_xy(spec.tagged_center, r_t, th_t)
    d_bs = np.hypot(ue_x[:, None] - spec.bs_xy[None, :, 0],
                    ue_y[:, None] - spec.bs_xy[None, :, 1])
    h_bs = np.ones_like(d_bs) if spec.freeze_fading \
        else rng.exponential(size=d_bs.shape)
    i_bs = (spec.bs_power[None, :] * h_bs
            * path_loss_gain(d_bs, spec.bs_alpha[None, :])).sum(axis=1)

    n_other = len(spec.other_xy)
    if n_other:
        if spec.pin_positions:
            r_i = np.broadcast_to(spec.other_radius[None, :] / 2.0, (n, n_other))
            th_i = np.zeros((n, n_other))
        else:
            r_i = spec.other_radius[None, :] * np.sqrt(rng.random((n, n_other)))
            th_i = 2.0 * np.pi * rng.random((n, n_other))
        ix, iy = disk_points_xy((spec.other_xy[None, :, 0],
                                 spec.other_xy[None, :, 1]), r_i, th_i)
        d_ue = np.hypot(ue_x[:, None] - ix, ue_y[:, None] - iy)
        h_ue = np.ones_like(d_ue) if spec.freeze_fading \
            else rng.exponential(size=d_ue.shape)
        i_ue = (spec.ue_tx_power * h_ue
                * path_loss_gain(d_ue, spec.other_alpha[None, :])).sum(axis=1)
    else:
        i_ue = np.zeros(n)
    return signal, i_bs, i_ue


def _chunk_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, CHUNK_TRIALS)
    return [CHUNK_TRIALS] * full + ([rest] if rest else [])


def simulate_components(topology: NetworkTopology, ue_tx_power: float,
                        trials: int, seed: int, *, workers: int = 1,
                        freeze_fading: bool = False,
                        pin_positions: bool = False) -> TrialComponents:
    """Joint per-trial draws of signal and interference powers.

    Each trial places the tagged UE and one uplink UE per non-tagged cell
    uniformly in their disks and draws independent unit-mean fading on every
    link. ``freeze_fading`` and ``pin_positions`` are validation hooks that
    pin fading to 1 and every UE to (R/2, 0) in its cell.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    spec = _kernel_spec(topology, ue_tx_power, seed, freeze_fading, pin_positions)
    sizes = _chunk_sizes(trials)
    if workers > 1 and len(sizes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate_chunk, [spec] * len(sizes),
                                  range(len(sizes)), sizes, chunksize=1))
    else:
        parts = [_simulate_chunk(spec, c, n) for c, n in enumerate(sizes)]
    signal, i_bs, i_ue = (np.concatenate(arrs) for arrs in zip(*parts))
    return TrialComponents(signal, i_bs, i_ue)


def _reduce_ec(z: np.ndarray, theta: float) -> tuple[float, float]:
    """EC and its delta-method standard error from per-trial g values."""
    z_mean = float(z.mean())
    ec = -math.log(z_mean) / theta
    se = float(z.std(ddof=1)) / math.sqrt(len(z)) / (theta * z_mean)
    return max(ec, 0.0), se


def ec_from_components(components: TrialComponents, duplex: DuplexConfig,
                       qos: QoSConfig, noise: float) -> ECEstimate:
    """Exact-MC reduction of precomputed trial components for one duplex setup."""
    if noise <= 0:
        raise ValueError("noise must be > 0")
    rsi = rsi_power(duplex.ue_tx_power, duplex)
    if duplex.mode is DuplexMode.FD:
        denom = components.bs_interference + components.ue_interference + rsi + noise
        expo = qos.beta
    else:
        denom = components.bs_interference + noise
        expo = qos.beta / 2.0  # HD halves the block at the rate level
    z = (1.0 + components.signal / denom) ** (-expo)
    ec, se = _reduce_ec(z, qos.theta)
    return ECEstimate(ec, se, components.trials, qos.theta, duplex.mode, "exact_mc")


def mean_rate_from_components(components: TrialComponents, duplex: DuplexConfig,
                              qos: QoSConfig, noise: float) -> float:
    """Average bits per block over the same draws; the theta -> 0 reference."""
    rsi = rsi_power(duplex.ue_tx_power, duplex)
    if duplex.mode is DuplexMode.FD:
        denom = components.bs_interference + components.ue_interference + rsi + noise
        half = 1.0
    else:
        denom = components.bs_interference + noise
        half = 0.5
    rates = half * qos.bits_per_use * np.log2(1.0 + components.signal / denom)
    return float(rates.mean())


def ec_exact_mc(topology: NetworkTopology, duplex: DuplexConfig, qos: QoSConfig,
                noise: float, trials: int, seed: int, *, workers: int = 1,
                freeze_fading: bool = False,
                pin_positions: bool = False) -> ECEstimate:
    """Exact effective capacity by Monte Carlo over placements and fading."""
    components = simulate_components(
        topology, duplex.ue_tx_power, trials, seed, workers=workers,
        freeze_fading=freeze_fading, pin_positions=pin_positions)
    return ec_from_components(components, duplex, qos, noise)


def _lb_signal_draws(tagged_power: float, tagged_radius: float, alpha: float,
                     n: int, seed: int, freeze_fading: bool,
                     pin_positions: bool) -> np.ndarray:
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(_STREAM_LB_SIGNAL,)))
    if pin_positions:
        r = np.full(n, tagged_radius / 2.0)
    else:
        r = tagged_radius * np.sqrt(rng.random(n))
    h = np.ones(n) if freeze_fading else rng.exponential(size=n)
    return tagged_power * h * path_loss_gain(r, alpha)


def _lb_quadrature(tagged_power: float, tagged_radius: float, alpha: float,
                   denom: float, expo: float) -> float:
    """E_s (1 + s/denom)^-expo by nested quadrature over (radius, fading)."""

    def fading_avg(r):
        b = tagged_power * path_loss_gain(r, alpha) / denom
        inner, _ = integrate.quad(
            lambda u: (1.0 - b * np.log(u)) ** (-expo), 0.0, 1.0, limit=200)
        return inner

    outer, _ = integrate.quad(
        lambda r: fading_avg(r) * 2.0 * r / tagged_radius**2,
        0.0, tagged_radius, points=[min(D_MIN, tagged_radius)], limit=200)
    return outer


def ec_lower_bound(topology: NetworkTopology, duplex: DuplexConfig,
                   qos: QoSConfig, noise: float, signal_samples: int, seed: int,
                   interference_source: str = "analytic", *,
                   signal_method: str = "mc",
                   interference_trials: int | None = None,
                   freeze_fading: bool = False,
                   pin_positions: bool = False) -> ECEstimate:
    """Jensen lower bound on the effective capacity.

    The interference is replaced by its mean: closed-form for
    ``interference_source="analytic"``, or a Monte Carlo average of the
    per-trial interference for ``"simulated"``. The one remaining expectation
    over the desired signal power is taken by Monte Carlo (default) or by
    quadrature (``signal_method="quadrature"``).
    """
    if interference_source not in ("analytic", "simulated"):
        raise ValueError(f"unknown interference_source {interference_source!r}")
    notes: list[str] = []
    if qos.beta > 1.0:
        notes.append(f"beta={qos.beta:.4g} > 1: bound not guaranteed")

    i_mean_se = 0.0
    if interference_source == "analytic":
        i_mean = total_mean_interference(topology, duplex).total
        method = "lower_bound_analytic"
    else:
        # Reuses the exact-MC trial streams for the same seed, so the
        # simulated mean is exactly the empirical mean of those trials.
        n_int = interference_trials or signal_samples
        comp = simulate_components(
            topology, duplex.ue_tx_power, n_int, seed,
            freeze_fading=freeze_fading, pin_positions=pin_positions)
        if duplex.mode is DuplexMode.FD:
            totals = comp.bs_interference + comp.ue_interference
        else:
            totals = comp.bs_interference
        i_mean = float(totals.mean())
        i_mean_se = float(totals.std(ddof=1)) / math.sqrt(n_int)
        method = "lower_bound_simulated"

    rsi = rsi_power(duplex.ue_tx_power, duplex)
    a = rsi + noise
    denom = i_mean + a
    expo = qos.beta if duplex.mode is DuplexMode.FD else qos.beta / 2.0
    tagged = topology.tagged_cell

    if signal_method == "quadrature":
        z_mean = _lb_quadrature(tagged.power, tagged.radius, tagged.alpha,
                                denom, expo)
        ec = max(-math.log(z_mean) / qos.theta, 0.0)
        se_sig = 0.0
        dz_di = None
        if i_mean_se > 0.0:
            delta = 1e-6 * denom
            z_up = _lb_quadrature(tagged.power, tagged.radius, tagged.alpha,
                                  denom + delta, expo)
            dz_di = abs(z_up - z_mean) / delta
        notes.append("signal expectation via quadrature")
        trials_out = 1
    elif signal_method == "mc":
        s = _lb_signal_draws(tagged.power, tagged.radius, tagged.alpha,
                             signal_samples, seed, freeze_fading, pin_positions)
        z = (1.0 + s / denom) ** (-expo)
        z_mean = float(z.mean())
        ec = max(-math.log(z_mean) / qos.theta, 0.0)
        se_sig = float(z.std(ddof=1)) / math.sqrt(signal_samples) \
            / (qos.theta * z_mean)
        # sensitivity of EC to the interference mean, for the simulated source
        dz_di = float((expo * s / denom**2
                       * (1.0 + s / denom) ** (-(expo + 1.0))).mean())
        trials_out = signal_samples
    else:
        raise ValueError(f"unknown signal_method {signal_method!r}")

    se = se_sig
    if i_mean_se > 0.0 and dz_di is not None:
        se = math.hypot(se_sig, dz_di * i_mean_se / (qos.theta * z_mean))
    return ECEstimate(ec, se, trials_out, qos.theta, duplex.mode, method,
                      tuple(notes))
