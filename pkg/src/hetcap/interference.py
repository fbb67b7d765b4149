"""Closed-form mean interference and its numerical-integration oracle.

The closed form averages d^-alpha over a uniform disk of victims using the
first three Taylor terms of (1+x)^(-alpha/2); it is valid for separations
larger than the disk radius and is exact as the disk shrinks to a point.
The quadrature oracle evaluates the same disk average directly and is the
ground truth the closed form is tested against.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .channel import DuplexConfig, DuplexMode
from .geometry import NetworkTopology


class TaylorValidityError(ValueError):
    """Closed form requested outside its d > R validity region."""


class TaylorAccuracyWarning(UserWarning):
    """Closed form evaluated where its truncation error degrades (d < 2R)."""


class QuadratureDomainError(ValueError):
    """The disk-average integral diverges or exceeds the quadrature budget."""


def mean_pathloss_taylor(d: float, cell_radius: float, alpha: float) -> float:
    """Disk-averaged path loss between a point and a uniform disk at range d.

    Implements d^-alpha * [1 + (alpha^2/8)(R^4/(3d^4) + R^2/d^2)
    + (alpha/4) R^4/(3d^4)]; requires d > R, warns for R < d < 2R where the
    truncation error grows.
    """
    if d <= cell_radius:
        raise TaylorValidityError(
            f"closed form needs separation d > disk radius; got d={d}, R={cell_radius}")
    if d < 2 * cell_radius:
        warnings.warn(
            f"d={d} < 2R={2 * cell_radius}: truncation error of the closed form "
            "may exceed 1%", TaylorAccuracyWarning, stacklevel=2)
    quartic = cell_radius**4 / (3.0 * d**4)
    quadratic = cell_radius**2 / d**2
    bracket = 1.0 + (alpha * alpha / 8.0) * (quartic + quadratic) \
        + (alpha / 4.0) * quartic
    return d ** (-alpha) * bracket


def mean_pathloss_numeric(d: float, cell_radius: float, alpha: float,
                          tolerance: float = 1e-8) -> float:
    """Disk-averaged path loss by adaptive 2-D quadrature in polar form.

    Evaluates (1/(pi R^2)) * int_0^2pi int_0^R (d^2 + r^2 - 2 d r cos t)^(-alpha/2)
    r dr dt to the requested relative tolerance. Validation oracle for
    ``mean_pathloss_taylor``; independent of it.
    """
    if d <= 0:
        raise ValueError("d must be > 0")
    if cell_radius < 0:
        raise ValueError("cell_radius must be >= 0")
    if cell_radius == 0:
        return d ** (-alpha)
    if d <= cell_radius and alpha >= 2:
        raise QuadratureDomainError(
            f"victim disk contains the interferer (d={d} <= R={cell_radius}); "
            "the disk average diverges for alpha >= 2")

    def integrand(r, t):
        return (d * d + r * r - 2.0 * d * r * np.cos(t)) ** (-alpha / 2.0) * r

    value, _ = integrate.dblquad(integrand, 0.0, 2.0 * np.pi, 0.0, cell_radius,
                                 epsabs=0.0, epsrel=tolerance)
    return value / (np.pi * cell_radius**2)


def mean_interference_bs_ue(p_bs: float, d: float, r_victim: float,
                            alpha: float) -> float:
    """Mean interference a BS at range d causes to a UE uniform in its disk.

    Unit-mean fading drops out, so this is transmit power times the
    disk-averaged path loss.
    """
    if p_bs < 0:
        raise ValueError("p_bs must be >= 0")
    return p_bs * mean_pathloss_taylor(d, r_victim, alpha)


def mean_interference_ue_ue(p_ue: float, d: float, r_interferer: float,
                            r_victim: float, alpha: float) -> float:
    """Mean interference between UEs uniform in two disks with centers d apart.

    Composition of the closed form: averaging the victim-disk bracket over
    the interferer disk turns each power of the range into the closed form
    at alpha, alpha+2 and alpha+4.
    """
    if p_ue < 0:
        raise ValueError("p_ue must be >= 0")
    t0 = mean_pathloss_taylor(d, r_interferer, alpha)
    t2 = mean_pathloss_taylor(d, r_interferer, alpha + 2.0)
    t4 = mean_pathloss_taylor(d, r_interferer, alpha + 4.0)
    return p_ue * (t0
                   + (alpha**2 * r_victim**2 / 8.0) * t2
                   + (alpha * (alpha + 2.0) * r_victim**4 / 24.0) * t4)


@dataclass(frozen=True)
class MeanInterferenceBreakdown:
    """Per-interferer mean powers at the tagged UE; total is their sum.

    ``per_bs`` labels are "macro" or the small-cell index; ``per_ue`` holds
    the uplink interferers (empty in half duplex).
    """

    per_bs: tuple[tuple[str, float], ...]
    per_ue: tuple[tuple[str, float], ...]
    total: float

    def __post_init__(self) -> None:
        parts = [w for _, w in self.per_bs] + [w for _, w in self.per_ue]
        if any(w < 0 for w in parts):
            raise ValueError("negative mean interference entry")
        if abs(self.total - sum(parts)) > 1e-9 * max(self.total, 1e-300):
            raise ValueError("total does not equal the sum of parts")


def total_mean_interference(topology: NetworkTopology,
                            duplex: DuplexConfig) -> MeanInterferenceBreakdown:
    """Aggregate mean interference at the tagged UE over all co-channel sources.

    Every non-tagged BS (macro included) contributes a downlink term; in full
    duplex every non-tagged small cell also contributes one uplink UE at
    ``duplex.ue_tx_power``. The macro-attached UE is scheduled on other
    resources and never contributes. Raises ``TaylorValidityError`` when an
    interferer sits too close to the tagged disk for the closed form (move or
    re-draw the tagged cell rather than accept a corrupted bound).
    """
    tagged = topology.tagged_cell
    tx, ty = tagged.center
    per_bs: list[tuple[str, float]] = []
    per_ue: list[tuple[str, float]] = []

    d_macro = float(np.hypot(tx - topology.macro_bs.position[0],
                             ty - topology.macro_bs.position[1]))
    if d_macro <= tagged.radius:
        raise TaylorValidityError(
            f"macro BS at {d_macro:.1f} m is inside the tagged disk "
            f"(R={tagged.radius} m); re-draw or re-tag the topology")
    per_bs.append(("macro", mean_interference_bs_ue(
        topology.macro_bs.power, d_macro, tagged.radius, topology.macro_bs.alpha)))

    for k, cell in enumerate(topology.small_cells):
        if k == topology.tagged_index:
            continue
        d = float(np.hypot(tx - cell.center[0], ty - cell.center[1]))
        if d <= max(tagged.radius, cell.radius):
            raise TaylorValidityError(
                f"cell {k} at {d:.1f} m is too close to the tagged disk for "
                "the closed form; re-draw or re-tag the topology")
        per_bs.append((str(k), mean_interference_bs_ue(
            cell.power, d, tagged.radius, cell.alpha)))
        if duplex.mode is DuplexMode.FD:
            per_ue.append((str(k), mean_interference_ue_ue(
                duplex.ue_tx_power, d, cell.radius, tagged.radius, cell.alpha)))

    total = sum(w for _, w in per_bs) + sum(w for _, w in per_ue)
    return MeanInterferenceBreakdown(tuple(per_bs), tuple(per_ue), total)
