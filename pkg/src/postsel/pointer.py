"""Von Neumann pointer coupled to a pre- and post-selected system.

The pointer starts in a Gaussian of position spread ``delta``. An impulsive
coupling shifts it by ``g * o_i`` inside the eigenspace of eigenvalue ``o_i``;
after post-selection the (unnormalized) pointer wavefunction is

    phi(x) = sum_i <post|P_i|pre> G(x - g o_i)

with ``G`` the normalized Gaussian amplitude. ``phi`` is evaluated in closed
form on a uniform grid; position moments come from trapezoid quadrature on that
grid and the momentum mean from the analytic Gaussian overlaps (hbar = 1).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qcore
from .errors import GridTooSmall, PostSelectionImpossible
from .qcore import OperatorSum, SpectralDecomposition
from .tsvf import TwoStateVector, weak_value

MIN_GRID_POINTS = 256
WEIGHT_FLOOR = 1e-28
ANOMALY_TOL = 1e-9


@dataclass(frozen=True)
class PointerConfig:
    delta: float = 1.0
    g: float = 0.01
    grid_halfwidth: float = 40.0
    grid_points: int = 8192

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.grid_halfwidth > 0:
            raise ValueError("grid_halfwidth must be positive")
        if self.grid_points < MIN_GRID_POINTS:
            raise ValueError(f"grid_points must be >= {MIN_GRID_POINTS}")

    def required_halfwidth(self, eigenvalues: Sequence[float]) -> float:
        return 6.0 * (self.delta + abs(self.g) * max(abs(o) for o in eigenvalues))

    @classmethod
    def covering(cls, g: float, eigenvalues: Sequence[float], delta: float = 1.0,
                 grid_points: int = 8192) -> "PointerConfig":
        """Config whose grid is the default 40 or just wide enough for ``g``."""
        probe = cls(delta=delta, g=g, grid_points=grid_points)
        return replace(probe, grid_halfwidth=max(40.0, probe.required_halfwidth(eigenvalues)))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(-self.grid_halfwidth, self.grid_halfwidth, self.grid_points)


def gaussian(x: np.ndarray, center: float, delta: float) -> np.ndarray:
    """Normalized Gaussian amplitude; ``|G|^2`` has standard deviation ``delta``."""
    return (2 * np.pi * delta**2) ** -0.25 * np.exp(-((x - center) ** 2) / (4 * delta**2))


def selection_amplitudes(tsv: TwoStateVector, spectral: SpectralDecomposition) -> np.ndarray:
    """``<post|P_i|pre>`` for each eigenprojector."""
    return np.array(
        [np.vdot(tsv.post.amplitudes, p @ tsv.pre.amplitudes) for p in spectral.projectors]
    )


@dataclass(frozen=True)
class AnalyticMoments:
    total_weight: float
    mean_x: float
    var_x: float
    mean_p: float


def analytic_moments(amplitudes, centers, delta: float) -> AnalyticMoments:
    """Exact moments of ``sum_i c_i G(x - a_i)`` from pairwise Gaussian overlaps."""
    c = np.asarray(amplitudes, dtype=complex)
    a = np.asarray(centers, dtype=float)
    ai, aj = a[:, None], a[None, :]
    overlap = np.exp(-((ai - aj) ** 2) / (8 * delta**2))
    mid = (ai + aj) / 2
    cc = np.conj(c)[:, None] * c[None, :]
    w = float(np.real(np.sum(cc * overlap)))
    if w <= WEIGHT_FLOOR:
        raise PostSelectionImpossible(f"post-selected pointer weight {w:.3g}")
    mx = float(np.real(np.sum(cc * mid * overlap))) / w
    x2 = float(np.real(np.sum(cc * (mid**2 + delta**2) * overlap))) / w
    mp = float(np.real(np.sum(cc * 1j * (ai - aj) / (4 * delta**2) * overlap))) / w
    return AnalyticMoments(w, mx, x2 - mx**2, mp)


@dataclass(frozen=True, eq=False)
class PointerOutcome:
    x: np.ndarray
    wavefunction: np.ndarray
    total_weight: float
    mean_x: float
    var_x: float
    mean_p: float
    eigenvalues: tuple[float, ...]
    amplitudes: np.ndarray
    g: float
    delta: float

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.wavefunction) ** 2

    def captured_weights(self) -> np.ndarray:
        """Fraction of ``|phi|^2`` closest to each eigenvalue's pointer position."""
        centers = self.g * np.asarray(self.eigenvalues)
        nearest = np.argmin(np.abs(self.x[:, None] - centers[None, :]), axis=1)
        dens = self.density
        out = np.array(
            [np.trapezoid(np.where(nearest == i, dens, 0.0), self.x) for i in range(len(centers))]
        )
        return out / out.sum()

    def weight_near(self, center: float, halfwidth: float) -> float:
        """Fraction of ``|phi|^2`` within ``center +/- halfwidth``.

        The window is resampled from the closed form so its edges need not
        fall on grid points.
        """
        xs = np.linspace(center - halfwidth, center + halfwidth, 8193)
        phi = sum(c * gaussian(xs, self.g * o, self.delta) for c, o in zip(self.amplitudes, self.eigenvalues))
        return float(np.trapezoid(np.abs(phi) ** 2, xs) / self.total_weight)

    def to_csv(self, path) -> None:
        """Write ``x, re, im, abs2`` rows with a header line."""
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "re_phi", "im_phi", "abs2_phi"])
            for xv, phi in zip(self.x, self.wavefunction):
                w.writerow([repr(float(xv)), repr(float(phi.real)), repr(float(phi.imag)),
                            repr(float(abs(phi) ** 2))])


def simulate_measurement(
    tsv: TwoStateVector, spectral: SpectralDecomposition, cfg: PointerConfig
) -> PointerOutcome:
    eigenvalues = spectral.eigenvalues
    need = cfg.required_halfwidth(eigenvalues)
    if cfg.grid_halfwidth < need:
        raise GridTooSmall(f"grid_halfwidth {cfg.grid_halfwidth} < required {need:.6g}")
    amps = selection_amplitudes(tsv, spectral)
    centers = cfg.g * np.asarray(eigenvalues)
    x = cfg.grid
    phi = np.zeros_like(x, dtype=complex)
    for c, a in zip(amps, centers):
        phi += c * gaussian(x, a, cfg.delta)
    dens = np.abs(phi) ** 2
    weight = float(np.trapezoid(dens, x))
    if weight <= WEIGHT_FLOOR:
        raise PostSelectionImpossible(f"post-selected pointer weight {weight:.3g}")
    mean_x = float(np.trapezoid(x * dens, x)) / weight
    var_x = float(np.trapezoid((x - mean_x) ** 2 * dens, x)) / weight
    mean_p = analytic_moments(amps, centers, cfg.delta).mean_p
    phi.setflags(write=False)
    return PointerOutcome(
        x, phi, weight, mean_x, var_x, mean_p, tuple(eigenvalues), amps, cfg.g, cfg.delta
    )


@dataclass(frozen=True)
class SweepPoint:
    ratio: float
    mean_x_over_g: float
    mean_p: float


def coupling_sweep(
    tsv: TwoStateVector,
    spectral: SpectralDecomposition,
    gs: Sequence[float],
    cfg: PointerConfig | None = None,
) -> list[SweepPoint]:
    """Pointer response at each coupling ``g`` (``cfg`` supplies delta and the grid)."""
    cfg = cfg or PointerConfig()
    out = []
    for g in gs:
        if g == 0:
            raise ValueError("g = 0 leaves mean_x / g undefined")
        res = simulate_measurement(tsv, spectral, replace(cfg, g=float(g)))
        out.append(SweepPoint(g / cfg.delta, res.mean_x / g, res.mean_p))
    return out


@dataclass(frozen=True)
class AnomalyReport:
    eigen_min: float
    eigen_max: float
    weak_value: complex
    pointer_mean_over_g: float
    anomalous: bool


def weak_value_anomaly_demo(
    tsv: TwoStateVector, observable: OperatorSum, cfg: PointerConfig | None = None
) -> AnomalyReport:
    """Compare the weak value with the eigenvalue range and the weak-limit pointer."""
    cfg = cfg or PointerConfig()
    spectral = qcore.eigendecompose(observable, tsv.n_sites)
    wv = weak_value(tsv, observable).value
    res = simulate_measurement(tsv, spectral, cfg)
    lo, hi = min(spectral.eigenvalues), max(spectral.eigenvalues)
    anomalous = wv.real < lo - ANOMALY_TOL or wv.real > hi + ANOMALY_TOL
    return AnomalyReport(lo, hi, wv, res.mean_x / cfg.g, anomalous)
