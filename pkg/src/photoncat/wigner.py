"""Wigner-distribution evaluation and negativity diagnostics.

Convention: x = (a + a^dag)/sqrt(2), p conjugate, hbar = 1; the vacuum peaks
at W(0,0) = 1/pi and |W| <= 1/pi everywhere.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GridError
from .fock import DensityMatrix, StateVector

CONVENTION = "hbar=1, vac-var=1/2"

DEFAULT_RANGE = (-5.0, 5.0)
DEFAULT_POINTS = 201

THREADS_ENV = "PHOTONCAT_THREADS"


@dataclass
class WignerGrid:
    """Rectangular (x, p) grid of Wigner values; values[i, j] = W(x[i], p[j])."""

    x_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray
    convention: str = CONVENTION

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0])

    @property
    def dp(self) -> float:
        return float(self.p_axis[1] - self.p_axis[0])

    def integral(self) -> float:
        """Riemann sum of W dx dp."""
        return float(self.values.sum() * self.dx * self.dp)


def _as_matrix(state) -> np.ndarray:
    if isinstance(state, StateVector):
        return np.outer(state.amps, state.amps.conj())
    if isinstance(state, DensityMatrix):
        return state.rho
    return np.asarray(state, dtype=complex)


def wigner_point(state, x: float, p: float) -> float:
    """W(x, p) via the associated-Laguerre closed form.

    Hermitian diagonal pairing inside the kernel makes the output exactly
    real, so no imaginary residue can survive.
    """
    return float(kernels.wigner_points(_as_matrix(state), np.array([x]), np.array([p]))[0])


def wigner_origin_parity(state) -> float:
    """W(0, 0) from the photon-number parity: (1/pi) sum_n (-1)^n rho_nn."""
    rho = _as_matrix(state)
    diag = np.diag(rho).real
    signs = (-1.0) ** np.arange(diag.size)
    return float(np.sum(signs * diag) / math.pi)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def wigner_grid(
    state,
    x_range: tuple[float, float] = DEFAULT_RANGE,
    p_range: tuple[float, float] = DEFAULT_RANGE,
    nx: int = DEFAULT_POINTS,
    n_p: int = DEFAULT_POINTS,
) -> WignerGrid:
    """Evaluate W on a rectangular grid.

    Points are independent, so evaluation is chunked across threads when the
    PHOTONCAT_THREADS environment variable requests more than one; the result
    is identical either way.
    """
    if nx < 2 or n_p < 2:
        raise GridError(f"grid needs at least 2x2 points, got {nx}x{n_p}")
    if not (x_range[1] > x_range[0]) or not (p_range[1] > p_range[0]):
        raise GridError(f"empty or inverted ranges {x_range}, {p_range}")
    rho = _as_matrix(state)
    x_axis = np.linspace(x_range[0], x_range[1], nx)
    p_axis = np.linspace(p_range[0], p_range[1], n_p)
    X, P = np.meshgrid(x_axis, p_axis, indexing="ij")
    xs, ps = X.ravel(), P.ravel()

    n_threads = _thread_count()
    if n_threads > 1 and xs.size >= 4 * n_threads:
        chunks = np.array_split(np.arange(xs.size), n_threads)
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(pool.map(lambda idx: kernels.wigner_points(rho, xs[idx], ps[idx]), chunks))
        values = np.concatenate(parts)
    else:
        values = kernels.wigner_points(rho, xs, ps)
    return WignerGrid(x_axis=x_axis, p_axis=p_axis, values=values.reshape(nx, n_p))


def negativity_metrics(grid: WignerGrid) -> dict:
    """Summary of the grid's negativity: minimum value and negative volume."""
    neg = np.minimum(grid.values, 0.0)
    return {
        "min_value": float(grid.values.min()),
        "negative_volume": float(neg.sum() * grid.dx * grid.dp),
    }


def write_grid_csv(grid: WignerGrid, csv_path) -> tuple[str, str]:
    """Write `x,p,w` rows (17 significant digits) plus a JSON sidecar.

    The sidecar holds the axes and the phase-space convention tag; its path is
    the CSV path with a .json suffix appended.
    """
    csv_path = os.fspath(csv_path)
    sidecar_path = csv_path + ".json"
    with open(csv_path, "w") as fh:
        fh.write("x,p,w\n")
        for i, x in enumerate(grid.x_axis):
            for j, p in enumerate(grid.p_axis):
                fh.write(f"{x:.17g},{p:.17g},{grid.values[i, j]:.17g}\n")
    with open(sidecar_path, "w") as fh:
        json.dump(
            {
                "convention": grid.convention,
                "x_axis": grid.x_axis.tolist(),
                "p_axis": grid.p_axis.tolist(),
            },
            fh,
        )
    return csv_path, sidecar_path


def read_grid_csv(csv_path) -> WignerGrid:
    """Round-trip loader for grids written by ``write_grid_csv``."""
    csv_path = os.fspath(csv_path)
    with open(csv_path + ".json") as fh:
        sidecar = json.load(fh)
    x_axis = np.asarray(sidecar["x_axis"])
    p_axis = np.asarray(sidecar["p_axis"])
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1)
    values = data[:, 2].reshape(x_axis.size, p_axis.size)
    return WignerGrid(x_axis=x_axis, p_axis=p_axis, values=values,
                      convention=sidecar["convention"])
