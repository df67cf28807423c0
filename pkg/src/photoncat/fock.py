"""Truncated single-mode Fock space: state carriers and standard constructors.

Conventions used throughout the toolkit:
    x = (a + a^dag)/sqrt(2),  p = (a - a^dag)/(i sqrt(2)),  hbar = 1,
so the vacuum has quadrature variance 1/2 and the vacuum Wigner peak is 1/pi.
Squeezing levels in dB are 10*log10(V / 0.5).

All states are immutable after construction and every constructor
renormalizes explicitly after truncation.  Constructors raise
``TruncationError`` when the population of the top decile of Fock levels
exceeds their tail tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import (
    DegenerateCatError,
    DimensionMismatch,
    PhysicalityError,
    TruncationError,
)

DEFAULT_DIM = 40
VACUUM_VARIANCE = 0.5

# Default truncation-tail tolerance for constructors.  Strongly anti-squeezed
# thermal states (~15 dB) keep a top-decile population of order 1e-2 at the
# default cutoff of 40, so the Gaussian-state constructor uses the looser
# bound below; everything else is held to 1e-6.
DEFAULT_TAIL_TOL = 1e-6
GAUSSIAN_TAIL_TOL = 2e-2

_HERMITICITY_TOL = 1e-10
_TRACE_TOL = 1e-9
_NORM_TOL = 1e-9
_EIGENVALUE_TOL = -1e-8


@dataclass(frozen=True)
class FockSpace:
    """Truncated Fock basis |0>, ..., |dim-1>."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ValueError(f"Fock dimension must be an integer >= 2, got {self.dim!r}")

    @property
    def levels(self) -> np.ndarray:
        return np.arange(self.dim)


def _tail_mass(probabilities: np.ndarray) -> float:
    """Population of the top 10% of Fock levels (at least one level)."""
    dim = probabilities.size
    n_top = max(1, math.ceil(0.1 * dim))
    return float(probabilities[dim - n_top:].sum())


def _check_tail(probabilities: np.ndarray, tol: float, what: str) -> None:
    tail = _tail_mass(probabilities)
    if tail >= tol:
        raise TruncationError(
            f"{what}: top-decile population {tail:.3e} >= {tol:.1e}; increase dim"
        )


def _require_same_space(a, b) -> None:
    if a.space.dim != b.space.dim:
        raise DimensionMismatch(f"dim {a.space.dim} vs {b.space.dim}")


class StateVector:
    """Pure state: complex amplitudes over the truncated Fock basis."""

    def __init__(self, space: FockSpace, amps: np.ndarray):
        amps = np.asarray(amps, dtype=complex)
        if amps.shape != (space.dim,):
            raise ValueError(f"amplitude vector must have shape ({space.dim},)")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise ValueError(f"state vector not normalized: sum |amps|^2 = {norm2!r}")
        amps = amps.copy()
        amps.flags.writeable = False
        self.space = space
        self.amps = amps

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def mean_photon_number(self) -> float:
        return float(np.sum(self.space.levels * self.probabilities))

    def overlap(self, other: "StateVector") -> complex:
        _require_same_space(self, other)
        return complex(np.vdot(self.amps, other.amps))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.space, np.outer(self.amps, self.amps.conj()))

    def __repr__(self):
        return f"StateVector(dim={self.space.dim}, <n>={self.mean_photon_number():.4g})"


class DensityMatrix:
    """Mixed state: Hermitian, unit-trace, positive-semidefinite matrix."""

    def __init__(self, space: FockSpace, rho: np.ndarray):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (space.dim, space.dim):
            raise ValueError(f"density matrix must have shape ({space.dim}, {space.dim})")
        herm = float(np.abs(rho - rho.conj().T).max())
        if herm > _HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian: max |rho - rho^dag| = {herm:.3e}")
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValueError(f"density matrix trace {tr!r} differs from 1")
        lo = float(np.linalg.eigvalsh(rho).min())
        if lo < _EIGENVALUE_TOL:
            raise ValueError(f"density matrix not positive semidefinite: min eigenvalue {lo:.3e}")
        rho = rho.copy()
        rho.flags.writeable = False
        self.space = space
        self.rho = rho

    @property
    def populations(self) -> np.ndarray:
        return np.diag(self.rho).real

    def mean_photon_number(self) -> float:
        return float(np.sum(self.space.levels * self.populations))

    def expectation(self, operator: np.ndarray) -> complex:
        return complex(np.trace(self.rho @ operator))

    def __repr__(self):
        return f"DensityMatrix(dim={self.space.dim}, <n>={self.mean_photon_number():.4g})"


@dataclass(frozen=True)
class GaussianVariances:
    """Min/max quadrature variances of a single-mode Gaussian state."""

    v_min: float
    v_max: float

    def __post_init__(self):
        if self.v_min > self.v_max:
            raise PhysicalityError(f"v_min {self.v_min} > v_max {self.v_max}")
        if self.v_min * self.v_max < 0.25 - 1e-9:
            raise PhysicalityError(
                f"v_min*v_max = {self.v_min * self.v_max:.6g} violates the uncertainty bound 1/4"
            )

    @classmethod
    def from_db(cls, sq_db: float, asq_db: float) -> "GaussianVariances":
        return cls(db_to_variance(sq_db), db_to_variance(asq_db))

    def to_db(self) -> tuple[float, float]:
        return variance_to_db(self.v_min), variance_to_db(self.v_max)


def db_to_variance(level_db: float) -> float:
    """Quadrature variance from a squeezing level in dB relative to vacuum."""
    return VACUUM_VARIANCE * 10.0 ** (level_db / 10.0)


def variance_to_db(variance: float) -> float:
    return 10.0 * math.log10(variance / VACUUM_VARIANCE)


# ---------------------------------------------------------------------------
# operators


def annihilation_matrix(space: FockSpace) -> np.ndarray:
    """Matrix A with A[n-1, n] = sqrt(n); the creation matrix is A^dag."""
    A = np.zeros((space.dim, space.dim), dtype=complex)
    ns = np.arange(1, space.dim)
    A[ns - 1, ns] = np.sqrt(ns)
    return A


def number_operator(space: FockSpace) -> np.ndarray:
    return np.diag(space.levels.astype(complex))


def phase_rotation(space: FockSpace, theta: float) -> np.ndarray:
    """Fock-basis phase rotation U = exp(i theta n)."""
    return np.diag(np.exp(1j * theta * space.levels))


def squeeze_operator(space: FockSpace, r: float, phi: float = 0.0) -> np.ndarray:
    """Squeeze operator S(xi) = expm((conj(xi) a^2 - xi a^dag^2)/2), xi = r e^{i phi}.

    Evaluated by scaling-and-squaring of the truncated generator.  With
    phi = 0 the x quadrature is squeezed; in general the squeezed quadrature
    sits at phase-space angle phi/2.
    """
    A = annihilation_matrix(space)
    xi = r * np.exp(1j * phi)
    gen = (np.conj(xi) * (A @ A) - xi * (A.conj().T @ A.conj().T)) / 2.0
    return expm(gen)


# ---------------------------------------------------------------------------
# constructors


def vacuum(space: FockSpace) -> StateVector:
    amps = np.zeros(space.dim, dtype=complex)
    amps[0] = 1.0
    return StateVector(space, amps)


def fock_state(space: FockSpace, n: int) -> StateVector:
    if not 0 <= n < space.dim:
        raise ValueError(f"Fock level {n} outside [0, {space.dim - 1}]")
    amps = np.zeros(space.dim, dtype=complex)
    amps[n] = 1.0
    return StateVector(space, amps)


def coherent(space: FockSpace, alpha: complex, tail_tol: float = DEFAULT_TAIL_TOL) -> StateVector:
    """Coherent state |alpha>: amps[n] = e^{-|a|^2/2} a^n / sqrt(n!)."""
    alpha = complex(alpha)
    amps = np.empty(space.dim, dtype=complex)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(space.dim - 1):
        amps[n + 1] = amps[n] * alpha / math.sqrt(n + 1.0)
    probs = np.abs(amps) ** 2
    probs /= probs.sum()
    _check_tail(probs, tail_tol, f"coherent(alpha={alpha:.4g})")
    return StateVector(space, amps / np.linalg.norm(amps))


def squeezed_vacuum(
    space: FockSpace, r: float, phi: float = 0.0, tail_tol: float = DEFAULT_TAIL_TOL
) -> StateVector:
    """Pure squeezed vacuum for xi = e^{i phi} tanh r, closed form.

    amps[2n] = (cosh r)^{-1/2} (-e^{i phi} tanh r)^n sqrt((2n)!)/(2^n n!);
    odd amplitudes vanish.
    """
    if r < 0:
        raise ValueError("squeeze parameter r must be >= 0")
    lam = -np.exp(1j * phi) * math.tanh(r)
    amps = np.zeros(space.dim, dtype=complex)
    amps[0] = math.cosh(r) ** -0.5
    for k in range(0, space.dim - 2, 2):
        amps[k + 2] = amps[k] * lam * math.sqrt((k + 1.0) * (k + 2.0)) / (k + 2.0)
    probs = np.abs(amps) ** 2
    probs /= probs.sum()
    _check_tail(probs, tail_tol, f"squeezed_vacuum(r={r:.4g})")
    return StateVector(space, amps / np.linalg.norm(amps))


def thermal(space: FockSpace, nbar: float, tail_tol: float = DEFAULT_TAIL_TOL) -> DensityMatrix:
    """Thermal state, diagonal p_n = nbar^n / (nbar+1)^{n+1}."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    p = np.empty(space.dim)
    p[0] = 1.0 / (nbar + 1.0)
    ratio = nbar / (nbar + 1.0)
    for n in range(space.dim - 1):
        p[n + 1] = p[n] * ratio
    probs = p / p.sum()
    _check_tail(probs, tail_tol, f"thermal(nbar={nbar:.4g})")
    return DensityMatrix(space, np.diag(probs.astype(complex)))


def maximally_mixed(space: FockSpace) -> DensityMatrix:
    return DensityMatrix(space, np.eye(space.dim, dtype=complex) / space.dim)


def cat_minus(space: FockSpace, alpha: complex, tail_tol: float = DEFAULT_TAIL_TOL) -> StateVector:
    """Odd cat state, the normalized superposition |alpha> - |-alpha>.

    Only odd Fock levels are populated; the exact normalization constant is
    [2(1 - e^{-2|alpha|^2})]^{-1/2}.  The alpha -> 0 limit is |1>, but the
    normalization is 0/0 there, hence the degeneracy guard.
    """
    alpha = complex(alpha)
    if abs(alpha) < 1e-6:
        raise DegenerateCatError(f"|alpha| = {abs(alpha):.2e} < 1e-6")
    amps = np.empty(space.dim, dtype=complex)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for k in range(space.dim - 1):
        amps[k + 1] = amps[k] * alpha / math.sqrt(k + 1.0)
    amps[space.levels % 2 == 0] = 0.0  # |alpha> - |-alpha> keeps odd levels only
    nrm = np.linalg.norm(amps)
    probs = np.abs(amps) ** 2 / nrm**2
    _check_tail(probs, tail_tol, f"cat_minus(alpha={alpha:.4g})")
    return StateVector(space, amps / nrm)


def squeezed_thermal_from_db(
    space: FockSpace,
    sq_db: float,
    asq_db: float,
    phi: float = 0.0,
    tail_tol: float = GAUSSIAN_TAIL_TOL,
) -> DensityMatrix:
    """Gaussian state with quadrature variances fixed by SQ/ASQ levels in dB.

    v_min = 0.5*10^{sq_db/10}, v_max = 0.5*10^{asq_db/10}, realized as
    S(r) rho_thermal(nbar) S(r)^dag with e^{4r} = v_max/v_min and
    2*nbar + 1 = 2*sqrt(v_min*v_max).  With phi = 0 the squeezed quadrature
    is x; in general it sits at angle phi/2.
    """
    if sq_db > 0 or asq_db < 0:
        raise PhysicalityError(
            f"expected sq_db <= 0 <= asq_db (dB relative to vacuum), got {sq_db}, {asq_db}"
        )
    gv = GaussianVariances.from_db(sq_db, asq_db)
    r = 0.25 * math.log(gv.v_max / gv.v_min) if gv.v_max > gv.v_min else 0.0
    nbar = max(math.sqrt(gv.v_min * gv.v_max) - 0.5, 0.0)

    p = np.empty(space.dim)
    p[0] = 1.0 / (nbar + 1.0)
    ratio = nbar / (nbar + 1.0)
    for n in range(space.dim - 1):
        p[n + 1] = p[n] * ratio
    p /= p.sum()

    S = squeeze_operator(space, r, phi)
    rho = (S * p) @ S.conj().T  # S diag(p) S^dag
    rho = 0.5 * (rho + rho.conj().T)
    _check_tail(np.diag(rho).real, tail_tol, f"squeezed_thermal_from_db({sq_db}, {asq_db})")
    rho /= np.trace(rho).real
    return DensityMatrix(space, rho)


# ---------------------------------------------------------------------------
# serialization: {"dim": D, "re": [...], "im": [...]}, row-major


def state_to_dict(state: StateVector | DensityMatrix) -> dict:
    if isinstance(state, StateVector):
        arr = state.amps
    elif isinstance(state, DensityMatrix):
        arr = state.rho
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    return {"dim": state.space.dim, "re": arr.real.tolist(), "im": arr.imag.tolist()}


def state_from_dict(payload: dict) -> StateVector | DensityMatrix:
    dim = int(payload["dim"])
    arr = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(payload["im"], dtype=float)
    space = FockSpace(dim)
    if arr.ndim == 1:
        return StateVector(space, arr)
    if arr.ndim == 2:
        return DensityMatrix(space, arr)
    raise ValueError(f"expected a vector or a matrix, got ndim={arr.ndim}")


def save_state(state: StateVector | DensityMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(state), fh)


def load_state(path) -> StateVector | DensityMatrix:
    with open(path) as fh:
        return state_from_dict(json.load(fh))
