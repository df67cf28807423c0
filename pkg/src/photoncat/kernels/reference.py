"""Pure-NumPy reference implementations of the hot numerical kernels.

These are the fallback used when the compiled extension is unavailable and
the ground truth the compiled kernels are tested against.
"""

import math

import numpy as np

BACKEND_NAME = "python"


def wigner_points(rho: np.ndarray, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Wigner function of ``rho`` at phase-space points (xs[i], ps[i]).

    Uses the displaced-parity expansion: with gamma = sqrt(2)(x + ip) and
    u = |gamma|^2,

        W = (1/pi) sum_k sum_m (-1)^m sqrt(m!/(m+k)!) L_m^{(k)}(u)
                   * Re-paired(rho[m, m+k] gamma^k) e^{-u/2},

    where the associated Laguerre polynomials follow the stable three-term
    recurrence in m and Hermitian diagonals are paired so the result is
    exactly real.
    """
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    xs = np.asarray(xs, dtype=float).ravel()
    ps = np.asarray(ps, dtype=float).ravel()
    u = 2.0 * (xs * xs + ps * ps)
    gamma = math.sqrt(2.0) * (xs + 1j * ps)
    seed = np.exp(-0.5 * u).astype(complex)  # e^{-u/2} gamma^k / sqrt(k!), built up in k
    total = np.zeros_like(u)
    for k in range(dim):
        if k > 0:
            seed = seed * gamma / math.sqrt(k)
        coeffs = np.diagonal(rho, offset=k)  # rho[m, m+k], m = 0..dim-k-1
        acc = np.zeros(u.size, dtype=complex)
        g = 1.0  # sqrt(m!/(m+k)!) relative to its m=0 value
        sign = 1.0
        lag_prev = None
        lag = np.ones_like(u)
        for m in range(dim - k):
            if m == 1:
                lag_prev, lag = lag, (1.0 + k) - u
            elif m >= 2:
                lag_new = ((2.0 * m - 1.0 + k - u) * lag - (m - 1.0 + k) * lag_prev) / m
                lag_prev, lag = lag, lag_new
            acc += (sign * g) * coeffs[m] * lag
            g *= math.sqrt((m + 1.0) / (m + 1.0 + k))
            sign = -sign
        term = acc * seed
        total += term.real if k == 0 else 2.0 * term.real
    return total / math.pi


def hermite_functions(xs: np.ndarray, dim: int) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions psi_n(x) for n < dim, shape (len(xs), dim).

    psi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)), evaluated by the
    normalized recurrence psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}.
    """
    xs = np.asarray(xs, dtype=float).ravel()
    out = np.empty((xs.size, dim))
    out[:, 0] = math.pi ** -0.25 * np.exp(-0.5 * xs * xs)
    if dim > 1:
        out[:, 1] = math.sqrt(2.0) * xs * out[:, 0]
    for n in range(1, dim - 1):
        out[:, n + 1] = (
            math.sqrt(2.0 / (n + 1.0)) * xs * out[:, n]
            - math.sqrt(n / (n + 1.0)) * out[:, n - 1]
        )
    return out
