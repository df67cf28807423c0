import numpy as np
import pytest

from photoncat.fock import DensityMatrix, FockSpace, StateVector


def random_density(space: FockSpace, rng, support: int | None = None) -> DensityMatrix:
    """Random full-rank state (Ginibre); optional support on the lowest levels.

    Restricting the support keeps the top of the truncated space empty, which
    operator-algebra tests need (the truncated ladder operators only represent
    the untruncated commutation relations away from the cutoff).
    """
    support = support or space.dim
    G = rng.normal(size=(support, support)) + 1j * rng.normal(size=(support, support))
    block = G @ G.conj().T
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[:support, :support] = block / np.trace(block).real
    return DensityMatrix(space, rho)


def random_pure(space: FockSpace, rng, support: int | None = None) -> StateVector:
    support = support or space.dim
    v = np.zeros(space.dim, dtype=complex)
    v[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    return StateVector(space, v / np.linalg.norm(v))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
