"""Fock-space toolkit for heralded photon-addition onto squeezed vacuum.

Simulates the generation of odd optical cat states by adding a single photon
to (impure) squeezed states and characterizes the result: Wigner negativity,
purity, squeezing levels, best-fit cat size, fidelities, and a synthetic
homodyne-tomography round trip.
"""

from . import channels, fock, metrics, pipeline, tomography, wigner
from .fock import DensityMatrix, FockSpace, StateVector
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "channels",
    "fock",
    "metrics",
    "pipeline",
    "tomography",
    "wigner",
    "DensityMatrix",
    "FockSpace",
    "StateVector",
    "KERNEL_BACKEND",
    "__version__",
]
