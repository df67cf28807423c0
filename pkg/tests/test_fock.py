"""Fock-space carriers and constructors.

Expected values are frozen from closed forms evaluated independently of the
package (see the inline formulas).
"""

import json
import math

import numpy as np
import pytest
from conftest import random_density, random_pure

from photoncat import fock
from photoncat.errors import (
    DegenerateCatError,
    DimensionMismatch,
    PhysicalityError,
    TruncationError,
)
from photoncat.metrics import fidelity, purity, squeezing_report
from photoncat.wigner import wigner_origin_parity


def test_annihilation_matrix_smallest_dims():
    A2 = fock.annihilation_matrix(fock.FockSpace(2))
    assert np.array_equal(A2, np.array([[0, 1], [0, 0]], dtype=complex))
    A3 = fock.annihilation_matrix(fock.FockSpace(3))
    assert A3[1, 2] == pytest.approx(math.sqrt(2), abs=1e-15)


def test_number_operator_from_ladder_product():
    # direct matrix-product oracle: A^dag A must be diag(0..D-1)
    space = fock.FockSpace(17)
    A = fock.annihilation_matrix(space)
    num = A.conj().T @ A
    assert np.allclose(num, np.diag(np.arange(17, dtype=complex)), atol=1e-12)


def test_coherent_vacuum_limit():
    space = fock.FockSpace(20)
    assert np.allclose(fock.coherent(space, 0.0).amps, fock.vacuum(space).amps)


def test_coherent_amplitudes_and_energy():
    space = fock.FockSpace(20)
    state = fock.coherent(space, 1.0)
    assert state.amps[0].real == pytest.approx(0.6065306597126334, abs=1e-12)  # e^{-1/2}
    state = fock.coherent(fock.FockSpace(40), 1.5)
    assert state.mean_photon_number() == pytest.approx(2.25, abs=1e-6)


def test_coherent_truncation_error():
    with pytest.raises(TruncationError):
        fock.coherent(fock.FockSpace(20), 6.0)


def test_squeezed_vacuum_closed_form():
    space = fock.FockSpace(40)
    assert np.allclose(fock.squeezed_vacuum(space, 0.0).amps, fock.vacuum(space).amps)
    state = fock.squeezed_vacuum(space, math.atanh(0.5))
    # (cosh r)^{-1/2} = (sqrt(3)/2)^{1/2}, amps2 = -amps0 * tanh(r) * sqrt(2)/2
    assert state.amps[0].real == pytest.approx(0.9306048591020997, abs=1e-10)
    assert state.amps[2].real == pytest.approx(-0.32901850323812315, abs=1e-10)
    assert np.all(state.amps[1::2] == 0)
    state = fock.squeezed_vacuum(space, 0.8)
    assert state.mean_photon_number() == pytest.approx(math.sinh(0.8) ** 2, abs=1e-6)


def test_squeezed_vacuum_matches_operator_route():
    # closed form vs matrix exponential of the generator
    space = fock.FockSpace(40)
    for lam, phi in [(0.3, 0.0), (0.5, 0.0), (0.4, 1.1)]:
        r = math.atanh(lam)
        closed = fock.squeezed_vacuum(space, r, phi)
        via_op = fock.squeeze_operator(space, r, phi) @ fock.vacuum(space).amps
        assert abs(np.vdot(closed.amps, via_op)) ** 2 > 1 - 1e-12
        assert np.abs(closed.amps - via_op).max() < 1e-6


@pytest.mark.parametrize(
    "sq_db,asq_db,target",
    [(-3.76, 3.89, 0.99), (-8.89, 15.13, 0.49)],
)
def test_squeezed_thermal_purity_targets(sq_db, asq_db, target):
    rho = fock.squeezed_thermal_from_db(fock.FockSpace(40), sq_db, asq_db)
    assert purity(rho) == pytest.approx(target, abs=0.01)


def test_squeezed_thermal_zero_db_is_vacuum():
    rho = fock.squeezed_thermal_from_db(fock.FockSpace(20), 0.0, 0.0)
    assert rho.populations[0] == pytest.approx(1.0, abs=1e-12)


def test_squeezed_thermal_analytic_purity():
    # Gaussian purity 1/(2 sqrt(vmin*vmax))
    for sq_db, asq_db in [(-1.0, 1.5), (-4.0, 6.0), (-6.27, 7.31)]:
        rho = fock.squeezed_thermal_from_db(fock.FockSpace(60), sq_db, asq_db)
        v_min, v_max = fock.db_to_variance(sq_db), fock.db_to_variance(asq_db)
        assert purity(rho) == pytest.approx(1 / (2 * math.sqrt(v_min * v_max)), abs=1e-6)


def test_squeezed_thermal_pure_when_balanced():
    rho = fock.squeezed_thermal_from_db(fock.FockSpace(40), -4.0, 4.0)
    assert purity(rho) >= 1 - 1e-6


def test_squeezed_thermal_physicality_errors():
    space = fock.FockSpace(40)
    with pytest.raises(PhysicalityError):
        fock.squeezed_thermal_from_db(space, -3.0, 2.0)  # vmin*vmax < 1/4
    with pytest.raises(PhysicalityError):
        fock.squeezed_thermal_from_db(space, 1.0, 2.0)  # sq_db > 0
    with pytest.raises(TruncationError):
        fock.squeezed_thermal_from_db(fock.FockSpace(12), -8.89, 15.13)


def test_thermal_examples():
    space = fock.FockSpace(40)
    assert np.allclose(fock.thermal(space, 0.0).populations, fock.vacuum(space).probabilities)
    assert purity(fock.thermal(space, 1.0)) == pytest.approx(1 / 3, abs=1e-9)
    assert fock.thermal(space, 0.5).populations[0] == pytest.approx(2 / 3, abs=1e-9)


def test_cat_minus_examples():
    space = fock.FockSpace(40)
    cat = fock.cat_minus(space, 1.3)
    assert np.all(cat.amps[0::2] == 0)
    with pytest.raises(DegenerateCatError):
        fock.cat_minus(space, 1e-7)
    # alpha -> 0 limit is |1>
    tiny = fock.cat_minus(space, 1e-3)
    assert fidelity(tiny, fock.fock_state(space, 1)) > 1 - 1e-5
    # <n> = |alpha|^2 coth(|alpha|^2); 4*coth(4) = 4.002684601606729
    cat2 = fock.cat_minus(space, 2.0)
    assert cat2.mean_photon_number() == pytest.approx(4.002684601606729, abs=1e-6)


def test_cat_minus_normalization_constant():
    # interior amplitudes carry N_alpha = [2(1-e^{-2|a|^2})]^{-1/2}
    space = fock.FockSpace(40)
    alpha = 1.1
    cat = fock.cat_minus(space, alpha)
    n_alpha = (2 * (1 - math.exp(-2 * alpha**2))) ** -0.5
    coh = fock.coherent(space, alpha)
    expected = 2 * n_alpha * coh.amps[1]
    assert cat.amps[1] == pytest.approx(expected, abs=1e-9)


def test_state_vector_validation():
    space = fock.FockSpace(5)
    with pytest.raises(ValueError):
        fock.StateVector(space, np.ones(5, dtype=complex))
    with pytest.raises(ValueError):
        fock.StateVector(space, np.zeros(3, dtype=complex))


def test_density_matrix_validation(rng):
    space = fock.FockSpace(6)
    good = random_density(space, rng)
    fock.DensityMatrix(space, good.rho)  # re-validates cleanly
    with pytest.raises(ValueError):
        fock.DensityMatrix(space, good.rho * 2.0)  # trace 2
    bad = np.array(good.rho, copy=True)
    bad[0, 1] += 1e-3  # breaks hermiticity
    with pytest.raises(ValueError):
        fock.DensityMatrix(space, bad)
    indef = np.eye(6, dtype=complex) / 5.0
    indef[5, 5] = -1.0 / 5.0
    with pytest.raises(ValueError):
        fock.DensityMatrix(space, indef)


def test_cross_dimension_is_error(rng):
    a = random_pure(fock.FockSpace(8), rng)
    b = random_pure(fock.FockSpace(9), rng)
    with pytest.raises(DimensionMismatch):
        a.overlap(b)
    with pytest.raises(DimensionMismatch):
        fidelity(a, b)


def test_states_are_immutable():
    state = fock.vacuum(fock.FockSpace(4))
    with pytest.raises(ValueError):
        state.amps[0] = 0.5
    rho = fock.thermal(fock.FockSpace(16), 0.2)
    with pytest.raises(ValueError):
        rho.rho[0, 0] = 0.0


def test_gaussian_variances():
    with pytest.raises(PhysicalityError):
        fock.GaussianVariances(0.1, 0.2)
    gv = fock.GaussianVariances.from_db(-3.0, 5.0)
    assert gv.to_db()[0] == pytest.approx(-3.0, abs=1e-12)
    assert gv.to_db()[1] == pytest.approx(5.0, abs=1e-12)


def test_serialization_round_trip(rng):
    space = fock.FockSpace(12)
    rho = random_density(space, rng)
    payload = json.loads(json.dumps(fock.state_to_dict(rho)))
    back = fock.state_from_dict(payload)
    assert np.array_equal(back.rho, rho.rho)  # exact, repr round-trips floats

    psi = random_pure(space, rng)
    back = fock.state_from_dict(json.loads(json.dumps(fock.state_to_dict(psi))))
    assert np.array_equal(back.amps, psi.amps)


def test_serialization_file_round_trip(tmp_path, rng):
    rho = random_density(fock.FockSpace(7), rng)
    path = tmp_path / "state.json"
    fock.save_state(rho, path)
    back = fock.load_state(path)
    assert np.array_equal(back.rho, rho.rho)


def test_phase_rotation_is_unitary():
    space = fock.FockSpace(9)
    U = fock.phase_rotation(space, 0.83)
    assert np.allclose(U @ U.conj().T, np.eye(9), atol=1e-14)


def test_truncation_stability_on_doubling():
    """Scalar metrics move by less than 1e-8 when the cutoff doubles.

    Holds for every constructor where the tail bound is comfortably met; the
    variance-based dB metrics of strongly anti-squeezed mixed states converge
    much more slowly than the tail and are checked on gentler inputs.
    """
    cases = [
        lambda sp: fock.coherent(sp, 1.2).density(),
        lambda sp: fock.squeezed_vacuum(sp, math.atanh(0.5)).density(),
        lambda sp: fock.thermal(sp, 0.8),
        lambda sp: fock.cat_minus(sp, 1.5).density(),
        lambda sp: fock.squeezed_thermal_from_db(sp, -3.76, 3.89),
        lambda sp: fock.squeezed_thermal_from_db(sp, -1.42, 1.78),
    ]
    for make in cases:
        lo, hi = make(fock.FockSpace(40)), make(fock.FockSpace(80))
        assert abs(purity(lo) - purity(hi)) < 1e-8
        assert abs(wigner_origin_parity(lo) - wigner_origin_parity(hi)) < 1e-8
        assert abs(lo.mean_photon_number() - hi.mean_photon_number()) < 1e-8
        rep_lo, rep_hi = squeezing_report(lo), squeezing_report(hi)
        assert abs(rep_lo.sq_db - rep_hi.sq_db) < 1e-8
        assert abs(rep_lo.asq_db - rep_hi.asq_db) < 1e-8
