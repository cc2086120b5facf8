"""Quantum statistical functions on dense complex operators.

Thin numpy-facing layer over the compiled core: generating and characteristic
functions, quasiprobability distributions, weak values, discrete Wigner
transforms, geometric-mean and information functionals, and the TFIM
method-of-moments estimation pipeline.
"""

import numpy as _np

from ._core import (  # noqa: F401
    NumericalError,
    ValidationError,
    bochner_check,
    canonical_amplitude,
    chernoff,
    clock_shift,
    conditional_kd,
    conditional_qmgf,
    covariance,
    discrete_qcf,
    displacement,
    fidelity,
    geo_mean_trace_bound,
    geo_mgf,
    geo_mgf_derivatives,
    geometric_mean,
    golden_thompson_gap,
    high_temp_moments,
    make_density,
    matrix_function,
    modular_value,
    moments,
    multivariable_qcf,
    multivariable_qmgf,
    npoint_correlation,
    phase_point_operators,
    qcf,
    qcgf,
    qmgf,
    qscf,
    quantum_covariance_matrix,
    reconstruct_state,
    relative_entropy,
    relative_entropy_variance,
    run_estimation,
    simulate_measurements,
    spectral_decompose,
    spectral_projectors,
    tfim_hamiltonian,
    tfim_observables,
    thermal_state,
    uniform_grid,
    weak_value,
    weak_variance,
    wigner_function,
)
from ._core import kd_distribution as _kd_flat
from ._core import mh_distribution as _mh_flat


def kd_distribution(rho, observables, cluster_tol=1e-8):
    """Joint Kirkwood-Dirac table: (outcome axes, complex tensor).

    The tensor axis order matches the measurement order: the first-listed
    observable indexes the first axis.
    """
    outcomes, flat = _kd_flat(rho, observables, cluster_tol)
    shape = [len(o) for o in outcomes]
    return outcomes, _np.asarray(flat).reshape(shape)


def mh_distribution(rho, observables, cluster_tol=1e-8):
    """Margenau-Hill table: the entrywise real part of the KD table."""
    outcomes, flat = _mh_flat(rho, observables, cluster_tol)
    shape = [len(o) for o in outcomes]
    return outcomes, _np.asarray(flat).reshape(shape)
