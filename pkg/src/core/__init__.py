"""
Core module for DenseCode Lab
Contains the Gaussian state engine, the dense coding protocol,
capacity analytics and Monte Carlo estimation
"""

from .capacity_analytics import (
    Allocation,
    BreakEvenResult,
    CapacityReport,
    break_even_vs_number,
    break_even_vs_squeezed,
    c_coh,
    c_dense,
    c_number,
    c_sq,
    capacity_report,
    capacity_sweep,
    h_dense,
    h_dense_quadrature,
    optimal_allocation,
    optimal_nbar,
    squeezing_db,
)
from .dense_protocol import (
    BivariateGaussian,
    ProtocolConfig,
    TrialBatch,
    TrialRecord,
    conditional_beta_distribution,
    decode,
    encode,
    marginal_beta_distribution,
    photon_budget,
    run_trials,
    sample_signal,
)
from .errors import (
    BracketError,
    DegenerateEstimateError,
    DenseCodingError,
    SimulationError,
    ToleranceExceeded,
    ValidationError,
)
from .gaussian_core import (
    ComplexAmplitude,
    GaussianState,
    Quadrature,
    ScalarGaussian,
    beamsplitter_5050,
    displace,
    joint_homodyne_sample,
    mean_photon,
    quadrature_marginal,
    two_mode_squeezed,
    vacuum,
)
from .mc_estimation import (
    MiEstimate,
    estimate_mi_gaussian,
    estimate_residual_variance,
    estimator_bias_report,
)
from .preset_manager import PresetManager
from .validator import ParameterValidator

__all__ = [
    'Allocation', 'BreakEvenResult', 'CapacityReport',
    'break_even_vs_number', 'break_even_vs_squeezed',
    'c_coh', 'c_dense', 'c_number', 'c_sq', 'capacity_report', 'capacity_sweep',
    'h_dense', 'h_dense_quadrature', 'optimal_allocation', 'optimal_nbar', 'squeezing_db',
    'BivariateGaussian', 'ProtocolConfig', 'TrialBatch', 'TrialRecord',
    'conditional_beta_distribution', 'decode', 'encode', 'marginal_beta_distribution',
    'photon_budget', 'run_trials', 'sample_signal',
    'BracketError', 'DegenerateEstimateError', 'DenseCodingError', 'SimulationError',
    'ToleranceExceeded', 'ValidationError',
    'ComplexAmplitude', 'GaussianState', 'Quadrature', 'ScalarGaussian',
    'beamsplitter_5050', 'displace', 'joint_homodyne_sample', 'mean_photon',
    'quadrature_marginal', 'two_mode_squeezed', 'vacuum',
    'MiEstimate', 'estimate_mi_gaussian', 'estimate_residual_variance',
    'estimator_bias_report',
    'PresetManager', 'ParameterValidator',
]
