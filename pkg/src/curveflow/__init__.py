"""Weighted mean curvature operators, flows and smoothing solvers."""

from .core import (
    CurveflowError,
    DivergenceError,
    FormatError,
    IdentityOperator,
    LinearOperator,
    ParameterError,
    Stencil3,
    StencilOperator,
    convolve3,
    merge_channels,
    set_threads,
    split_channels,
)
from .energies import EnergyConfig, energy
from .flow import FlowConfig, mc_flow
from .imageio import load_image, save_image
from .kernels import HALF_LAPLACE, LAPLACE, kernel
from .metrics import SsimConfig, ssim
from .operators import (
    area_gradient_fd,
    gradient,
    mean_curvature_fd,
    wmc_fd,
    wmc_half_laplace,
)
from .solvers import SolverConfig, SolveReport, solve, solve_l1_area, solve_l2_area, solve_l2_epstv

__version__ = "0.1.0"
