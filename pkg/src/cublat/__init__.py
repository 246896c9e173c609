"""Option pricing with the degree-5 cubature formula on Wiener space and the
recombining trinomial lattice built from it."""

from .analytic import analytic_price, black_price, bs_price, norm_cdf
from .cubature import (
    DEGREE5,
    CubatureFormula5,
    TrajectoryPath,
    cubature_single_step_price,
    cubature_terminal_levels,
    trajectory_points,
)
from .experiments import SweepReport, SweepRow, american_compare, martingale_table, sweep_c, sweep_n
from .lattice import (
    LatticeFactors,
    TerminalDistribution,
    american_price_tree,
    backward_induction,
    build_factors,
    crr_price,
    european_price_tree,
    martingale_gap,
    path_count,
    price_tree,
    terminal_distribution,
)
from .params import (
    ExerciseStyle,
    MarketParams,
    ModelKind,
    OptionKind,
    OptionSpec,
    ParameterError,
    american,
    european,
)

__version__ = "0.1.0"
