"""Contact and nearest-neighbor distance distributions for random satellite shells.

Satellites form a binomial point process on concentric spheres around the
Earth. :mod:`leodist.analytic` evaluates the closed-form distance CDFs,
:mod:`leodist.montecarlo` simulates them with Earth blockage, and
:mod:`leodist.validation` compares the two.
"""
from .analytic import (
    DistanceDistribution,
    ShellCcdf,
    ShellKind,
    ccdf_contact_shell,
    ccdf_nn_cross_shell,
    ccdf_nn_same_shell,
    cdf_combined,
    conditional_mean_distance,
    distribution,
    quantile,
    visibility_probability,
)
from .constellation import (
    PRESET_NAMES,
    ConstellationSpec,
    ObservationPoint,
    ShellSpec,
    parse_config,
    preset,
    serialize_config,
)
from .errors import BeyondVisibilityError, ConfigError, ConsistencyError, GeometryError, LeodistError
from .geometry import EarthGeometry, ShellGeometry
from .montecarlo import (
    DEFAULT_BACKEND,
    EmpiricalCdf,
    SamplerKind,
    SimulationConfig,
    run_experiment,
)
from .validation import KsReport, ks_compare, sweep_report

__version__ = "0.1.0"
