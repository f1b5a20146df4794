"""Mobile femtocell simulator: in-vehicle FAP relay versus direct macrocell service."""

from .linkmetrics import (
    LinkBudget,
    LinkPowers,
    OutageThreshold,
    outage_probability,
    outage_probability_empirical,
    received_power,
    relay_outage,
    snir,
    spectral_efficiency,
)
from .propagation import (
    FemtoPropagationParams,
    MacroPropagationParams,
    ShadowingSample,
    femto_path_loss,
    macro_path_loss,
    ms_antenna_correction,
    sample_shadowing,
)
from .scenario import (
    BackhaulContext,
    BackhaulDecision,
    ConfigError,
    MobilityTrace,
    NodeSpec,
    ScenarioConfig,
    default_config,
    select_backhaul,
    validate,
)
from .simengine import SweepResult, SweepSpec, TraceResult, run_sweep, run_trace, summarize

__version__ = "0.1.0"
