"""Microwave one-port network toolkit for Purcell-decay analysis."""

__version__ = "0.1.0"

from .analysis import (
    OPEN_CIRCUIT,
    AnalyticPurcellParams,
    SpotKind,
    SweepResult,
    SweetSpot,
    analytic_purcell,
    find_sweet_spots,
    frequency_sweep,
    lifetime_from_admittance,
    port_position_sweep,
)
from .fieldoverlap import FieldGrid, OverlapMap, overlap_metric, rank_port_regions
from .lossbudget import (
    ConfigId,
    ConfigMeasurement,
    LossBudget,
    PulseRecord,
    RabiCalib,
    coupling_q_from_power,
    effective_power,
    extract_budget,
    photon_number,
)
from .models import (
    MultiModeParams,
    SingleModeParams,
    TLineModelParams,
    build_multi_mode,
    build_single_mode,
    build_tline_model,
    open_line_foster_tree,
)
from .network import (
    Capacitor,
    ComplexImmittance,
    ImmittanceKind,
    Inductor,
    Line,
    NetworkTree,
    ParallelRLC,
    Resistor,
    Series,
    Shunt,
    TermOpen,
    TermResistor,
    TermShort,
    TransmissionLine,
    TwoPortABCD,
    cascade,
    element_abcd,
    input_admittance,
    input_impedance,
    one_port,
)

__all__ = [
    "OPEN_CIRCUIT",
    "AnalyticPurcellParams",
    "Capacitor",
    "ComplexImmittance",
    "ConfigId",
    "ConfigMeasurement",
    "FieldGrid",
    "ImmittanceKind",
    "Inductor",
    "Line",
    "LossBudget",
    "MultiModeParams",
    "NetworkTree",
    "OverlapMap",
    "ParallelRLC",
    "PulseRecord",
    "RabiCalib",
    "Resistor",
    "Series",
    "Shunt",
    "SingleModeParams",
    "SpotKind",
    "SweepResult",
    "SweetSpot",
    "TLineModelParams",
    "TermOpen",
    "TermResistor",
    "TermShort",
    "TransmissionLine",
    "TwoPortABCD",
    "analytic_purcell",
    "build_multi_mode",
    "build_single_mode",
    "build_tline_model",
    "cascade",
    "coupling_q_from_power",
    "effective_power",
    "element_abcd",
    "extract_budget",
    "find_sweet_spots",
    "frequency_sweep",
    "input_admittance",
    "input_impedance",
    "lifetime_from_admittance",
    "one_port",
    "open_line_foster_tree",
    "overlap_metric",
    "photon_number",
    "port_position_sweep",
    "rank_port_regions",
]
