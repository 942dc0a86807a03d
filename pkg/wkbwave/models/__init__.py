"""
Domain models for wkbwave
"""
from wkbwave.models.media import (
    DispersionFactor,
    DispersionKind,
    FrequencyWindow,
    MediumModel,
    ProfileFactor,
    ProfileKind,
    Units,
    lorentzian_medium,
)
from wkbwave.models.grids import (
    AxisGrid,
    FrequencyGrid,
    FrequencyKind,
    SampledField,
    Taper,
    TaperKind,
)
from wkbwave.models.results import (
    Boundary,
    DecayFit,
    DiscreteOperator,
    EigenPair,
    LorentzCase,
    ModeFunction,
    PhaseTable,
    ValidityReport,
)

__all__ = [
    "DispersionFactor",
    "DispersionKind",
    "FrequencyWindow",
    "MediumModel",
    "ProfileFactor",
    "ProfileKind",
    "Units",
    "lorentzian_medium",
    "AxisGrid",
    "FrequencyGrid",
    "FrequencyKind",
    "SampledField",
    "Taper",
    "TaperKind",
    "Boundary",
    "DecayFit",
    "DiscreteOperator",
    "EigenPair",
    "LorentzCase",
    "ModeFunction",
    "PhaseTable",
    "ValidityReport",
]
