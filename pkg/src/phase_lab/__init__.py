"""Berry and Uhlmann geometric phases of parametrised quantum families."""

from __future__ import annotations

from .holonomy import (
    Holonomy,
    PhaseReport,
    berry_phase_wilson,
    correspondence_check,
    numeric_uhlmann_connection,
    uhlmann_holonomy,
    uhlmann_phase,
)
from .loops import ParameterLoop
from .models import BosonModel, FermionModel, OneDimModel, SpinModel, UnitaryFamily

__version__ = "0.1.0"

__all__ = [
    "BosonModel",
    "FermionModel",
    "Holonomy",
    "OneDimModel",
    "ParameterLoop",
    "PhaseReport",
    "SpinModel",
    "UnitaryFamily",
    "berry_phase_wilson",
    "correspondence_check",
    "numeric_uhlmann_connection",
    "uhlmann_holonomy",
    "uhlmann_phase",
]
