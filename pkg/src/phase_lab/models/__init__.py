"""Parametrised density-matrix families and their closed-form oracles."""

from __future__ import annotations

from ..loops import ParameterLoop
from .base import DensityMatrix, FramedModel, Model, PhaseClosedForm, boltzmann_weights
from .boson import BosonModel, annihilation, boson_displacement, coupling_strength, occupancy_margin
from .fermion import FermionModel, fermion_displacement
from .one_dim import OneDimModel
from .spin import SpinModel, spin1_equator_argument, spin_matrices, wigner_small_d
from .unitary_family import UnitaryFamily, uhlmann_coefficients


def density_at(model: Model, loop: ParameterLoop, t: float):
    return model.density_at(loop, t)


def analytic_uhlmann_connection(model: Model, loop: ParameterLoop, t: float):
    return model.analytic_uhlmann_connection(loop, t)


def closed_form_phase(model: Model, loop: ParameterLoop, level: int = 0) -> PhaseClosedForm:
    return model.closed_form_phase(loop, level)


__all__ = [
    "BosonModel",
    "DensityMatrix",
    "FermionModel",
    "FramedModel",
    "Model",
    "OneDimModel",
    "PhaseClosedForm",
    "SpinModel",
    "UnitaryFamily",
    "analytic_uhlmann_connection",
    "annihilation",
    "boltzmann_weights",
    "boson_displacement",
    "closed_form_phase",
    "coupling_strength",
    "density_at",
    "fermion_displacement",
    "occupancy_margin",
    "spin1_equator_argument",
    "spin_matrices",
    "uhlmann_coefficients",
    "wigner_small_d",
]
