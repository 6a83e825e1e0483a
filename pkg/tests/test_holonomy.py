from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phase_lab.errors import LevelCrossing, StepTooSmall, ValidationError, ZeroTrace
from phase_lab.holonomy import (
    berry_offdiagonal_connection,
    berry_phase_wilson,
    correspondence_check,
    holonomy_phase,
    level_states,
    max_connection_defect,
    numeric_uhlmann_connection,
    phase_report,
    uhlmann_holonomy,
    uhlmann_phase,
    wilson_loop_phase,
    worker_count,
)
from phase_lab.linops import max_norm
from phase_lab.loops import ParameterLoop
from phase_lab.models import BosonModel, FermionModel, OneDimModel, SpinModel, UnitaryFamily
from phase_lab.models.base import Model
from phase_lab.phases import circle_distance

LATITUDE = ParameterLoop.latitude(math.pi / 3, K=512)
CIRCLE = ParameterLoop.circle(0, 0.5, 1, K=512)


# Berry ------------------------------------------------------------------------
@pytest.mark.parametrize("m, expected", [(-1, math.pi), (0, 0.0), (1, -math.pi)])
def test_spin1_latitude_berry(m, expected):
    model = SpinModel(j=1, beta=1)
    theta = berry_phase_wilson(model, LATITUDE, model.level_of(m))
    assert circle_distance(theta, expected) < 1e-4


@pytest.mark.parametrize("theta0", [0.4, 1.0, 2.2])
def test_spin_half_berry_is_half_solid_angle(theta0):
    loop = ParameterLoop.latitude(theta0, K=1024)
    model = SpinModel(j=0.5)
    assert circle_distance(berry_phase_wilson(model, loop, 0), 0.5 * loop.solid_angle) < 1e-4
    assert circle_distance(berry_phase_wilson(model, loop.reversed(), 0), -0.5 * loop.solid_angle) < 1e-4


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_wilson_loop_gauge_invariant(seed):
    rng = np.random.default_rng(seed)
    states = level_states(SpinModel(j=1), ParameterLoop.latitude(1.0, K=64), 1)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 64))
    moved = [p * v for p, v in zip(phases, states[:-1])]
    moved.append(moved[0])
    assert circle_distance(wilson_loop_phase(moved), wilson_loop_phase(states)) < 1e-12


def test_boson_berry_and_unitary_closed_form():
    assert circle_distance(berry_phase_wilson(BosonModel(beta=2), CIRCLE.with_samples(4096)), -math.pi / 2) < 1e-4
    model = UnitaryFamily.random(dim=3, seed=1)
    for level in range(3):
        theta = berry_phase_wilson(model, CIRCLE, level)
        assert circle_distance(theta, model.closed_form_phase(CIRCLE, level).theta_b) < 1e-4


def test_fermion_berry_soul():
    theta = berry_phase_wilson(FermionModel(beta=1), CIRCLE.with_samples(2048))
    assert abs(theta.czz - (-math.pi / 2)) < 1e-4


class _Crossing(Model):
    """Two levels that touch at t = 1/2."""

    kind = "crossing"

    @property
    def dim(self):
        return 2

    def hamiltonian_at(self, loop, t):
        return np.diag([0.0, math.cos(math.pi * t) ** 2])


def test_level_crossing_is_reported():
    with pytest.raises(LevelCrossing):
        level_states(_Crossing(), ParameterLoop.circle(K=64), 0)


# connections ------------------------------------------------------------------
def test_numeric_connection_step_guards():
    model = SpinModel(j=1, beta=1)
    with pytest.raises(StepTooSmall):
        numeric_uhlmann_connection(model, LATITUDE, 0.1, h=1e-9)
    with pytest.raises(ValidationError):
        numeric_uhlmann_connection(model, LATITUDE, 0.1, h=0.1)


@pytest.mark.parametrize("model, loop", [
    (BosonModel(beta=1), CIRCLE),
    (SpinModel(j=1.5, beta=0.7), LATITUDE),
    (FermionModel(beta=1), CIRCLE),
    (UnitaryFamily.random(dim=4, seed=2), CIRCLE),
])
@pytest.mark.parametrize("source", ["analytic", "numeric"])
def test_connections_anti_hermitian(model, loop, source):
    assert max_connection_defect(model, loop, source, samples=16) < 1e-8


def test_connection_vanishes_at_infinite_temperature():
    model = SpinModel(j=1, beta=0.0)
    assert max_norm(model.analytic_uhlmann_connection(LATITUDE, 0.3)) == 0.0


@pytest.mark.parametrize("model", [SpinModel(j=0.5, beta=40), UnitaryFamily.random(dim=2, beta=40, seed=0)])
def test_zero_temperature_off_diagonal_limit(model):
    """Off the diagonal, A_U approaches the Berry connection with pure eigenvectors at large beta."""
    loop = ParameterLoop.latitude(1.0) if isinstance(model, SpinModel) else CIRCLE
    for t in (0.2, 0.6):
        A = model.analytic_uhlmann_connection(loop, t)
        V = np.linalg.eigh(model.hamiltonian_at(loop, t))[1]
        off = V.conj().T @ A @ V
        np.fill_diagonal(off, 0.0)
        ref = V.conj().T @ berry_offdiagonal_connection(model, loop, t) @ V
        assert np.abs(np.abs(off) - np.abs(ref)).max() < 1e-3


# holonomy ---------------------------------------------------------------------
@pytest.mark.parametrize("estimator", ["connection_product", "polar_isometry"])
def test_holonomy_unitary(estimator):
    hol = uhlmann_holonomy(SpinModel(j=1, beta=1), LATITUDE, estimator=estimator)
    assert hol.unitarity_defect < 1e-10
    assert hol.K == 512


def test_holonomy_validation():
    with pytest.raises(ValidationError):
        uhlmann_holonomy(SpinModel(), LATITUDE, K=32)
    with pytest.raises(ValidationError):
        uhlmann_holonomy(SpinModel(), LATITUDE, estimator="euler")
    with pytest.raises(ValidationError):
        uhlmann_holonomy(SpinModel(), LATITUDE, source="guess")
    with pytest.raises(ValidationError):
        uhlmann_holonomy(FermionModel(), CIRCLE, estimator="polar_isometry")


def test_partials_end_at_holonomy():
    hol = uhlmann_holonomy(SpinModel(j=1, beta=1), LATITUDE, K=128, keep_partials=True)
    assert len(hol.partials) == 128
    assert max_norm(hol.partials[-1] - hol.matrix) == 0.0


def test_numeric_source_matches_analytic():
    model = SpinModel(j=1, beta=1)
    a = uhlmann_phase(model, LATITUDE, source="analytic")
    n = uhlmann_phase(model, LATITUDE, source="numeric")
    assert circle_distance(a, n) < 1e-6


def test_reversed_loop_flips_phase():
    model = BosonModel(beta=2)
    a = uhlmann_phase(model, CIRCLE)
    b = uhlmann_phase(model, CIRCLE.reversed())
    assert abs(a + b) < 1e-6


def test_winding_two_doubles_boson_phase():
    model = BosonModel(beta=1)
    one = uhlmann_phase(model, CIRCLE.with_samples(1024))
    two = uhlmann_phase(model, ParameterLoop.circle(0, 0.5, 2, K=2048))
    assert circle_distance(two, 2 * one) < 1e-5


def test_zero_trace_is_reported():
    from scipy.optimize import brentq

    from phase_lab.models.spin import spin1_equator_argument

    root = brentq(spin1_equator_argument, 1.5, 2.5, xtol=1e-15)
    model = SpinModel(j=1, beta=root)
    loop = ParameterLoop.equator(K=256)
    with pytest.raises(ZeroTrace):
        uhlmann_phase(model, loop)


def test_one_dim_holonomy_is_identity():
    hol = uhlmann_holonomy(OneDimModel(beta=5), LATITUDE)
    assert hol.matrix.tolist() == [[1]]
    assert holonomy_phase(OneDimModel(beta=5), LATITUDE, hol.matrix) == 0.0


# reports ----------------------------------------------------------------------
def test_phase_report_fields():
    r = phase_report(BosonModel(beta=2), CIRCLE.with_samples(1024))
    assert r.model == "boson" and r.n_cut == 48 and r.K == 1024
    assert r.err_closed < 1e-5
    assert r.theta_b_closed == pytest.approx(-math.pi / 2)


def test_phase_report_without_closed_form():
    r = phase_report(SpinModel(j=1, beta=1), LATITUDE)
    assert r.theta_u_closed is None and r.err_closed is None
    # level 0 is m = -1, whose Berry phase on this latitude is pi
    assert abs(r.theta_b_closed) == pytest.approx(math.pi)


def test_correspondence_order_and_schedule_checks(monkeypatch):
    monkeypatch.setenv("PHASE_LAB_THREADS", "3")
    assert worker_count(10) == 3
    assert worker_count(2) == 2
    betas = [0.5, 1.0, 2.0, 4.0, 8.0]
    reports = correspondence_check(SpinModel(j=0.5), LATITUDE, betas)
    assert [r.beta for r in reports] == betas
    serial = correspondence_check(SpinModel(j=0.5), LATITUDE, betas, workers=1)
    assert [r.theta_u_numeric for r in reports] == [r.theta_u_numeric for r in serial]
    with pytest.raises(ValidationError):
        correspondence_check(SpinModel(j=0.5), LATITUDE, [2.0, 1.0])
    with pytest.raises(ValidationError):
        correspondence_check(SpinModel(j=0.5), LATITUDE, [])


def test_correspondence_premise_on_unitary_family():
    reports = correspondence_check(UnitaryFamily.random(dim=3, seed=4), CIRCLE, [1.0, 40.0])
    assert reports[0].premise_defect is None
    assert reports[-1].premise_defect < 1e-4
