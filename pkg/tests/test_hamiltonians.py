import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gcmera.alpha_models import (
    ModelParams,
    fixed_point_state,
    magic_cmera_state,
    massive_target,
    massless_target,
    unentangled_state,
)
from gcmera.exceptions import DomainError, ValidationError
from gcmera.hamiltonians import (
    ModeQuadraticForm,
    build_massive,
    build_massless_u1,
    build_onsite,
    build_parent,
    build_parent_fixed_point,
    dispersion,
    ground_state_of,
    verify_parent,
)

GRID = np.geomspace(1e-3, 1e3, 121)
P = ModelParams()


def sqrt_ba(form, pol, k):
    a, b = form.coefficients(pol, k)
    return np.sqrt(b / a)


class TestBuilders:
    def test_massless(self):
        form = build_massless_u1(P)
        gs = ground_state_of(form)
        np.testing.assert_allclose(gs.alpha_perp(GRID), GRID, rtol=1e-15)
        assert form.longitudinal_constrained and gs.longitudinal_constrained
        assert dispersion(form, "perp", 2.5) == pytest.approx(2.5, rel=1e-15)

    def test_massive_alphas(self):
        m = 0.7
        gs = ground_state_of(build_massive(P, m))
        np.testing.assert_allclose(gs.alpha_par(GRID), m * m / np.sqrt(GRID**2 + m * m), rtol=1e-14)
        np.testing.assert_allclose(gs.alpha_perp(GRID), np.sqrt(GRID**2 + m * m), rtol=1e-14)

    def test_massive_longitudinal_pole(self):
        m = 0.7
        w = dispersion(build_massive(P, m), "par", GRID)
        np.testing.assert_allclose(w, np.sqrt(GRID**2 + m * m), rtol=1e-14)

    def test_massive_matches_target(self):
        gs = ground_state_of(build_massive(P, 2.0))
        tgt = massive_target(P, 2.0)
        for pol in ("par", "perp"):
            np.testing.assert_allclose(gs.alpha(pol, GRID), tgt.alpha(pol, GRID), rtol=1e-14)

    def test_massive_rejects_zero_mass(self):
        with pytest.raises(ValidationError):
            build_massive(P, 0.0)

    @pytest.mark.parametrize("s", [0.5, 2.0, 6.0])
    def test_parent_ground_state_is_magic(self, s):
        p = ModelParams(s=s, cutoff=1.3)
        gs = ground_state_of(build_parent(p))
        st_ = magic_cmera_state(p)
        lam, m = 1.3, p.mass
        np.testing.assert_allclose(
            gs.alpha_perp(GRID), lam * np.sqrt((GRID**2 + m * m) / (GRID**2 + lam * lam)), rtol=1e-14
        )
        np.testing.assert_allclose(
            gs.alpha_par(GRID), m * m / lam * np.sqrt((GRID**2 + lam * lam) / (GRID**2 + m * m)), rtol=1e-14
        )
        for pol in ("par", "perp"):
            np.testing.assert_allclose(gs.alpha(pol, GRID), st_.alpha(pol, GRID), rtol=1e-13)

    def test_parent_gap(self):
        p = ModelParams(s=2.0)
        form = build_parent(p)
        assert dispersion(form, "perp", 1e-9) == pytest.approx(p.mass, rel=1e-12)
        assert dispersion(form, "par", 1e-9) == pytest.approx(p.mass, rel=1e-12)

    def test_parent_dispersion_at_cutoff(self):
        p = ModelParams(s=2.0, cutoff=1.0)
        m2 = p.mass**2
        assert dispersion(build_parent(p), "perp", 1.0) == pytest.approx(math.sqrt(2 * (1 + m2)), rel=1e-15)

    def test_parent_rejects_fixed_point(self):
        with pytest.raises(ValidationError):
            build_parent(ModelParams(s=math.inf))

    def test_unregulated_parent_is_massive(self):
        p = ModelParams(s=1.0)
        form = build_parent(p, regulated=False)
        ref = build_massive(p, p.mass)
        for pol in ("par", "perp"):
            np.testing.assert_array_equal(form.coefficients(pol, GRID)[1], ref.coefficients(pol, GRID)[1])

    def test_fixed_point_parent(self):
        form = build_parent_fixed_point(ModelParams(cutoff=2.0))
        gs = ground_state_of(form)
        np.testing.assert_allclose(gs.alpha_perp(GRID), 2.0 * GRID / np.sqrt(GRID**2 + 4.0), rtol=1e-14)

    def test_fixed_point_dispersion_regimes(self):
        form = build_parent_fixed_point(ModelParams(cutoff=1.0))
        assert dispersion(form, "perp", 1e-3) == pytest.approx(1e-3, rel=1e-6)
        assert dispersion(form, "perp", 1e3) == pytest.approx(1e6, rel=1e-6)

    def test_onsite_is_unentangled(self):
        gs = ground_state_of(build_onsite(ModelParams(cutoff=1.7)))
        ref = unentangled_state(ModelParams(cutoff=1.7))
        for pol in ("par", "perp"):
            np.testing.assert_allclose(gs.alpha(pol, GRID), ref.alpha(pol, GRID), rtol=1e-15)

    def test_constrained_dispersion(self):
        with pytest.raises(DomainError):
            dispersion(build_massless_u1(P), "par", 1.0)

    def test_nonpositive_a_rejected(self):
        form = ModeQuadraticForm(a_perp=lambda k: 1.0 - np.asarray(k), b_perp=lambda k: np.ones_like(k))
        with pytest.raises(DomainError):
            ground_state_of(form).alpha_perp(np.array([0.5, 2.0]))


@pytest.mark.parametrize(
    "form",
    [
        build_massless_u1(P),
        build_massive(P, 0.3),
        build_parent(ModelParams(s=1.5)),
        build_parent_fixed_point(P),
        build_onsite(P),
    ],
    ids=lambda f: f.label,
)
def test_ground_state_identity(form):
    gs = ground_state_of(form)
    pols = ("perp",) if form.longitudinal_constrained else ("par", "perp")
    for pol in pols:
        ref = sqrt_ba(form, pol, GRID)
        assert np.max(np.abs(gs.alpha(pol, GRID) - ref) / ref) <= 1e-12


class TestVerifyParent:
    def test_magic_passes(self):
        p = ModelParams(s=1.0)
        rep = verify_parent(magic_cmera_state(p), build_parent(p), GRID, tol=1e-10)
        assert rep.passed and rep.max_deviation <= 1e-10

    def test_fixed_point_passes(self):
        p = ModelParams(s=math.inf)
        rep = verify_parent(fixed_point_state(p), build_parent_fixed_point(p), GRID, tol=1e-10)
        assert rep.passed

    def test_massive_target_fails_in_uv(self):
        p = ModelParams(s=1.0)
        rep = verify_parent(massive_target(p, p.mass), build_parent(p), GRID, tol=1e-3)
        assert not rep.passed
        assert rep.worst_k >= 1.0

    def test_constraint_mismatch_is_failure(self):
        p = ModelParams(s=1.0)
        rep = verify_parent(massless_target(p), build_parent(p), GRID)
        assert not rep.passed and math.isinf(rep.max_deviation)

    def test_report_dict(self):
        p = ModelParams(s=1.0)
        d = verify_parent(magic_cmera_state(p), build_parent(p), GRID).as_dict()
        assert {"passed", "max_deviation", "max_deviation_transverse", "max_deviation_longitudinal"} <= set(d)


class TestRegulatorLocality:
    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 4.0])
    def test_ir_unchanged(self, s):
        p = ModelParams(s=s)
        k = np.geomspace(1e-4, 1e-2, 41)
        reg = ground_state_of(build_parent(p))
        bare = ground_state_of(build_massive(p, p.mass))
        for pol in ("par", "perp"):
            rel = np.abs(reg.alpha(pol, k) - bare.alpha(pol, k)) / bare.alpha(pol, k)
            assert np.max(rel) <= 1e-3

    def test_uv_changed(self):
        p = ModelParams(s=1.0)
        reg = ground_state_of(build_parent(p))
        bare = ground_state_of(build_massive(p, p.mass))
        assert abs(reg.alpha_perp(10.0) - bare.alpha_perp(10.0)) / bare.alpha_perp(10.0) >= 0.1


@settings(max_examples=60, deadline=None)
@given(k=st.floats(1e-3, 1e3))
def test_massless_continuity_property(k):
    fp = build_parent_fixed_point(P)
    prev = math.inf
    for s in (5.0, 10.0, 20.0):
        a, b = build_parent(ModelParams(s=s)).coefficients("perp", k)
        a0, b0 = fp.coefficients("perp", k)
        gap = abs(a - a0) + abs(b - b0)
        assert gap <= prev
        prev = gap
    # only b differs, by m^2 = exp(-2s), up to rounding of k^2 + m^2
    assert prev <= math.exp(-40.0) + 4 * np.finfo(float).eps * k * k
