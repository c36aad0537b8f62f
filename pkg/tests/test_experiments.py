import math

import numpy as np
import pytest

from solitonlab import (
    BarrierSpec,
    ConfigurationError,
    DichotomySettings,
    DomainError,
    bohr_orbit,
    bohr_phase_accordance,
    electron_constants,
    kinematic_state,
    linear_barrier_transmission,
    phase_accordance_mismatch,
    photon_relations,
    rectangular_barrier_transmission,
    run_barrier_monte_carlo,
    run_dispersion_vs_soliton,
)

K = electron_constants()
FINE_STRUCTURE = K.e2_coulomb / (K.hbar * K.c)

# frozen constants-based oracles (standard first-orbit values)
BOHR_RADIUS_M = 5.29177210903e-11
BOHR_ENERGY_EV = -13.605693


# ---------------------------------------------------------------------------
# dispersion vs soliton
# ---------------------------------------------------------------------------

class TestDichotomy:
    def test_short_run_orders_schemes(self):
        # reduced t_final keeps the unit test quick; the full acceptance
        # settings run in test_acceptance
        settings = DichotomySettings(n=512, z_min=-25.6, z_max=25.6, t_final=2.0)
        result = run_dispersion_vs_soliton(settings)
        assert result.ratios["linear"] > 1.5
        assert abs(result.ratios["nls"] - 1.0) <= 0.01
        assert abs(result.ratios["transport"] - 1.0) <= 0.001
        assert result.verdicts["nls"] == "shape-preserved"
        assert result.verdicts["transport"] == "shape-preserved"

    def test_zero_time_is_identity(self):
        result = run_dispersion_vs_soliton(DichotomySettings(t_final=0.0))
        assert all(r == 1.0 for r in result.ratios.values())

    def test_mismatched_amplitude_is_not_a_soliton(self):
        # amplitude 2 on a width-1 profile breaks the amplitude-width
        # locking; the envelope starts breathing immediately
        settings = DichotomySettings(n=512, z_min=-25.6, z_max=25.6,
                                     amplitude=2.0, scale=1.0, t_final=0.35,
                                     observe_every=50)
        result = run_dispersion_vs_soliton(settings)
        assert not 0.99 <= result.ratios["nls"] <= 1.01
        assert result.verdicts["nls"].startswith("not a soliton")

    def test_report_dict_shape(self):
        result = run_dispersion_vs_soliton(
            DichotomySettings(n=512, z_min=-25.6, z_max=25.6, t_final=0.5))
        d = result.to_dict()
        assert d["experiment"] == "soliton-vs-dispersion"
        assert set(d["width_ratios"]) == {"linear", "nls", "transport"}


# ---------------------------------------------------------------------------
# barrier Monte Carlo
# ---------------------------------------------------------------------------

def _spec_gap_08(trials=10**5, seed=42) -> BarrierSpec:
    # V0 = 0.25 m0 c^2 shifts the cutoff so the narrowed width is 0.8 w
    return BarrierSpec(height=0.25 * K.rest_energy, length=1e-12,
                       energy=0.5 * K.rest_energy, trials=trials, seed=seed)


class TestBarrierMonteCarlo:
    def test_gap_fraction_or_better(self):
        report = run_barrier_monte_carlo(_spec_gap_08())
        assert report.geometric_gap_fraction == pytest.approx(0.8, rel=1e-12)
        sigma = math.sqrt(0.8 * 0.2 / report.trials)
        assert abs(report.transmission_fraction - 0.8) <= 3 * sigma
        assert report.tunneled == 0
        assert report.transmitted + report.reflected + report.tunneled == report.trials

    def test_vanishing_barrier_transmits_everything(self):
        spec = BarrierSpec(height=1e-6 * K.eV, length=1e-12,
                           energy=0.5 * K.rest_energy, trials=10**4, seed=3)
        report = run_barrier_monte_carlo(spec)
        assert report.transmission_fraction == 1.0

    def test_seeded_determinism(self):
        a = run_barrier_monte_carlo(_spec_gap_08())
        b = run_barrier_monte_carlo(_spec_gap_08())
        assert a == b

    @pytest.mark.parametrize("workers", [2, 3, 8])
    def test_worker_count_invariance(self, workers):
        serial = run_barrier_monte_carlo(_spec_gap_08(trials=200_000))
        parallel = run_barrier_monte_carlo(_spec_gap_08(trials=200_000),
                                           parallel_trials=workers)
        assert serial == parallel

    def test_blocked_stream_matches_single_stream(self):
        # regression canary for the counter-based substream alignment
        spec = _spec_gap_08(trials=150_000, seed=12345)
        report = run_barrier_monte_carlo(spec)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(spec.seed)))
        draws = rng.random(2 * spec.trials).reshape(-1, 2)
        w = K.c / (2 * K.cutoff_frequency)
        w_narrow = w / 1.25
        x = w * (1 - np.abs(1 - 2 * draws[:, 0]))
        hits = int(np.count_nonzero((x >= (w - w_narrow) / 2) & (x <= (w + w_narrow) / 2)))
        assert report.transmitted == hits

    def test_below_cutoff_tunneling(self):
        spec = BarrierSpec(height=0.5 * K.rest_energy, length=2e-13,
                           energy=0.1 * K.rest_energy, trials=200_000, seed=7)
        report = run_barrier_monte_carlo(spec)
        assert report.transmitted == 0
        assert not report.model["above_cutoff"]
        expected = report.geometric_gap_fraction * report.model["tunnel_probability"]
        sigma = math.sqrt(expected * (1 - expected) / spec.trials)
        assert abs(report.transmission_fraction - expected) <= 4 * sigma

    def test_gap_offset_must_fit(self):
        w = K.c / (2 * K.cutoff_frequency)
        spec = BarrierSpec(height=0.25 * K.rest_energy, length=1e-12,
                           energy=0.5 * K.rest_energy, trials=10, seed=1,
                           gap_offset=0.5 * w)
        with pytest.raises(ConfigurationError):
            run_barrier_monte_carlo(spec)

    def test_offset_shifts_statistics_not_fraction(self):
        # a centered triangle-wave phase is uniform in position, so a
        # small offset keeps the transmitted fraction at the gap fraction
        w = K.c / (2 * K.cutoff_frequency)
        spec = BarrierSpec(height=0.25 * K.rest_energy, length=1e-12,
                           energy=0.5 * K.rest_energy, trials=10**5, seed=9,
                           gap_offset=0.05 * w)
        report = run_barrier_monte_carlo(spec)
        sigma = math.sqrt(0.8 * 0.2 / spec.trials)
        assert abs(report.transmission_fraction - 0.8) <= 4 * sigma

    def test_invalid_spec(self):
        with pytest.raises(ConfigurationError):
            BarrierSpec(height=-1.0, length=1e-12, energy=1.0, trials=10, seed=0)
        with pytest.raises(ConfigurationError):
            BarrierSpec(height=1.0, length=1e-12, energy=1.0, trials=0, seed=0)


# ---------------------------------------------------------------------------
# transfer-matrix transmission
# ---------------------------------------------------------------------------

class TestRectangularBarrier:
    def test_no_barrier(self):
        assert rectangular_barrier_transmission(0.5, 0.0, 1.0) == 1.0
        assert rectangular_barrier_transmission(0.5, 0.3, 0.0) == 1.0

    def test_oscillatory_closed_form(self):
        e, v0, length = 0.5, 0.3, 1.0
        k2 = math.sqrt(2 * (e - v0))
        expected = 1.0 / (1.0 + v0**2 * math.sin(k2 * length) ** 2 / (4 * e * (e - v0)))
        assert rectangular_barrier_transmission(e, v0, length) == pytest.approx(
            expected, rel=1e-12)

    def test_evanescent_closed_form(self):
        e, v0, length = 0.5, 0.7, 1.0
        kappa = math.sqrt(2 * (v0 - e))
        expected = 1.0 / (1.0 + v0**2 * math.sinh(kappa * length) ** 2 / (4 * e * (v0 - e)))
        assert rectangular_barrier_transmission(e, v0, length) == pytest.approx(
            expected, rel=1e-12)

    def test_marginal_case(self):
        # E = V0: T = 1 / (1 + m V0 L^2 / (2 hbar^2))
        e = v0 = 0.5
        length = 1.0
        assert rectangular_barrier_transmission(e, v0, length) == pytest.approx(
            1.0 / (1.0 + v0 * length**2 / 2.0), rel=1e-9)

    def test_marginal_continuity(self):
        # the degenerate-branch value must join the generic branches
        t_mid = rectangular_barrier_transmission(0.5, 0.5, 1.0)
        t_above = rectangular_barrier_transmission(0.5 + 1e-9, 0.5, 1.0)
        t_below = rectangular_barrier_transmission(0.5 - 1e-9, 0.5, 1.0)
        assert t_above == pytest.approx(t_mid, rel=1e-6)
        assert t_below == pytest.approx(t_mid, rel=1e-6)

    def test_opaque_limit_monotone(self):
        values = [rectangular_barrier_transmission(0.5, 0.7, length)
                  for length in (1.0, 2.0, 5.0, 20.0, 100.0, 2000.0)]
        assert all(a > b for a, b in zip(values, values[1:]) if b > 0.0)
        assert values[-1] == 0.0

    def test_resonance_transparency(self):
        # sin(k2 L) = 0 gives T = 1 exactly (above-barrier resonance)
        e, v0 = 0.5, 0.3
        k2 = math.sqrt(2 * (e - v0))
        length = math.pi / k2
        assert rectangular_barrier_transmission(e, v0, length) == pytest.approx(
            1.0, rel=1e-12)

    def test_si_wrapper_dimensionless(self):
        spec = _spec_gap_08(trials=1)
        t = linear_barrier_transmission(spec)
        assert 0.0 <= t <= 1.0

    def test_invalid_energy(self):
        with pytest.raises(DomainError):
            rectangular_barrier_transmission(0.0, 1.0, 1.0)


# ---------------------------------------------------------------------------
# orbit quantization chain
# ---------------------------------------------------------------------------

class TestBohrOrbit:
    def test_first_orbit_against_oracle(self):
        orbit = bohr_orbit(1)
        assert orbit.radius == pytest.approx(BOHR_RADIUS_M, rel=1e-3)
        assert orbit.energy / K.eV == pytest.approx(BOHR_ENERGY_EV, rel=1e-3)
        assert orbit.velocity == pytest.approx(FINE_STRUCTURE * K.c, rel=1e-12)

    def test_second_orbit_scaling(self):
        o1, o2 = bohr_orbit(1), bohr_orbit(2)
        assert o2.radius == pytest.approx(4 * o1.radius, rel=1e-12)
        assert o2.energy == pytest.approx(o1.energy / 4, rel=1e-12)

    @pytest.mark.parametrize("n", range(1, 21))
    def test_orbit_is_integer_wavelengths(self, n):
        orbit = bohr_orbit(n)
        assert abs(orbit.orbit_length / orbit.de_broglie_wavelength - n) <= 1e-9 * n

    @pytest.mark.parametrize("n", [1, 5, 20])
    def test_angular_momentum_quantized(self, n):
        orbit = bohr_orbit(n)
        assert abs(orbit.angular_momentum / (n * K.hbar) - 1.0) <= 1e-12

    def test_invalid_quantum_number(self):
        with pytest.raises(DomainError):
            bohr_orbit(0)

    def test_relativistic_regime_warns(self):
        # a heavier coupling pushes the first orbit above 0.01 c
        from solitonlab import PhysicalConstants
        strong = PhysicalConstants(e2_coulomb=K.e2_coulomb * 2.0)
        with pytest.warns(UserWarning):
            bohr_orbit(1, strong)


class TestPhaseAccordance:
    def test_extra_arc_ratio_first_orbit(self):
        accord = bohr_phase_accordance(1)
        orbit = bohr_orbit(1)
        expected = FINE_STRUCTURE**2 / (1.0 - FINE_STRUCTURE**2)
        assert accord.tau / orbit.period == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("n", range(1, 21))
    def test_quantization_residual_relativistic_form(self, n):
        accord = bohr_phase_accordance(n)
        assert abs(accord.quantization_residual) <= 1e-6

    @pytest.mark.parametrize("n", [1, 3, 10])
    def test_nonrelativistic_gap_reported(self, n):
        # the gap against the integer N is alpha^2/(2N) to leading order
        accord = bohr_phase_accordance(n)
        expected = FINE_STRUCTURE**2 / (2 * n)
        assert accord.nonrelativistic_gap == pytest.approx(expected, rel=1e-3)
        assert accord.nonrelativistic_gap > 1e-7 / n

    def test_phase_accordance_along_orbit(self):
        accord = bohr_phase_accordance(1)
        assert accord.max_phase_mismatch <= 1e-12

    def test_phase_accordance_at_06c(self):
        state = kinematic_state(0.6 * K.c)
        z = np.linspace(1e-12, 1e-9, 100)
        assert phase_accordance_mismatch(state, z) <= 1e-12

    def test_needs_motion(self):
        with pytest.raises(DomainError):
            phase_accordance_mismatch(kinematic_state(0.0), np.array([1.0]))


# ---------------------------------------------------------------------------
# photon relations
# ---------------------------------------------------------------------------

class TestPhotonRelations:
    def test_fixed_point(self):
        rel = photon_relations(1e20, 1e20)
        assert rel.f_zigzag == pytest.approx(1e20, rel=1e-14)

    def test_double_frequency_halves_bounce(self):
        rel = photon_relations(2e20, 1e20)
        assert rel.f_zigzag == pytest.approx(0.5e20, rel=1e-14)

    def test_product_identity(self):
        for f in (0.3e20, 1.7e20, 9e20):
            rel = photon_relations(f, 1.2e20)
            assert f * rel.f_zigzag == pytest.approx((1.2e20) ** 2, rel=1e-12)

    def test_energy_is_h_times_frequency(self):
        rel = photon_relations(2e20, 1e20)
        assert rel.E_zigzag == pytest.approx(K.h * rel.f_zigzag, rel=1e-14)

    @pytest.mark.parametrize("f,f0", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_domain_errors(self, f, f0):
        with pytest.raises(DomainError):
            photon_relations(f, f0)
