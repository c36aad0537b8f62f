import math

import numpy as np
import pytest
import sympy

from solitonlab import (
    ComplexField,
    ConfigurationError,
    DispersionlessConfig,
    DomainError,
    Grid1D,
    MadelungField,
    NodeError,
    NumericalError,
    PacketKind,
    PacketSpec,
    Scheme,
    SolverConfig,
    build_packet,
    continuity_residual,
    continuity_residual_from_rate,
    decompose,
    dispersionless_initial,
    electron_constants,
    evolve_dispersionless,
    evolve_linear_schrodinger,
    guide_width,
    hj_residual,
    hj_residual_from_rate,
    nls_breather_exact,
    quantum_potential,
    recompose,
    soliton_amplitude,
)


def _sympy_curvature_term(r_expr, zsym, mass=1.0, hbar=1.0):
    """Symbolic -(hbar^2/2m) R''/R as a callable (the oracle for Q)."""
    q = -(hbar**2 / (2 * mass)) * sympy.diff(r_expr, zsym, 2) / r_expr
    return sympy.lambdify(zsym, sympy.simplify(q), "numpy")


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

class TestDecompose:
    def test_plane_wave(self, grid512):
        dk = 2 * np.pi / grid512.length
        k0 = 6 * dk
        psi = build_packet(PacketSpec(PacketKind.PLANE_WAVE, k0=k0), grid512)
        m = decompose(psi)
        assert np.allclose(m.R, 1.0, atol=1e-14)
        slopes = np.diff(m.S) / grid512.dz
        assert np.allclose(slopes, k0, atol=1e-9)

    def test_breather_polar_form(self, grid512):
        t, a = 0.8, 1.0
        psi = ComplexField(grid512, nls_breather_exact(grid512.z, t, a, 0.0))
        m = decompose(psi)
        assert np.allclose(m.R, a / np.cosh(a * grid512.z), atol=1e-14)
        # uniform phase a^2 t on the support (hbar = 1)
        sup = m.support
        assert np.allclose(m.S[sup], a**2 * t, atol=1e-12)

    def test_recompose_round_trip(self, grid512):
        psi = ComplexField(grid512, nls_breather_exact(grid512.z, 1.3, 1.0, 1.0))
        back = recompose(decompose(psi))
        assert np.max(np.abs(back.values - psi.values)) <= 1e-12

    def test_node_error_carries_locations(self, grid512):
        z = grid512.z
        vals = z * np.exp(-(z**2) / 8.0)  # node at z = 0
        with pytest.raises(NodeError) as err:
            decompose(ComplexField(grid512, vals))
        assert np.min(np.abs(err.value.locations)) < 0.2

    def test_support_excludes_far_tails(self, grid512):
        psi = build_packet(PacketSpec(PacketKind.GAUSSIAN, sigma=1.0), grid512)
        m = decompose(psi)
        assert m.support[np.argmin(np.abs(grid512.z))]
        assert not m.support[0]  # far tail below threshold

    def test_unwrapped_phase_is_continuous(self, grid512):
        # carrier with several 2 pi wraps across the packet
        psi = build_packet(PacketSpec(PacketKind.GAUSSIAN, sigma=2.0, k0=3.0), grid512)
        m = decompose(psi)
        sup = m.support
        steps = np.diff(m.S[sup])
        assert np.max(np.abs(steps - np.median(steps))) < 1.0  # no 2 pi jumps


class TestMadelungFieldValidation:
    def test_negative_amplitude_rejected(self, grid512):
        with pytest.raises(ConfigurationError):
            MadelungField(grid512, -np.ones(grid512.n), np.zeros(grid512.n))

    def test_length_mismatch(self, grid512):
        with pytest.raises(ConfigurationError):
            MadelungField(grid512, np.ones(17), np.zeros(17))


# ---------------------------------------------------------------------------
# curvature (quantum-potential) term
# ---------------------------------------------------------------------------

class TestQuantumPotential:
    def test_sech_against_symbolic_oracle(self, grid512):
        zsym = sympy.Symbol("z")
        oracle = _sympy_curvature_term(sympy.sech(zsym), zsym)
        m = MadelungField(grid512, 1.0 / np.cosh(grid512.z), np.zeros(grid512.n),
                          support=np.abs(grid512.z) <= 10.0)
        q = quantum_potential(m)
        sup = m.support
        assert np.allclose(q[sup], oracle(grid512.z[sup]), atol=1e-9)
        # closed form -(1/2)(1 - 2 sech^2 z): +1/2 at the peak, -> -1/2 in the tails
        j0 = np.argmin(np.abs(grid512.z))
        assert q[j0] == pytest.approx(0.5, abs=1e-10)
        j_tail = np.argmin(np.abs(grid512.z - 9.0))
        assert q[j_tail] == pytest.approx(-0.5, abs=1e-3)

    def test_gaussian_against_symbolic_oracle(self, grid512):
        sigma = 1.5
        zsym = sympy.Symbol("z")
        oracle = _sympy_curvature_term(sympy.exp(-zsym**2 / (4 * sigma**2)), zsym)
        r = np.exp(-grid512.z**2 / (4 * sigma**2))
        m = MadelungField(grid512, r, np.zeros(grid512.n),
                          support=r >= 1e-6 * r.max())
        q = quantum_potential(m)
        sup = m.support
        assert np.allclose(q[sup], oracle(grid512.z[sup]), atol=1e-7)

    def test_constant_amplitude_gives_zero(self, grid512):
        m = MadelungField(grid512, np.ones(grid512.n), 1.7 * np.ones(grid512.n))
        assert np.max(np.abs(quantum_potential(m))) <= 1e-12

    def test_mass_scaling(self, grid512):
        r = 1.0 / np.cosh(grid512.z)
        m = MadelungField(grid512, r, np.zeros(grid512.n),
                          support=r >= 1e-6)
        assert np.allclose(quantum_potential(m, mass=2.0),
                           quantum_potential(m, mass=1.0) / 2.0, atol=1e-14)


# ---------------------------------------------------------------------------
# residual diagnostics
# ---------------------------------------------------------------------------

def _linear_run_pair(grid, t_mid, dt, sigma=1.0, potential=None):
    psi0 = build_packet(PacketSpec(PacketKind.GAUSSIAN, sigma=sigma), grid)
    fields = []
    for t in (t_mid - dt, t_mid + dt):
        rep = evolve_linear_schrodinger(psi0, SolverConfig(
            scheme=Scheme.LINEAR_SCHRODINGER, dt=dt, t_final=t,
            observe_every=0, potential=potential))
        fields.append(decompose(rep.final_field()))
    return fields[0], fields[1]


class TestResiduals:
    def test_free_plane_wave_zeros_both(self, grid512):
        dk = 2 * np.pi / grid512.length
        k0 = 5 * dk
        # S = k z - (k^2/2) t at two times, R = 1 (hbar = m = 1)
        s_dot = np.full(grid512.n, -0.5 * k0**2)
        m = decompose(build_packet(PacketSpec(PacketKind.PLANE_WAVE, k0=k0), grid512))
        hj = hj_residual_from_rate(m, s_dot, potential=0.0, include_q=True)
        assert np.max(np.abs(hj)) <= 1e-9
        cont = continuity_residual_from_rate(m, np.zeros(grid512.n))
        assert np.max(np.abs(cont)) <= 1e-9

    def test_linear_flow_hj_residual_small(self, grid512):
        before, after = _linear_run_pair(grid512, t_mid=1.0, dt=1e-3)
        hj = hj_residual(before, after, 2e-3, potential=0.0, include_q=True)
        assert np.max(np.abs(hj)) <= 5e-4

    def test_linear_flow_continuity_residual_small(self, grid512):
        before, after = _linear_run_pair(grid512, t_mid=1.0, dt=1e-3)
        cont = continuity_residual(before, after, 2e-3)
        assert np.max(np.abs(cont)) <= 5e-4

    def test_residuals_converge_second_order(self, grid512):
        maxima = []
        for dt in (1e-3, 5e-4, 2.5e-4):
            before, after = _linear_run_pair(grid512, t_mid=1.0, dt=dt)
            hj = hj_residual(before, after, 2 * dt, include_q=True)
            maxima.append(np.max(np.abs(hj)))
        order = math.log(maxima[0] / maxima[2]) / math.log(4.0)
        assert order >= 2.0 - 0.2

    def test_without_curvature_equals_minus_q(self, grid512):
        before, after = _linear_run_pair(grid512, t_mid=1.0, dt=1e-3)
        hj_without = hj_residual(before, after, 2e-3, include_q=False)
        from solitonlab.madelung import _pair_midpoint
        mid, _, _ = _pair_midpoint(before, after, 2e-3)
        q = quantum_potential(mid)
        assert np.max(np.abs(hj_without + q)) <= 5e-4

    def test_curvature_cancellation_identity(self, grid512, rng):
        # pure algebra: hj(with) - hj(without) - Q = 0 on arbitrary
        # node-free fields, to machine precision
        for _ in range(5):
            k = grid512.k
            env = np.fft.ifft(np.exp(-k**2) * np.fft.fft(rng.normal(size=grid512.n))).real
            r = 1.0 + 0.5 * env / np.max(np.abs(env))
            s = np.fft.ifft(np.exp(-k**2) * np.fft.fft(rng.normal(size=grid512.n))).real
            field = MadelungField(grid512, r, s)
            s_dot = rng.normal(size=grid512.n)
            v = rng.normal(size=grid512.n)
            with_q = hj_residual_from_rate(field, s_dot, v, include_q=True)
            without_q = hj_residual_from_rate(field, s_dot, v, include_q=False)
            q = quantum_potential(field)
            assert np.max(np.abs(with_q - without_q - q)) <= 1e-13

    def test_uniform_flow_zero_continuity(self, grid512):
        # R const, S linear on the ladder: no flux divergence
        dk = 2 * np.pi / grid512.length
        m = decompose(build_packet(PacketSpec(PacketKind.PLANE_WAVE, k0=3 * dk), grid512))
        cont = continuity_residual_from_rate(m, np.zeros(grid512.n))
        assert np.max(np.abs(cont)) <= 1e-9

    def test_grid_mismatch_rejected(self, grid512):
        other = Grid1D(256, -25.6, 25.6)
        a = decompose(build_packet(PacketSpec(PacketKind.GAUSSIAN, sigma=1.0), grid512))
        b = decompose(build_packet(PacketSpec(PacketKind.GAUSSIAN, sigma=1.0), other))
        with pytest.raises(ConfigurationError):
            hj_residual(a, b, 1e-3)


# ---------------------------------------------------------------------------
# curvature-cancelled transport
# ---------------------------------------------------------------------------

class TestDispersionlessTransport:
    def test_rigid_translation(self, grid512):
        config = DispersionlessConfig(dt=1e-3, t_final=10.0, amplitude=1.0,
                                      scale=1.0, velocity=1.0, observe_every=100)
        initial = dispersionless_initial(config, grid512, center=-5.0)
        rep = evolve_dispersionless(initial, config)
        r_final = np.abs(rep.final_field().values)
        r_expected = 1.0 / np.cosh(grid512.z - 5.0)
        assert np.max(np.abs(r_final - r_expected)) <= 1e-5
        widths = rep.observable("rms_width")
        assert np.max(np.abs(widths / widths[0] - 1.0)) <= 1e-6

    def test_rest_envelope_fully_stationary(self, grid512):
        config = DispersionlessConfig(dt=1e-3, t_final=2.0, velocity=0.0)
        initial = dispersionless_initial(config, grid512)
        rep = evolve_dispersionless(initial, config)
        assert np.array_equal(np.abs(rep.final_field().values), initial.R)

    def test_density_conserved(self, grid512):
        config = DispersionlessConfig(dt=1e-3, t_final=10.0, velocity=1.0,
                                      observe_every=100)
        initial = dispersionless_initial(config, grid512, center=-5.0)
        rep = evolve_dispersionless(initial, config)
        assert rep.conservation["max_relative_rho_drift"] <= 1e-8

    def test_classical_correspondence_linear_potential(self, grid512):
        g, v_e, z0 = 0.4, 1.0, -5.0
        config = DispersionlessConfig(dt=1e-3, t_final=5.0, velocity=v_e,
                                      potential_slope=g, observe_every=50)
        initial = dispersionless_initial(config, grid512, center=z0)
        rep = evolve_dispersionless(initial, config)
        z_classical = z0 + v_e * rep.times - 0.5 * g * rep.times**2
        error = np.abs(rep.observable("centroid") - z_classical)
        assert np.max(error) <= 0.01 * max(1.0, np.max(np.abs(z_classical)))

    def test_snapshots_carry_polar_columns(self, grid512):
        config = DispersionlessConfig(dt=1e-3, t_final=0.1, velocity=0.0,
                                      snapshot_every=50)
        rep = evolve_dispersionless(dispersionless_initial(config, grid512), config)
        assert {"R", "S", "Q"} <= set(rep.snapshots[-1].extra)

    def test_cfl_abort(self, grid512):
        config = DispersionlessConfig(dt=1e-2, t_final=1.0, velocity=10.0)
        initial = dispersionless_initial(config, grid512)
        with pytest.raises(NumericalError):
            evolve_dispersionless(initial, config)

    def test_nonconforming_action_rejected(self, grid512):
        config = DispersionlessConfig(dt=1e-3, t_final=0.1)
        r = 1.0 / np.cosh(grid512.z)
        bad = MadelungField(grid512, r, 0.05 * grid512.z**2,
                            support=r >= 1e-6)
        with pytest.raises(ConfigurationError):
            evolve_dispersionless(bad, config)

    def test_periodic_potential_part_accepted(self, grid512):
        v = 0.05 * np.cos(2 * np.pi * grid512.z / grid512.length)
        config = DispersionlessConfig(dt=1e-3, t_final=0.5, velocity=0.5,
                                      potential=v, observe_every=50)
        rep = evolve_dispersionless(dispersionless_initial(config, grid512), config)
        assert rep.conservation["max_relative_rho_drift"] <= 1e-8


# ---------------------------------------------------------------------------
# envelope amplitude
# ---------------------------------------------------------------------------

class TestSolitonAmplitude:
    def test_zero_potential_is_half_guide_width(self):
        k = electron_constants()
        r = soliton_amplitude(0.0)
        assert r.si == pytest.approx(guide_width(k.m0) / 2.0, rel=1e-14)

    def test_rest_energy_potential_quarters_width(self):
        k = electron_constants()
        r = soliton_amplitude(k.rest_energy)
        assert r.si == pytest.approx(guide_width(k.m0) / 4.0, rel=1e-14)

    def test_monotone_decreasing(self):
        k = electron_constants()
        values = [soliton_amplitude(x * k.rest_energy).si for x in (0.0, 0.5, 1.0, 5.0, 50.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_domain_error(self):
        k = electron_constants()
        with pytest.raises(DomainError):
            soliton_amplitude(-1.001 * k.rest_energy)

    def test_normalized_image(self):
        k = electron_constants()
        r = soliton_amplitude(0.0)
        assert r.normalized == pytest.approx(math.pi / 2.0, rel=1e-12)
