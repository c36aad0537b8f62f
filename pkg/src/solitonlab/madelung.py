"""Polar decomposition psi = R exp(i S / hbar) and the transport dynamics
obtained when the curvature (quantum-potential) term is removed.

The polar split turns the linear Schrodinger equation into a
Hamilton-Jacobi equation for the action S carrying one extra term,

    Q = -(hbar^2 / 2m) (d^2 R / dz^2) / R,

plus a continuity equation for the density R^2 in conservation form.
Adding -Q as a nonlinearity deletes that term symbolically, so the pair
(R, S) obeys purely classical transport: S follows the classical
Hamilton-Jacobi equation and R^2 is advected by the velocity field
S_z / m.  We integrate that classical pair directly in (R, S) variables
-- in psi form the cancelling term requires dividing by |psi|, which is
numerically hostile -- and reconstruct psi for comparison with the
linear solver.

S is stored in action units (unnormalized by hbar) so the evolution
equations read literally; hbar enters only at (re)composition.  Because
the action of a moving packet grows linearly in z, which has no periodic
representation, phase fields are handled as (linear slope in z) +
(periodic remainder); the slope also absorbs a linear-in-z part of the
potential.  Spatial derivatives of phase-like quantities are taken
through gauge-invariant currents of the reconstructed psi, never through
a direct spectral derivative of the unwrapped S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, NodeError, NumericalError
from .grid import ComplexField, Grid1D, UnitScaling, observables, spectral_derivative
from .kinematics import PhysicalConstants, electron_constants
from .report import RunReport, Snapshot

DEFAULT_NODE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class MadelungField:
    """Polar form of a wavefunction: amplitude R >= 0 and unwrapped action S.

    ``support`` marks where R is large enough (relative to its peak) for
    the decomposition to be meaningful; S is continuous there (no 2 pi
    hbar jumps), and diagnostics are only reported there.
    """

    grid: Grid1D
    R: np.ndarray
    S: np.ndarray
    hbar: float = 1.0
    support: np.ndarray | None = None

    def __post_init__(self):
        r = np.array(self.R, dtype=float, copy=True)
        s = np.array(self.S, dtype=float, copy=True)
        if r.shape != (self.grid.n,) or s.shape != (self.grid.n,):
            raise ConfigurationError("R and S must match the grid length")
        if np.any(r < 0.0) or not np.all(np.isfinite(r)):
            raise ConfigurationError("R must be finite and non-negative everywhere")
        if not np.all(np.isfinite(s)):
            raise ConfigurationError("S must be finite")
        if self.hbar <= 0.0:
            raise DomainError("hbar must be positive")
        sup = self.support
        sup = np.ones(self.grid.n, bool) if sup is None else np.array(sup, bool, copy=True)
        for arr in (r, s, sup):
            arr.setflags(write=False)
        object.__setattr__(self, "R", r)
        object.__setattr__(self, "S", s)
        object.__setattr__(self, "support", sup)


def _support_segments(mask: np.ndarray) -> tuple[np.ndarray, int, np.ndarray]:
    """Wrap-joined above-threshold analysis of a boolean mask.

    Returns (support mask, start index of the support run, indices of
    below-threshold points lying between two above-threshold runs).
    """
    n = mask.size
    if mask.all():
        return mask, 0, np.empty(0, dtype=int)
    first_false = int(np.argmin(mask))
    rolled = np.roll(mask, -first_false)
    # rolled[0] is False, so every True run is interior to the rolled view
    edges = np.flatnonzero(np.diff(rolled.astype(np.int8)))
    starts = edges[::2] + 1
    ends = edges[1::2] + 1 if edges.size % 2 == 0 else np.append(edges[1::2] + 1, n)
    if starts.size <= 1:
        support = np.zeros(n, bool)
        if starts.size == 1:
            idx = (np.arange(starts[0], ends[0]) + first_false) % n
            support[idx] = True
        start = (int(starts[0]) + first_false) % n if starts.size else 0
        return support, start, np.empty(0, dtype=int)
    # gaps strictly between consecutive runs are interior nodes
    gap_rolled = np.concatenate(
        [np.arange(ends[i], starts[i + 1]) for i in range(starts.size - 1)]
    )
    gaps = (gap_rolled + first_false) % n
    support = np.zeros(n, bool)
    for s, e in zip(starts, ends):
        support[(np.arange(s, e) + first_false) % n] = True
    return support, (int(starts[0]) + first_false) % n, gaps


def decompose(psi: ComplexField, node_threshold: float = DEFAULT_NODE_THRESHOLD,
              hbar: float = 1.0) -> MadelungField:
    """R = |psi|, S = hbar * arg(psi) unwrapped along the grid.

    Unwrapping starts at the left edge of the (single, wrap-joined)
    above-threshold region and walks the full ring; values outside the
    support are carried along but not meaningful.  A below-threshold
    point between two above-threshold regions is a node: unwrapping
    across it is ill-defined, so a NodeError carrying the node positions
    is raised instead.
    """
    vals = psi.values
    r = np.abs(vals)
    peak = float(r.max())
    if peak == 0.0:
        raise NodeError("field is identically zero", psi.grid.z)
    mask = r >= node_threshold * peak
    support, start, gaps = _support_segments(mask)
    if gaps.size:
        raise NodeError(
            f"amplitude crosses the node threshold at {gaps.size} interior point(s)",
            psi.grid.z[gaps],
        )
    order = (np.arange(psi.grid.n) + start) % psi.grid.n
    unwrapped = np.unwrap(np.angle(vals[order]))
    s = np.empty(psi.grid.n)
    s[order] = hbar * unwrapped
    return MadelungField(psi.grid, r, s, hbar=hbar, support=support)


def recompose(field: MadelungField) -> ComplexField:
    """Inverse of decompose: R * exp(i S / hbar)."""
    return ComplexField(field.grid, field.R * np.exp(1j * field.S / field.hbar))


def quantum_potential(field: MadelungField, mass: float = 1.0) -> np.ndarray:
    """Q = -(hbar^2 / 2m) R'' / R with a spectral second derivative.

    Reported only on the support (zeros elsewhere, where the division
    by R would amplify the spectral noise floor).
    """
    if mass <= 0.0:
        raise DomainError("mass must be positive")
    rzz = spectral_derivative(field.R, field.grid, order=2).real
    q = np.zeros(field.grid.n)
    sup = field.support & (field.R > 0.0)
    q[sup] = -(field.hbar**2 / (2.0 * mass)) * rzz[sup] / field.R[sup]
    return q


def _phase_gradient(field: MadelungField) -> np.ndarray:
    """S_z on the support via the gauge-invariant current of recompose(field).

    hbar Im(psi* psi_z) / R^2 equals S_z pointwise but only ever
    differentiates the periodic complex field, so it stays valid for
    actions with a linear-in-z part.  Zeros outside the support.
    """
    psi = recompose(field).values
    psi_z = spectral_derivative(psi, field.grid, order=1)
    s_z = np.zeros(field.grid.n)
    sup = field.support & (field.R > 0.0)
    s_z[sup] = field.hbar * np.imag(np.conj(psi[sup]) * psi_z[sup]) / field.R[sup] ** 2
    return s_z


def _align_actions(before: MadelungField, after: MadelungField,
                   support: np.ndarray) -> np.ndarray:
    """after.S shifted by the 2 pi hbar multiple that makes dS small.

    Independent unwrapping of two snapshots can differ by a global
    2 pi hbar integer; remove the median multiple before differencing.
    """
    two_pi_hbar = 2.0 * math.pi * before.hbar
    delta = after.S - before.S
    offset = two_pi_hbar * np.round(np.median(delta[support]) / two_pi_hbar)
    return after.S - offset


def _pair_midpoint(before: MadelungField, after: MadelungField,
                   dt: float) -> tuple[MadelungField, np.ndarray, np.ndarray]:
    """Midpoint field, dS/dt and d(R^2)/dt from a centered snapshot pair."""
    if before.grid != after.grid:
        raise ConfigurationError("snapshot pair must share a grid")
    if before.hbar != after.hbar:
        raise ConfigurationError("snapshot pair must share hbar")
    if dt <= 0.0:
        raise ConfigurationError("pair separation dt must be positive")
    support = before.support & after.support
    s_after = _align_actions(before, after, support)
    s_dot = (s_after - before.S) / dt
    rho_dot = (after.R**2 - before.R**2) / dt
    mid = MadelungField(
        before.grid,
        0.5 * (before.R + after.R),
        0.5 * (before.S + s_after),
        hbar=before.hbar,
        support=support,
    )
    return mid, s_dot, rho_dot


def hj_residual_from_rate(field: MadelungField, s_dot: np.ndarray,
                          potential: np.ndarray | float = 0.0, mass: float = 1.0,
                          include_q: bool = True) -> np.ndarray:
    """Pointwise dS/dt + (S_z)^2/(2m) + V [+ Q] on the support.

    With the curvature term included, solutions of the linear Schrodinger
    equation zero this residual; without it, solutions of the classical
    transport system do.  Zeros outside the support.
    """
    s_z = _phase_gradient(field)
    residual = np.zeros(field.grid.n)
    sup = field.support
    v = np.broadcast_to(np.asarray(potential, dtype=float), (field.grid.n,))
    residual[sup] = s_dot[sup] + s_z[sup] ** 2 / (2.0 * mass) + v[sup]
    if include_q:
        residual[sup] += quantum_potential(field, mass)[sup]
    return residual


def hj_residual(before: MadelungField, after: MadelungField, dt: float,
                potential: np.ndarray | float = 0.0, mass: float = 1.0,
                include_q: bool = True) -> np.ndarray:
    """hj_residual_from_rate with dS/dt from a centered snapshot pair.

    The pair (t - dt/2, t + dt/2) yields the residual at the midpoint
    time, evaluated on the averaged field; accuracy is O(dt^2).
    """
    mid, s_dot, _ = _pair_midpoint(before, after, dt)
    return hj_residual_from_rate(mid, s_dot, potential, mass, include_q)


def continuity_residual_from_rate(field: MadelungField, rho_dot: np.ndarray,
                                  mass: float = 1.0) -> np.ndarray:
    """Pointwise d(R^2)/dt + d/dz(R^2 S_z / m), conservation form.

    The flux R^2 S_z / m is computed as hbar Im(psi* psi_z) / m, which is
    periodic even when S itself is not, so its divergence is spectral.
    """
    psi = recompose(field).values
    psi_z = spectral_derivative(psi, field.grid, order=1)
    flux = field.hbar * np.imag(np.conj(psi) * psi_z) / mass
    div = spectral_derivative(flux, field.grid, order=1).real
    residual = np.zeros(field.grid.n)
    sup = field.support
    residual[sup] = rho_dot[sup] + div[sup]
    return residual


def continuity_residual(before: MadelungField, after: MadelungField, dt: float,
                        mass: float = 1.0) -> np.ndarray:
    """continuity_residual_from_rate with d(R^2)/dt from a snapshot pair."""
    mid, _, rho_dot = _pair_midpoint(before, after, dt)
    return continuity_residual_from_rate(mid, rho_dot, mass)


@dataclass(frozen=True)
class DispersionlessConfig:
    """Settings for the classical-transport (curvature-cancelled) solver.

    amplitude/scale/velocity describe the canonical sech envelope
    r * sech(a (z - z0)) with action slope mass * velocity (see
    :func:`dispersionless_initial`).  ``potential`` is the periodic part
    of V tabulated on the grid; ``potential_slope`` is the coefficient g
    of an additional linear part V = g z, kept separate because a linear
    ramp has no honest periodic tabulation.  The advective CFL guard
    dt <= cfl * dz / max|S_z / m| is re-checked every step.
    """

    dt: float
    t_final: float
    amplitude: float = 1.0
    scale: float = 1.0
    velocity: float = 0.0
    potential: np.ndarray | None = None
    potential_slope: float = 0.0
    snapshot_every: int = 0
    observe_every: int = 10
    mass: float = 1.0
    hbar: float = 1.0
    cfl: float = 0.5

    def __post_init__(self):
        if self.amplitude <= 0.0 or self.scale <= 0.0:
            raise ConfigurationError("envelope amplitude and scale must be positive")
        if self.dt <= 0.0 or self.t_final < self.dt:
            raise ConfigurationError("need 0 < dt <= t_final")
        if self.mass <= 0.0 or self.hbar <= 0.0:
            raise ConfigurationError("mass and hbar must be positive")

    def n_steps(self) -> int:
        steps = int(round(self.t_final / self.dt))
        if steps < 1 or abs(steps * self.dt - self.t_final) > 1e-6 * max(self.t_final, self.dt):
            raise ConfigurationError(
                f"t_final = {self.t_final} is not an integer multiple of dt = {self.dt}"
            )
        return steps


def dispersionless_initial(config: DispersionlessConfig, grid: Grid1D,
                           center: float = 0.0) -> MadelungField:
    """Canonical initial state for the transport solver: a sech envelope
    with uniform velocity, R = r sech(a (z - center)), S = m v z."""
    z = grid.z
    r = config.amplitude / np.cosh(config.scale * (z - center))
    s = config.mass * config.velocity * z
    mask = r >= DEFAULT_NODE_THRESHOLD * config.amplitude
    support, _, gaps = _support_segments(mask)
    if gaps.size:  # pragma: no cover - sech envelopes are node-free
        raise NodeError("envelope has interior nodes", z[gaps])
    return MadelungField(grid, r, s, hbar=config.hbar, support=support)


def _extract_linear_slope(field: MadelungField) -> tuple[float, np.ndarray]:
    """Split S into slope * z + periodic remainder; reject non-conforming S.

    The endpoint slope makes the remainder's endpoint VALUES agree by
    construction, so conformance is judged on the seam curvature: the
    second difference across the wrap must look like the interior ones
    (a quadratic action, for instance, leaves an O(z_max dz) derivative
    kink at the seam that a spectral derivative would turn into ringing).
    """
    grid = field.grid
    z = grid.z
    n = grid.n
    s = field.S
    slope = (s[-1] - s[0]) / (z[-1] - z[0]) if n > 1 else 0.0
    remainder = s - slope * z
    first = np.diff(remainder)
    wrap_step = remainder[0] - remainder[-1]
    second_interior = np.diff(first)
    seam_curvature = max(abs(wrap_step - first[-1]), abs(first[0] - wrap_step))
    scale = float(np.max(np.abs(second_interior))) if second_interior.size else 0.0
    tol = max(10.0 * scale, 1e-9 * (1.0 + float(np.max(np.abs(remainder)))))
    if seam_curvature > tol:
        raise ConfigurationError(
            "initial action is not (linear in z) + (periodic remainder); "
            f"seam curvature {seam_curvature:.3g} exceeds tolerance {tol:.3g}"
        )
    return float(slope), remainder


def evolve_dispersionless(initial: MadelungField, config: DispersionlessConfig,
                          grid: Grid1D | None = None) -> RunReport:
    """Integrate the curvature-cancelled transport pair with RK4 in time.

    d(R^2)/dt = -d/dz(R^2 (kappa + s_z) / m)          (conservation form)
    d s/dt    = -[(kappa + s_z)^2 / (2m) + V_periodic] (periodic action part)
    d kappa/dt = -potential_slope                      (linear action slope)

    All spatial derivatives are spectral on periodic quantities.  By
    construction there is no curvature term, so any node-free envelope is
    transported by the classical flow; with a uniform action slope it
    translates rigidly.  A mid-run CFL violation (possible: the classical
    Hamilton-Jacobi flow can form shocks under focusing potentials)
    aborts with a diagnostic rather than regularizing.
    """
    grid = grid or initial.grid
    if grid != initial.grid:
        raise ConfigurationError("initial field grid does not match the run grid")
    if not initial.support.any():
        raise ConfigurationError("initial envelope is empty")
    v_per = (np.zeros(grid.n) if config.potential is None
             else np.asarray(config.potential, dtype=float))
    if v_per.shape != (grid.n,):
        raise ConfigurationError(
            f"potential must have grid length {grid.n}, got shape {v_per.shape}"
        )
    n_steps = config.n_steps()
    dt = config.dt
    mass = config.mass
    kappa0, s_tilde = _extract_linear_slope(initial)
    rho = initial.R.astype(float) ** 2
    z = grid.z
    cfl_limit = config.cfl * grid.dz

    def rhs(state):
        rho_c, s_c, kappa_c = state
        s_z = kappa_c + spectral_derivative(s_c, grid, order=1).real
        flux = rho_c * s_z / mass
        drho = -spectral_derivative(flux, grid, order=1).real
        ds = -(s_z**2 / (2.0 * mass) + v_per)
        return drho, ds, -config.potential_slope, s_z

    def check_cfl(step, s_z):
        u_max = float(np.max(np.abs(s_z))) / mass
        if u_max * dt > cfl_limit:
            raise NumericalError(
                f"advective CFL violated at step {step} (t = {step * dt:.6g}): "
                f"max|S_z/m| dt = {u_max * dt:.3g} > {config.cfl} dz = {cfl_limit:.3g}; "
                "the classical flow may be forming a shock"
            )

    times: list[float] = []
    series: dict[str, list[float]] = {}
    snapshots: list[Snapshot] = []
    rho_integrals: list[float] = []

    def observe_now(step):
        return step == 0 or step == n_steps or (
            config.observe_every > 0 and step % config.observe_every == 0)

    def snapshot_now(step):
        return step == 0 or step == n_steps or (
            config.snapshot_every > 0 and step % config.snapshot_every == 0)

    def record(step, rho_c, s_c, kappa_c):
        r_now = np.sqrt(np.clip(rho_c, 0.0, None))
        s_full = kappa_c * z + s_c
        support_now = r_now >= DEFAULT_NODE_THRESHOLD * float(r_now.max())
        fld = MadelungField(grid, r_now, s_full, hbar=config.hbar, support=support_now)
        psi = recompose(fld)
        if observe_now(step):
            times.append(step * dt)
            obs = observables(psi)
            obs["rho_integral"] = float(np.sum(rho_c) * grid.dz)
            rho_integrals.append(obs["rho_integral"])
            for key, value in obs.items():
                series.setdefault(key, []).append(value)
        if snapshot_now(step):
            q = quantum_potential(fld, mass)
            snapshots.append(Snapshot(step * dt, psi, {"R": r_now, "S": s_full, "Q": q}))

    record(0, rho, s_tilde, kappa0)
    state = (rho, s_tilde, kappa0)
    for step in range(1, n_steps + 1):
        k1 = rhs(state)
        check_cfl(step, k1[3])
        s1 = (state[0] + 0.5 * dt * k1[0], state[1] + 0.5 * dt * k1[1],
              state[2] + 0.5 * dt * k1[2])
        k2 = rhs(s1)
        s2 = (state[0] + 0.5 * dt * k2[0], state[1] + 0.5 * dt * k2[1],
              state[2] + 0.5 * dt * k2[2])
        k3 = rhs(s2)
        s3 = (state[0] + dt * k3[0], state[1] + dt * k3[1], state[2] + dt * k3[2])
        k4 = rhs(s3)
        state = (
            state[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            state[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            state[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        )
        if not np.all(np.isfinite(state[0])) or not np.all(np.isfinite(state[1])):
            raise NumericalError(f"transport state blew up at step {step}")
        if observe_now(step) or snapshot_now(step):
            record(step, *state)

    arr = np.array(rho_integrals)
    conservation = {
        "rho_integral_initial": float(arr[0]),
        "rho_integral_final": float(arr[-1]),
        "max_relative_rho_drift": float(np.max(np.abs(arr - arr[0])) / arr[0]),
    }
    config_echo = {
        "scheme": "dispersionless_transport",
        "convention": "dS/dt = -[(S_z)^2/(2m) + V]; d(R^2)/dt = -d_z(R^2 S_z / m)",
        "dt": dt,
        "t_final": config.t_final,
        "mass": mass,
        "hbar": config.hbar,
        "potential_slope": config.potential_slope,
        "potential": "zero" if config.potential is None else "tabulated",
        "grid": {"n": grid.n, "z_min": grid.z_min, "z_max": grid.z_max, "dz": grid.dz},
    }
    return RunReport(
        scheme="dispersionless_transport",
        config=config_echo,
        times=np.array(times),
        observables={k: np.array(v) for k, v in series.items()},
        snapshots=snapshots,
        conservation=conservation,
    )


@dataclass(frozen=True)
class SolitonAmplitude:
    """Envelope amplitude in SI meters and in normalized (Compton) units."""

    si: float
    normalized: float


def soliton_amplitude(potential_energy: float,
                      constants: PhysicalConstants | None = None) -> SolitonAmplitude:
    """Envelope amplitude r = c h / (4 (m0 c^2 + V)).

    At V = 0 this is half the guide width h/(2 m0 c); it decreases
    monotonically as the potential rises.  Requires m0 c^2 + V > 0.
    """
    k = constants or electron_constants()
    denom = k.rest_energy + potential_energy
    if denom <= 0.0:
        raise DomainError(
            f"m0 c^2 + V must be positive, got {denom} (V = {potential_energy})"
        )
    r_si = k.c * k.h / (4.0 * denom)
    scaling = UnitScaling(mass_kg=k.m0, constants=k)
    return SolitonAmplitude(si=r_si, normalized=scaling.length_from_si(r_si))
