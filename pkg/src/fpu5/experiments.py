"""Simulation runner, error metrics, the canned studies, and recurrence scan."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .equations import linear_symbol, make_nonlinear_operator
from .errors import BlowUpError, DomainError, PoleError
from .params import EquationKind, ModelParams
from .solutions import (EllipticSolution, GardnerSoliton, KdV5Soliton,
                        KinkSolution, elliptic_eval, gardner_soliton,
                        kdv5_soliton, kink_eval)
from .spectral import Grid, IntegratingFactorRK4, default_time_step

IC_NAMES = ("kink_pair", "kdv5_soliton", "gardner_soliton", "cosine",
            "elliptic", "from_file")

# domain length shared by the soliton-perturbation and recurrence studies;
# chosen so the surviving solitary wave laps the ring in the observed
# recurrence period
RECURRENCE_LENGTH = 46.75


@dataclass
class InitialCondition:
    """Tagged choice of starting profile; only the matching field is used."""

    name: str
    k: float | None = None      # kdv5_soliton wavenumber
    c0: float | None = None     # gardner_soliton speed
    g3: float | None = None     # elliptic free invariant
    path: str | None = None     # from_file snapshot path

    def __post_init__(self):
        if self.name not in IC_NAMES:
            raise DomainError(f"unknown initial condition {self.name!r}")
        needs = {"kdv5_soliton": "k", "gardner_soliton": "c0",
                 "elliptic": "g3", "from_file": "path"}
        for ic, attr in needs.items():
            if self.name == ic and getattr(self, attr) is None:
                raise DomainError(f"initial condition {ic} needs {attr}")
            if self.name != ic and getattr(self, attr) is not None:
                raise DomainError(f"field {attr} does not apply to {self.name}")


@dataclass
class SimulationConfig:
    kind: EquationKind
    params: ModelParams
    grid: Grid
    t_end: float
    initial_condition: InitialCondition
    dt: float | None = None
    snapshot_interval: float | None = None

    def __post_init__(self):
        if self.t_end < 0:
            raise DomainError("t_end must be nonnegative")
        if self.dt is not None and not self.dt > 0:
            raise DomainError("dt must be positive")
        if self.snapshot_interval is not None:
            if not self.snapshot_interval > 0:
                raise DomainError("snapshot_interval must be positive")
            if self.dt is not None and self.snapshot_interval < self.dt:
                raise DomainError("snapshot_interval must be at least dt")


@dataclass
class Snapshot:
    t: float
    u: np.ndarray


@dataclass
class ValidationReport:
    times: np.ndarray
    errs: np.ndarray
    max_err: float
    snapshots: list | None = None


@dataclass
class RecurrenceReport:
    t_fix: float
    times: np.ndarray
    differences: np.ndarray          # shift-minimized circular difference
    plain_differences: np.ndarray | None = None  # no realignment
    minima_times: list[float] = field(default_factory=list)
    period: float | None = None


def kink_pair_profile(params: ModelParams, grid: Grid) -> np.ndarray:
    """Smooth periodic field: plus-branch kink at L/4, minus branch at 3L/4.

    Both branches travel at the same speed, so the pair is an exact solution
    away from the exponentially small seams.
    """
    plus = KinkSolution(params, branch=1, z0=0.25 * grid.length)
    minus = KinkSolution(params, branch=-1, z0=0.75 * grid.length)
    return kink_eval(plus, grid.x) + kink_eval(minus, grid.x) \
        - (plus.center_level + plus.amplitude)


def build_initial_condition(config: SimulationConfig) -> np.ndarray:
    ic = config.initial_condition
    grid = config.grid
    if ic.name == "kink_pair":
        return kink_pair_profile(config.params, grid)
    if ic.name == "kdv5_soliton":
        s = KdV5Soliton(k=ic.k, delta=config.params.delta)
        return kdv5_soliton(s, grid.x - 0.5 * grid.length)
    if ic.name == "gardner_soliton":
        s = GardnerSoliton(params=config.params, c0=ic.c0)
        return gardner_soliton(s, grid.x - 0.5 * grid.length)
    if ic.name == "cosine":
        return np.cos(np.pi * grid.x)
    if ic.name == "elliptic":
        s = EllipticSolution(params=config.params, g3=ic.g3)
        u = elliptic_eval(s, grid.x, on_pole="raise")
        if not np.all(np.isfinite(u)):
            raise PoleError("elliptic initial profile is singular on this grid")
        return np.asarray(u)
    if ic.name == "from_file":
        from .snapio import read_snapshot
        snap, (n, length) = read_snapshot(ic.path)
        if n != grid.n or abs(length - grid.length) > 1e-12 * grid.length:
            raise DomainError("snapshot geometry does not match the run grid")
        return snap.u
    raise DomainError(f"unknown initial condition {ic.name!r}")


def run(config: SimulationConfig) -> list[Snapshot]:
    """Integrate and return snapshots at 0, dt_snap, ..., t_end.

    On loss of finiteness raises BlowUpError with the failing step index and
    the last finite snapshot attached.
    """
    grid = config.grid
    u0 = build_initial_condition(config)
    snapshots = [Snapshot(0.0, u0.copy())]
    if config.t_end == 0:
        return snapshots
    dt = config.dt or default_time_step(grid, config.params, config.kind, u0)
    snap_dt = config.snapshot_interval or max(config.t_end / 50.0, dt)
    n_snap = int(np.ceil(config.t_end / snap_dt - 1e-9))
    snap_dt = config.t_end / n_snap
    steps_per = max(1, int(round(snap_dt / dt)))
    dt = snap_dt / steps_per

    symbol = linear_symbol(config.kind, config.params, grid)
    nonlinear = make_nonlinear_operator(config.kind, config.params, grid)
    stepper = IntegratingFactorRK4(symbol, nonlinear, dt)

    u_hat = np.fft.fft(u0)
    step_count = 0
    # overflow is diagnosed through the explicit finiteness check, so the
    # intermediate numpy warnings are noise
    with np.errstate(over="ignore", invalid="ignore"):
        for i_snap in range(1, n_snap + 1):
            for _ in range(steps_per):
                u_hat = stepper.step(u_hat)
                step_count += 1
                if not np.all(np.isfinite(u_hat)):
                    raise BlowUpError(
                        f"solution lost finiteness at step {step_count}",
                        step=step_count, t=step_count * dt,
                        last_snapshot=snapshots[-1])
            t = i_snap * snap_dt
            snapshots.append(Snapshot(t, np.fft.ifft(u_hat).real))
    return snapshots


def mass_drift(snapshots: list[Snapshot]) -> float:
    """Relative drift of the spatial mean over a run.

    Scaled by max(|initial mean|, max|u0|) so zero-mean data is handled.
    """
    means = np.array([s.u.mean() for s in snapshots])
    scale = max(abs(means[0]), float(np.max(np.abs(snapshots[0].u))), 1e-300)
    return float(np.max(np.abs(means - means[0]))) / scale


def err_metric(u_analytic: np.ndarray, u_calc: np.ndarray, mask=None) -> float:
    """max|u_analytic - u_calc| / max|u_calc| over the masked points."""
    u_analytic = np.asarray(u_analytic, dtype=float)
    u_calc = np.asarray(u_calc, dtype=float)
    if u_analytic.shape != u_calc.shape:
        raise ValueError("fields must share a grid")
    if mask is not None:
        mask = np.asarray(mask)
        if mask.dtype == bool and not mask.any():
            raise ValueError("empty mask")
        if mask.dtype != bool and mask.size == 0:
            raise ValueError("empty mask")
        u_analytic = u_analytic[mask]
        u_calc = u_calc[mask]
        if u_calc.size == 0:
            raise ValueError("empty mask")
    denom = float(np.max(np.abs(u_calc)))
    if denom == 0.0:
        raise ValueError("err metric undefined for an all-zero reference")
    return float(np.max(np.abs(u_analytic - u_calc))) / denom


def _all_rolls(u: np.ndarray) -> np.ndarray:
    """Matrix whose row s is u rolled by s cells."""
    n = u.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return u[idx]


def best_shift_xcorr(reference: np.ndarray, u: np.ndarray) -> int:
    """Circular cross-correlation argmax, the candidate alignment shift."""
    corr = np.fft.ifft(np.fft.fft(u) * np.conj(np.fft.fft(reference))).real
    return int(np.argmax(corr))


def xcorr_mismatch(reference: np.ndarray, u: np.ndarray) -> float:
    """1 minus the best normalized circular cross-correlation.

    Zero for a pure circular shift of the reference; near one for unrelated
    profiles.  Unlike the max-norm metric this does not saturate on narrow
    spiky fields, so it is the score used for the soliton-train comparisons.
    """
    reference = np.asarray(reference, dtype=float)
    u = np.asarray(u, dtype=float)
    corr = np.fft.ifft(np.fft.fft(u) * np.conj(np.fft.fft(reference))).real
    norm = np.sqrt(np.sum(reference**2) * np.sum(u**2))
    if norm == 0.0:
        raise ValueError("correlation undefined for an all-zero field")
    return float(1.0 - corr.max() / norm)


def min_shift_difference(reference: np.ndarray, u: np.ndarray,
                         rolls: np.ndarray | None = None) -> tuple[float, int]:
    """Smallest err_metric over every integer circular shift of reference.

    The cross-correlation candidate is located first, then all shifts are
    evaluated directly; the direct evaluation is authoritative.
    """
    if rolls is None:
        rolls = _all_rolls(np.asarray(reference, dtype=float))
    denom = float(np.max(np.abs(u)))
    if denom == 0.0:
        raise ValueError("difference undefined for an all-zero field")
    errs = np.max(np.abs(rolls - u[None, :]), axis=1) / denom
    candidate = best_shift_xcorr(reference, u)
    best = int(np.argmin(errs))
    if errs[candidate] < errs[best]:
        best = candidate
    return float(errs[best]), best


def fractional_shift(u: np.ndarray, grid: Grid, shift: float) -> np.ndarray:
    """u(x - shift) by Fourier phase rotation (shift in x units)."""
    return np.fft.ifft(np.fft.fft(u) * np.exp(-1j * grid.k * shift)).real


def shape_score(reference: np.ndarray, u: np.ndarray, grid: Grid,
                rolls: np.ndarray | None = None) -> float:
    """Shape deviation of u from reference modulo continuous translation.

    Integer-shift search first, then a bounded scalar refinement of the
    fractional offset, so a cleanly translating profile scores near zero
    regardless of how it sits on the grid.
    """
    from scipy.optimize import minimize_scalar

    coarse, s0 = min_shift_difference(reference, u, rolls)
    ref_hat = np.fft.fft(reference)
    denom = float(np.max(np.abs(u)))

    def objective(shift):
        shifted = np.fft.ifft(ref_hat * np.exp(-1j * grid.k * shift)).real
        return float(np.max(np.abs(shifted - u))) / denom

    x0 = s0 * grid.dx
    res = minimize_scalar(objective, bounds=(x0 - grid.dx, x0 + grid.dx),
                          method="bounded", options={"xatol": 1e-10 * grid.dx})
    return float(min(coarse, res.fun))


def shape_score_series(snapshots: list[Snapshot], grid: Grid,
                       reference: np.ndarray | None = None) -> np.ndarray:
    """shape_score of each snapshot against a fixed reference (default u(0))."""
    if reference is None:
        reference = snapshots[0].u
    rolls = _all_rolls(np.asarray(reference, dtype=float))
    return np.array([shape_score(reference, s.u, grid, rolls) for s in snapshots])


# ------------------------------------------------------------ experiments

def kink_validation(params: ModelParams, grid: Grid, dt: float | None,
                    t_end: float, snapshot_interval: float | None = None,
                    mask_tol: float = 1e-9,
                    keep_snapshots: bool = False) -> ValidationReport:
    """Integrate the kink pair and compare with the travelling exact kink.

    The error is measured only on grid points where the initial profile
    agrees with the exact kink to mask_tol, i.e. away from the mirror seam.
    """
    if not params.mu > 0:
        raise DomainError("kink validation requires mu > 0")
    config = SimulationConfig(
        kind=EquationKind.FPU5, params=params, grid=grid, t_end=t_end,
        dt=dt, snapshot_interval=snapshot_interval,
        initial_condition=InitialCondition("kink_pair"))
    snapshots = run(config)
    kink = KinkSolution(params, branch=1, z0=0.25 * grid.length)
    u0 = snapshots[0].u
    exact0 = kink_eval(kink, grid.x)
    mask = np.abs(u0 - exact0) <= mask_tol * float(np.max(np.abs(u0)))
    speed = kink.speed
    times = np.array([s.t for s in snapshots])
    errs = np.array([
        err_metric(kink_eval(kink, grid.x - speed * s.t), s.u, mask)
        for s in snapshots])
    return ValidationReport(times=times, errs=errs, max_err=float(errs.max()),
                            snapshots=snapshots if keep_snapshots else None)


def soliton_perturbation(delta: float = 2.0, k: float = 1.0,
                         mus=(0.0, 0.05), grid: Grid | None = None,
                         dt: float | None = None, t_end: float = 20.0,
                         snapshot_interval: float = 0.5) -> dict:
    """Run the mu = 0 soliton under the fifth-order equation at several mu.

    Returns per-mu snapshot lists and shape-invariance scores against the
    initial profile.
    """
    grid = grid or Grid(RECURRENCE_LENGTH, 256)
    out = {}
    for mu in mus:
        params = ModelParams(delta=delta, mu=mu)
        config = SimulationConfig(
            kind=EquationKind.FPU5, params=params, grid=grid, t_end=t_end,
            dt=dt, snapshot_interval=snapshot_interval,
            initial_condition=InitialCondition("kdv5_soliton", k=k))
        snapshots = run(config)
        scores = shape_score_series(snapshots, grid)
        out[mu] = {"snapshots": snapshots, "scores": scores,
                   "times": np.array([s.t for s in snapshots]),
                   "mass_drift": mass_drift(snapshots)}
    return out


def gardner_soliton_experiment(delta: float = 1.0, mu: float = 0.1,
                               c0: float = 1.0, grid: Grid | None = None,
                               t_end: float = 20.0,
                               snapshot_interval: float = 0.25,
                               dts: dict | None = None) -> dict:
    """Propagate the cubic-equation soliton under both equations.

    Under the third-order equation the profile is exact and must keep its
    shape; under the fifth-order equation it deforms.
    """
    grid = grid or Grid(40.0, 256)
    params = ModelParams(delta=delta, mu=mu)
    dts = dts or {}
    out = {}
    for kind in (EquationKind.GARDNER, EquationKind.FPU5):
        config = SimulationConfig(
            kind=kind, params=params, grid=grid, t_end=t_end,
            dt=dts.get(kind), snapshot_interval=snapshot_interval,
            initial_condition=InitialCondition("gardner_soliton", c0=c0))
        snapshots = run(config)
        scores = shape_score_series(snapshots, grid)
        out[kind] = {"snapshots": snapshots, "scores": scores,
                     "times": np.array([s.t for s in snapshots]),
                     "mass_drift": mass_drift(snapshots)}
    return out


def zabusky_kruskal(delta: float = 0.022, mu: float = 1.0,
                    grid: Grid | None = None, t_end: float = 11.5,
                    snapshot_interval: float = 0.02,
                    figure_times: tuple[float, float] = (1.14, 10.6),
                    recurrence_window: tuple[float, float] = (8.0, 11.5),
                    dts: dict | None = None) -> dict:
    """Cosine initial data on [0, 2): soliton train versus chaotic response.

    For each equation two correlation-mismatch scores are reported:
      * ``recurrence_score``: the best match against the initial profile
        inside the late window, i.e. how well the run returns toward its
        starting state;
      * ``figure_pair_score``: the mismatch between the snapshots nearest
        the two figure times.
    The third-order equation recurs toward the cosine; the fifth-order one
    scatters energy out of the initial modes and does not.
    """
    grid = grid or Grid(2.0, 256)
    params = ModelParams(delta=delta, mu=mu)
    dts = dts or {}
    out = {}
    for kind in (EquationKind.KDV, EquationKind.FPU5):
        config = SimulationConfig(
            kind=kind, params=params, grid=grid, t_end=t_end,
            dt=dts.get(kind), snapshot_interval=snapshot_interval,
            initial_condition=InitialCondition("cosine"))
        snapshots = run(config)
        times = np.array([s.t for s in snapshots])
        u0 = snapshots[0].u
        in_window = (times >= recurrence_window[0]) & (times <= recurrence_window[1])
        window_scores = np.array([xcorr_mismatch(u0, s.u)
                                  for s, keep in zip(snapshots, in_window) if keep])
        window_times = times[in_window]
        i_best = int(np.argmin(window_scores))
        i_early = int(np.argmin(np.abs(times - figure_times[0])))
        i_late = int(np.argmin(np.abs(times - figure_times[1])))
        pair = xcorr_mismatch(snapshots[i_early].u, snapshots[i_late].u)
        out[kind] = {
            "snapshots": snapshots, "times": times,
            "recurrence_score": float(window_scores[i_best]),
            "recurrence_time": float(window_times[i_best]),
            "figure_pair_score": pair,
            "figure_pair_times": (float(times[i_early]), float(times[i_late])),
            "mass_drift": mass_drift(snapshots),
        }
    return out


def recurrence_scan(snapshots: list[Snapshot], t_fix: float,
                    skip: float = 0.0, window: int = 5) -> RecurrenceReport:
    """Minimal circular difference of each later snapshot from the t_fix one.

    d(t) = min over all integer circular shifts of
    err_metric(shift(u_fix), u(t)).  Local minima (smallest d in a centered
    window) mark near-recurrences; the period is the mean gap between
    consecutive minima, or None when fewer than two are found.
    """
    if skip < 0:
        raise DomainError("skip must be nonnegative")
    times = np.array([s.t for s in snapshots])
    tol = 1e-9 * max(1.0, abs(t_fix))
    hits = np.nonzero(np.abs(times - t_fix) <= tol)[0]
    if hits.size == 0:
        raise DomainError("t_fix must be one of the snapshot times")
    u_fix = snapshots[hits[0]].u
    rolls = _all_rolls(np.asarray(u_fix, dtype=float))
    sel = [i for i, t in enumerate(times) if t >= t_fix + skip - tol]
    scan_times = times[sel]
    d = np.array([min_shift_difference(u_fix, snapshots[i].u, rolls)[0]
                  for i in sel])
    plain = np.array([err_metric(u_fix, snapshots[i].u) for i in sel])
    half = window // 2
    minima = []
    for i in range(half, len(d) - half):
        segment = d[i - half:i + half + 1]
        if d[i] == segment.min() and d[i] < segment.max():
            minima.append(float(scan_times[i]))
    period = None
    if len(minima) >= 2:
        period = float(np.mean(np.diff(minima)))
    return RecurrenceReport(t_fix=t_fix, times=scan_times, differences=d,
                            plain_differences=plain, minima_times=minima,
                            period=period)


# Frozen study configurations.  dt values are verified stable for their
# grids (the delta=2 runs use N=128: at N=256 the integrating factor turns
# the top retained modes by tens of radians per step and a triad resonance
# destabilizes the run for any practical dt).  Score thresholds were frozen
# from reference runs of these exact configurations.
EXPERIMENTS: dict[str, dict] = {
    "kink-validation": dict(
        delta=0.6, mu=2.0, length=64.0, n=512, dt=1.5e-4,
        t_end=10.0, snapshot_interval=0.5, err_bound=6e-3),
    "soliton-perturbation": dict(
        delta=2.0, k=1.0, mus=(0.0, 0.05), length=RECURRENCE_LENGTH, n=128,
        dt=1e-4, t_end=20.0, snapshot_interval=0.5,
        invariance_bound=1e-2, destruction_threshold=1e-1, destruction_by=17.0),
    "gardner": dict(
        delta=1.0, mu=0.1, c0=1.0, length=40.0, n=128,
        t_end=20.0, snapshot_interval=0.25,
        dt_gardner=5e-3, dt_fpu5=2.5e-4,
        hold_bound=1e-2, deform_threshold=1e-1, deform_by=8.75),
    "zabusky-kruskal": dict(
        delta=0.022, mu=1.0, length=2.0, n=256,
        t_end=11.5, snapshot_interval=0.02,
        dt_kdv=2e-4, dt_fpu5=2e-5,
        figure_times=(1.14, 10.6), recurrence_window=(8.0, 11.5),
        kdv_recurrence_bound=0.15, contrast_factor=3.0),
    "recurrence": dict(
        delta=2.0, mu=0.05, k=1.0, length=RECURRENCE_LENGTH, n=128,
        dt=1e-4, t_end=52.0, snapshot_interval=0.25,
        t_fix=5.0, table_skip=10.0, scan_skip=2.0,
        expected_first_minimum=27.25, expected_period=22.25, tolerance=0.5),
}


def recurrence_table(snapshots: list[Snapshot], t_fixes, skip: float = 10.0):
    """Fixed-time recurrence rows: for each t_fix, the time of the smallest
    plain circular difference after the skip, the gap, and the difference.

    One row per fixed time; the recurrence period estimate is the mean gap.
    Returns (rows, period) with rows of (t_fix, t_match, gap, difference).
    """
    times = np.array([s.t for s in snapshots])
    rows = []
    for t_fix in t_fixes:
        i_fix = int(np.argmin(np.abs(times - t_fix)))
        u_fix = snapshots[i_fix].u
        sel = [i for i, t in enumerate(times) if t >= times[i_fix] + skip]
        if not sel:
            continue
        diffs = np.array([err_metric(u_fix, snapshots[i].u) for i in sel])
        j = int(np.argmin(diffs))
        t_match = float(times[sel][j])
        rows.append((float(times[i_fix]), t_match,
                     t_match - float(times[i_fix]), float(diffs[j])))
    period = float(np.mean([r[2] for r in rows])) if rows else None
    return rows, period
