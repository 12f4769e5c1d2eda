"""Periodic grid, transform conventions, dealiased derivatives, IF-RK4 stepping.

Transform convention: ``forward`` is the plain unnormalized DFT (numpy's
``fft``), so a constant field c has coefficient N*c in mode 0; ``inverse``
carries the 1/N factor and ``inverse(forward(u)) == u`` to roundoff.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .params import EquationKind, ModelParams


class Grid:
    """Uniform periodic grid on [0, L) with a power-of-two point count.

    Exposes the sample positions ``x``, the angular wavenumbers ``k``
    (ordered like numpy's fft output), the 2/3-rule dealias mask, and the
    index of the Nyquist mode.
    """

    def __init__(self, length: float, n: int):
        if not length > 0:
            raise DomainError("grid length must be positive")
        n = int(n)
        if n < 8 or n & (n - 1):
            raise DomainError("N must be a power of two and at least 8")
        self.length = float(length)
        self.n = n
        self.dx = self.length / n
        self.x = np.arange(n) * self.dx
        self.modes = np.fft.fftfreq(n, d=1.0 / n)  # integer mode numbers
        self.k = (2.0 * np.pi / self.length) * self.modes
        self.dealias = (np.abs(self.modes) <= n // 3).astype(float)
        self.nyquist_index = n // 2

    def __repr__(self):
        return f"Grid(length={self.length!r}, n={self.n})"

    def check_field(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u)
        if u.shape != (self.n,):
            raise ValueError(f"field has shape {u.shape}, grid expects ({self.n},)")
        return u


def forward(grid: Grid, u: np.ndarray) -> np.ndarray:
    """Physical samples to spectral coefficients (unnormalized DFT)."""
    return np.fft.fft(grid.check_field(u))


def inverse(grid: Grid, u_hat: np.ndarray) -> np.ndarray:
    """Spectral coefficients back to real physical samples."""
    return np.fft.ifft(grid.check_field(u_hat)).real


def dealias_mask(grid: Grid) -> np.ndarray:
    """2/3-rule mask: 1 for |mode| <= floor(N/3), 0 above. Idempotent."""
    return grid.dealias.copy()


def derivative_multiplier(grid: Grid, order: int, dealias: bool = True) -> np.ndarray:
    """Per-mode factor (i k)^order, Nyquist zeroed for odd orders."""
    if order < 1 or order > 5:
        raise ValueError("derivative order must be between 1 and 5")
    mult = (1j * grid.k) ** order
    if order % 2:
        # the Nyquist mode of an odd derivative has no real-valued counterpart
        mult[grid.nyquist_index] = 0.0
    if dealias:
        mult = mult * grid.dealias
    return mult


def spectral_derivative(grid: Grid, u: np.ndarray, order: int = 1,
                        dealias: bool = True) -> np.ndarray:
    """n-th spatial derivative computed in Fourier space."""
    mult = derivative_multiplier(grid, order, dealias)
    return np.fft.ifft(mult * forward(grid, u)).real


def if_rk4_step(u_hat: np.ndarray, dt: float, symbol: np.ndarray, nonlinear) -> np.ndarray:
    """One integrating-factor RK4 step of u_hat' = symbol*u_hat + N(u_hat).

    The linear part is propagated exactly through exp(symbol*dt); the four
    classical stages act on the nonlinear part only.  With ``nonlinear``
    identically zero the step reduces to multiplication by exp(symbol*dt).
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    from .errors import BlowUpError

    e_half = np.exp(symbol * (0.5 * dt))
    e_full = e_half * e_half
    a = dt * nonlinear(u_hat)
    b = dt * nonlinear((u_hat + 0.5 * a) * e_half)
    c = dt * nonlinear(u_hat * e_half + 0.5 * b)
    d = dt * nonlinear(u_hat * e_full + c * e_half)
    out = u_hat * e_full + (a * e_full + 2.0 * (b + c) * e_half + d) / 6.0
    if not np.all(np.isfinite(out)):
        raise BlowUpError("step produced a non-finite field", step=1, t=dt)
    return out


class IntegratingFactorRK4:
    """IF-RK4 stepper with the integrating-factor exponentials precomputed.

    ``symbol`` must be purely imaginary (dispersive, no growth or decay);
    this is asserted on construction.
    """

    def __init__(self, symbol: np.ndarray, nonlinear, dt: float):
        if not dt > 0:
            raise DomainError("dt must be positive")
        symbol = np.asarray(symbol)
        if np.max(np.abs(symbol.real)) != 0.0:
            raise DomainError("linear symbol must be purely imaginary")
        self.dt = float(dt)
        self.nonlinear = nonlinear
        self.e_half = np.exp(symbol * (0.5 * self.dt))
        self.e_full = self.e_half * self.e_half

    def step(self, u_hat: np.ndarray) -> np.ndarray:
        dt = self.dt
        e_half = self.e_half
        e_full = self.e_full
        n = self.nonlinear
        a = dt * n(u_hat)
        b = dt * n((u_hat + 0.5 * a) * e_half)
        c = dt * n(u_hat * e_half + 0.5 * b)
        d = dt * n(u_hat * e_full + c * e_half)
        return u_hat * e_full + (a * e_full + 2.0 * (b + c) * e_half + d) / 6.0


def default_time_step(grid: Grid, params: ModelParams, kind: EquationKind,
                      u0: np.ndarray, safety: float = 0.5) -> float:
    """Step-size heuristic from the explicitly treated terms.

    The fifth-order linear term is absorbed exactly by the integrating
    factor; what limits dt is the advection-like nonlinearity at the highest
    retained wavenumber and, for the fifth-order equations, the u-dependent
    third-derivative terms.  Runs may always override this value.
    """
    k_active = 2.0 * np.pi * (grid.n // 3) / grid.length
    amp = float(np.max(np.abs(u0)))
    amp = max(amp, 1e-12)
    advective = (amp + params.mu * amp * amp) * k_active
    rate = advective
    if kind in (EquationKind.FPU5, EquationKind.KDV5):
        mu = 0.0 if kind is EquationKind.KDV5 else params.mu
        stiff = params.delta**2 * (amp + mu * amp * amp) * k_active**3
        rate = max(rate, stiff)
    return safety / rate
