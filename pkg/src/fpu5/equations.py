"""Linear symbols, nonlinear tendencies, and the conservation-form flux.

Each equation is split as u_t = symbol*u + N(u): the two constant-coefficient
linear terms (third and, for the fifth-order family, fifth derivative) go
into the per-mode symbol and everything u-dependent is treated explicitly.
"""
from __future__ import annotations

import numpy as np

from .errors import BlowUpError
from .params import EquationKind, ModelParams
from .spectral import Grid, derivative_multiplier, forward


def linear_symbol(kind: EquationKind, params: ModelParams, grid: Grid) -> np.ndarray:
    """Per-mode multiplier of the linear dispersive terms.

    Purely imaginary for every equation kind: i (delta^2 k^3) for the
    third-order family, i (delta^2 k^3 - (2/5) delta^4 k^5) with the extra
    fifth-order term for FPU5/KDV5.
    """
    k = grid.k
    d2 = params.delta**2
    if kind in (EquationKind.FPU5, EquationKind.KDV5):
        return 1j * (d2 * k**3 - 0.4 * d2 * d2 * k**5)
    return 1j * d2 * k**3


def effective_mu(kind: EquationKind, params: ModelParams) -> float:
    """KDV5 forces mu to zero and KDV ignores it entirely."""
    if kind in (EquationKind.KDV, EquationKind.KDV5):
        return 0.0
    return params.mu


def make_nonlinear_operator(kind: EquationKind, params: ModelParams, grid: Grid):
    """Build the spectral-space nonlinear tendency u_hat -> N_hat.

    Derivatives carry the 2/3 mask, products are formed in physical space,
    and the transformed tendency is masked again.  The mode-0 component is
    zeroed: the tendency is an exact x-derivative, so its mean vanishes
    identically and zeroing removes the aliasing residue of the cubic terms.
    """
    mask = grid.dealias
    d1 = derivative_multiplier(grid, 1)
    mu = effective_mu(kind, params)
    delta2 = params.delta**2
    ifft = np.fft.ifft
    fft = np.fft.fft

    if kind is EquationKind.KDV:
        def nonlinear(u_hat):
            u = ifft(u_hat).real
            ux = ifft(d1 * u_hat).real
            out = fft(-u * ux)
            out *= mask
            out[0] = 0.0
            return out
        return nonlinear

    if kind is EquationKind.GARDNER:
        def nonlinear(u_hat):
            u = ifft(u_hat).real
            ux = ifft(d1 * u_hat).real
            out = fft((mu * u * u - u) * ux)
            out *= mask
            out[0] = 0.0
            return out
        return nonlinear

    d3 = derivative_multiplier(grid, 3)
    d2m = derivative_multiplier(grid, 2)

    def nonlinear(u_hat):
        u = ifft(u_hat).real
        ux = ifft(d1 * u_hat).real
        uxx = ifft(d2m * u_hat).real
        uxxx = ifft(d3 * u_hat).real
        w = mu * u * u - u
        tend = w * (ux + delta2 * uxxx) \
            + delta2 * ux * ((4.0 * mu * u - 2.0) * uxx + mu * ux * ux)
        out = fft(tend)
        out *= mask
        out[0] = 0.0
        return out

    return nonlinear


def nonlinear_rhs(kind: EquationKind, params: ModelParams, grid: Grid,
                  u: np.ndarray) -> np.ndarray:
    """Physical-space nonlinear tendency du/dt (linear terms excluded)."""
    u = grid.check_field(u)
    if not np.all(np.isfinite(u)):
        raise BlowUpError("nonlinear tendency fed a non-finite field")
    op = make_nonlinear_operator(kind, params, grid)
    tend = np.fft.ifft(op(forward(grid, u))).real
    if not np.all(np.isfinite(tend)):
        raise BlowUpError("nonlinear tendency became non-finite")
    return tend


def full_rhs(kind: EquationKind, params: ModelParams, grid: Grid,
             u: np.ndarray) -> np.ndarray:
    """Complete du/dt, linear plus nonlinear, in physical space."""
    u_hat = forward(grid, u)
    lam = linear_symbol(kind, params, grid)
    op = make_nonlinear_operator(kind, params, grid)
    return np.fft.ifft(lam * u_hat + op(u_hat)).real


def conservation_flux(params: ModelParams, grid: Grid, u: np.ndarray) -> np.ndarray:
    """Flux F(u) of the fifth-order equation, so that du/dt = -dF/dx.

    F = u^2/2 - mu u^3/3 + delta^2 u_xx + delta^2 (u u_xx + u_x^2/2)
        - delta^2 mu (u^2 u_xx + u u_x^2) + (2/5) delta^4 u_xxxx
    """
    u = grid.check_field(u)
    if not np.all(np.isfinite(u)):
        raise BlowUpError("flux fed a non-finite field")
    u_hat = forward(grid, u)
    ux = np.fft.ifft(derivative_multiplier(grid, 1) * u_hat).real
    uxx = np.fft.ifft(derivative_multiplier(grid, 2) * u_hat).real
    uxxxx = np.fft.ifft(derivative_multiplier(grid, 4) * u_hat).real
    mu = params.mu
    d2 = params.delta**2
    return (0.5 * u * u - mu * u**3 / 3.0 + d2 * uxx
            + d2 * (u * uxx + 0.5 * ux * ux)
            - d2 * mu * (u * u * uxx + u * ux * ux)
            + 0.4 * d2 * d2 * uxxxx)
