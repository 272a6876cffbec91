"""Cyclic irreducible representations in the clock-and-shift presentation.

The dimension-ell representation attached to nonzero parameters (u, v, x, y)
acts on a basis v_1..v_ell (cyclically, v_{ell+1} = v_1) by

    K v_m = u v eps^(2m) v_m        L v_m = (v/u) eps^(2m) v_m
    E v_m = y v_{m+1}
    F v_m = (u/y) c_m v_{m-1},  c_m = (x v^-1 eps^(1-2m) - 1)(v eps^(2m-1) - x^-1)

F is defined entrywise by the weights c_m; the equivalent operator-product
presentation is ordering-sensitive and not used.  Arrays are 0-indexed with
index i standing for basis vector v_{i+1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (DegenerateCharacterError, InconsistentLiftError,
                     InvalidParamsError, NonGenericRepresentationError)
from .glstar import Z0Char
from .roots import RootContext, primitive_root


@dataclass(frozen=True)
class RepParams:
    """Nonzero parameter quadruple of a cyclic representation."""

    ctx: RootContext
    u: complex
    v: complex
    x: complex
    y: complex

    def __post_init__(self):
        if self.u == 0 or self.v == 0 or self.x == 0 or self.y == 0:
            raise InvalidParamsError("parameters must be nonzero")

    def as_tuple(self) -> tuple[complex, complex, complex, complex]:
        return self.u, self.v, self.x, self.y


@dataclass(frozen=True)
class ClockShift:
    """Clock matrix A = diag(eps^2, ..., eps^(2 ell)) and cyclic shift B."""

    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True)
class RepMatrices:
    K: np.ndarray
    L: np.ndarray
    E: np.ndarray
    F: np.ndarray
    params: RepParams

    def as_tuple(self):
        return self.K, self.L, self.E, self.F


@lru_cache(maxsize=None)
def _clock_shift_arrays(ell: int) -> tuple[np.ndarray, np.ndarray]:
    ctx = primitive_root(ell)
    A = np.diag([ctx.pow(2 * (i + 1)) for i in range(ell)])
    B = np.zeros((ell, ell), dtype=complex)
    for i in range(ell):
        B[(i + 1) % ell, i] = 1.0
    A.setflags(write=False)
    B.setflags(write=False)
    return A, B


def clock_shift(ctx: RootContext) -> ClockShift:
    """A and B with A^ell = B^ell = 1 and A B = eps^2 B A."""
    A, B = _clock_shift_arrays(ctx.ell)
    return ClockShift(A=A, B=B)


def f_weights(p: RepParams) -> np.ndarray:
    """The lowering weights c_1..c_ell."""
    ctx, (u, v, x, y) = p.ctx, p.as_tuple()
    ms = np.arange(1, ctx.ell + 1)
    return ((x / v) * ctx.eps_powers[(1 - 2 * ms) % ctx.ell] - 1) * \
        (v * ctx.eps_powers[(2 * ms - 1) % ctx.ell] - 1 / x)


def build_rep(p: RepParams) -> RepMatrices:
    """Assemble the four generator matrices."""
    ctx = p.ctx
    u, v, x, y = p.as_tuple()
    cs = clock_shift(ctx)
    K = u * v * cs.A
    L = (v / u) * cs.A
    E = y * cs.B
    F = np.zeros((ctx.ell, ctx.ell), dtype=complex)
    w = f_weights(p)
    for i in range(ctx.ell):  # F v_{i+1} = (u/y) c_{i+1} v_i
        F[(i - 1) % ctx.ell, i] = (u / y) * w[i]
    return RepMatrices(K=K, L=L, E=E, F=F, params=p)


def z0_character(p: RepParams) -> Z0Char:
    """Central character: the scalars by which the ell-th powers act.

    The F^ell scalar carries the y^(-ell) prefactor; this is pinned against
    the matrix power of F in the tests.
    """
    ell = p.ctx.ell
    u, v, x, y = p.as_tuple()
    return Z0Char(
        kappa=(u * v) ** ell,
        lam=(v / u) ** ell,
        eta=y**ell,
        phi=u**ell / y**ell * (x**ell + x ** (-ell) - v**ell - v ** (-ell)),
    )


def f_power_scalar_variants(p: RepParams) -> dict[str, complex]:
    """Candidate closed forms for the F^ell scalar, for adjudication.

    "with_inverse_power" includes the y^(-ell) prefactor, "bare" drops it;
    the matrix power of F decides between them.
    """
    ell = p.ctx.ell
    u, v, x, y = p.as_tuple()
    core = (x**ell * v ** (-ell) - 1) * (v**ell - x ** (-ell))
    return {"with_inverse_power": u**ell / y**ell * core, "bare": u**ell * core}


def lift_character(c: Z0Char, u: complex, x: complex, ctx: RootContext,
                   tol: float = 1e-9) -> RepParams:
    """Lift a character to representation parameters with given strand data.

    v and y are principal ell-th roots of kappa/u^ell and eta; the lift is
    rejected unless the remaining two character values are reproduced, which
    happens exactly when (u, x) carry the character's conserved invariants.
    """
    ell = ctx.ell
    if abs(c.eta) < 1e-300:
        raise DegenerateCharacterError("eta = 0 has no cyclic lift")
    if abs(c.kappa) < 1e-300:
        raise DegenerateCharacterError("kappa = 0 is not a character")
    v = (c.kappa / u**ell) ** (1.0 / ell)
    y = c.eta ** (1.0 / ell)
    p = RepParams(ctx=ctx, u=u, v=v, x=x, y=y)
    c2 = z0_character(p)
    lam_res = abs(c2.lam - c.lam) / abs(c.lam)
    phi_scale = max(abs(c.phi), abs(c2.phi), 1e-9)
    phi_res = abs(c2.phi - c.phi) / phi_scale
    if lam_res > tol or phi_res > tol:
        raise InconsistentLiftError(
            f"lift residuals lam={lam_res:.2e} phi={phi_res:.2e}; wrong strand data?")
    return p


def gauge_U(p: RepParams, convention: str = "geometric"
            ) -> tuple[np.ndarray, complex]:
    """Diagonal gauge conjugating the normalized lowering operator to a shift.

    Returns (U, z) with z = (prod_m c_m)^(1/ell) principal and
    U_nn = z^n prod_{m<=n} c_m^(-1) (so U_ll = 1).  Then
    U^-1 Fhat U = z B^-1 holds exactly around the cycle, where
    Fhat = (y/u) F.  convention "constant" uses the single-z prefactor
    U_nn = z prod c_m^(-1) instead; it fails the wrap-around and is kept
    only for the adjudication report.
    """
    ell = p.ctx.ell
    w = f_weights(p)
    if np.min(np.abs(w)) < 1e-12:
        raise NonGenericRepresentationError("some lowering weight c_m = 0")
    z = np.prod(w) ** (1.0 / ell)
    cum = np.cumprod(w)
    if convention == "geometric":
        diag = z ** np.arange(1, ell + 1) / cum
    elif convention == "constant":
        diag = z / cum
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return np.diag(diag), z


def gauge_conjugation_residual(p: RepParams, convention: str = "geometric") -> float:
    """|| U^-1 Fhat U - z B^-1 || / |z|, the wrap-around included."""
    U, z = gauge_U(p, convention)
    rep = build_rep(p)
    fhat = (p.y / p.u) * rep.F
    cs = clock_shift(p.ctx)
    lhs = np.linalg.inv(U) @ fhat @ U
    return float(np.linalg.norm(lhs - z * np.linalg.inv(cs.B)) / abs(z))


def projector(ctx: RootContext, n: int) -> np.ndarray:
    """Rank-one projector onto basis vector v_n (1-indexed).

    Utility only; no identity in the package exercises it.
    """
    P = np.zeros((ctx.ell, ctx.ell), dtype=complex)
    P[(n - 1) % ctx.ell, (n - 1) % ctx.ell] = 1.0
    return P


def is_generic(p: RepParams, q: RepParams,
               min_weight: float = 1e-6, max_condition: float = 1e8) -> bool:
    """Genericity predicate for a representation pair about to be braided.

    Requires: nonvanishing lowering weights on both inputs and both braided
    outputs, nonzero eta everywhere, the braiding correction factor and
    1 - s^ell bounded away from zero, a consistent strand-preserving lift,
    and well-conditioned inverted factors in the generator-action checks.
    """
    from .intertwiner import braided_rep_pair  # cycle kept local

    for r in (p, q):
        if np.min(np.abs(f_weights(r))) < min_weight:
            return False
        if abs(r.y) < min_weight:
            return False
    cx, cy = z0_character(p), z0_character(q)
    om = 1 - cx.eta * cy.phi
    if abs(om) < min_weight:
        return False
    if abs(cx.eta * cy.phi) < min_weight:  # |1 - s^ell| = |eta phi / om|
        return False
    try:
        q1, q2 = braided_rep_pair(p, q)
    except (DegenerateCharacterError, InconsistentLiftError):
        return False
    for r in (q1, q2):
        if np.min(np.abs(f_weights(r))) < min_weight:
            return False
    # conditioning of the inverted factor (1 - t G) on the output pair
    t = p.ctx.eps
    ro1, ro2 = build_rep(q1), build_rep(q2)
    G = np.kron(np.linalg.inv(ro1.K) @ ro1.E, ro2.F @ ro2.L)
    eye = np.eye(G.shape[0])
    for factor in (eye - t * G, eye - G / t):
        if np.linalg.cond(factor) > max_condition:
            return False
    return True
