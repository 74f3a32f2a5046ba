"""Warped product ambient spaces [0, r_max) x_lambda S^n.

The fiber is a round sphere of constant sectional curvature c (presets use
the unit sphere, c=1).  The warping function carries analytic first and
second derivatives: closed forms for the presets, jets for custom
expressions.  Conventions: the conformal potential is Phi(r) = integral of
lambda, so its ambient gradient is lambda * d/dr; the curvature coefficient

    coeff(r) = lambda''/lambda + (c - lambda'^2) / lambda^2

vanishes identically on the three space-form presets and controls the mixed
radial curvature components used by the hypersurface identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import jets
from .exprfn import compile_expression


class DomainError(ValueError):
    """r outside the ambient's radial domain."""


class FrameError(ValueError):
    """Frame components that do not assemble to a unit vector."""


_PRESETS = {
    "euclidean": dict(fn=lambda r: r, phi=lambda r: 0.5 * r * r, r_max=math.inf),
    "sphere": dict(fn=jets.sin, phi=lambda r: 1.0 - math.cos(r), r_max=math.pi),
    "hyperbolic": dict(fn=jets.sinh, phi=lambda r: math.cosh(r) - 1.0, r_max=math.inf),
}


@dataclass
class WarpedAmbient:
    """Rotationally symmetric ambient with warping lambda and fiber curvature c.

    Immutable after construction; the custom-Phi quadrature cache is
    build-once per value and safe for concurrent reads.
    """

    preset: str
    c: float = 1.0
    r_max: float = math.inf
    expression: str | None = None
    _fn: object = field(default=None, repr=False, compare=False)
    _phi_closed: object = field(default=None, repr=False, compare=False)
    _phi_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.preset in _PRESETS:
            info = _PRESETS[self.preset]
            self._fn = info["fn"]
            self._phi_closed = info["phi"]
            self.r_max = min(self.r_max, info["r_max"])
            self.c = 1.0
        elif self.preset == "custom":
            if self._fn is None:
                if not self.expression:
                    raise ValueError("custom ambient needs a warping expression")
                self._fn = compile_expression(self.expression)
        else:
            raise ValueError(f"unknown preset {self.preset!r}")

    # -- warping data -------------------------------------------------------

    def lam(self, r):
        return float(self._fn(r))

    def lam_derivs(self, r):
        """(lambda, lambda', lambda'') at r."""
        return jets.derivatives(self._fn, r)

    def _check_r(self, r, closed_left=False):
        lo_ok = (r >= 0.0) if closed_left else (r > 0.0)
        if not (lo_ok and r < self.r_max):
            raise DomainError(f"r={r} outside ({0}, {self.r_max})")

    # -- conformal potential -------------------------------------------------

    def phi(self, r):
        """Phi(r), the radial primitive of lambda with Phi(0)=0."""
        if not (0.0 <= r < self.r_max):
            raise DomainError(f"r={r} outside [0, {self.r_max})")
        if self._phi_closed is not None:
            return float(self._phi_closed(r))
        key = float(r)
        hit = self._phi_cache.get(key)
        if hit is None:
            hit, _ = quad(self.lam, 0.0, key, epsabs=1e-12, epsrel=1e-12, limit=200)
            self._phi_cache[key] = hit
        return hit

    # -- curvature data ------------------------------------------------------

    def curvature_coeff(self, r):
        """lambda''/lambda + (c - lambda'^2)/lambda^2; zero on space forms."""
        self._check_r(r)
        lam, lamp, lampp = self.lam_derivs(r)
        return lampp / lam + (self.c - lamp * lamp) / (lam * lam)

    def check_assumptions(self, grid, tol=1e-12):
        """Pointwise monotonicity and coefficient-sign report over a grid."""
        grid = np.asarray(grid, dtype=float)
        lam = np.empty_like(grid)
        lamp = np.empty_like(grid)
        lampp = np.empty_like(grid)
        for i, r in enumerate(grid):
            self._check_r(float(r))
            lam[i], lamp[i], lampp[i] = self.lam_derivs(float(r))
        coeff = lampp / lam + (self.c - lamp * lamp) / lam**2
        return AmbientReport(
            grid=grid,
            lambda_prime_positive=lamp > 0.0,
            coeff=coeff,
            coeff_nonneg=coeff >= -tol,
            ric_condition=self.c >= lamp * lamp - lam * lampp - tol,
        )

    def rbar_contract(self, r, r_tan, r_nu, fgrad, tol=1e-10):
        """Contraction of the mixed radial curvature against a speed gradient.

        Arguments are principal-frame components: r_tan[i] = <d/dr, e_i>,
        r_nu = <d/dr, nu>, fgrad[i] the speed derivative in the same frame.
        Returns -u * coeff * [ (sum_l r_l^2)(sum_i f^i) - sum_i f^i r_i^2 ]
        with u = lambda * r_nu.
        """
        self._check_r(r)
        r_tan = np.asarray(r_tan, dtype=float)
        fgrad = np.asarray(fgrad, dtype=float)
        norm2 = float(np.dot(r_tan, r_tan) + r_nu * r_nu)
        if abs(norm2 - 1.0) > tol:
            raise FrameError(f"|r_tan|^2 + r_nu^2 = {norm2}, expected 1")
        lam = self.lam(r)
        u = lam * r_nu
        coeff = self.curvature_coeff(r)
        t2 = float(np.dot(r_tan, r_tan))
        bracket = t2 * float(np.sum(fgrad)) - float(np.dot(fgrad, r_tan * r_tan))
        return -u * coeff * bracket

    def ric_nu_radial(self, r, r_tan, r_nu):
        """Ricci pairing of the normal with the tangential radial part.

        Equals -(n-1) * coeff * u * sum r_l^2 for a constant-curvature fiber;
        identically zero on space-form presets.  n is len(r_tan).
        """
        self._check_r(r)
        r_tan = np.asarray(r_tan, dtype=float)
        n = r_tan.size
        lam = self.lam(r)
        u = lam * r_nu
        return -(n - 1) * self.curvature_coeff(r) * u * float(np.dot(r_tan, r_tan))

    def describe(self):
        d = {"preset": self.preset, "c": self.c, "r_max": self.r_max}
        if self.expression:
            d["expression"] = self.expression
        return d


@dataclass
class AmbientReport:
    grid: np.ndarray
    lambda_prime_positive: np.ndarray
    coeff: np.ndarray
    coeff_nonneg: np.ndarray
    ric_condition: np.ndarray

    @property
    def all_pass(self):
        return bool(
            np.all(self.lambda_prime_positive)
            and np.all(self.coeff_nonneg)
            and np.all(self.ric_condition)
        )


def euclidean():
    return WarpedAmbient("euclidean")


def sphere():
    return WarpedAmbient("sphere")


def hyperbolic():
    return WarpedAmbient("hyperbolic")


def custom(expression, c=1.0, r_max=math.inf):
    return WarpedAmbient("custom", c=c, r_max=r_max, expression=expression)


def from_description(d):
    """Ambient from a config mapping {preset, [expression], [c], [r_max]}."""
    preset = d.get("preset", "euclidean")
    if preset == "custom":
        return custom(d["expression"], c=float(d.get("c", 1.0)),
                      r_max=float(d.get("r_max", math.inf)))
    amb = WarpedAmbient(preset)
    if "r_max" in d:
        amb.r_max = min(amb.r_max, float(d["r_max"]))
    return amb


def phi(A, r):
    return A.phi(r)


def curvature_coeff(A, r):
    return A.curvature_coeff(r)


def check_assumptions(A, grid, tol=1e-12):
    return A.check_assumptions(grid, tol=tol)


def rbar_contract(A, r, r_tan, r_nu, fgrad, tol=1e-10):
    return A.rbar_contract(r, r_tan, r_nu, fgrad, tol=tol)
