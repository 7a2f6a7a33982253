"""Closed-form reference measures and functionals used as ground truth.

The two-dimensional family is built on the Poisson kernel

    P(r e^{it}) = (1 - r^2) / (1 - 2 r cos t + r^2) = 1 + sum_k 2 r^k cos kt

weighted by (1 - r^alpha) on the unit disc.  Its angular components against
the cos-family harmonics are w_{k,1}(r) = 2 sqrt(pi) r^k (1 - r^alpha), all
sin components vanish, and the r^{-k} component masses have the closed form
2 sqrt(pi) alpha / ((k+2)(alpha+k+2)).  Dropping the (1 - r^alpha) factor
gives per-component masses 2 sqrt(pi) / (k+2), whose sum over k diverges:
the summability condition fails for the bare Poisson kernel.

Profiles are stored symbolically (sums of real powers on an interval) so all
moments have closed forms; generic callables fall back to adaptive
Gauss-Kronrod quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .decompose import DistributedMomentTable
from .harmonics import harmonic_dimension
from .stieltjes import AtomicMeasure

__all__ = [
    "RadialDensityProfile",
    "poisson_alpha_components",
    "poisson_kernel_component",
    "density_component_moments",
    "density_reduced_component_moments",
    "poisson_alpha_table",
    "poisson_reduced_table",
    "univariate_example_table",
    "dirac_counterexample_table",
    "family_divergence_check",
]

_SQRT_PI = math.sqrt(math.pi)
QUAD_TOL = 1e-11


@dataclass(frozen=True)
class RadialDensityProfile:
    """Radial density w_{k,l}(r) on [0, r_max].

    ``powers`` is a tuple of (coefficient, exponent) pairs meaning
    w(r) = sum c_i r^{p_i}; exponents may be non-integer.  ``func`` is an
    optional callable fallback for non-polynomial profiles.
    """

    k: int
    l: int
    r_max: float
    powers: tuple = ()
    func: object = None

    def __call__(self, r):
        if self.func is not None:
            return self.func(r) if 0.0 <= r <= self.r_max else 0.0
        if not 0.0 <= r <= self.r_max:
            return 0.0
        return sum(c * r ** p for c, p in self.powers)


def poisson_alpha_components(alpha, k):
    """Component profile w_{k,1} of the (1 - r^alpha)-damped Poisson density.

    Returns (profile, closed-form value of int r^{-k} d mu_{k,1}).  Only the
    d = 2 cos-family components are nonzero.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    profile = RadialDensityProfile(
        k=k, l=1, r_max=1.0,
        powers=((2.0 * _SQRT_PI, float(k)), (-2.0 * _SQRT_PI, float(k) + alpha)))
    value = 2.0 * _SQRT_PI * alpha / ((k + 2) * (alpha + k + 2))
    return profile, value


def poisson_kernel_component(k):
    """The alpha -> infinity limit (bare Poisson kernel): w = 2 sqrt(pi) r^k.

    Returns (profile, int r^{-k} d mu_{k,1}) = (..., 2 sqrt(pi)/(k+2)).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    profile = RadialDensityProfile(k=k, l=1, r_max=1.0, powers=((2.0 * _SQRT_PI, float(k)),))
    return profile, 2.0 * _SQRT_PI / (k + 2)


def density_component_moments(profile, d, j):
    """j-th component moment: int r^{2j} d mu_{k,l} = int w(r) r^{2j+k+d-1} dr."""
    return _radial_power_integral(profile, 2 * j + profile.k + d - 1)


def density_reduced_component_moments(profile, d, j):
    """Moments of the reduced measure r^{-k} d mu_{k,l}: int w(r) r^{2j+d-1} dr."""
    return _radial_power_integral(profile, 2 * j + d - 1)


def _radial_power_integral(profile, power):
    if profile.func is not None:
        val, err = quad(lambda r: profile.func(r) * r ** power, 0.0, profile.r_max,
                        epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
        if err > 1e-8 * max(1.0, abs(val)):
            raise RuntimeError(f"radial integral did not converge (estimate {err:.2e})")
        return val
    total = 0.0
    for c, p in profile.powers:
        q = p + power + 1
        if q <= 0:
            raise ValueError(f"divergent radial integral: exponent {q - 1} at the origin")
        total += c * profile.r_max ** q / q
    return total


def poisson_alpha_table(alpha, k_max, n, basis=None):
    """Distributed-moment table of the damped Poisson density (d = 2).

    c_{j,k,1} comes from the closed-form component moments; the constant
    component uses w_{0,1} = sqrt(2 pi) (1 - r^alpha) and all sin components
    vanish.
    """
    values = _poisson_values(alpha, k_max, n, reduced=False)
    return DistributedMomentTable(dim=2, k_max=k_max, order=n, values=values,
                                  basis_fingerprint=basis.fingerprint() if basis else "")


def poisson_reduced_table(alpha, k_max, n, basis=None):
    """Moments of the reduced component measures r^{-k} d mu_{k,l} (d = 2).

    Feeding this to solve_truncated(..., reduced=True) reproduces the
    closed-form r^{-k} masses exactly, since they are the zeroth moments.
    """
    values = _poisson_values(alpha, k_max, n, reduced=True)
    return DistributedMomentTable(dim=2, k_max=k_max, order=n, values=values,
                                  basis_fingerprint=basis.fingerprint() if basis else "")


def _poisson_values(alpha, k_max, n, reduced):
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    values = {}
    for k in range(k_max + 1):
        for l in range(1, harmonic_dimension(2, k) + 1):
            for j in range(2 * n + 1):
                if l == 2:
                    values[(j, k, l)] = 0.0
                    continue
                if k == 0:
                    coef = math.sqrt(2.0 * math.pi)
                else:
                    coef = 2.0 * _SQRT_PI
                shift = 2 * j + (k if not reduced else 0) + k + 1
                # int_0^1 coef * r^{k} (1 - r^alpha) * r^{shift} dr with the
                # k from the profile already inside `shift` above
                q = shift + 1
                values[(j, k, l)] = coef * (1.0 / q - 1.0 / (q + alpha))
    return values


def univariate_example_table(a, b, sigma, n, basis=None):
    """d = 1 example: T(f) = int f d sigma - int f(-x) d sigma, sigma in [a,b], a > 0.

    The even component is annihilated (c_{j,0,1} = 0) and the odd component
    gives c_{j,1,1} = 2 int r^{2j+1} d sigma(r).  Pseudo-positive definite,
    but not positive definite as a classical functional.
    """
    if a <= 0:
        raise ValueError("need 0 < a <= b")
    if b < a:
        raise ValueError("need a <= b")
    if any(not a <= t <= b for t in sigma.nodes):
        raise ValueError("sigma must be supported in [a, b]")
    values = {}
    for j in range(2 * n + 1):
        values[(j, 0, 1)] = 0.0
        values[(j, 1, 1)] = 2.0 * sigma.moment(2 * j + 1)
    return DistributedMomentTable(dim=1, k_max=1, order=n, values=values,
                                  basis_fingerprint=basis.fingerprint() if basis else "")


def dirac_counterexample_table(n, r_cap=1.0, dim=2, basis=None):
    """The Dirac-at-zero component functional: pseudo-positive definite with
    no pseudo-positive representing measure.

    T(f) = int_0^R f_{1,1}(r) r^{-1} d delta_0, so c_{j,1,1} = delta_{j,0}
    and every other component vanishes.  r_cap only names the interval of
    the construction; the values do not depend on it.
    """
    del r_cap
    values = {}
    for k in range(2):
        for l in range(1, harmonic_dimension(dim, k) + 1):
            for j in range(2 * n + 1):
                values[(j, k, l)] = 1.0 if (j, k, l) == (0, 1, 1) else 0.0
    return DistributedMomentTable(dim=dim, k_max=1, order=n, values=values,
                                  basis_fingerprint=basis.fingerprint() if basis else "")


def family_divergence_check(values, block_ratio_threshold=0.8):
    """Heuristic divergence test for a per-k family of non-negative values.

    Compares consecutive dyadic block sums; a tail whose blocks decay by
    less than `block_ratio_threshold` (e.g. the harmonic-like 1/k tail of
    the bare Poisson kernel) is flagged as divergent.  Returns True when the
    k-sum appears to diverge.
    """
    vals = [float(v) for v in values]
    if any(v < 0 for v in vals):
        raise ValueError("family values must be non-negative")
    n = len(vals)
    if n < 8:
        return False
    half, quarter = n // 2, n // 4
    block1 = sum(vals[quarter:half])
    block2 = sum(vals[half:])
    if block1 <= 0:
        return False
    return block2 / block1 >= block_ratio_threshold


def atomic_measure(nodes, weights):
    """Convenience constructor re-exported for CLI and tests."""
    return AtomicMeasure(tuple(nodes), tuple(weights))
