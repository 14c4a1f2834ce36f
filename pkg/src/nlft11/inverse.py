"""Inverse transform for half-line supported sequences via the Schur algorithm.

A sequence supported in {1, 2, ...} has b-data analytic in the disc with
b(0) = 0, an outer a^(*), and hence an analytic ratio r = b/a^(*) with
r(0) = 0.  The function f(z) = -r(z)/z is a Schur-class function whose Schur
parameters gamma_0, gamma_1, ... recover the sequence as F_n = -gamma_{n-1}.

The recursion is

    gamma = f(0),    f_next(z) = z^(-1) (f(z) - gamma) / (1 - conj(gamma) f(z)),

run either on Taylor coefficients (one coefficient of accuracy lost per
step) or pointwise on alias-free grid samples with gamma read off as the
grid mean; the two drivers agree to rounding and the grid driver is the one
that scales to long sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AliasError, DomainError, ExtremalError
from .harmonic import outer_modulus_phase
from .laurent import CircleGrid
from .nlft import ComplexSequence, forward_grid


@dataclass(frozen=True)
class SchurFunction:
    """Schur-class function represented by Taylor coefficients at 0."""

    taylor: np.ndarray
    source: str = "taylor"  # provenance: "taylor" or "grid"

    @staticmethod
    def make(taylor, source: str = "taylor") -> "SchurFunction":
        return SchurFunction(np.asarray(taylor, dtype=np.complex128), source)

    def value_at_zero(self) -> complex:
        return complex(self.taylor[0]) if len(self.taylor) else 0.0 + 0.0j


def schur_step(f: SchurFunction) -> tuple[complex, SchurFunction]:
    """One layer-stripping step on Taylor coefficients.

    Raises ExtremalError when |f(0)| >= 1: the function is then a finite
    Blaschke product and carries no further parameters.
    """
    gam = f.value_at_zero()
    if abs(gam) >= 1.0:
        raise ExtremalError(f"|f(0)| = {abs(gam)} >= 1")
    taylor = np.asarray(f.taylor, dtype=np.complex128)
    m = len(taylor)
    if m <= 1:
        return gam, SchurFunction.make(np.zeros(0), f.source)
    gc = np.conj(gam)
    d0 = 1.0 - gc * gam
    q = np.zeros(m, dtype=np.complex128)
    for k in range(1, m):
        q[k] = (taylor[k] + gc * np.dot(taylor[1:k + 1], q[k - 1::-1])) / d0
    return gam, SchurFunction.make(q[1:], f.source)


def schur_parameters_taylor(taylor: np.ndarray, n_steps: int) -> np.ndarray:
    gammas, count, flag = _kernels.schur_taylor(
        np.asarray(taylor, dtype=np.complex128), n_steps)
    if flag:
        raise ExtremalError(
            f"Schur recursion hit |gamma| >= 1 at step {count}")
    return gammas[:count]


def schur_parameters_grid(fvals: np.ndarray, z: np.ndarray, n_steps: int) -> np.ndarray:
    gammas, count, flag = _kernels.schur_grid(
        np.asarray(fvals, dtype=np.complex128), np.asarray(z, dtype=np.complex128),
        n_steps)
    if flag:
        raise ExtremalError(
            f"Schur recursion hit |gamma| >= 1 at step {count}")
    return gammas[:count]


def inverse_halfline(b_grid: CircleGrid, n_max: int, method: str = "taylor") -> ComplexSequence:
    """Recover the half-line sequence whose b-data matches the given samples.

    Pipeline: a^(*) boundary values from |b| (outer modulus-phase), the ratio
    r = b/a^(*), the Schur function f = -r/z, then n_max recursion steps.
    ``method`` selects the Taylor driver (default) or the grid driver; the
    grid driver avoids the cubic cost of repeated series division and is
    preferred for n_max above a few hundred.
    """
    g = b_grid.size
    if n_max > g // 4:
        raise AliasError(f"n_max = {n_max} exceeds grid/4 = {g // 4}")
    astar = outer_modulus_phase(b_grid.values)
    z = b_grid.z
    fvals = -(b_grid.values / astar) / z
    if method == "taylor":
        taylor = (np.fft.fft(fvals) / g)[:n_max + 1]
        gammas = schur_parameters_taylor(taylor, n_max)
    elif method == "grid":
        gammas = schur_parameters_grid(fvals, z, n_max)
    else:
        raise ValueError(f"unknown inverse method {method!r}")
    return ComplexSequence.make(1, -gammas)


def roundtrip_error(F: ComplexSequence, size: int, margin: int = 8,
                    method: str = "taylor") -> float:
    """Sup-norm recovery error of forward-then-invert for supp F in {1,2,...}."""
    if F.is_zero:
        return 0.0
    if F.support_min < 1:
        raise DomainError("roundtrip_error requires support in {1, 2, ...}")
    _, b = forward_grid(F, size)
    n_max = F.support_max + margin
    rec = inverse_halfline(CircleGrid(b), n_max, method=method)
    hi = max(F.support_max, rec.support_max if not rec.is_zero else 1)
    err = 0.0
    for n in range(1, hi + 1):
        err = max(err, abs(rec.value(n) - F.value(n)))
    return err
