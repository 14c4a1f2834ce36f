"""Circle-grid Fourier analysis: the conjugate function and outer functions.

The conjugate function (Hilbert transform on the circle)

                 1         /        phi - theta
    u~(phi) =  ---- p.v.   |  cot( ------------- ) u(theta) dtheta
               2 pi        /             2

is implemented as the Fourier multiplier c_n -> -i*sign(n)*c_n with c_0 -> 0,
which is spectrally accurate for smooth samples.  The argument of the outer
function a^(*) with |a^(*)|^2 = 1 + |b|^2 is half the conjugate function of
log(1 + |b|^2); defining the argument this way (rather than by pointwise
principal values) yields the continuous branch used by all growth
diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .laurent import CircleGrid
from .nlft import ComplexSequence, forward_grid

CSV_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class RealGridFunction:
    """Real samples on the uniform circle grid."""

    values: np.ndarray

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / self.size

    def mean(self) -> float:
        return float(np.mean(self.values))

    def to_csv(self, path) -> None:
        """Two columns theta,value with 17 significant digits."""
        with open(path, "w") as fh:
            fh.write("theta,value\n")
            for t, v in zip(self.theta, self.values):
                fh.write((CSV_FLOAT_FMT + "," + CSV_FLOAT_FMT + "\n") % (t, v))


def conjugate(f: RealGridFunction) -> RealGridFunction:
    """Conjugate function via the -i*sign(n) multiplier (c_0 and Nyquist -> 0)."""
    vals = np.asarray(f.values, dtype=np.float64)
    spec = np.fft.rfft(vals)
    spec *= -1j
    spec[0] = 0.0
    spec[-1] = 0.0
    return RealGridFunction(np.fft.irfft(spec, len(vals)))


def arg_outer(b_grid: CircleGrid) -> RealGridFunction:
    """Continuous branch of arg a^(*) from the b samples: conj(log(1+|b|^2))/2."""
    u = np.log1p(np.abs(b_grid.values) ** 2)
    return RealGridFunction(0.5 * conjugate(RealGridFunction(u)).values)


def outer_modulus_phase(b_values: np.ndarray) -> np.ndarray:
    """Boundary values of the outer function a^(*) determined by |b| samples."""
    u = np.log1p(np.abs(b_values) ** 2)
    arg = 0.5 * conjugate(RealGridFunction(u)).values
    return np.sqrt(1.0 + np.abs(b_values) ** 2) * np.exp(1j * arg)


def outer_from_modulus(mod_values: np.ndarray) -> np.ndarray:
    """Boundary values of the outer function with prescribed positive modulus."""
    logm = np.log(np.asarray(mod_values, dtype=np.float64))
    return np.exp(logm + 1j * conjugate(RealGridFunction(logm)).values)


def plancherel_residual(F: ComplexSequence, size: int) -> float:
    """|LHS - RHS| of the power identity

    -sum_n log(1 - |F_n|^2)  =  mean over the grid of log(1 + |b|^2).

    The right side is the trapezoid mean, exact to rounding once the grid
    resolves the (analytic) integrand.
    """
    lhs = -float(np.sum(np.log1p(-np.abs(F.entries) ** 2)))
    _, b = forward_grid(F, size)
    rhs = float(np.mean(np.log1p(np.abs(b) ** 2)))
    return abs(lhs - rhs)


def outer_eval(b_grid: CircleGrid, points) -> np.ndarray:
    """Evaluate the outer function a^(*) inside the disc via the Herglotz kernel:

        a^(*)(w) = exp( mean_k [ (xi_k + w)/(xi_k - w) * log(1+|b_k|^2)/2 ] )

    At w = 0 this reduces to exp(mean log(1+|b|^2)/2), the accumulated
    normalisation product of the generating sequence.
    """
    pts = np.asarray(points, dtype=np.complex128)
    if pts.size and np.max(np.abs(pts)) >= 1.0:
        raise DomainError("outer_eval points must lie strictly inside the disc")
    xi = b_grid.z
    u = 0.5 * np.log1p(np.abs(b_grid.values) ** 2)
    out = np.empty(pts.shape, dtype=np.complex128)
    for i, w in np.ndenumerate(pts):
        out[i] = np.exp(np.mean((xi + w) / (xi - w) * u))
    return out
