"""Laurent polynomials with dense complex coefficients and circle-grid evaluation.

A ``LaurentPoly`` stores the coefficient of ``z**n`` for ``n`` in the window
``lo..lo+len(coeffs)-1``.  Polynomials are trimmed to canonical form (leading
and trailing coefficients nonzero, the zero polynomial is ``lo=0`` with an
empty coefficient array).  Trimming removes true zeros only: there is no
epsilon threshold, so degree bookkeeping stays honest.

``CircleGrid`` holds samples on the uniform grid theta_k = 2*pi*k/size; grid
sizes are powers of two and evaluation goes through the FFT.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasError

_TRIM_FLOOR = 1e-300


@dataclass(frozen=True)
class LaurentPoly:
    """Finitely supported coefficient array over a z-power window."""

    lo: int
    coeffs: np.ndarray

    @staticmethod
    def make(lo: int, coeffs) -> "LaurentPoly":
        """Build a polynomial in canonical trimmed form."""
        c = np.asarray(coeffs, dtype=np.complex128)
        nz = np.nonzero(np.abs(c) > _TRIM_FLOOR)[0]
        if nz.size == 0:
            return LaurentPoly(0, np.zeros(0, dtype=np.complex128))
        first, last = nz[0], nz[-1]
        return LaurentPoly(int(lo + first), c[first:last + 1].copy())

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly(0, np.zeros(0, dtype=np.complex128))

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly(0, np.ones(1, dtype=np.complex128))

    @staticmethod
    def monomial(n: int, value=1.0) -> "LaurentPoly":
        return LaurentPoly.make(n, [value])

    @property
    def hi(self) -> int:
        """Highest exponent carrying a coefficient (lo - 1 for the zero poly)."""
        return self.lo + len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coeff(self, n: int) -> complex:
        """Coefficient at z**n."""
        if self.is_zero or n < self.lo or n > self.hi:
            return 0.0 + 0.0j
        return complex(self.coeffs[n - self.lo])

    def shifted(self, m: int) -> "LaurentPoly":
        """Multiply by z**m (exact index shift)."""
        if self.is_zero:
            return self
        return LaurentPoly(self.lo + m, self.coeffs)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        out[self.lo - lo:self.lo - lo + len(self.coeffs)] += self.coeffs
        out[other.lo - lo:other.lo - lo + len(other.coeffs)] += other.coeffs
        return LaurentPoly.make(lo, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (other * LaurentPoly.make(0, [-1.0]))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero or other.is_zero:
            return LaurentPoly.zero()
        # direct convolution for short windows, FFT for long ones
        n1, n2 = len(self.coeffs), len(other.coeffs)
        if min(n1, n2) <= 64 or n1 + n2 <= 2048:
            prod = np.convolve(self.coeffs, other.coeffs)
        else:
            size = 1
            while size < n1 + n2 - 1:
                size *= 2
            fa = np.fft.fft(self.coeffs, size)
            fb = np.fft.fft(other.coeffs, size)
            prod = np.fft.ifft(fa * fb)[:n1 + n2 - 1]
        return LaurentPoly.make(self.lo + other.lo, prod)

    def horner(self, z: complex) -> complex:
        """Direct evaluation at a point (z**lo times an ordinary Horner pass)."""
        if self.is_zero:
            return 0.0 + 0.0j
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return complex(acc * z ** self.lo)

    def max_abs_coeff(self) -> float:
        if self.is_zero:
            return 0.0
        return float(np.max(np.abs(self.coeffs)))


@dataclass(frozen=True)
class CircleGrid:
    """Complex samples on the uniform circle grid theta_k = 2*pi*k/size."""

    values: np.ndarray

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / self.size

    @property
    def z(self) -> np.ndarray:
        """Grid points exp(i*theta_k)."""
        return np.exp(1j * self.theta)


def arith(p: LaurentPoly, q: LaurentPoly, kind: str) -> LaurentPoly:
    """Exact coefficient-level sum or convolution product."""
    if kind == "add":
        return p + q
    if kind == "mul":
        return p * q
    raise ValueError(f"unknown arith kind: {kind!r}")


def star(p: LaurentPoly) -> LaurentPoly:
    """The involution p -> conj(p(1/conj(z))): coefficient n maps to conj at -n."""
    if p.is_zero:
        return p
    return LaurentPoly(-p.hi, np.conj(p.coeffs[::-1]))


def bandwidth(p: LaurentPoly) -> int:
    """Largest absolute exponent in the window (0 for constants and zero)."""
    if p.is_zero:
        return 0
    return max(abs(p.lo), abs(p.hi))


def default_grid_size(p: LaurentPoly, minimum: int = 4) -> int:
    """Smallest power of two >= 4*bandwidth(p) (and >= minimum)."""
    target = max(4 * bandwidth(p), minimum)
    size = 1
    while size < target:
        size *= 2
    return size


def eval_grid(p: LaurentPoly, size: int) -> CircleGrid:
    """Sample p on the circle grid of the given power-of-two size.

    Requires size >= 2*bandwidth(p) so that the exponent window embeds in the
    FFT bins without wrap-around (which would also break the round trip back
    to coefficients).
    """
    if size < 2 or size & (size - 1):
        raise AliasError(f"grid size must be a power of two >= 2, got {size}")
    if size < 2 * bandwidth(p):
        raise AliasError(
            f"grid size {size} below 2*bandwidth = {2 * bandwidth(p)}")
    buf = np.zeros(size, dtype=np.complex128)
    if not p.is_zero:
        for i, c in enumerate(p.coeffs):
            buf[(p.lo + i) % size] += c
    # values_k = sum_n c_n exp(+i theta_k n): an unnormalised inverse DFT
    return CircleGrid(np.fft.ifft(buf) * size)


def from_grid(grid: CircleGrid, lo: int, hi: int) -> LaurentPoly:
    """Recover coefficients on the window lo..hi from alias-free samples."""
    size = grid.size
    if hi - lo + 1 > size:
        raise AliasError(
            f"window {lo}..{hi} does not fit in a grid of size {size}")
    spec = np.fft.fft(grid.values) / size
    coeffs = np.array([spec[n % size] for n in range(lo, hi + 1)])
    return LaurentPoly.make(lo, coeffs)
