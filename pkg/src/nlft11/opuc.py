"""Orthogonal polynomials on the unit circle and their transfer-product twin.

The orthonormal polynomials phi_n of a probability measure on the circle obey
the recursion

    [phi_{n+1}; phi*_{n+1}] =
        (1-|g|^2)^(-1/2) [[z, -conj(g)], [-g z, 1]] [phi_n; phi*_n],

with phi_0 = phi*_0 = 1 and recurrence coefficients g = gamma_n in the open
disc.  Setting F_n = -gamma_{n-1} for n >= 1 (zero elsewhere) makes the
unrenormalised transfer product act by exactly the same matrices, giving the
pointwise identities

    phi_n*  =  b(F^{<=n}) + a^(*)(F^{<=n}),
    phi_n* (twin with gammas negated)  =  -b(F^{<=n}) + a^(*)(F^{<=n}).

The continued-fraction (Wall) approximants A_n/B_n of the Schur function of
the measure tie in through r(z, F^{<=n+1}) = -z A_n(z)/B_n(z).  Both bridges
are realised here as machine-checkable residuals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError
from .harmonic import RealGridFunction
from .laurent import CircleGrid, LaurentPoly, eval_grid
from .inverse import SchurFunction
from .nlft import ComplexSequence, forward_grid


@dataclass(frozen=True)
class VerblunskyCoeffs:
    """Recurrence coefficient sequence gamma_0 .. gamma_{n-1}, all in the disc."""

    gamma: np.ndarray

    @staticmethod
    def make(gamma) -> "VerblunskyCoeffs":
        g = np.asarray(gamma, dtype=np.complex128)
        if g.size and np.max(np.abs(g)) >= 1.0:
            raise DomainError("recurrence coefficients must satisfy |gamma| < 1")
        return VerblunskyCoeffs(g)

    def __len__(self) -> int:
        return len(self.gamma)

    def to_sequence(self) -> ComplexSequence:
        """The transfer-side twin: F_n = -gamma_{n-1} for n >= 1."""
        return ComplexSequence.make(1, -self.gamma)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump([[float(v.real), float(v.imag)] for v in self.gamma], fh)

    @staticmethod
    def load(path) -> "VerblunskyCoeffs":
        with open(path) as fh:
            data = json.load(fh)
        return VerblunskyCoeffs.make([complex(re, im) for re, im in data])


@dataclass(frozen=True)
class OpucState:
    """Grid samples of (phi_n, phi_n*) plus the running normalisation nu_n."""

    phi: CircleGrid
    phi_star: CircleGrid
    nu_n: float
    n: int


def initial_state(size: int) -> OpucState:
    ones = np.ones(size, dtype=np.complex128)
    return OpucState(CircleGrid(ones), CircleGrid(ones.copy()), 1.0, 0)


def szego_step(state: OpucState, gamma_j: complex) -> OpucState:
    """One recursion step appending coefficient gamma_j."""
    if abs(gamma_j) >= 1.0:
        raise DomainError("|gamma| must be < 1")
    c = 1.0 / np.sqrt(1.0 - abs(gamma_j) ** 2)
    z = state.phi.z
    phi = c * (z * state.phi.values - np.conj(gamma_j) * state.phi_star.values)
    phi_star = c * (-gamma_j * z * state.phi.values + state.phi_star.values)
    return OpucState(CircleGrid(phi), CircleGrid(phi_star),
                     state.nu_n * float(np.sqrt(1.0 - abs(gamma_j) ** 2)),
                     state.n + 1)


def szego_run(coeffs: VerblunskyCoeffs, n: int, size: int) -> OpucState:
    state = initial_state(size)
    for j in range(n):
        state = szego_step(state, complex(coeffs.gamma[j]))
    return state


def connection_residual(coeffs: VerblunskyCoeffs, n: int, size: int) -> float:
    """Max over degrees 1..n and grid points of the two bridge identities

        phi_k*(sigma)      = b + a^(*)   and   phi_k*(twin) = -b + a^(*)

    where (a, b) is the transfer product of F_m = -gamma_{m-1} truncated at m <= k.
    """
    if n > len(coeffs):
        raise DomainError(f"need at least {n} coefficients, have {len(coeffs)}")
    F = coeffs.to_sequence()
    twin = VerblunskyCoeffs.make(-coeffs.gamma)
    state = initial_state(size)
    state_tw = initial_state(size)
    worst = 0.0
    for k in range(1, n + 1):
        state = szego_step(state, complex(coeffs.gamma[k - 1]))
        state_tw = szego_step(state_tw, complex(twin.gamma[k - 1]))
        a, b = forward_grid(F.truncate_le(k), size)
        astar = np.conj(a)
        worst = max(worst, float(np.max(np.abs(state.phi_star.values - (b + astar)))))
        worst = max(worst, float(np.max(np.abs(state_tw.phi_star.values - (astar - b)))))
    return worst


def wall_polynomials(coeffs: VerblunskyCoeffs, n: int):
    """Continued-fraction numerators/denominators (A_n, B_n) of the Schur chain.

    Convention: the chain f_k = (gamma_k + z f_{k+1}) / (1 + conj(gamma_k) z f_{k+1})
    terminated with f_{n+1} = 0 has the value A_n/B_n; as 2x2 products

        P_k = P_{k-1} [[z, gamma_k], [conj(gamma_k) z, 1]],  P_{-1} = I,

    with A_k = (P_k)_{12}, B_k = (P_k)_{22} (and the first column equal to the
    z-reflections z^{k+1} B_k^*, z^{k+1} A_k^*).
    """
    if n + 1 > len(coeffs):
        raise DomainError(f"need at least {n + 1} coefficients, have {len(coeffs)}")
    C = LaurentPoly.one()   # (P)_{11}
    D = LaurentPoly.zero()  # (P)_{21}
    A = LaurentPoly.zero()
    B = LaurentPoly.one()
    zpoly = LaurentPoly.monomial(1)
    for k in range(n + 1):
        g = LaurentPoly.make(0, [coeffs.gamma[k]])
        gc = LaurentPoly.make(0, [np.conj(coeffs.gamma[k])])
        A, C = A + g * C, zpoly * (C + gc * A)
        B, D = B + g * D, zpoly * (D + gc * B)
    return A, B


def wall_ratio_residual(coeffs: VerblunskyCoeffs, n: int, size: int) -> float:
    """Sup gap between r(z, F^{<=n+1}) and -z A_n(z)/B_n(z) on the grid."""
    A, B = wall_polynomials(coeffs, n)
    F = coeffs.to_sequence().truncate_le(n + 1)
    a, b = forward_grid(F, size)
    r = b / np.conj(a)
    z = CircleGrid(a).z
    Av = eval_grid(A, size).values
    Bv = eval_grid(B, size).values
    return float(np.max(np.abs(r + z * Av / Bv)))


def weight_from_schur(f, size: int | None = None) -> RealGridFunction:
    """Density w = (1 - |f|^2) / |1 - z f|^2 of the measure with Schur function f.

    Accepts a SchurFunction (Taylor coefficients, evaluated on a grid of at
    least 4x the coefficient count) or a CircleGrid of boundary samples.  For
    a measure with no singular part the grid mean of w is 1 to quadrature
    accuracy.
    """
    if isinstance(f, SchurFunction):
        m = max(len(f.taylor), 1)
        g = size or 1
        while g < 4 * m or g < 64:
            g *= 2
        buf = np.zeros(g, dtype=np.complex128)
        buf[:len(f.taylor)] = f.taylor
        vals = np.fft.ifft(buf) * g
        grid = CircleGrid(vals)
    elif isinstance(f, CircleGrid):
        grid = f
    else:
        raise TypeError("f must be a SchurFunction or CircleGrid")
    fv = grid.values
    mod = np.abs(fv)
    if np.max(mod) >= 1.0:
        raise DegenerateError(f"|f| reaches {np.max(mod)} >= 1 on the grid")
    z = grid.z
    w = (1.0 - mod ** 2) / np.abs(1.0 - z * fv) ** 2
    return RealGridFunction(w)


def ortho_series_partials(coeffs: VerblunskyCoeffs, n: int, size: int) -> float:
    """Residual of the telescoped recursion

        nu_n phi_n*  =  1 - z sum_{j<n} gamma_j nu_j phi_j,

    whose right side is a partial sum of the orthogonal series with
    coefficients alpha_j = gamma_j nu_j.
    """
    if n > len(coeffs):
        raise DomainError(f"need at least {n} coefficients, have {len(coeffs)}")
    state = initial_state(size)
    z = state.phi.z
    acc = np.zeros(size, dtype=np.complex128)
    worst = 0.0
    for j in range(n):
        acc += coeffs.gamma[j] * state.nu_n * state.phi.values
        state = szego_step(state, complex(coeffs.gamma[j]))
        lhs = state.nu_n * state.phi_star.values
        rhs = 1.0 - z * acc
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def series_coefficients(coeffs: VerblunskyCoeffs) -> np.ndarray:
    """The square-summable coefficients alpha_j = gamma_j nu_j of the series."""
    nu = np.concatenate([[1.0], np.cumprod(np.sqrt(1.0 - np.abs(coeffs.gamma) ** 2))])
    return coeffs.gamma * nu[:-1]
