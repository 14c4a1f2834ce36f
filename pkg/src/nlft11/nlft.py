"""Forward SU(1,1) transfer transform on Z for compactly supported sequences.

The transform maps a sequence F with all |F_n| < 1 to the limit entries
(a, b) of the ordered product of renormalised transfer matrices

    (1-|F_n|^2)^(-1/2) [[1, conj(F_n) z^(-n)], [F_n z^n, 1]],

multiplied left to right in increasing n, starting from the identity below
the support.  The product matrix has the form [[a, b*], [b, a*]] where *
denotes the coefficient reflection implemented by :func:`nlft11.laurent.star`.
All four entries are Laurent polynomials, so the defining identities
(normalisation star(a)a - star(b)b = 1, shift covariance, the disjoint
support concatenation rules) can be checked coefficient-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AliasError, DomainError, SupportOverlapError
from .laurent import CircleGrid, LaurentPoly, eval_grid, star


@dataclass(frozen=True)
class ComplexSequence:
    """Finitely supported map Z -> C with entries of modulus < 1.

    ``entries[i]`` is the value at index ``offset + i``.  The stored window is
    trimmed so that the first and last entries are nonzero (unless the
    sequence is identically zero, stored as offset 0 with no entries).
    """

    offset: int
    entries: np.ndarray

    @staticmethod
    def make(offset: int, entries) -> "ComplexSequence":
        e = np.asarray(entries, dtype=np.complex128)
        if e.size and np.max(np.abs(e)) >= 1.0:
            raise DomainError("sequence entries must satisfy |F_n| < 1")
        nz = np.nonzero(e)[0]
        if nz.size == 0:
            return ComplexSequence(0, np.zeros(0, dtype=np.complex128))
        return ComplexSequence(int(offset + nz[0]), e[nz[0]:nz[-1] + 1].copy())

    @staticmethod
    def zero() -> "ComplexSequence":
        return ComplexSequence(0, np.zeros(0, dtype=np.complex128))

    @staticmethod
    def single(n: int, value) -> "ComplexSequence":
        return ComplexSequence.make(n, [value])

    @property
    def is_zero(self) -> bool:
        return len(self.entries) == 0

    @property
    def support_min(self) -> int:
        return self.offset

    @property
    def support_max(self) -> int:
        return self.offset + len(self.entries) - 1

    def value(self, n: int) -> complex:
        if self.is_zero or n < self.support_min or n > self.support_max:
            return 0.0 + 0.0j
        return complex(self.entries[n - self.offset])

    def nonzero_items(self):
        """(position, value) pairs in increasing position order."""
        pos = np.nonzero(self.entries)[0]
        return [(self.offset + int(i), complex(self.entries[i])) for i in pos]

    def shift(self, m: int) -> "ComplexSequence":
        """Translation: result value at n is this sequence's value at n - m."""
        if self.is_zero:
            return self
        return ComplexSequence(self.offset + m, self.entries)

    def truncate_sym(self, n: int) -> "ComplexSequence":
        """Keep indices |k| <= n."""
        return self._window(-n, n)

    def truncate_le(self, m: int) -> "ComplexSequence":
        """Keep indices k <= m."""
        return self._window(None, m)

    def _window(self, lo, hi) -> "ComplexSequence":
        if self.is_zero:
            return self
        a = self.support_min if lo is None else max(lo, self.support_min)
        b = self.support_max if hi is None else min(hi, self.support_max)
        if a > b:
            return ComplexSequence.zero()
        return ComplexSequence.make(a, self.entries[a - self.offset:b - self.offset + 1])

    def __add__(self, other: "ComplexSequence") -> "ComplexSequence":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.support_min, other.support_min)
        hi = max(self.support_max, other.support_max)
        out = np.zeros(hi - lo + 1, dtype=np.complex128)
        out[self.support_min - lo:self.support_max - lo + 1] += self.entries
        out[other.support_min - lo:other.support_max - lo + 1] += other.entries
        return ComplexSequence.make(lo, out)

    def norm_l1(self) -> float:
        return float(np.sum(np.abs(self.entries)))

    def norm_l2_sq(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))

    def to_json_dict(self) -> dict:
        return {
            "offset": int(self.offset),
            "entries": [[float(v.real), float(v.imag)] for v in self.entries],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "ComplexSequence":
        entries = [complex(re, im) for re, im in d["entries"]]
        return ComplexSequence.make(int(d["offset"]), entries)


def save_sequence(seq: ComplexSequence, path) -> None:
    with open(path, "w") as fh:
        json.dump(seq.to_json_dict(), fh)


def load_sequence(path) -> ComplexSequence:
    """Load a sequence file; entries with modulus >= 1 are rejected."""
    with open(path) as fh:
        return ComplexSequence.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class NlftPair:
    """The pair (a, b) produced by the forward transform."""

    a: LaurentPoly
    b: LaurentPoly

    @property
    def a_star(self) -> LaurentPoly:
        return star(self.a)

    @property
    def b_star(self) -> LaurentPoly:
        return star(self.b)


def forward(F: ComplexSequence) -> NlftPair:
    """Transfer product over supp F in increasing n, as Laurent coefficients."""
    if F.is_zero:
        return NlftPair(LaurentPoly.one(), LaurentPoly.zero())
    if np.max(np.abs(F.entries)) >= 1.0:
        raise DomainError("forward transform requires |F_n| < 1")
    items = F.nonzero_items()
    positions = np.array([p for p, _ in items], dtype=np.int64)
    values = np.array([v for _, v in items], dtype=np.complex128)
    m0, m1 = int(positions[0]), int(positions[-1])
    W = m1 - m0 + 1
    # b coefficients live on exponents m0..m1, a on m0-m1..0
    acoef = np.zeros(W, dtype=np.complex128)
    bcoef = np.zeros(W, dtype=np.complex128)
    acoef[W - 1] = 1.0
    _kernels.transfer_coeffs(positions, values, acoef, bcoef, m0)
    prefac = float(np.prod(1.0 / np.sqrt(1.0 - np.abs(values) ** 2)))
    a = LaurentPoly.make(m0 - m1, prefac * acoef)
    b = LaurentPoly.make(m0, prefac * bcoef)
    return NlftPair(a, b)


def forward_grid(F: ComplexSequence, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid samples of (a, b) at the size-th roots of unity.

    Point evaluation of the transfer product is exact for any support length,
    so unlike coefficient recovery this needs no alias headroom.
    """
    if size < 2 or size & (size - 1):
        raise AliasError(f"grid size must be a power of two >= 2, got {size}")
    a = np.ones(size, dtype=np.complex128)
    b = np.zeros(size, dtype=np.complex128)
    if F.is_zero:
        return a, b
    if np.max(np.abs(F.entries)) >= 1.0:
        raise DomainError("forward transform requires |F_n| < 1")
    items = F.nonzero_items()
    positions = np.array([p for p, _ in items], dtype=np.int64)
    values = np.array([v for _, v in items], dtype=np.complex128)
    roots = np.exp(2j * np.pi * np.arange(size) / size)
    _kernels.transfer_grid(positions, values, roots, a, b)
    return a, b


def ratio(F: ComplexSequence, size: int) -> CircleGrid:
    """Samples of r = b / a^(*) on the circle; all magnitudes are < 1."""
    a, b = forward_grid(F, size)
    return CircleGrid(b / np.conj(a))


def su11_residual(pair: NlftPair) -> float:
    """Max coefficient magnitude of star(a)a - star(b)b - 1."""
    res = star(pair.a) * pair.a - star(pair.b) * pair.b - LaurentPoly.one()
    return res.max_abs_coeff()


def concat_disjoint(F: ComplexSequence, G: ComplexSequence, N: int) -> NlftPair:
    """Predicted transform of F + shift(G, N) for disjoint ordered supports.

    With supp F below N1 and supp G above -N2, shifting G by N > N1 + N2
    places it strictly to the right of F and the product splits:

        a^(*)  =  a^(*)(F) a^(*)(G)  +  z^N b^(*)(F) b(G)
        b      =  z^N b(G) a(F)      +  b(F) a^(*)(G)

    The returned pair must agree coefficientwise with forward(F + shift(G, N)).
    """
    if not F.is_zero and not G.is_zero:
        if G.support_min + N <= F.support_max:
            raise SupportOverlapError(
                f"shifted supports are not disjoint and ordered: "
                f"max supp F = {F.support_max}, min supp shifted G = {G.support_min + N}")
    pf = forward(F)
    pg = forward(G)
    zN = LaurentPoly.monomial(N)
    astar_tot = star(pf.a) * star(pg.a) + zN * star(pf.b) * pg.b
    b_tot = zN * pg.b * pf.a + pf.b * star(pg.a)
    return NlftPair(star(astar_tot), b_tot)
