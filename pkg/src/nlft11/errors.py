"""Exception types shared across the package."""


class NlftError(Exception):
    """Base class for all package errors."""


class DomainError(NlftError):
    """An input value lies outside its mathematical domain (e.g. |F_n| >= 1)."""


class AliasError(NlftError):
    """A circle grid is too small to represent the requested data alias-free."""


class SupportOverlapError(NlftError):
    """Two sequences expected to have disjoint supports overlap."""


class ExtremalError(NlftError):
    """The Schur recursion hit a parameter with |gamma| >= 1; no further
    coefficients exist (the function is a finite Blaschke product)."""


class GridTooCoarse(NlftError):
    """Bump sampling requested on a grid below the resolution floor."""


class DaisyCertificationError(NlftError):
    """An assembled bump-product failed its certification inequalities after
    the maximum number of placement retries."""


class DegenerateError(NlftError):
    """A Schur function reached modulus >= 1 on the circle; the associated
    weight is not defined pointwise."""
