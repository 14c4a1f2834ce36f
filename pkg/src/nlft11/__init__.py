"""SU(1,1) nonlinear Fourier transform on Z.

Forward transfer products for compactly supported sequences, circle-grid
harmonic analysis (conjugate function, outer functions), the Schur-algorithm
inverse for half-line data, certified bump-product assemblies with
oscillation diagnostics, and the bridge to orthogonal polynomials on the
unit circle.
"""

from .errors import (AliasError, DaisyCertificationError, DegenerateError,
                     DomainError, ExtremalError, GridTooCoarse, NlftError,
                     SupportOverlapError)
from .laurent import CircleGrid, LaurentPoly, arith, eval_grid, from_grid, star
from .nlft import (ComplexSequence, NlftPair, concat_disjoint, forward,
                   forward_grid, load_sequence, ratio, save_sequence,
                   su11_residual)
from .harmonic import (RealGridFunction, arg_outer, conjugate, outer_eval,
                       plancherel_residual)
from .inverse import SchurFunction, inverse_halfline, roundtrip_error, schur_step
from .opuc import (OpucState, VerblunskyCoeffs, connection_residual,
                   ortho_series_partials, szego_step, wall_ratio_residual,
                   weight_from_schur)
from .daisy import (BumpFamily, DaisyParams, DaisyReport, assemble_H,
                    assemble_daisy, divergence_scan, finalize_F, make_bumps,
                    petal_coeffs)

__version__ = "0.1.0"
