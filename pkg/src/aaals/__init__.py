"""AAA-least squares rational approximation and planar Laplace solvers."""

from .aaa import AaaOptions, AaaResult, aaa_fit, local_aaa
from .approx import IntervalApproximation, approximate, zigzag_approximation
from .arnoldi import ArnoldiBasis, va_eval, va_orthog
from .barycentric import BarycentricRational, PoleSet, bary_eval, poles_and_residues
from .geometry import (BoundaryComponent, Domain, SampleSet, Segment, contains, load_domain,
                       sample_boundary)
from .laplace import HarmonicSolution, LaplaceBasis, SolverOptions, solve
from .transforms import ConformalMap, HilbertTransform, conformal_map, hilbert_transform

__version__ = "0.1.0"
