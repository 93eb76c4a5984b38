"""Particular solutions of non-homogeneous Cauchy-Euler equations via atom weights."""

from .atoms import AtomWeights, NodeSet, compute_atoms, lagrange_leading_coefficients, moment
from .charpoly import EulerEquation, MonomialPolynomial, build_charpoly, eval_charpoly_falling, falling_factorial
from .errors import (
    AtomCauchyError,
    BoundViolation,
    DegenerateNodes,
    DivergentAtZero,
    DomainError,
    ExponentBelowRoots,
    ImaginaryResidue,
    MultipleRootDetected,
    NonConvergence,
    ParseError,
    ResonantExponent,
    StepUnderflow,
    ToleranceNotMet,
    UnsupportedFunction,
)
from .integral import GrowthBound, IntegralHandle, eval_integral, eval_integral_many, make_integral, verify_growth
from .perturbation import PerturbationStudy, error_curve, fit_bound, perturbed_solution, run_study
from .roots import RootSet, find_roots, refine_root
from .solver import (
    ParticularSolution,
    evaluate_solution,
    residual,
    residual_numeric,
    solve_particular,
    solve_polynomial_rhs,
    solve_with_roots,
)
from .terms import Expression, Term, Trig, differentiate, evaluate, parse, scaled_antiderivative

__version__ = "0.1.0"
