"""Moments of moments of characteristic polynomials of random unitary matrices.

``MoM_N(k, beta)`` is computed exactly by counting Gelfand-Tsetlin patterns
with row-sum constraints (equivalently, monotone integer arrays with
anti-diagonal sum constraints).  It is a polynomial in ``N`` whose leading
coefficient is the volume of a convex region; that volume is estimated by Monte
Carlo, by GT-volume formulas and, for ``k = 2``, by a Hankel-determinant
integral linked to Painleve V.
"""
from .count import (
    BudgetExceededError,
    CountResult,
    dp_count,
    enumerate_count,
    iter_members,
    k1_count,
    weyl_dimension,
)
from .gt import (
    ConstrainedArray,
    GTPattern,
    ParamTriple,
    Signature,
    Tableau,
    ValidationError,
    array_to_gt,
    gt_to_array,
    gt_to_tableau,
    interlaces,
    sum_constraints,
    tableau_to_gt,
    top_signature,
    validate_array,
    validate_gt_constraints,
    validate_tableau_constraints,
)
from .gtvolume import (
    ChamberPoint,
    assemble_c_formula,
    bspline,
    c2_slice_integral,
    vol_double,
    vol_gt,
    vol_trapezoid,
    vol_trapezoid_total,
)
from .painleve import (
    AccuracyError,
    FourierResult,
    HankelContext,
    barnes_g,
    c2_fourier,
    hankel_det,
    moment_g,
    sigma_pv_residual,
)
from .poly import ConsistencyError, MomPolynomial, c_k1, interpolate_mom, leading_coefficient, mom_degree
from .region import RegionSpec, VolumeEstimate, lattice_count_dilate, mc_volume, region_membership

__version__ = "0.1.0"
