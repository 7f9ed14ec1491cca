"""Exact computations in skew polynomial rings ``R[theta; alpha]`` over
commutative polynomial, Laurent and quotient rings."""

from .automorph import AlgebraMap, ClassTag, OrderVerdict, classify_plane, linear_finite_order_test, order
from .diamond import Verdict, decide, explain, primitivity_probe, probe_orbits
from .dynamics import curve_membership, fixed_points_symbolic, orbit, orbital_exponent, periodic_points_ff, point_map
from .errors import (
    BoundExceeded,
    FieldMismatch,
    InvariantViolation,
    NotInvertible,
    NotStable,
    PreconditionError,
    RingMismatch,
    SkewlabError,
    UnsupportedClass,
    UnsupportedIdeal,
)
from .modlab import (
    chain_check,
    essential_probe,
    lattice_contract,
    lattice_expand,
    matrix_units_verify,
    normal_form,
    simple_top_check,
    length_one_multiplier,
)
from .polyring import CoeffRing, Ideal, MultiPoly, laurent_ring, poly_ring, quotient_ring
from .scalars import FieldSpec, Scalar, cyclotomic_poly, root_of_unity_order
from .skewpoly import (
    SkewLaurentPoly,
    SkewPoly,
    left_divide,
    membership_one_minus_a_theta,
    norm_product,
    power_subring_decompose,
    skew_mul,
    special_probe,
)
from .specfile import load, parse_spec

__version__ = "0.1.0"
