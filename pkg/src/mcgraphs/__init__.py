"""Combinatorial models of curve, arc and marking graphs on finite-type surfaces.

Curves and arcs are normal coordinates on a fixed ideal triangulation; graphs
are explored through exact finite balls, and subsurface projections are
computed directly on the coordinates.
"""

from .surface import (
    CurveSystem, MappingClassGenerator, SurfaceSpec, apply_mapping_class, canonicalize,
    disjoint, enumerate_curves, enumerate_systems, fill, half_twist_applicable,
    intersection_number, load_surface, regular_neighborhood_boundary, standard_surface, twist,
)
from .projection import (
    AnnularSet, ProjectionSet, Subsurface, annulus, enumerate_subsurfaces, farey_distance,
    project_system, projection_diameter, projection_distance, relate, rho_map,
    topological_type, whole_surface,
)
from .markings import (
    Marking, Transversal, compatible_clean_markings, complete_marking, elementary_flip,
    elementary_twist, is_clean, is_locally_complete, marking_intersection, project_marking,
    restrict, restricted_intersection,
)
from .graphs import (
    BuiltGraph, GraphSpec, WitnessSet, build_ball, close_witness_set, is_witness, k_x, l_x,
    m_a, mu_alpha, multiarc_curve, partial_marking, prescribed_arc, universal_map,
)
from .analysis import (
    BoundReport, DistanceFormulaFit, check_projection_lipschitz, estimate_f_M,
    fit_distance_formula, rebalance_path, sample_hyperbolicity,
)

__version__ = '0.1.0'
