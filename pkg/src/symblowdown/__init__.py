"""Exact toric models for the symplectic rational blowdown."""
from .lattice import (
    LatticeError,
    UnimodularMap,
    Vec,
    canonical_lens,
    chain_convergents,
    gluing_map,
    lens_from_corner,
    neg_cf_eval,
    neg_cf_expand,
)
from .domains import (
    DomainError,
    InfeasibleBallError,
    PolyDomain,
    apply_affine,
    domain_contains,
    edge_sphere_invariants,
    make_ball_collar_domain,
    make_chain_domain,
    make_general_plumbing_domain,
    make_wedge,
    polygon_area,
    radial_transversality_check,
    reduction_point_map,
)
from .surgery import (
    BallSpec,
    ChainSpec,
    ManifoldInvariants,
    ball_feasible,
    ball_volume,
    blowdown_report,
    blowdown_volume_delta,
    chain_budget,
    choose_ball,
    embedding_phi1,
    embedding_phi2,
    is_negative_definite,
    plumbing_matrix,
)
from .diagram import SumDiagram, Surface, validate_threefold_diagram

__version__ = "0.1.0"

__all__ = [
    "LatticeError",
    "UnimodularMap",
    "Vec",
    "canonical_lens",
    "chain_convergents",
    "gluing_map",
    "lens_from_corner",
    "neg_cf_eval",
    "neg_cf_expand",
    "DomainError",
    "InfeasibleBallError",
    "PolyDomain",
    "apply_affine",
    "domain_contains",
    "edge_sphere_invariants",
    "make_ball_collar_domain",
    "make_chain_domain",
    "make_general_plumbing_domain",
    "make_wedge",
    "polygon_area",
    "radial_transversality_check",
    "reduction_point_map",
    "BallSpec",
    "ChainSpec",
    "ManifoldInvariants",
    "ball_feasible",
    "ball_volume",
    "blowdown_report",
    "blowdown_volume_delta",
    "chain_budget",
    "choose_ball",
    "embedding_phi1",
    "embedding_phi2",
    "is_negative_definite",
    "plumbing_matrix",
    "SumDiagram",
    "Surface",
    "validate_threefold_diagram",
]
