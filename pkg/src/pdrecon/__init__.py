"""Graph reconstruction from directional augmented persistence diagrams."""

from .geometry import build_basis, gp_check, min_pairwise_angle, radial_cw_order, tilt
from .graph import ImmersedGraph, generate_gp_graph, lower_star_heights, read_graph, write_graph
from .persistence import AugmentedDiagram, Oracle, OracleStats, compute_apd
from .reconstruction import find_edges, reconstruct_graph, reconstruct_vertices

__version__ = "0.1.0"
