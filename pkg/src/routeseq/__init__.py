"""Hierarchical TSP route-sequence prediction for last-mile delivery routes.

A zone-level tour over a behaviour-adjusted cost matrix fixes the zone order,
intra-zone Hamiltonian paths fill in the stops, and a reversal post-processor
corrects direction using planned service times and package volumes.
"""

from .config import RunConfig, load_config
from .data import (
    DataError,
    PackageDims,
    RouteBundle,
    Stop,
    ZonePropertyStats,
    ZoneSequence,
    extract_zone_sequence,
    impute_missing_zones,
    load_dataset,
    make_bundle,
    split_dataset,
    zone_property_stats,
)
from .kernels import BACKEND
from .postprocess import (
    PostProcessParams,
    postprocess,
    reverse_by_service_time,
    reverse_by_volume,
    validate_or_fallback,
)
from .scorer import ScoreReport, score_batch, score_route
from .sequencer import PredictedSequence, assemble_complete_sequence, predict_route, predict_zone_sequence
from .synth import generate_synthetic_dataset
from .tsp import PathSolution, TourSolution, brute_force_path, brute_force_tour, solve_path, solve_tour
from .zone_cost import HeuristicParams, ZoneCostMatrix, apply_cost_heuristics, zone_centroid, zone_travel_matrix
from .zones import ZoneId, inner_zone_difference, major_zone_difference, parse_zone_id

__version__ = "0.1.0"
