"""Modularity-maximizing community detection with a locus-based genetic algorithm."""
from .benchgen import NewmanParams, newman_graph
from .encoding import Partition, decode, is_safe, marginal_genes
from .engine import GaConfig, RunResult, RunSummary, run_gals, run_many
from .graph import (GraphParseError, Network, karate, load_network, load_partition,
                    parse_edge_list, parse_gml, parse_ground_truth)
from .metrics import nmi
from .modularity import NEW_COMMUNITY, apply_move, delta_q_move, local_f, modularity_q
from .operators import lsma_mutate, mrw_init, mu_plus_lambda_select, uniform_crossover

__all__ = [
    "GaConfig", "GraphParseError", "NEW_COMMUNITY", "Network", "NewmanParams", "Partition",
    "RunResult", "RunSummary", "apply_move", "decode", "delta_q_move", "is_safe",
    "karate", "load_network", "load_partition", "local_f", "lsma_mutate", "marginal_genes",
    "modularity_q", "mrw_init", "mu_plus_lambda_select", "newman_graph", "nmi",
    "parse_edge_list", "parse_gml", "parse_ground_truth", "run_gals", "run_many",
    "uniform_crossover",
]
