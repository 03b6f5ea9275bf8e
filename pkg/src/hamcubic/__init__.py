"""HC/DC Hamiltonicity procedure for bridgeless cubic graphs, with an exact
oracle and a verification harness."""

from .dc import BudgetExhausted, DCBudget, Objective, run_dc
from .factor import TwoFactor, complement_two_factor, exchange, is_hamilton_cycle, partition_matching
from .graph import CycleSet, Graph, bridges, cycle_decomposition, from_edge_list, is_connected, is_cubic, parse_graph6
from .hc import HCConfig, HCResult, run_hc, validate_result
from .matching import PerfectMatching, enumerate_perfect_matchings, perfect_matching, verify_matching
from .oracle import is_hamiltonian_bruteforce

__version__ = "0.1.0"
