"""Select rows/columns of a symmetric matrix so the kept block clears an eigenvalue bound."""

from ._core import (
    SelectionResult,
    SignedGraph,
    baseline_degree,
    baseline_random,
    brute_force_min_set,
    consensus_trajectory,
    greedy_inv_trace,
    greedy_nonsymmetric,
    greedy_q,
    imhof_survival,
    lambda_min,
    laplacian,
    load_graph,
    logdet_cardinality_sweep,
    q_value,
    q_value_mc,
    random_geometric,
    run_experiment,
    submatrix,
)

__all__ = [
    "SelectionResult",
    "SignedGraph",
    "baseline_degree",
    "baseline_random",
    "brute_force_min_set",
    "consensus_trajectory",
    "greedy_inv_trace",
    "greedy_nonsymmetric",
    "greedy_q",
    "imhof_survival",
    "lambda_min",
    "laplacian",
    "load_graph",
    "logdet_cardinality_sweep",
    "q_value",
    "q_value_mc",
    "random_geometric",
    "run_experiment",
    "submatrix",
]
