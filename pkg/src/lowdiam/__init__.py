"""Low-diameter tree-supported graph decompositions and tree embeddings.

The public surface, bottom-up:

  graph       weighted undirected graphs, exact SSSP, contraction
  sampling    deterministic keyed random streams, the distributions used here
  oracle      exact and perturbed approximate SSSP behind one interface
  blur        blurred ball growing around a seed set
  decompose   one level of tree-supported decomposition
  htsd        the full hierarchy of decompositions
  embed       projected trees and 2-separated trees over a hierarchy
  harness     Monte-Carlo trials with built-in audits
  suites      the acceptance criteria as runnable verdicts
"""

from .blur import BlurError, BlurParams, BlurTrace, blur
from .decompose import (Cluster, DecomposeError, DecomposeParams,
                        IterationCapError, SupportTree, Tsd, ts_decompose)
from .embed import (EmbedError, Hst, ProjectedTree, build_hst,
                    build_projected_tree, p_stretch, stretch_per_edge,
                    tree_stretch, verify_domination)
from .generators import GeneratorError, generate_graph, parse_graph_spec
from .graph import (Graph, GraphError, GraphFormatError, SsspTree,
                    all_pairs_distances, contract_into_super_source,
                    exact_sssp, induced_subgraph, parse_graph, write_graph)
from .harness import (AuditError, TrialConfig, TrialStats, compare_bound,
                      make_oracle, rerun_trial, run_trials, wilson_interval)
from .htsd import Htsd, HtsdError, build_htsd, decoupling_level, htsd_stretch
from .oracle import (CallLedger, OracleConfig, OracleError,
                     approx_sssp, approximate_diameter, ledger_report)
from .sampling import (RandomStream, SamplingError, min_gap_probability,
                       sample_exponential, sample_uniform)
from .suites import SUITES, run_suite, verdict_lines

__version__ = "0.1.0"

__all__ = [
    "AuditError", "BlurError", "BlurParams", "BlurTrace", "CallLedger",
    "Cluster", "DecomposeError", "DecomposeParams", "EmbedError",
    "GeneratorError", "Graph", "GraphError", "GraphFormatError", "Hst",
    "Htsd", "HtsdError", "IterationCapError", "OracleConfig", "OracleError",
    "ProjectedTree", "RandomStream", "SUITES", "SamplingError", "SsspTree",
    "SupportTree", "TrialConfig", "TrialStats", "Tsd",
    "all_pairs_distances", "approx_sssp", "approximate_diameter", "blur",
    "build_hst", "build_htsd", "build_projected_tree", "compare_bound",
    "contract_into_super_source", "decoupling_level", "exact_sssp",
    "generate_graph", "htsd_stretch", "induced_subgraph", "ledger_report",
    "make_oracle", "min_gap_probability", "p_stretch", "parse_graph",
    "parse_graph_spec", "rerun_trial", "run_suite", "run_trials",
    "sample_exponential", "sample_uniform", "stretch_per_edge",
    "tree_stretch", "ts_decompose", "verdict_lines", "verify_domination",
    "wilson_interval", "write_graph",
]
