"""Google matrix, PageRank/CheiRank and reduced Google matrix analysis of directed networks."""
from .exceptions import (CapacityError, ConvergenceError, DimensionError, GraphFormatError,
                         RegomaxError, SelectionError, SeriesDivergenceError)
from .graph import (DirectedGraph, GoogleOperator, bandwidth, cuthill_mckee, dense_google_matrix,
                    invert, load_edge_list, load_labels, relabel)
from .rank import RankJoinRow, RankVector, cheirank, local_rank, pagerank
from .reduced import (NodeSelection, ReducedMatrix, component_weights, compute_reduced,
                      reduce_oracle, scattering_eigs, sector_weights)
from .sensitivity import SensitivityTable, sensitivity, sensitivity_matrix
from .netview import InfluenceNetwork, build_network, export_dot, export_json, top_per_group
from .estimators import CheiRank, PageRank, ReducedGoogleMatrix

__version__ = "0.1.0"
