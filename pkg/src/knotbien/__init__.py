"""BiEntropy of finite binary strings and of binary-encoded lattice knots."""

__version__ = "0.1.0"

from .bitstring import (BitString, DerivativeChain, classify_chain, cyclic_derivative,
                        cyclic_period, derivative_chain, from_text, linear_derivative, transform)
from .entropy import (WeightScheme, bien, bientropy, bientropy_value, kbien, ktbien,
                      ktbien_table, measure, shannon, tbien)
from .lattice import Direction, DirectionSequence, parse_newsud, path_vertices, validate_polygon
from .encoding import (EncodingSet, EncodingTable, encode_sequence, generate_encoding_set,
                       load_encoding_set, save_encoding_set)
from .dataset import KnotDataset, KnotRecord, generate_controls, load_dataset, save_dataset
from .experiment import (ResultTable, aggregate, group_compare, pearson, run_grid,
                         welch_t_test)
