"""Wideband hybrid analog/digital precoding for mmWave MIMO-OFDM.

Fully-connected and subarray RF precoders in closed form, greedy and
exhaustive dynamic subarray partitioning, and a Monte-Carlo evaluator.
"""
from .array import UPA, ULA, ArrayGeometry, steering_matrix, steering_vector
from .channel import (ClusterConfig, FreqChannel, OfdmGrid, PathSet, freq_response,
                      generate_clustered, rayleigh_channel)
from .evaluator import (jensen_pair, mutual_information, parse_scheme, relaxed_objective,
                        run_scheme)
from .partitioner import (approx_lambda1, equal_size_count, exhaustive_partition,
                          greedy_partition, lambda1_bounds, stirling2)
from .precoder_full import (PrecoderSet, design_bb, design_rf_fully, effective_channel,
                            fully_digital, phase_project)
from .precoder_subarray import FixedKind, Partition, design_rf_subarray, fixed_partition
from .spectral import Covariance, hermitian_eig, sample_covariance, water_fill

__version__ = "0.1.0"
