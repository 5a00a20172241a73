"""Frames of integer translates in weighted shift-invariant spaces.

Build band-limited generators, decide the frame property from the rank of
the periodized Fourier matrix, construct pseudoinverse duals and bracket
p-frame constants empirically.
"""

from .config import RunConfig, load_config
from .dual import (DualSet, FrameConstants, NotAFrameError, analyze, biorthogonality_matrix, build_dual,
                   cross_p_consistency, pframe_constants, synthesize)
from .external import load_frequency_generators
from .generators import BumpSpec, GeneratorSet, GridTooCoarse, build_generators, make_bump, partition_sum
from .gram import (FrameVerdict, GramGrid, RankProfile, frame_verdict, gram_grid, gram_matrix,
                   nonsuccessive_verdict, periodized_matrix, rank_profile)
from .signal import (CoefficientArray, Grid, SampledFunction, Lp_mu_norm, amalgam_L_norm, amalgam_W_norm,
                     lp_mu_norm, semi_convolve)
from .weights import Weight, constant, parse_weight, polynomial, subexponential

__version__ = "0.1.0"
