"""Exact interval exchanges, Rauzy induction and zippered rectangles, with the
machinery to certify a divergent Teichmüller geodesic over a uniquely ergodic
4-interval exchange."""

from .perm import MarkedPermutation, RauzyDiagram, derived_permutation, extended_rauzy_class, op_a, op_b
from .iet import IntervalExchange, discrepancy, evaluate, first_return, orbit
from .rauzy import expansion, induction_step, word_matrix
from .zipper import ZipperedRectangles, glue_records, induct_with_heights, sigma, validate, zero_positions
from .hilbert import cell_diameter, contraction_check, delta, distance, gamma
from .construction import PI0, Construction, block_word, c_matrix, h_product, leading_term_fit
from .geodesic import Holonomy, TimeWindow, flow, overlap_certificate, window

__version__ = "0.1.0"
