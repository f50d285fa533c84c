"""Exact multilinear dyadic operators, maximal functions and weights on finite dyadic windows."""
from .grid import (DyadicInterval, GridError, HaarTable, StepFunction, Window, analyze,
                   average, enumerate_intervals, haar_coefficient, haar_function, reconstruct)
from .maximal import (maximal, maximal_delta, multilinear_maximal, multilinear_maximal_r,
                      sharp_maximal, sharp_maximal_delta)
from .norms import (kolmogorov_ratio, localized_lp_norm, localized_weak_norm, lp_norm,
                    weak_lp_norm)
from .operators import (MultiIndex, SymbolSequence, commutator, haar_multiplier,
                        multiply_slot, paraproduct, pi_b, slot_value)
from .weights import (ExponentVector, Weight, WeightVector, a1_characteristic, ainf_estimate,
                      ap_characteristic, bmo2_haar, bmo_norm, bmo_r_norm,
                      multilinear_ap_characteristic, nu_weight, truncate_bmo, weight_measure)

__version__ = "0.1.0"
