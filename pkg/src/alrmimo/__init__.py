"""Augmented lattice reduction for MIMO detection.

Submodules:

- :mod:`alrmimo.linalg`: QR, pseudo-inverse, flop counting
- :mod:`alrmimo.lattice`: real and complex LLL reduction and checks
- :mod:`alrmimo.alr`: the augmented-lattice decoder
- :mod:`alrmimo.detectors`: ZF, SIC, LLL-aided, ML, MMSE-GDFE, Kim-Park
- :mod:`alrmimo.constellation`, :mod:`alrmimo.channel`: system model
- :mod:`alrmimo.oracle`: exact enumeration oracles (exponential time)
- :mod:`alrmimo.sim`: Monte-Carlo sweeps and result files
"""
from .alr import (alr_decode, build_augmented, complex_alr_decode,
                  epsilon_diversity, epsilon_optimized)
from .channel import sample_channel, sample_trial, snr_to_n0
from .constellation import Constellation
from .detectors import (kim_park_ilr_decode, lll_sic_decode, lll_zf_decode,
                        ml_decode, mmse_gdfe_preprocess, sic_decode, zf_decode)
from .lattice import (complex_lll_reduce, gso, is_lll_reduced, iteration_bound,
                      lll_reduce)
from .linalg import FlopCounter, pseudo_inverse, qr_decompose
from .sim import (ExperimentConfig, ResultRecord, emit_results, parse_results,
                  run_complexity_sweep, run_ser_sweep)

__version__ = "0.1.0"

__all__ = [
    "Constellation", "ExperimentConfig", "FlopCounter", "ResultRecord",
    "alr_decode", "build_augmented", "complex_alr_decode",
    "complex_lll_reduce", "emit_results", "epsilon_diversity",
    "epsilon_optimized", "gso", "is_lll_reduced", "iteration_bound",
    "kim_park_ilr_decode", "lll_reduce", "lll_sic_decode", "lll_zf_decode",
    "ml_decode", "mmse_gdfe_preprocess", "parse_results", "pseudo_inverse",
    "qr_decompose", "run_complexity_sweep", "run_ser_sweep", "sample_channel",
    "sample_trial", "sic_decode", "snr_to_n0", "zf_decode",
]
