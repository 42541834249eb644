"""Symbolic dynamical systems and numerical probes of Möbius disjointness.

Construction side: bijective substitutions and their group covers, generalized
Morse sequences over finite groups, Toeplitz/odometer machinery, digit-pattern
sequences of Rudin-Shapiro type, and Veech systems over odometers.  Analysis
side: Möbius/Liouville weight tables, weighted orbit averages with checkpointed
convergence reports, bilinear prime-pair correlations, and empirical spectral
estimates (autocorrelations, periodograms, atom masses).
"""

from .arith import (
    DigitPattern,
    WeightTable,
    pattern_parities,
    pattern_parity,
    primes_up_to,
    weight_table,
)
from .errors import CapacityError, UndefinedPointError
from .experiment import (
    ConvergenceReport,
    ExperimentConfig,
    block_sweep,
    kbsz_series,
    pow2_checkpoints,
    report_csv,
    report_json,
    run_config,
    run_experiment,
    sarnak_series,
)
from .morse import (
    MorseSpec,
    ToeplitzStage,
    block_product,
    blocks_from_cocycle,
    cocycle_values,
    hat_stream,
    hat_word,
    kakutani_spec,
    morse_prefix,
    morse_stream,
    toeplitz_check,
    toeplitz_stage,
)
from .odometer import (
    ExtensionStage,
    OdometerPoint,
    OdometerSpec,
    VeechConditionReport,
    VeechSpec,
    morse_cocycle_eval,
    rs_extension_stages,
    tower_index,
    translate,
    veech_conditions,
    veech_stream,
    veech_tau,
)
from .permgrp import (
    FiniteGroup,
    GroupEmbedding,
    Perm,
    centralizer_in_sym,
    closure,
    cyclic_group,
    normal_subgroups,
    quotient,
    symmetric_group,
    trivial_group,
)
from .spectral import (
    AutocorrelationEstimate,
    Observable,
    atom_mass,
    autocorrelation,
    linear_combination,
    make_block_indicator,
    make_symbol_table,
    make_walsh,
    periodogram,
    wiener_average,
)
from .specfile import Diagnostic, SpecDocument, parse_spec, print_spec
from .streams import SymbolStream, periodic_stream, word_stream
from .subst import (
    GroupCover,
    LanguageScan,
    Substitution,
    SubstitutionReport,
    analyze,
    column_maps,
    factor_map,
    factor_stream,
    fixed_point,
    fixed_point_stream,
    group_cover,
    language,
    letter_map_image,
    quotient_substitution,
    skeleton_index,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
