"""Operational statistics for finite manuals.

Test spaces with their events, logics and weight functions, a finite slice of
the spin-one manual, and a Fuzzy Trace Theory model of recognition memory with
simulation and maximum-likelihood estimation.
"""

from .errors import OpStatError
from .manual import (
    Event,
    Manual,
    are_orthogonal,
    coarsen_pack,
    dichotomy_manual,
    identify_outcomes,
    is_event,
    local_complements,
    tru_manual,
    validate_manual,
)
from .logic import Logic, LogicDegeneracy, build_logic, is_orthomodular_poset
from .weights import (
    WeightFunction,
    event_probability,
    is_superposition,
    validate_weight,
    weight_space_dof,
)
from .ftt import (
    BiasParams,
    FTTParams,
    canonical_states,
    combined_memory_manual,
    interference_excess,
    predict_dichotomies,
    predict_tru,
    tru_sums,
)
from .estimation import CountTable, fit_mle, goodness_of_fit, moment_estimate, simulate_counts

__version__ = "0.1.0"
