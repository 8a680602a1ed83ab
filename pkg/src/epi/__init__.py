"""Marginal entanglement of multi-qubit pure states and the polygon inequality.

Modules
-------
state      pure states, reduced density matrices, Schmidt decompositions
measures   Y, S, C, N marginal measures and pairwise two-qubit quantities
polytope   slack, volumes, sharing capacity, Monte Carlo oracles
families   GHZ, W and product families with closed forms
verifier   sampling suites, appendix witness, qudit counterexample search
io         state files and report serialization
"""
from .families import GhzParams, WParams, family_sweep, ghz_state, ghz_y, w_state, w_y
from .measures import (
    EntanglementVector,
    Measure,
    concurrence_of_y,
    entropy_of_y,
    marginal_vector,
    negativity_of_y,
    pairwise_concurrence,
    pairwise_eof,
    pairwise_negativity,
    qudit_y,
    qudit_y_from_density,
    schmidt_weight,
    y_measure,
)
from .polytope import (
    CapacityCurve,
    SlackReport,
    available_volume,
    bspline_cross_section,
    capacity_general,
    capacity_n3,
    excluded_simplex_volume,
    mc_capacity,
    mc_volume,
    polygon_slack,
)
from .state import (
    PureState,
    SchmidtData,
    SchmidtSpectrum,
    haar_random,
    make_state,
    reduced_density,
    schmidt_data,
    schmidt_spectrum,
)
from .verifier import (
    SearchResult,
    SuiteReport,
    appendix_witness,
    conjecture_search,
    verify_concavity_lemma,
    verify_polygon,
    verify_sandwich,
)

__version__ = "0.1.0"
