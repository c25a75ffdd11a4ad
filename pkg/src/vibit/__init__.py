"""vibit: desk-scale simulator for ternary-to-binary quantum random number
generation, with hypergraph-based certification of the measured observable's
value indefiniteness and beam-splitter realizations of the instruments.

The package reproduces the protocol's probability structure and its
finite certification artifacts.  It cannot (and does not claim to) reproduce
the physical claims the protocol rests on; see the README for the scope
statement.
"""

from .beamsplitter import (
    BeamSplitterNetwork,
    PhaseElement,
    SplitterElement,
    SymmetricSplitterElement,
    decompose,
    fig5_network,
    format_netlist,
    forward_paths,
    network_unitary,
    parse_netlist,
    path_contributions,
)
from .constants import (
    BUILTIN_MATRICES,
    COORDINATIZATION,
    KET_2,
    KET_3,
    KET_4,
    KET_5,
    KET_A,
    KET_B,
    U_CONTEXT_MAP,
    U_FOLD_2TO1,
    U_MERGE,
    UX,
    UX_MERGED,
    V_EQUIV,
)
from .contextuality import (
    BUILTIN_HYPERGRAPHS,
    ContextHypergraph,
    Contradiction,
    Coordinatization,
    Fixpoint,
    GadgetClass,
    Violation,
    builtin_coordinatization,
    check_admissible,
    classify_gadget,
    enumerate_two_valued_states,
    fig4_hypergraph,
    fig4_tifs,
    fig4_tits,
    format_hypergraph,
    is_unital,
    parse_hypergraph,
    propagate,
    verify_coordinatization,
)
from .errors import (
    AlphabetError,
    DimError,
    FormatError,
    InvalidDistribution,
    InvalidQuery,
    InvalidState,
    NotAContext,
    NotAProjector,
    NotUnitary,
    NumericalError,
    VibitError,
)
from .linalg import (
    EPS_MAT,
    EPS_NORM,
    Projector,
    StateVector,
    UnitaryMatrix,
    adjoint,
    born_probability,
    compose,
    eigenvalues,
    equal_up_to_phase,
    is_orthonormal_context,
    max_abs_diff,
    projector_from_state,
    random_unitary,
    verify_conjugation,
)
from .pipeline import (
    BINARY,
    Distribution,
    MODE_MERGE,
    MODE_MORPHISM,
    MeasurementSetup,
    PRESET_NAMES,
    SymbolStream,
    TERNARY,
    apply_morphism,
    binary_pipeline,
    build_vi_state,
    merge_postprocess,
    merged_complement_projector,
    merging_rotation,
    outcome_distribution,
    preset_setup,
    read_stream,
    resolve_setup,
    sample,
    universal_measurement_check,
    write_stream,
)
from .randstats import StatsReport, analyze_stream
from .reports import AnalysisReport
from .verify import CheckResult, run_verify

__version__ = "0.1.0"
