"""Exact variance-based sensitivity analysis for discrete Bayesian networks.

The pipeline turns a network into a bag of probability factors, adjoins a
factor mapping the output labels to reals, and computes Sobol variance
components and total indices for the evidential variables from a handful of
marginalization queries over squared and quotient networks. The function of
interest (the conditional expected output over the evidence grid) is never
tabulated or sampled, so evidence domains with tens of millions of
configurations stay tractable.
"""

from .errors import (
    AxisCardinalityMismatchError,
    BifSyntaxError,
    BnSensError,
    ContractionUnderflowWarning,
    CyclicGraphError,
    DegenerateOutputError,
    DependentInputsError,
    DivisionByZeroError,
    EmptyEvidenceSetError,
    InvalidAssignmentError,
    MissingValueMapError,
    NotEvidentialError,
    OverlappingPartitionError,
    PartialFunctionError,
    PartitionError,
    SchemaError,
    ShapeMismatchError,
    StateSpaceTooLargeError,
    UnknownAxisError,
    UnnormalizedCptError,
    UnsupportedFeatureError,
    ValidationError,
)
from .graph import (
    Dag,
    Hypergraph,
    UndirectedGraph,
    children,
    descendants,
    family_hypergraph,
    min_weight_order,
    moralize,
    non_descendants,
    parents,
    skeleton,
)
from .ingest import (
    NativeDocument,
    generate_random_bn,
    load_native,
    parse_bif,
    save_native,
)
from .model import (
    AnalysisSpec,
    Cpt,
    DiscreteBayesNet,
    Variable,
    joint_probability,
    output_values,
    validate_network,
    validate_partition,
)
from .network import (
    ConditionalMean,
    TensorNetwork,
    collapse,
    contract_all,
    evaluate_f,
    function_tn,
    marginalize,
    mrf_from_bn,
    quotient,
    restrict,
    square_wrt,
)
from .oracle import (
    FunctionTable,
    JointTable,
    McReport,
    brute_force_closed,
    brute_force_f,
    brute_force_indices,
    enumerate_joint,
    mc_indices,
)
from .sobol import (
    ComputeOptions,
    IndexEntry,
    SobolReport,
    closed_index,
    compute_all,
    encode_utility_node,
    expected_value,
    global_variance,
    total_index,
    variance_component,
)
from .tensor import (
    Factor,
    factor_affine,
    factor_div,
    factor_product,
    factor_square,
    factor_sum_out,
)

__version__ = "0.1.0"
