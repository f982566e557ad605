"""sepkit: separability tests, entanglement witnesses and product-state
optimization for small multipartite quantum states."""

__version__ = "0.1.0"

from ._backend import active_backend
from .tensor_core import (
    HilbertDims,
    eig_hermitian,
    kron,
    partial_trace,
    partial_transpose,
    permute_subsystems,
)
from .states import (
    MultipartiteState,
    ProductVector,
    SeparableDecomposition,
    assemble_separable,
    density_from_pure,
    maximally_mixed,
    named_operator,
    random_separable,
    werner_state,
)
from .product_opt import OptBudget, OptResult, certify, grid_extremize, seesaw_extremize
from .maps_witnesses import (
    BlochAction,
    LinearMapOp,
    Witness,
    adjoint_map,
    apply_map,
    bloch_action,
    certify_witness,
    decompose_witness_2x2,
    eval_witness,
    map_from_witness,
    witness_from_map,
)
from .upb import UpbSet, bound_entangled_state, build_witness, builtin_upb, verify_upb
from .criteria import (
    CutReport,
    MapReport,
    Verdict,
    decide,
    default_catalog,
    lmpp_spectral_test,
    ppt_check,
    semisep_report,
)

__all__ = [
    "__version__",
    "active_backend",
    "HilbertDims",
    "eig_hermitian",
    "kron",
    "partial_trace",
    "partial_transpose",
    "permute_subsystems",
    "MultipartiteState",
    "ProductVector",
    "SeparableDecomposition",
    "assemble_separable",
    "density_from_pure",
    "maximally_mixed",
    "named_operator",
    "random_separable",
    "werner_state",
    "OptBudget",
    "OptResult",
    "certify",
    "grid_extremize",
    "seesaw_extremize",
    "BlochAction",
    "LinearMapOp",
    "Witness",
    "adjoint_map",
    "apply_map",
    "bloch_action",
    "certify_witness",
    "decompose_witness_2x2",
    "eval_witness",
    "map_from_witness",
    "witness_from_map",
    "UpbSet",
    "bound_entangled_state",
    "build_witness",
    "builtin_upb",
    "verify_upb",
    "CutReport",
    "MapReport",
    "Verdict",
    "decide",
    "default_catalog",
    "lmpp_spectral_test",
    "ppt_check",
    "semisep_report",
]
