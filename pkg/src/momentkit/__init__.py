"""Numerical toolkit for signed moment sequences.

Core objects: MomentSequence and the Riesz functional over polynomials;
binomial absolute-sum ladders for density existence and C^r regularity;
the entire characteristic series with cancellation tracking; windowed
inverse transforms for density reconstruction and interval masses; and
atomic / smoothed representations of truncated moment functionals.
"""

from .errors import (
    DegenerateScale,
    DegreeExceeded,
    DimensionMismatch,
    Infeasible,
    MomentError,
    NegativeEvenMoment,
    NonRealSequence,
    NotConverged,
    NotNormalized,
    OscillationUnderresolved,
    SchemaError,
    SmoothingFailed,
    UnboundedSupport,
)
from .polynomial import Polynomial
from .sequence import (
    MomentSequence,
    add_sequences,
    affine_pushforward,
    derivative_seq,
    mirror_seq,
    riesz_eval,
)
from .density import DensitySpec, moments_from_density
from .seqio import (
    density_from_dict,
    dump_sequence,
    load_sequence,
    parse_density_arg,
    sequence_from_dict,
    sequence_to_dict,
)
from .hausdorff import (
    HausdorffReport,
    LadderVerdict,
    MirrorVerification,
    abs_cont_test,
    cr_test,
    hausdorff_sum,
    positivity_test,
    signed_hausdorff_test,
    verify_mirror_decomposition,
)
from .charfn import (
    BochnerReport,
    CharSeries,
    CharValue,
    RadiusEstimate,
    bochner_test,
    char_eval,
    char_eval_adaptive,
    odd_even_split,
    radius_estimate,
)
from .recon import (
    NonnegativityVerdict,
    ReconstructionResult,
    gaussian_test_mass,
    levy_interval_mass,
    nonnegativity_check,
    reconstruct_density,
)
from .richter import (
    AtomicRepresentation,
    BasisFunction,
    DiracFamily,
    SmoothedRepresentation,
    TruncatedFunctional,
    atomic_decompose,
    basis_from_spec,
    emit_density,
    smooth_representation,
)

__version__ = "0.1.0"

__all__ = [
    "MomentError", "SchemaError", "DimensionMismatch", "DegreeExceeded",
    "DegenerateScale", "NonRealSequence", "NotNormalized", "NegativeEvenMoment",
    "UnboundedSupport", "NotConverged", "OscillationUnderresolved",
    "Infeasible", "SmoothingFailed",
    "Polynomial",
    "MomentSequence", "riesz_eval", "add_sequences",
    "derivative_seq", "affine_pushforward", "mirror_seq",
    "DensitySpec", "density_from_dict", "moments_from_density",
    "load_sequence", "dump_sequence", "sequence_from_dict", "sequence_to_dict",
    "parse_density_arg",
    "hausdorff_sum", "signed_hausdorff_test", "HausdorffReport",
    "LadderVerdict", "abs_cont_test", "cr_test",
    "positivity_test", "MirrorVerification", "verify_mirror_decomposition",
    "CharSeries", "CharValue", "char_eval", "char_eval_adaptive",
    "odd_even_split", "radius_estimate", "RadiusEstimate",
    "bochner_test", "BochnerReport",
    "ReconstructionResult", "reconstruct_density", "NonnegativityVerdict",
    "nonnegativity_check", "levy_interval_mass", "gaussian_test_mass",
    "BasisFunction", "TruncatedFunctional", "basis_from_spec",
    "AtomicRepresentation", "atomic_decompose", "DiracFamily",
    "SmoothedRepresentation", "smooth_representation", "emit_density",
    "__version__",
]
