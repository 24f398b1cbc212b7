"""Model of the six-mode, four-photon apparatus."""
from .circuit import (
    DEFAULT_INJECTION,
    IDEAL_LAYER2,
    LAYER1,
    MEASURED_LAYER2,
    MEASURED_MMFBS,
    MEASURED_MODE_LOSS,
    DetectionSpec,
    InterferometerSpec,
    SourceSpec,
    beam_splitter,
    layer_matrix,
    swap_to_CDAB,
)
from .detection import apply_losses_and_detection, clicks_to_occupation
from .estimate import (
    NoConditionedEvents,
    coalescence_probability,
    estimate_overlaps_from_distribution,
    overlap_from_bunching,
    pair_labels,
)
from .evolve import (
    RHO_SOURCE_TERMS,
    BlockEvolver,
    DimensionMismatch,
    build_rho_source,
    evolve_mixture,
    evolve_partition,
    make_evolver,
    photons_for_input,
)
from .permanent import permanent, permanents_batched
from .pipeline import expected_distribution, expected_postselection, raw_distribution
from .postselect import (
    FORBIDDEN,
    EmptyPostselection,
    Postselection,
    WrongPhotonNumber,
    classify_output,
    enumerate_reachable_outputs,
    input_tag,
    postselect,
)

__all__ = [name for name in dir() if not name.startswith("_")]
