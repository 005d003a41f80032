"""Model structures, transfer systems and Bousfield localization on finite lattices."""

from .errors import ModelkitError, NoLocalizationError
from .lattice import Arrow, ArrowSet, Lattice, llp_set, rlp_set
from .localization import (
    LocalizationSequence,
    LocalizationStep,
    copper_arrows,
    golden_arrows,
    left_localize,
    left_localize_w,
    localize,
    right_localize,
    right_localize_w,
    total_order_right_localize,
)
from .model import (
    ModelStructure,
    check_model_axioms,
    enumerate_model_structures,
    enumerate_weak_equivalences,
    is_legal_w,
    is_model_structure,
    t_min,
)
from .saturation import (
    SaturatedGridDatum,
    enumerate_saturated,
    grid_saturated_check,
    is_saturated,
    reachability_graph,
    saturated_bigger_to_smaller,
    saturated_smaller_to_bigger,
    zigzag_realize,
)
from .transfer import (
    cotransfer_closure,
    enumerate_cotransfer_systems,
    enumerate_transfer_systems,
    is_cotransfer_system,
    is_transfer_system,
    transfer_closure,
)

__version__ = "0.1.0"
