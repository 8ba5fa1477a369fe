from .config import Settings as Settings, load_config as load_config
from .exceptions import (
    InvariantError as InvariantError,
    NotSmallIndices as NotSmallIndices,
    ResourceLimitError as ResourceLimitError,
    StringToricError as StringToricError,
    ValidationError as ValidationError,
)
from .logger import get_logger as get_logger, setup_logging as setup_logging
from .moves_index import (
    build_word as build_word,
    contract as contract,
    delta_index as delta_index,
    extend as extend,
    has_small_indices as has_small_indices,
)
from .potential import disk_potential as disk_potential
from .resolution import (
    hat_sigma as hat_sigma,
    tau_cones as tau_cones,
    verify_small_resolution as verify_small_resolution,
)
from .string_polytope import (
    HPolytope as HPolytope,
    string_polytope as string_polytope,
    vertices as vertices,
)
from .toric_fan import Fan as Fan, TowerFan as TowerFan, bott_fan as bott_fan
from .weyl_words import (
    ReducedWord as ReducedWord,
    enumerate_reduced_words as enumerate_reduced_words,
    parse_word as parse_word,
    validate as validate,
)
from .wiring import (
    build_diagram as build_diagram,
    enumerate_rigorous_paths as enumerate_rigorous_paths,
    select_gamma as select_gamma,
)
