from .assignment import (
    AssignmentConfig,
    AssignmentInstance,
    build_assignment_instance,
    gen_assignment,
)
from .lp_network import (
    build_lp_instance,
    gen_lp_network,
    LpInstance,
    LpNetworkConfig,
)
from .mip_network import (
    build_mip_instance,
    gen_mip_network,
    MipInstance,
    MipNetworkConfig,
)

__all__ = [
    "AssignmentConfig", "AssignmentInstance", "build_assignment_instance",
    "gen_assignment", "build_lp_instance", "gen_lp_network", "LpInstance",
    "LpNetworkConfig", "build_mip_instance", "gen_mip_network", "MipInstance",
    "MipNetworkConfig",
]
