"""Network slicing with state-augmented primal-dual learning."""

from ._core import (
    ConfigError,
    DualMultipliers,
    MissingArtifactError,
    NetworkConfig,
    QosSpec,
    RunConfig,
    SliceAllocation,
    TrainConfig,
    ViolationRates,
    __version__,
    evaluate,
    policy_allocation,
    sample_composition,
    shannon_rate,
    train,
)

__all__ = [
    "ConfigError",
    "DualMultipliers",
    "MissingArtifactError",
    "NetworkConfig",
    "QosSpec",
    "RunConfig",
    "SliceAllocation",
    "TrainConfig",
    "ViolationRates",
    "__version__",
    "evaluate",
    "policy_allocation",
    "sample_composition",
    "shannon_rate",
    "train",
]
