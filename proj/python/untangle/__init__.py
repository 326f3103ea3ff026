from ._untangle import (
    Instance,
    Trace,
    UntangleError,
    generate,
    load_instance,
    load_trace,
    min_flips,
    strategies,
    untangle,
    validate,
)

__all__ = [
    "Instance",
    "Trace",
    "UntangleError",
    "generate",
    "load_instance",
    "load_trace",
    "min_flips",
    "strategies",
    "untangle",
    "validate",
]
