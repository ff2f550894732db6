"""Machine models, store languages, and boundedness deciders."""

from .machine import (
    Budget,
    Configuration,
    MachineSpec,
    StoreProfile,
    Transition,
    accepts,
    convert_counter_mode,
    enumerate_language,
    make_machine,
    step,
    validate_machine,
)

__all__ = [
    "Budget",
    "Configuration",
    "MachineSpec",
    "StoreProfile",
    "Transition",
    "accepts",
    "convert_counter_mode",
    "enumerate_language",
    "make_machine",
    "step",
    "validate_machine",
]
