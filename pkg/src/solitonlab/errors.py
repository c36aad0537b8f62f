"""Exception types shared across the package."""

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the physically meaningful domain."""


class ConfigurationError(ValueError):
    """A run configuration is invalid (schema, stability guard, geometry)."""


class DegenerateFieldError(ValueError):
    """A field has no usable content (e.g. identically zero)."""


class NodeError(RuntimeError):
    """The amplitude crosses (numerically) zero inside its support.

    Phase unwrapping across a node is ill-defined; carries the grid
    positions of the offending points.
    """

    def __init__(self, message: str, locations: np.ndarray):
        super().__init__(message)
        self.locations = np.asarray(locations)


class NumericalError(RuntimeError):
    """An integration failed mid-run (CFL violation, blow-up)."""
