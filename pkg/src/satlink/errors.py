"""Exception types shared across the package."""


class ConfigError(Exception):
    """Invalid or inconsistent user-supplied configuration."""


class NumericalError(Exception):
    """A numerical routine failed to converge or produced a non-physical state."""


class StrongTurbulenceError(NumericalError):
    """Weak-turbulence preconditions are violated for the requested geometry."""
