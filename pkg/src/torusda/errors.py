"""Exception types shared across the package."""

__all__ = [
    "BlowUpError",
    "ConfigError",
    "DegenerateMaskError",
    "DegenerateReferenceError",
    "FormatError",
    "GevreyOverflowError",
    "HermitianSymmetryError",
    "NonZeroMeanError",
    "ParameterOverflowError",
    "SaturatedSeriesError",
    "StateMismatchError",
]


class HermitianSymmetryError(ValueError):
    """Spectrum of a real field violates conjugate symmetry beyond tolerance."""


class NonZeroMeanError(ValueError):
    """Operation requires a zero-mean field but coeff(0,0) is not negligible."""


class DegenerateMaskError(ValueError):
    """Mask selects no nodes, or carries no usable energy for a ratio."""


class DegenerateReferenceError(ValueError):
    """Relative error is undefined because the reference field is zero."""


class BlowUpError(RuntimeError):
    """Non-finite coefficient detected while time stepping."""

    def __init__(self, step: int, time: float):
        self.step = step
        self.time = time
        super().__init__(
            f"non-finite state at step {step} (t = {time:.6g}); "
            "likely under-resolution or an unstable dt"
        )


class GevreyOverflowError(OverflowError):
    """exp(2*sigma*|k|) overflowed for the largest active wavenumber."""

    def __init__(self, sigma: float, kmax: float):
        self.sigma = sigma
        self.kmax = kmax
        super().__init__(
            f"Gevrey weight overflow: sigma = {sigma:.6g} with largest "
            f"contributing |k| = {kmax:.6g}"
        )


class ParameterOverflowError(OverflowError):
    """Advised nudging gain overflowed (C_Omega * sqrt(N) too large)."""

    def __init__(self, exponent: float):
        self.exponent = exponent
        super().__init__(f"advised gain overflows: exponent {exponent:.6g} > 700")


class SaturatedSeriesError(ValueError):
    """Rate fit rejected: window has too few samples or non-positive errors."""


class StateMismatchError(ValueError):
    """Paired states disagree on grid or clock."""


class ConfigError(ValueError):
    """Malformed or incomplete run configuration."""


class FormatError(ValueError):
    """On-disk artifact does not match its declared format."""
