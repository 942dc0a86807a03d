"""
Error types raised by wkbwave services and commands
"""
from typing import Optional


class WkbWaveError(Exception):
    """Base class for all wkbwave errors"""


class ConfigError(WkbWaveError):
    """Experiment configuration is missing a key or holds an invalid value"""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class OutOfWindow(WkbWaveError):
    """Frequency lies outside the declared dispersion window"""

    def __init__(self, omega: float, window: tuple):
        self.omega = omega
        self.window = window
        super().__init__(f"omega={omega!r} outside window [{window[0]}, {window[1]}]")


class NonMonotone(WkbWaveError):
    """f(omega) = omega * n1(omega) is not strictly increasing"""

    def __init__(self, omega: float, derivative: Optional[float] = None):
        self.omega = omega
        self.derivative = derivative
        detail = f" (f'={derivative:.6g})" if derivative is not None else ""
        super().__init__(f"f is not monotone at omega={omega:.6g}{detail}")


class GridTooCoarse(WkbWaveError):
    """Refined quadratures disagree beyond tolerance"""


class DerivativeUnavailable(WkbWaveError):
    """Second derivatives of a tabulated profile are not trustworthy on this grid"""


class ConvergenceFailure(WkbWaveError):
    """Eigensolver or root finder did not converge"""


class OutOfRange(WkbWaveError):
    """Target value lies outside f(window)"""


class InsufficientHistory(WkbWaveError):
    """Time integration needs at least two samples"""


class NotHomogeneous(WkbWaveError):
    """Operation requires constant spatial profiles"""


class ResonanceProximity(WkbWaveError):
    """Frequency samples fall inside the resonance exclusion radius"""

    def __init__(self, omegas, radius: float):
        self.omegas = list(omegas)
        self.radius = radius
        super().__init__(
            f"{len(self.omegas)} sample(s) within |k - K(omega)| < {radius:.6g}"
        )


class DegenerateStep(WkbWaveError):
    """Finite-difference steps coincide"""
