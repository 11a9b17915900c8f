"""Exception hierarchy shared by all modules.

Numeric failures derive from ``NumericError`` and are captured per check by the run
driver; ``ConfigInvalid`` aborts a run before any check executes; ``HypothesisFailed``
is a verdict, not a failure.
"""


class LabError(Exception):
    """Base class for all semiriem-lab errors."""


class ConfigInvalid(LabError):
    """A run configuration failed validation."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class UnknownChart(LabError):
    """A chart id is not present in the catalog."""

    def __init__(self, chart_id: str):
        self.chart_id = chart_id
        super().__init__(f"unknown chart id: {chart_id!r}")


class HypothesisFailed(LabError):
    """A theorem's hypotheses do not hold for the audited object."""

    def __init__(self, reasons: list[str]):
        self.reasons = list(reasons)
        super().__init__("; ".join(self.reasons) or "hypothesis failed")


class NumericError(LabError):
    """Base class for failures of a numerical procedure."""


class OutOfDomain(NumericError):
    """A point lies outside the chart's domain."""


class StencilExitsDomain(NumericError):
    """A finite-difference stencil would leave the chart's domain."""


class DegeneratePlane(NumericError):
    """A 2-plane has |Q| below tolerance."""


class LeftDomain(NumericError):
    """A geodesic left the chart's domain before the requested parameter."""

    def __init__(self, t_exit: float):
        self.t_exit = t_exit
        super().__init__(f"geodesic left the domain at t={t_exit:.6g}")


class StepSizeUnderflow(NumericError):
    """The ODE integrator could not make progress."""


class NoConvergence(NumericError):
    """An iterative solver exhausted its iteration budget."""

    def __init__(self, iterations: int, residual: float | None = None):
        self.iterations = iterations
        self.residual = residual
        detail = f", residual={residual:.3g}" if residual is not None else ""
        super().__init__(f"no convergence after {iterations} iterations{detail}")


class SingularJacobian(NumericError):
    """The shooting Jacobian is numerically singular (conjugate point)."""

    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(f"shooting Jacobian condition number {condition:.3g}")


class OutsideRegion(NumericError):
    """A tangent vector lies outside the star-shaped region."""


class DomainTooTight(NumericError):
    """A Hessian stencil geodesic left the region."""


class ConjugatePoint(NumericError):
    """A conjugate point was encountered along a geodesic."""


class SamplerStarved(NumericError):
    """Rejection sampling discarded too many candidates."""


class SamplerExhausted(NumericError):
    """A sampler could not produce the requested number of samples."""


class GridExitsInterval(NumericError):
    """A grid does not fit inside the warping interval."""


class BranchAmbiguity(NumericError):
    """The inverse of the comparison function is beyond the principal branch."""


class NotRealizable(NumericError):
    """No model surface admits the given side energies."""


class DegenerateTriangle(NumericError):
    """A triangle has a null side or a rank-deficient Gram matrix."""


class SpacelikeViolation(NumericError):
    """An immersed patch is not spacelike."""
