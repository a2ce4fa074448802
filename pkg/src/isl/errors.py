"""Exception types shared across the library.

Every numerical guard raises one of these instead of returning inf/nan,
so callers (and the CLI) can tell validation problems from numerical
breakdown.
"""


class IslError(Exception):
    """Base class for all library errors."""


class DomainError(IslError):
    """Input outside the supported domain (e.g. Im(tau) too small)."""


class PoleError(IslError):
    """Evaluation requested too close to a pole or lattice point."""


class SeriesCapError(IslError):
    """A q-series failed to converge within the hard term cap."""


class BranchPointError(IslError):
    """A flow trajectory ran into a half-period branch point."""


class StepFailureError(IslError):
    """Adaptive integrator could not meet the tolerance."""


class RootFindError(IslError):
    """Newton/grid inversion failed to converge."""


class InconsistencyError(IslError):
    """Two independent evaluation routes disagreed beyond tolerance."""


class ClearanceError(IslError):
    """No valid loop path with the required clearance exists."""


class FitError(IslError):
    """A least-squares fit was ill-conditioned or under-sampled."""


class ValidationError(IslError):
    """Bad user-facing input (CLI arguments, scenario files)."""
