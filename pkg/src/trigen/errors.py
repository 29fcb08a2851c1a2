"""Exception types shared across the package."""


class ScenarioError(ValueError):
    """A scenario file or parameter set is malformed or inconsistent."""


class SingularAngleError(RuntimeError):
    """The auxiliary polar angle reached a coordinate singularity.

    The azimuth is a gauge angle that loses meaning at the poles; rather
    than regularizing (and silently corrupting phases) the integration is
    aborted with this diagnostic.
    """


class IntegrationError(RuntimeError):
    """An adaptive integration failed to meet its tolerance contract."""
