"""Exception and warning types shared by all modules."""


class WhlabError(Exception):
    """Base class; ``kind`` is the short tag used in CLI reports."""
    kind = "refused"


class InvalidMeasureError(WhlabError, ValueError):
    kind = "invalid-measure"


class NonFiniteResultError(WhlabError, ValueError):
    kind = "non-finite-result"


class DomainError(WhlabError, ValueError):
    kind = "domain"


class CorrespondenceRangeError(WhlabError, ValueError):
    kind = "out-of-correspondence-range"


class RepresentationDomainError(WhlabError, ValueError):
    kind = "representation-domain"


class GridError(WhlabError, ValueError):
    kind = "grid"


class SingularKernelError(WhlabError, ValueError):
    kind = "singular-kernel"


class ApproximateResultWarning(UserWarning):
    """Raised (as a warning) when a value did not meet its tolerance."""
