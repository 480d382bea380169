"""Exception types shared across the package."""


class KVCertError(Exception):
    """Base class for all errors raised by kvcert."""


class NotNested(KVCertError):
    """A quotient was requested of subspaces that are not nested."""


class InvalidParams(KVCertError, ValueError):
    """(p, n) outside the range p >= n - 1 >= 2 with p prime."""


class UnsupportedDimension(KVCertError, ValueError):
    pass


class DegreeMismatch(KVCertError, ValueError):
    pass


class SideConditionFailed(KVCertError):
    """A vanishing that an argument relies on does not hold numerically."""


class HypothesisFailed(KVCertError):
    """Inputs lie outside the range where a statement applies."""


class ContainmentFailed(KVCertError):
    """im eta_2 is not inside im eta_1.  This would contradict the argument being checked."""


class UnknownLeaf(KVCertError):
    """An exact-sequence query reached an object with no computable model."""


class WindowExceeded(KVCertError, ValueError):
    """Requested twist power lies outside the computable window."""
