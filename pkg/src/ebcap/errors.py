"""Exception hierarchy shared by all ebcap modules."""


class EbcapError(Exception):
    """Base class for every error raised by ebcap."""


class NonHermitian(EbcapError, ValueError):
    pass


class InvalidState(EbcapError, ValueError):
    pass


class InvalidPmf(EbcapError, ValueError):
    pass


class OutOfRange(EbcapError, ValueError):
    pass


class DimensionMismatch(EbcapError, ValueError):
    pass


class InvalidChannel(EbcapError, ValueError):
    """Kraus list empty or not trace preserving."""


class InvalidPOVM(EbcapError, ValueError):
    pass


class UnsupportedDimension(EbcapError, ValueError):
    """PPT is only a separability certificate on 2x2 and 2x3 systems."""


class EmptyInput(EbcapError, ValueError):
    pass


class BudgetExceeded(EbcapError, RuntimeError):
    """The sweep hit its evaluation cap before collecting ``min_points`` corners."""


class InvalidConfig(EbcapError, ValueError):
    pass
