"""Exception hierarchy shared by every module."""


class MbsError(Exception):
    """Base class for all domain errors raised by mbcalc."""


class ValidationError(MbsError):
    """A raw description does not define a valid multibranched surface.

    ``kind`` is one of ``NonUniformWrap``, ``UnattachedCircle``,
    ``ReusedOrbit``, ``Disconnected``, ``ClosedSector``, ``NoBranch``,
    ``BadReference``, ``BadValue`` or ``DuplicateId``; ``location`` names the
    offending branch, orbit, sector or circle.
    """

    def __init__(self, kind, message, location=None):
        self.kind = kind
        self.location = location
        text = f"{kind}: {message}"
        if location is not None:
            text += f" (at {location})"
        super().__init__(text)


class UnknownBranch(MbsError, KeyError):
    pass


class UnknownSector(MbsError, KeyError):
    pass


class NotApplicable(MbsError):
    pass


class NotMaximallySpread(MbsError):
    pass


class NonOrientableUnsupported(MbsError):
    pass


class InvalidSplit(MbsError):
    pass


class InvalidSpec(MbsError):
    pass


class MalformedCertificate(MbsError):
    pass


class PosetViolation(MbsError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("order facts form a cycle between distinct classes: "
                         + " <= ".join(self.cycle))


class FactRejected(MbsError):
    pass


class BadParameters(MbsError):
    pass


class LimitsUnsatisfiable(MbsError):
    pass


class ParseError(MbsError):
    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")
