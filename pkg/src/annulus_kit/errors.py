"""Exception hierarchy shared by every module."""


class AnnulusKitError(Exception):
    """Base class for all errors raised by annulus_kit."""


# polycore
class ZeroPolynomial(AnnulusKitError, ValueError):
    pass


class NotSymmetrizable(AnnulusKitError, ValueError):
    pass


class NotAKnotPolynomial(AnnulusKitError, ValueError):
    pass


# diagram
class MalformedPD(AnnulusKitError, ValueError):
    def __init__(self, message, label=None):
        super().__init__(message)
        self.label = label


class OrientationMismatch(AnnulusKitError, ValueError):
    pass


class MissingFraming(AnnulusKitError, ValueError):
    pass


class EmptyBundle(AnnulusKitError, ValueError):
    pass


# kirby
class NotBlowDownable(AnnulusKitError, ValueError):
    pass


class NotRationalUnknot(NotBlowDownable):
    pass


class RationalFramedSlide(AnnulusKitError, ValueError):
    pass


class InvariantViolation(AnnulusKitError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ScriptError(AnnulusKitError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


# annulus / ops / family
class InvalidBandWord(AnnulusKitError, ValueError):
    pass


class NotGood(AnnulusKitError, ValueError):
    pass


class NotSimple(AnnulusKitError, ValueError):
    pass


class UnsupportedWord(AnnulusKitError, ValueError):
    pass


class NotGoodSeed(AnnulusKitError, ValueError):
    pass


# alexinv
class NotAKnotDiagram(AnnulusKitError, ValueError):
    pass


class SingularPairing(AnnulusKitError, ValueError):
    pass


class UnsupportedLink(AnnulusKitError, ValueError):
    pass


# cli
class UnsupportedFormat(AnnulusKitError, ValueError):
    pass
