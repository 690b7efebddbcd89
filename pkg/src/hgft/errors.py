"""Exception hierarchy shared by the kernel, the criteria and the verifier."""


class HypergeometricError(ValueError):
    """Base class for every domain error raised by this package."""


class PoleAtNonpositiveInteger(HypergeometricError):
    pass


class InvalidC(PoleAtNonpositiveInteger):
    """The lower parameter c is 0, -1, -2, ..."""


class OutsideDisk(HypergeometricError):
    pass


class TooCloseToOne(HypergeometricError):
    """No evaluation branch applies at (or numerically at) z = 1."""


class ZeroBalancedAtBoundary(TooCloseToOne):
    """c = a + b and z = 1: the function diverges logarithmically there."""


class PrecisionLoss(HypergeometricError):
    """A series did not reach its stopping criterion within the term budget."""


class QuotientPole(HypergeometricError):
    """2F1 vanishes (numerically) so z f'/f has a pole."""


class ArgUndefined(HypergeometricError):
    pass


class NotZeroImbalanced(HypergeometricError):
    """c - a - b is not a nonzero purely imaginary number."""


class LambdaZero(HypergeometricError):
    pass
