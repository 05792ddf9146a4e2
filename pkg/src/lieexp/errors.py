"""Exception types raised by the library."""


class LieExpError(ValueError):
    """Base class; the CLI maps it to exit code 1."""


class NotConjugate(LieExpError):
    pass


class NotOrthogonal(LieExpError):
    pass


class NotOrthogonalSupport(LieExpError):
    pass


class NotNice(LieExpError):
    pass


class NotHeisenberg(LieExpError):
    pass


class NotExtreme(LieExpError):
    pass


class NonNilpotent(LieExpError):
    pass


class NotMinimal(LieExpError):
    pass


class NotNtm(LieExpError):
    pass


class NotInLevel2(LieExpError):
    pass


class NotWeightMinusTwo(LieExpError):
    pass


class NotDominating(LieExpError):
    pass


class LevelMismatch(LieExpError):
    pass


class NotQuasiAbelian(LieExpError):
    pass
