"""Exception hierarchy shared by all modules."""


class SemiInvError(Exception):
    """Base class for every error raised by the package."""


class RingError(SemiInvError):
    pass


class AssociativityViolation(RingError):
    def __init__(self, i: int, j: int, k: int):
        self.indices = (i, j, k)
        super().__init__(f"(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})")


class UnityViolation(RingError):
    def __init__(self, i: int):
        self.index = i
        super().__init__(f"unity does not act as identity on b{i}")


class RelationViolation(RingError):
    """The relation span is not a two-sided ideal for the given tensor."""


class RingMismatch(RingError):
    pass


class NotIdempotent(RingError):
    pass


class NotNilIdeal(RingError):
    pass


class DefectNotInIdeal(RingError):
    pass


class NotHomomorphism(RingError):
    pass


class NotEndomorphism(NotHomomorphism):
    pass


class NotInvolution(RingError):
    pass


class CapExceeded(SemiInvError):
    def __init__(self, size: int, cap: int):
        self.size, self.cap = size, cap
        super().__init__(f"enumeration of {size} elements exceeds cap {cap}")


class CompatibilityViolation(SemiInvError):
    pass


class IncompatibleSubringSpec(SemiInvError):
    pass


class UnsupportedSpec(SemiInvError):
    pass


class LevelUnsolvable(SemiInvError):
    def __init__(self, level: int):
        self.level = level
        super().__init__(f"candidate is not in the closure at level {level}")


class ModuleError(SemiInvError):
    pass


class NotExact(SemiInvError):
    pass
