"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""

from __future__ import annotations


class QQWError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class ConfigError(QQWError):
    """Malformed or incomplete configuration document."""

    def __init__(self, message: str, path: str = "") -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class NotPrime(QQWError):
    pass


class QIsTrivial(QQWError):
    pass


class ZeroInput(QQWError):
    pass


class OutOfRange(QQWError):
    pass


class TruncationOverflow(QQWError):
    pass


class NotBimoduleCompatible(QQWError):
    pass


class GammaConstraintViolated(QQWError):
    pass


class SigmaConstraintViolated(QQWError):
    def __init__(self, condition: str, message: str) -> None:
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class SigmaFourViolated(SigmaConstraintViolated):
    def __init__(self, message: str) -> None:
        super().__init__("sigma4", message)


class GammaEFConditionViolated(QQWError):
    pass


class NotFiltered(QQWError):
    pass


class CrossCheckFailed(QQWError):
    pass


class WrongOrderOfQ(QQWError):
    pass


class OracleMismatch(QQWError):
    pass


class EigenvaluesNotInField(QQWError):
    pass


class TauUnsolvable(QQWError):
    pass


class ScalarConstraintViolated(QQWError):
    pass


class CaseUnsupported(QQWError):
    pass


class GlueMismatch(QQWError):
    pass


class NotTransitive(QQWError):
    pass


class MixedGamma(QQWError):
    pass


class SingularMatrix(QQWError):
    pass


class GroupActionIncompatible(QQWError):
    """The group generator does not move arrows along with their endpoints."""
