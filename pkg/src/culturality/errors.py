"""Exception hierarchy.

Input problems derive from :class:`InputError` (CLI exit status 2), numerical
and clustering problems from :class:`NumericalError` (exit status 3).
"""


class CulturalityError(Exception):
    exit_code = 1


class InputError(CulturalityError, ValueError):
    exit_code = 2


class NumericalError(CulturalityError, ArithmeticError):
    exit_code = 3


class ConfigError(InputError):
    pass


class MalformedRow(InputError):
    def __init__(self, line, reason=""):
        self.line = line
        msg = f"line {line}: malformed row"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class MissingAttribute(InputError):
    def __init__(self, name, cohort):
        self.name = name
        self.cohort = cohort
        super().__init__(f"attribute {name!r} missing for cohort {cohort}")


class OutOfRange(InputError):
    def __init__(self, name, cohort, value):
        self.name = name
        self.cohort = cohort
        self.value = value
        super().__init__(f"{name!r} = {value} for cohort {cohort} is outside [0, 100]")


class DuplicateCohort(InputError):
    def __init__(self, society, gender):
        self.society = society
        self.gender = gender
        super().__init__(f"cohort ({society}, {gender}) appears more than once")


class InvalidRespondentCount(InputError):
    def __init__(self, cohort, n):
        self.cohort = cohort
        self.n = n
        super().__init__(f"cohort {cohort} has respondent count {n}, expected >= 1")


class UnknownCohort(InputError, KeyError):
    def __init__(self, society, gender):
        self.society = society
        self.gender = gender
        super().__init__(f"no cohort ({society}, {gender})")

    def __str__(self):
        return self.args[0]


class EmptyTable(InputError):
    pass


class MissingHdi(InputError):
    def __init__(self, society):
        self.society = society
        super().__init__(f"no HDI value configured for society {society!r}")


class DimensionMismatch(InputError):
    pass


class DomainError(InputError):
    pass


class ZeroWeightSum(InputError):
    pass


class InvalidK(InputError):
    pass


class SingularAlpha(NumericalError):
    pass


class ClusteringError(NumericalError):
    pass
