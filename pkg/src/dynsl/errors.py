"""Exception hierarchy shared by all modules."""


class DSLError(Exception):
    pass


class DSLSyntaxError(DSLError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{line}:{column}: {message}")
        self.msg = message
        self.line = line
        self.column = column


class ModalityPresent(DSLError):
    pass


class UnsupportedModality(DSLError):
    pass


class StepLimitExceeded(DSLError):
    pass


class FuelExhaustedError(DSLError):
    """A loop ran out of fuel, so a satisfaction question has no bounded answer."""


class UniverseExhausted(DSLError):
    pass


class OutOfUniverse(DSLError):
    pass


class MissingInvariant(DSLError):
    pass


class NotBasic(DSLError):
    pass


class SideConditionViolated(DSLError):
    pass
