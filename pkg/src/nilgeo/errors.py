"""Exception types shared across the package."""


class NilgeoError(Exception):
    """Base class for everything this package raises on purpose."""


class InputError(NilgeoError):
    """Malformed or inconsistent input: parse errors, bad dimensions, invalid data."""


class CheckError(NilgeoError):
    """A geometric verification failed.

    Carries the name of the failing clause and an exact witness (a dict of
    rendered rational values), so every failure is reproducible by a library call.
    """

    def __init__(self, check: str, message: str, witness: dict | None = None):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.witness = dict(witness or {})
