# subspace_lab/errors.py

"""
Exception hierarchy shared by the library, the CLI and the HTTP API.

Every class carries the process exit code the CLI uses and the HTTP status
the API answers with, so both surfaces translate failures the same way.
"""


class SubspaceLabError(Exception):
    exit_code = 1
    http_status = 500


class ConfigError(SubspaceLabError):
    """Malformed input: a config file, a flag or a request body."""

    exit_code = 1
    http_status = 422


class PreconditionError(SubspaceLabError):
    """An operation was called outside its documented domain."""

    exit_code = 1
    http_status = 422


class ClosureCapExceeded(SubspaceLabError):
    exit_code = 1
    http_status = 422

    def __init__(self, size: int, cap: int):
        super().__init__(f"Vojta closure reached {size} subspaces (cap {cap}) without converging")
        self.size = size
        self.cap = cap


class InvariantViolation(SubspaceLabError):
    """A property guaranteed by the mathematics failed on actual data."""

    exit_code = 2
    http_status = 409


class UndecidedComparison(SubspaceLabError):
    """A certified comparison could not be settled before the precision cap."""

    exit_code = 3
    http_status = 503

    def __init__(self, what: str, bits: int):
        super().__init__(f"Undecided comparison at {bits} bits: {what}")
        self.what = what
        self.bits = bits
