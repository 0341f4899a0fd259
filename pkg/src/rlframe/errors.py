"""Exception hierarchy shared by every module of the framework."""


class RLFrameError(Exception):
    pass


class DomainError(RLFrameError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class StateError(RLFrameError, RuntimeError):
    """An operation was called while the object is in the wrong state."""


class ConfigurationError(RLFrameError, ValueError):
    pass


class UnsupportedOperationError(RLFrameError, TypeError):
    pass


class DecodeError(RLFrameError, ValueError):
    """A byte sequence is not a valid snapshot."""


class VersionError(DecodeError):
    def __init__(self, found, expected):
        super().__init__(f"snapshot format version {found} is not supported "
                         f"(expected version {expected})")
        self.found = found
        self.expected = expected
