"""Exception hierarchy.

Errors that signal a refutation of rank preservation derive from
``RefutationError`` so callers (the CLI in particular) can tell "the input
map is not rank preserving" apart from "the input is malformed".
"""


class CSLError(Exception):
    pass


class InputError(CSLError, ValueError):
    pass


class DimensionError(InputError):
    pass


class MembershipError(InputError):
    pass


class ZeroVectorError(InputError):
    pass


class RankError(CSLError, ValueError):
    pass


class FactorError(CSLError, ValueError):
    pass


class SingularError(CSLError, ValueError):
    pass


class UnachievableRank(CSLError, ValueError):
    pass


class RefutationError(CSLError):
    """The map violates a necessary condition of rank preservation."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence or {}


class NotRankPreserving(RefutationError):
    pass


class ConflictError(RefutationError):
    pass


class ViolationError(RefutationError):
    pass


class AlphaError(RefutationError):
    pass


class CoherenceError(RefutationError):
    pass


class OrthogonalityError(RefutationError):
    pass


class CoverageError(RefutationError):
    pass
