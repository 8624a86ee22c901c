"""
Error hierarchy shared by every deepverif module.

Every error raised on purpose by the library derives from DeepverifError so
that the command line can report it as a one-line diagnostic.
"""


class DeepverifError(Exception):
    """Base class of all deepverif errors."""


class DegenerateGrid(DeepverifError):
    """The grid has no latitude row with a positive cosine weight."""


class OutOfDomain(DeepverifError, LookupError):
    """A query point lies outside the grid's bounding box."""


class MissingStep(DeepverifError):
    """A run of hourly fields has a gap or does not cover the window."""


class SpecMismatch(DeepverifError, ValueError):
    """Two fields, stacks or weights do not describe the same grid."""


class InvalidData(DeepverifError, ValueError):
    """Non-finite or otherwise unusable values were encountered."""


class EmptyInput(DeepverifError, ValueError):
    """A reduction was asked for over zero samples."""


class EmptyEnsemble(EmptyInput):
    """An ensemble operation was asked for over zero members."""


class FormatError(DeepverifError, ValueError):
    """A file does not follow its declared format."""


class UnsupportedVariable(DeepverifError):
    """A forecaster was asked for a variable it does not know."""


class InsufficientHistory(DeepverifError):
    """A forecast request carries fewer past states than the model needs."""


class InvalidStep(DeepverifError, ValueError):
    """A rollout step does not divide the target lead time."""


class TrainingDiverged(DeepverifError):
    """No finite loss could be reached after the maximum step halvings."""


class NonSmoothPoint(DeepverifError):
    """A residual is exactly zero, the L1 loss has a kink there."""


class LeadGridMismatch(DeepverifError, ValueError):
    """Score files to be compared do not share the same lead times."""


class NothingScored(DeepverifError):
    """A command produced zero scoreable pairs."""


class MemberError(DeepverifError):
    """
    An error raised while propagating a single ensemble member.

    :param member: index of the member whose propagation failed
    :param cause: the original exception
    """
    def __init__(self, member, cause):
        super().__init__("member {}: {}".format(member, cause))
        self.member = member
        self.cause = cause
