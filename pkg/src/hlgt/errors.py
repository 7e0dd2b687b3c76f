"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for invalid input, 2 for a resource cap, 3 for a broken internal invariant.
"""


class HLGTError(Exception):
    exit_code = 3


class ValidationError(HLGTError, ValueError):
    exit_code = 1


class ResourceCapError(HLGTError):
    exit_code = 2


class InvariantBreach(HLGTError, AssertionError):
    exit_code = 3


# groups
class NotAGroup(ValidationError):
    pass


class OrderCapExceeded(ResourceCapError):
    pass


class NotAHom(ValidationError):
    pass


class NotAnAction(ValidationError):
    pass


# crossed modules
class PeifferOneViolation(ValidationError):
    pass


class PeifferTwoViolation(ValidationError):
    pass


# lattices
class DanglingReference(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class NotComposable(ValidationError):
    pass


class OpenBoundaryWord(ValidationError):
    pass


class BlobWordNotTrivial(ValidationError):
    pass


class BlobHomologyInvalid(ValidationError):
    pass


class UnknownBuiltin(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# configurations / operators
class MalformedWord(ValidationError):
    pass


class NotClassFunction(ValidationError):
    pass


class NotFakeFlat(ValidationError):
    pass


class UnknownCell(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SpaceTooLarge(ResourceCapError):
    pass


class DimensionCapExceeded(ResourceCapError):
    pass


class FixtureMismatch(ValidationError):
    pass


# representation theory
class OrthogonalityFailure(InvariantBreach):
    pass


class NoMatchingIrrep(InvariantBreach):
    pass


class IncompleteDecomposition(InvariantBreach):
    pass


class ZeroVector(ValidationError):
    pass
