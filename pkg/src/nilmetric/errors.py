"""Exception hierarchy.

Every domain error carries an optional ``witness`` so the CLI can emit it
in a structured report.
"""

from __future__ import annotations

from typing import Any


class NilmetricError(Exception):
    """Base class for all domain errors raised by this package."""

    def __init__(self, message: str = "", witness: Any = None):
        super().__init__(message)
        self.witness = witness


class InvalidBasis(NilmetricError):
    pass


class InvalidShape(NilmetricError):
    pass


class JacobiViolation(NilmetricError):
    pass


class AntisymmetryViolation(NilmetricError):
    pass


class NotNilpotent(NilmetricError):
    pass


class NotTwoStep(NilmetricError):
    pass


class DegenerateCenter(NilmetricError):
    pass


class DegenerateMetric(NilmetricError):
    pass


class DegeneratePlane(NilmetricError):
    pass


class NotSkewAdjoint(NilmetricError):
    pass


class SingularT(NilmetricError):
    pass


class UnknownExample(NilmetricError):
    pass


class NotAdInvariant(NilmetricError):
    pass


class InternalInconsistency(NilmetricError):
    """A condition guaranteed by the theory failed; indicates a bug."""


class RhoNotSkew(NilmetricError):
    pass


class RhoNotInjective(NilmetricError):
    pass


class RhoUUNonzero(NilmetricError):
    pass


class SchemaError(NilmetricError):
    """Malformed input; ``pointer`` is a JSON pointer to the offending node."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class InvalidDataSet(NilmetricError):
    """One or more data-set invariants fail.

    ``violations`` always lists every failing invariant, so callers see the
    full diagnosis rather than the first problem only.
    """

    def __init__(self, message: str = "", witness: Any = None, violations=None):
        super().__init__(message, witness)
        self.violations = list(violations) if violations is not None else [self]

    @property
    def kinds(self) -> set[str]:
        return {type(v).__name__ for v in self.violations}


class AdInvarianceViolation(InvalidDataSet):
    pass


class NotHomomorphism(InvalidDataSet):
    pass


class NotFaithful(InvalidDataSet):
    pass


class TrivialSubrep(InvalidDataSet):
    pass


class RepNotSkewAdjoint(InvalidDataSet, NotSkewAdjoint):
    pass
