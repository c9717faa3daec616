"""Exception hierarchy.

Two families matter: ordinary input/shape errors, and theorem-violation
events.  A theorem violation means a statement this engine exists to check
failed on a concrete instance; those always carry a replayable witness and
must never be swallowed.
"""

from __future__ import annotations


class SpacelabError(Exception):
    """Base class for every error raised by this package."""


class DuplicateName(SpacelabError):
    pass


class CycleDetected(SpacelabError):
    """Reflexive-transitive closure of the covers violates antisymmetry."""


class SizeCap(SpacelabError):
    """A construction would exceed a configured size cap."""


class NotMonotone(SpacelabError):
    """An assignment does not preserve the order; args carry a witness pair."""


class ShapeMismatch(SpacelabError):
    """Domain/codomain of composed or compared maps do not line up."""


class NotLattice(SpacelabError):
    pass


class NotDistributive(SpacelabError):
    pass


class NotDLatHom(SpacelabError):
    """A lattice map fails one of the four lattice-homomorphism laws.

    args: (law name, witness tuple).
    """


class NotInflationary(SpacelabError):
    pass


class NotIdempotent(SpacelabError):
    pass


class NotJoinHom(SpacelabError):
    pass


class GroupRequired(SpacelabError):
    """Operation needs inverses but was given a bare monoid."""


class AxiomFailure(SpacelabError):
    """Algebraic law failure while building a monoid/group/action."""


class UnitLawFailure(AxiomFailure):
    pass


class AssocFailure(AxiomFailure):
    pass


class ConditionFailure(SpacelabError):
    """A stated inequality/equation fails; args carry the name and witness."""


class InstanceSyntaxError(SpacelabError):
    """Malformed instance document (bad JSON or wrong shape)."""


class UnresolvedReference(SpacelabError):
    """An instance file refers to a name that is not defined."""


class LawViolation(SpacelabError):
    """An instance file defines an object whose laws fail validation."""


class TheoremViolation(SpacelabError):
    """A machine-checked statement failed on a concrete instance.

    Carries a reproducible witness dump (a dict that re-parses as an
    instance fragment).  Detecting these is the point of the package, so
    they abort loudly instead of degrading into a warning.
    """

    def __init__(self, event: str, message: str, witness: dict | None = None):
        super().__init__(f"{event}: {message}")
        self.event = event
        self.witness = witness or {}


class NotPrincipal(TheoremViolation):
    """A prime-filter intersection was not a principal up-set."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__("not-principal", message, witness)


class SplitObstruction(TheoremViolation):
    """Fixed points of an inflationary idempotent failed to form the
    expected distributive sublattice."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__("split-obstruction", message, witness)
