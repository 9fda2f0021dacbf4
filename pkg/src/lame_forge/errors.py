"""Exception hierarchy for lame_forge."""


class LameForgeError(Exception):
    """Base class for all package-specific failures."""


class ZeroPolynomialDivision(LameForgeError):
    """Division by the zero polynomial."""


class RootFindingError(LameForgeError):
    """Simultaneous root iteration failed to converge within the cap."""


class InconsistentRoots(LameForgeError):
    """Supplied root multiset is not a valid root list of the denominator."""


class PoleClusterError(LameForgeError):
    """Two poles listed as distinct are closer than the separation threshold."""


class LogTermError(LameForgeError):
    """Antiderivative would contain a logarithm (simple pole present)."""


class PoleHit(LameForgeError):
    """Evaluation point coincides with a pole of the rational function."""


class ArrangementHit(LameForgeError):
    """Configuration touches the singular arrangement (coincident points)."""


class NonConvergence(LameForgeError):
    """Newton iteration exhausted its iteration budget."""


class StepIntoArrangement(LameForgeError):
    """Line search could not produce a step avoiding the arrangement."""


class NotRealAxisProblem(LameForgeError):
    """Stieltjes placements need real charge locations and positive strengths."""


class NotASolution(LameForgeError):
    """Candidate polynomial does not solve the equation within tolerance."""


class DegreeViolation(LameForgeError):
    """Recovered coefficient polynomial exceeds its admissible degree."""


class NoConsistentRho(LameForgeError):
    """No scalar parameter makes the parametric equation exactly solvable."""


class NotFuchs0(LameForgeError):
    """Operation requires an operator of Fuchs index zero."""


class RecurrenceBreakdown(LameForgeError):
    """A leading recurrence coefficient vanished; solution not unique."""


class ComplexDataUnsupported(LameForgeError):
    """Critical-point classification needs real (or conjugate-paired) data."""


class NotCritical(LameForgeError):
    """Point fails the criticality residual check."""


class PochhammerPole(LameForgeError):
    """Lower Pochhammer symbol vanished inside the requested range."""


class NonMonomialConstraint(LameForgeError):
    """Scaling requires a single-power monomial constraint."""
