"""Exception hierarchy shared by every module.

All domain failures derive from :class:`GRError`, which the command line
front end maps to exit status 1 with a JSON payload on stderr.
"""


class GRError(Exception):
    """Base class for domain errors."""

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


# geometry
class SingularMetric(GRError):
    pass


class DomainError(GRError):
    pass


class DegenerateMetric(GRError):
    pass


# kinematics
class SuperluminalSpeed(GRError):
    pass


class NonTimelikeSegment(GRError):
    pass


# geodesics
class HorizonCrossing(GRError):
    pass


class SingularityReached(GRError):
    pass


class UnboundOrbit(GRError):
    pass


class PhotonCaptured(GRError):
    pass


class NotInterior(GRError):
    pass


class NonNegativeTheta(GRError):
    pass


class InconsistentConstraint(GRError):
    pass


# cosmology
class InconsistentInitialData(GRError):
    pass


class NonPositiveScale(GRError):
    pass


class OutOfInterval(GRError):
    pass


class UnstudiedRegime(GRError):
    pass


# stellar
class HorizonFormation(GRError):
    pass


class NoSurface(GRError):
    pass


class InconsistentMass(GRError):
    pass


class BeyondBuchdahl(GRError):
    pass


# asymptotics
class ChartDomain(GRError):
    pass


class CoordinateSingularity(GRError):
    pass


# constraints
class BarrierFailure(GRError):
    pass


class NoConvergence(GRError):
    pass


class IterationDiverged(GRError):
    pass


# waves
class CFLViolation(GRError):
    pass


class NonUnitDirection(GRError):
    pass


class QuadratureDomain(GRError):
    pass
