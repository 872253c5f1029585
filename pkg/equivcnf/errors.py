class EquivCNFError(Exception):
    """Base class for every error raised by the library."""
    pass


class InvertZero(EquivCNFError):
    """Raised when inverting a series or field element that is zero."""
    pass


class PrecisionExhausted(EquivCNFError):
    """Raised when a result would have an empty window of known coefficients."""
    pass


class DecompositionInvalid(EquivCNFError):
    """Raised when a decomposition is used before it has been verified."""
    pass


class HypothesisViolated(EquivCNFError):
    """Raised when an operation's standing hypothesis fails (e.g. l divides |G'|)."""
    pass


class NotIsomorphism(EquivCNFError):
    """Raised when a decomposition map fails to be an algebra isomorphism."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFinitePresentation(EquivCNFError):
    """Raised when a presentation matrix does not present a finite module."""
    pass


class NotFree(EquivCNFError):
    """Raised when a module has no F_q[G]-basis; carries a certificate when one was found."""

    def __init__(self, message: str, certificate: dict | None = None):
        super().__init__(message)
        self.certificate = certificate or {}


class NotAutomorphism(EquivCNFError):
    """Raised when an action matrix does not respect multiplication in K."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class CayleyMismatch(EquivCNFError):
    """Raised when action matrices do not realize the Cayley table."""
    pass


class NotSeparable(EquivCNFError):
    """Raised when the defining polynomial of a cover is not separable."""
    pass


class WildWithoutBasis(EquivCNFError):
    """Raised when a wild cover is used without a taming basis."""
    pass


class InvalidTamingBasis(EquivCNFError):
    """Raised when a user supplied taming basis fails validation."""

    def __init__(self, message: str, reason: str = ""):
        super().__init__(message)
        self.reason = reason or message


class CarrierMismatch(EquivCNFError):
    """Raised when twisted polynomials over different carriers are combined."""
    pass


class NoFrobenius(EquivCNFError):
    """Raised when a Drinfeld action is requested on a module without a ring structure."""
    pass


class BudgetExceeded(EquivCNFError):
    """Base class for searches that ran out of their configured budget."""
    pass


class DivergenceSuspected(BudgetExceeded):
    """Raised when the exponential series cannot be certified within the depth cap."""
    pass


class NucleusTooSmall(BudgetExceeded):
    """Raised when the chosen ball is not a common nucleus."""
    pass


class HypothesisUnverified(EquivCNFError):
    """Raised when ball inclusions needed by a comparison cannot be verified."""
    pass


class StabilizationBudgetExceeded(BudgetExceeded):
    """Raised when the exp image does not stabilize within the ball budget."""
    pass


class IsometryBallNotFound(BudgetExceeded):
    """Raised when no ball on which exp is an isometry is found."""
    pass


class RankNotReached(BudgetExceeded):
    """Raised when the unit lattice search stops before reaching full rank."""
    pass


class NoSectionAvailable(EquivCNFError):
    """Raised when no A[G]-section of the class module can be built."""
    pass


class NotFreeLattice(EquivCNFError):
    """Raised when a lattice is required to be A[G]-free and is not."""
    pass


class UNotFree(NotFreeLattice):
    """Raised when the unit lattice is not A[G]-free."""
    pass


class MismatchWithDiff(EquivCNFError):
    """Raised when two sides of an identity disagree; carries the first differing exponent."""

    def __init__(self, message: str, diff: dict | None = None):
        super().__init__(message)
        self.diff = diff or {}


class NotPolynomialWithinPrecision(EquivCNFError):
    """Raised when a series expected to be a polynomial has nonzero negative part."""
    pass


class ConfigError(EquivCNFError):
    """Raised for invalid session or fixture configuration."""
    pass
