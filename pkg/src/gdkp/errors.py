"""Semantic exception hierarchy for the gdkp package."""


class GdkpError(Exception):
    """Base class for all errors raised by gdkp."""


class ImpermeableCouplingError(GdkpError):
    """The coupling confines probability current; the chain decouples and no
    transfer matrix exists."""


class BandEdgeError(GdkpError):
    """Requested evaluation exactly at a mass-gap edge (eps = +-m) where the
    plane-wave basis degenerates."""


class WindowTooSmallError(GdkpError):
    """The energy window contains fewer than two bands."""


class DegenerateBracketingError(GdkpError):
    """A scan cell contains an even-order root that could not be resolved."""


class GridNotSymmetricError(GdkpError):
    """The momentum grid is not invariant under k -> -k (mod 2*pi)."""


class GaugeSingularError(GdkpError):
    """Both gauge-fixing rows of the coupling-condition matrix vanish; the
    analytic eigenspinor coefficients are undetermined at this momentum."""


class MomentumMismatchError(GdkpError):
    """Overlap requested between states that do not share coupling and mass."""


class UnimodularError(GdkpError):
    """Both transfer-matrix eigenvalues lie on the unit circle (energy inside
    a band), so there is no decaying direction."""


class GapUnresolvedError(GdkpError):
    """A bulk gap adjacent to the requested band is not available from the
    computed band structure."""


class BandNotIsolatedError(GdkpError):
    """The requested band is not isolated: an adjacent gap closes somewhere in
    the Brillouin zone."""


class NumericalDegeneracyError(GdkpError):
    """Tolerance tests disagree on which inversion branch applies to a
    strength vector."""
