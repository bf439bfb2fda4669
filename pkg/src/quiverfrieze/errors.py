"""Exception types shared across the package."""


class QuiverFriezeError(Exception):
    """Base class for all package-specific errors."""


class InexactDivision(QuiverFriezeError):
    """A polynomial division that was expected to be exact left a remainder.

    Every division performed by the frieze machinery is exact when the
    model data is consistent, so this error always signals a broken
    invariant upstream (a mis-indexed frame object or a wrong convention),
    never a routine numerical condition.
    """


class NotEuclidean(QuiverFriezeError):
    """The quiver's Tits form does not have a one-dimensional radical."""


class NotTransjective(QuiverFriezeError):
    """A dimension vector does not belong to the preprojective/preinjective family."""


class RecognitionFailed(QuiverFriezeError):
    """A table dimension vector could not be resolved to a transjective label."""


class NotAModule(QuiverFriezeError):
    """Euler characteristics are only defined for modules, not shifted projectives."""


class InternalMismatch(QuiverFriezeError):
    """Two independent computation routes disagreed (invariant breach)."""


class GraphMismatch(QuiverFriezeError):
    """Reorientation target does not have the expected underlying graph."""


class SectionSearchExhausted(QuiverFriezeError):
    """No slice of the repetition quiver realises the requested orientation."""


class CapExceeded(QuiverFriezeError):
    """An enumeration oracle was asked to exceed its hard size cap."""


class InterpolationInconsistent(QuiverFriezeError):
    """Finite-field point counts do not fit a single integer polynomial."""


class WindowExceeded(QuiverFriezeError):
    """A frieze evaluation went past the configured slice window."""
