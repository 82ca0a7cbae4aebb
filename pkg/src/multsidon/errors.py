"""Exception types shared across the package."""


class MultSidonError(Exception):
    """Base class for all package-specific errors."""


class SieveCapacityError(MultSidonError):
    """A sieve-backed operation was asked to exceed its configured capacity."""


class PreconditionTooSmall(MultSidonError, ValueError):
    """A ground set is below the minimum size the construction supports."""


class GroundSetTooSmall(MultSidonError, ValueError):
    """The ground set cannot hold the four residue blocks of the embedding."""


class PreconditionViolated(MultSidonError, ValueError):
    """A caller-supplied structure fails the preconditions of a certifier."""


class BoundViolation(MultSidonError):
    """A certified quantitative bound failed; this signals an implementation bug."""


class NoDecomposition(MultSidonError):
    """No valid u*v split was found; must never fire for valid inputs."""


class CapExceeded(MultSidonError, ValueError):
    """An exhaustive-search operation was asked to exceed its hard cap."""
