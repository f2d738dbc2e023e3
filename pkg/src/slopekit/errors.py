"""Exception hierarchy shared across the toolkit.

Every error raised on purpose derives from :class:`SlopekitError`, so the
command line driver can separate expected mathematical/usage failures from
genuine bugs.  Concrete subclasses live next to the code that raises them;
only the base class is defined here to avoid import cycles.
"""


class SlopekitError(Exception):
    """Base class for all errors raised by slopekit."""
