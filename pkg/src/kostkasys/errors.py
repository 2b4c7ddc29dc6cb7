"""Exception types.  ``exit_code`` is what the command line reports."""


class KostkaError(Exception):
    exit_code = 1


class InputError(KostkaError):
    """Unresolvable or invalid input: schema, table validation, labels, Malle."""
    exit_code = 2


class MalleViolation(InputError):
    def __init__(self, label):
        super().__init__(f"Malle condition violated: the conjugate of {label} "
                         f"lies in a different phylum")
        self.label = label


class TruncationError(KostkaError):
    """A quotient failed finite-dimensionality certification, or a
    truncation is too small for the requested computation."""
    exit_code = 4


class InternalError(KostkaError):
    """A runtime invariant was breached."""
    exit_code = 1
