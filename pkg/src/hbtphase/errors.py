"""Exception hierarchy shared by all modules."""


class HBTPhaseError(Exception):
    """Base class for errors raised by :mod:`hbtphase`."""


class InvalidState(HBTPhaseError, ValueError):
    """A state, projector or setup violates its invariants."""


class DegenerateError(HBTPhaseError, ValueError):
    """A quantity is undefined for the given (degenerate) input.

    Raised for orthogonal neighbours in a Pancharatnam circuit, antipodal
    neighbours in a geodesic polygon, zero-count normalisations and
    destructive exchange in the two-photon output state.
    """


class FarFieldError(HBTPhaseError, ValueError):
    """A far-field-only formula was evaluated outside its regime."""


class CapacityError(HBTPhaseError, RuntimeError):
    """An exact computation exceeds its configured size cap."""
