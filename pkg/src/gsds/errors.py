"""Exception types shared across the package."""


class GsdsError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatchError(GsdsError):
    """Operands belong to different fields (or have mismatched arity)."""


class UnsupportedEncodingError(GsdsError):
    """Balanced encoding requested for a field that has none."""


class PolyParseError(GsdsError):
    """Syntax or semantic error in polynomial text, with a position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ContinuityError(GsdsError):
    """A piecewise-linear function is discontinuous at a breakpoint."""

    def __init__(self, breakpoint_value, gap):
        super().__init__(
            f"discontinuity at breakpoint {breakpoint_value!r}: gap {gap!r}"
        )
        self.breakpoint_value = breakpoint_value
        self.gap = gap


class ModelValidationError(GsdsError):
    """A model failed validation; carries the full report."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class ContradictoryDataError(GsdsError):
    """The same input state was observed with two different outputs."""

    def __init__(self, state, first, second):
        super().__init__(
            f"input state {state} maps to both {first} and {second}"
        )
        self.state = state
        self.first = first
        self.second = second


class CompatibilityError(GsdsError):
    """A translation check failed; carries the counterexamples."""

    def __init__(self, check):
        super().__init__(
            f"translation check failed on {len(check.counterexamples)} "
            f"of {check.checked} pairs"
        )
        self.check = check


class StateSpaceLimitError(GsdsError):
    """The state space is larger than the configured enumeration limit."""


class ZenoError(GsdsError):
    """The hybrid simulation exceeded the event budget."""
