"""Exceptions raised by the simulator and the protocols it runs."""

from __future__ import annotations


class ProtocolViolation(RuntimeError):
    """A live invariant failed during a run."""


class ChannelOverflow(ProtocolViolation):
    """Two signals emitted on one port in one round."""


class ParityViolation(ProtocolViolation):
    """Both or neither visit counts are even."""


class ArrivalOutsideWindow(ProtocolViolation):
    """A wave arrived outside its two-round window."""


class EndpointDisagreement(ProtocolViolation):
    """The two endpoints of an edge disagree on whether it is a cut-edge."""


class FramingViolation(ProtocolViolation):
    """A unary frame was malformed or the pipelining bound was broken."""


class ScheduleInfeasible(ProtocolViolation):
    """A wave emission round was already in the past."""


class WaveCountMismatch(ProtocolViolation):
    """Wave records out of order or not matching the known vertex count."""


class UnexpectedSignal(ProtocolViolation):
    """A signal arrived that the receiving automaton cannot be in a state to accept."""


class PhaseRegression(ProtocolViolation):
    """A vertex moved backwards through the pipeline phases."""


class RoundBudgetExceeded(RuntimeError):
    """The protocol did not terminate within ``max_rounds``."""


# kernel error codes
E_NONE = 0
E_OVERFLOW = 1
E_PARITY = 2
E_WINDOW = 3
E_FRAMING = 4
E_SCHEDULE = 5
E_WAVECOUNT = 6
E_UNEXPECTED = 7
E_PHASE = 8

ERROR_TYPES: dict[int, type[ProtocolViolation]] = {
    E_OVERFLOW: ChannelOverflow,
    E_PARITY: ParityViolation,
    E_WINDOW: ArrivalOutsideWindow,
    E_FRAMING: FramingViolation,
    E_SCHEDULE: ScheduleInfeasible,
    E_WAVECOUNT: WaveCountMismatch,
    E_UNEXPECTED: UnexpectedSignal,
    E_PHASE: PhaseRegression,
}
