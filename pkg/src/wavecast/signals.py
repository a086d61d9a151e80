"""The closed message alphabet shared by every protocol phase."""

from __future__ import annotations

from enum import IntEnum


class Signal(IntEnum):
    START = 0
    ACCEPT = 1
    REJECT = 2
    OK_BFS = 3
    NUM_ONE = 4
    NUM_END = 5
    DIST_ONE = 6
    DIST_END = 7
    DIST_OK = 8
    WAVE = 9
    AGG_MAX = 10
    AGG_ONE = 11
    AGG_ENDMAX = 12
    VAL_ONE = 13
    VAL_END = 14
    PHASE_GO = 15


#: channel slot holds no signal this round
NO_SIGNAL = -1
ALPHABET_SIZE = len(Signal)
BITS_PER_SIGNAL = (ALPHABET_SIZE - 1).bit_length()

assert ALPHABET_SIZE <= 16 and BITS_PER_SIGNAL == 4

# Integer mirrors for compiled kernels.
START = int(Signal.START)
ACCEPT = int(Signal.ACCEPT)
REJECT = int(Signal.REJECT)
OK_BFS = int(Signal.OK_BFS)
NUM_ONE = int(Signal.NUM_ONE)
NUM_END = int(Signal.NUM_END)
DIST_ONE = int(Signal.DIST_ONE)
DIST_END = int(Signal.DIST_END)
DIST_OK = int(Signal.DIST_OK)
WAVE = int(Signal.WAVE)
AGG_MAX = int(Signal.AGG_MAX)
AGG_ONE = int(Signal.AGG_ONE)
AGG_ENDMAX = int(Signal.AGG_ENDMAX)
VAL_ONE = int(Signal.VAL_ONE)
VAL_END = int(Signal.VAL_END)
PHASE_GO = int(Signal.PHASE_GO)
