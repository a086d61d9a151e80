"""Compiled per-vertex automaton for the whole pipeline and its round loop.

Everything here works on flat arrays so that it can run under numba. The
state of vertex ``u`` lives in row ``u`` of ``V``; its ports are the channel
slots ``off[u] .. off[u + 1] - 1`` (port p is slot ``off[u] + p - 1``) and its
self-loop is the pseudo-slot ``S + u`` where ``S = off[-1]``. A handler only
touches its own row and its own slots. ``rev`` is read by the delivery step
alone.
"""

from __future__ import annotations

import numpy as np

from ._jit import njit
from .errors import (
    E_FRAMING,
    E_OVERFLOW,
    E_PARITY,
    E_PHASE,
    E_SCHEDULE,
    E_UNEXPECTED,
    E_WAVECOUNT,
    E_WINDOW,
)
from .signals import (
    ACCEPT,
    AGG_ENDMAX,
    AGG_MAX,
    AGG_ONE,
    DIST_END,
    DIST_OK,
    DIST_ONE,
    NO_SIGNAL,
    NUM_END,
    NUM_ONE,
    OK_BFS,
    REJECT,
    START,
    VAL_END,
    VAL_ONE,
    WAVE,
)

# phases, in pipeline order
PH_IDLE = 0
PH_BFS = 1
PH_ENUM = 2
PH_DIST = 3
PH_WAVE = 4
PH_AGG = 5
PH_BCAST = 6
PH_DONE = 7

WAVE_GAP = 5
QUIET_ROUNDS = 8

# link kinds per slot
LK_UNKNOWN = 0
LK_PARENT = 1
LK_CHILD = 2
LK_NONTREE = 3

# train stream kinds per incoming slot
TK_NONE = 0
TK_VISIT1 = 1
TK_VISIT2 = 2
TK_RELAY = 3
TGT_STOP = -1

# V columns
PH = 0
PAR = 1
NCH = 2
B_JOIN = 3
B_AWAIT = 4
B_KNOWN = 5
B_OKS = 6
B_OKSENT = 7
E_P1 = 8
E_P2 = 9
E_NUM = 10
E_NUMR = 11
E_PEND = 12
D_ONES = 13
D_LEVEL = 14
D_LEVELR = 15
D_ENDR = 16
D_ENDSENT = 17
D_OKS = 18
D_OKSENT = 19
W_T1 = 20
W_TOWN = 21
W_NREC = 22
W_CUR = 23
W_LAST = 24
W_QR = 25
W_OWN = 26
R_ECC = 27
R_CV = 28
R_CUT = 29
A_READY = 30
A_FRAME = 31
A_OPEN = 32
A_SENT = 33
C_FRAME = 34
C_CNT = 35
DONE_R = 36
L_BFS = 37
L_ENUM = 38
L_DIST = 39
L_AGG = 40
L_N = 41
L_NEXT_R = 42
L_NEXT_PH = 43
L_LAUNCH_R = 44
L_LAUNCH_TGT = 45
NV = 46

# P columns (rows: real slots then one self pseudo-slot per vertex)
LINK = 0
SSENT = 1
T_KIND = 2
T_TGT = 3
T_CNT = 4
T_ENDR = 5
CUTF = 6
AG_FR = 7
NP = 8

# meta entries
M_ROUNDS = 0
M_ERR = 1
M_ERRV = 2
M_ERRR = 3
M_MASK = 4
M_TLEN = 5
M_NDONE = 6
M_NQUIET = 7
M_STOPPED = 8
NMETA = 9


@njit
def _fail(meta, code, u, r):
    if meta[M_ERR] == 0:
        meta[M_ERR] = code
        meta[M_ERRV] = u
        meta[M_ERRR] = r


@njit
def _send(out, self_out, S, s, sig, meta, u, r):
    """Emit ``sig`` on slot ``s``; slots ``>= S`` are self-loops."""
    if s >= S:
        if self_out[s - S] != NO_SIGNAL:
            _fail(meta, E_OVERFLOW, u, r)
            return
        self_out[s - S] = sig
        return
    if out[s] != NO_SIGNAL:
        _fail(meta, E_OVERFLOW, u, r)
        return
    out[s] = sig


@njit
def _set_phase(V, u, ph, meta, r):
    if ph < V[u, PH]:
        _fail(meta, E_PHASE, u, r)
    else:
        V[u, PH] = ph


@njit
def number_from_counts(p1, p2):
    """Number of a vertex from its two visit counts; -1 on a parity violation."""
    e1 = p1 % 2 == 0
    e2 = p2 % 2 == 0
    if e1 == e2:
        return -1
    if e1:
        return p1 // 2 + 1
    return p2 // 2 + 1


@njit
def _next_child(P, s, hi):
    for c in range(s + 1, hi):
        if P[c, LINK] == LK_CHILD:
            return c
    return -1


# -- BFS -----------------------------------------------------------------------


@njit
def _bfs_inbox(u, r, lo, hi, inbox, out, self_out, S, V, P, meta):
    if V[u, B_JOIN] < 0:
        par = -1
        for s in range(lo, hi):
            if inbox[s] == START:
                par = s
                break
            if inbox[s] != NO_SIGNAL:
                _fail(meta, E_UNEXPECTED, u, r)
                return
        _set_phase(V, u, PH_BFS, meta, r)
        V[u, PAR] = par
        P[par, LINK] = LK_PARENT
        _send(out, self_out, S, par, ACCEPT, meta, u, r)
        await_ = 0
        for s in range(lo, hi):
            if s == par:
                continue
            if inbox[s] == START:
                P[s, LINK] = LK_NONTREE
                _send(out, self_out, S, s, REJECT, meta, u, r)
            else:
                P[s, SSENT] = 1
                await_ += 1
                _send(out, self_out, S, s, START, meta, u, r)
        V[u, B_JOIN] = r
        V[u, B_AWAIT] = await_
        if await_ == 0:
            V[u, B_KNOWN] = 1
        return
    for s in range(lo, hi):
        sig = inbox[s]
        if sig == START:
            if r != V[u, B_JOIN] + 1:
                _fail(meta, E_UNEXPECTED, u, r)
                return
            P[s, LINK] = LK_NONTREE
            _send(out, self_out, S, s, REJECT, meta, u, r)
        elif sig == ACCEPT or sig == REJECT:
            if P[s, SSENT] != 1:
                _fail(meta, E_UNEXPECTED, u, r)
                return
            P[s, SSENT] = 2
            V[u, B_AWAIT] -= 1
            if sig == ACCEPT:
                P[s, LINK] = LK_CHILD
                V[u, NCH] += 1
            elif P[s, LINK] == LK_UNKNOWN:
                P[s, LINK] = LK_NONTREE
        elif sig == OK_BFS:
            if P[s, LINK] != LK_CHILD:
                _fail(meta, E_UNEXPECTED, u, r)
                return
            V[u, B_OKS] += 1
    if V[u, B_AWAIT] == 0:
        V[u, B_KNOWN] = 1


@njit
def _bfs_tick(u, r, is_leader, out, self_out, S, V, meta):
    if V[u, B_JOIN] < 0 or V[u, B_OKSENT] == 1:
        return
    if V[u, B_KNOWN] == 1 and V[u, B_OKS] == V[u, NCH] and r > V[u, B_JOIN]:
        V[u, B_OKSENT] = 1
        if is_leader:
            V[u, L_BFS] = r
        else:
            _send(out, self_out, S, V[u, PAR], OK_BFS, meta, u, r)


@njit
def _bfs_launch(u, r, lo, hi, out, self_out, S, V, P, meta):
    _set_phase(V, u, PH_BFS, meta, r)
    V[u, B_JOIN] = r
    V[u, B_AWAIT] = hi - lo
    for s in range(lo, hi):
        P[s, SSENT] = 1
        _send(out, self_out, S, s, START, meta, u, r)
    if hi == lo:
        V[u, B_KNOWN] = 1
        V[u, B_OKSENT] = 1
        V[u, L_BFS] = r


# -- enumeration token train ----------------------------------------------------


@njit
def _first_child_or_self(P, u, lo, hi, S):
    c = _next_child(P, lo - 1, hi)
    if c < 0:
        return S + u
    return c


@njit
def _finish_visit(u, r, kind, count, V, meta):
    if kind == TK_VISIT1:
        V[u, E_P1] = count
    else:
        V[u, E_P2] = count
        k = number_from_counts(V[u, E_P1], count)
        if k < 0:
            _fail(meta, E_PARITY, u, r)
            return
        V[u, E_NUM] = k
        V[u, E_NUMR] = r


@njit
def _train_signal(u, r, x, sig, lo, hi, is_leader, out, self_out, S, V, P, meta):
    kind = P[x, T_KIND]
    if kind == TK_NONE:
        if x >= S:
            kind = TK_VISIT2
            tgt = V[u, PAR] if V[u, PAR] >= 0 else TGT_STOP
        elif P[x, LINK] == LK_PARENT:
            kind = TK_VISIT1
            tgt = _first_child_or_self(P, u, lo, hi, S)
            _set_phase(V, u, PH_ENUM, meta, r)
        elif P[x, LINK] == LK_CHILD:
            nxt = _next_child(P, x, hi)
            if nxt >= 0:
                kind = TK_RELAY
                tgt = nxt
            else:
                kind = TK_VISIT2
                tgt = V[u, PAR] if V[u, PAR] >= 0 else TGT_STOP
        else:
            _fail(meta, E_UNEXPECTED, u, r)
            return
        P[x, T_KIND] = kind
        P[x, T_TGT] = tgt
    elif kind < 0:
        _fail(meta, E_UNEXPECTED, u, r)
        return
    tgt = P[x, T_TGT]
    if sig == NUM_ONE:
        if kind != TK_RELAY:
            P[x, T_CNT] += 1
        if tgt != TGT_STOP:
            _send(out, self_out, S, tgt, NUM_ONE, meta, u, r)
        return
    # NUM_END closes the stream on this slot
    P[x, T_KIND] = -kind
    if kind == TK_RELAY:
        _send(out, self_out, S, tgt, NUM_END, meta, u, r)
        return
    _finish_visit(u, r, kind, P[x, T_CNT], V, meta)
    if tgt == TGT_STOP:
        if is_leader:
            V[u, L_ENUM] = r
            V[u, L_N] = (P[x, T_CNT] + 1) // 2
        return
    # grow the train by one unit, terminator follows next round
    _send(out, self_out, S, tgt, NUM_ONE, meta, u, r)
    P[x, T_ENDR] = r + 1
    V[u, E_PEND] += 1


@njit
def _train_tick(u, r, lo, hi, out, self_out, S, V, P, meta):
    if V[u, L_LAUNCH_R] == r:
        _send(out, self_out, S, V[u, L_LAUNCH_TGT], NUM_END, meta, u, r)
        V[u, L_LAUNCH_R] = -1
    if V[u, E_PEND] == 0:
        return
    for x in range(lo, hi):
        if P[x, T_ENDR] == r:
            _send(out, self_out, S, P[x, T_TGT], NUM_END, meta, u, r)
            P[x, T_ENDR] = -1
            V[u, E_PEND] -= 1
    x = S + u
    if P[x, T_ENDR] == r:
        _send(out, self_out, S, P[x, T_TGT], NUM_END, meta, u, r)
        P[x, T_ENDR] = -1
        V[u, E_PEND] -= 1


@njit
def _enum_launch(u, r, lo, hi, out, self_out, S, V, P, meta):
    _set_phase(V, u, PH_ENUM, meta, r)
    _finish_visit(u, r, TK_VISIT1, 0, V, meta)
    tgt = _first_child_or_self(P, u, lo, hi, S)
    _send(out, self_out, S, tgt, NUM_ONE, meta, u, r)
    V[u, L_LAUNCH_R] = r + 1
    V[u, L_LAUNCH_TGT] = tgt


# -- distance from the leader ------------------------------------------------------


@njit
def _to_children(u, r, lo, hi, sig, out, self_out, S, P, meta):
    for s in range(lo, hi):
        if P[s, LINK] == LK_CHILD:
            _send(out, self_out, S, s, sig, meta, u, r)


@njit
def _dist_inbox(u, r, lo, hi, inbox, out, self_out, S, V, P, meta):
    for s in range(lo, hi):
        sig = inbox[s]
        if sig == DIST_ONE or sig == DIST_END:
            if P[s, LINK] != LK_PARENT:
                _fail(meta, E_UNEXPECTED, u, r)
                return
            _set_phase(V, u, PH_DIST, meta, r)
            _to_children(u, r, lo, hi, DIST_ONE, out, self_out, S, P, meta)
            if sig == DIST_ONE:
                V[u, D_ONES] += 1
            else:
                V[u, D_LEVEL] = V[u, D_ONES]
                V[u, D_LEVELR] = r
                if V[u, NCH] == 0:
                    V[u, D_ENDSENT] = 1
                else:
                    V[u, D_ENDR] = r + 1
        elif sig == DIST_OK:
            if P[s, LINK] != LK_CHILD:
                _fail(meta, E_UNEXPECTED, u, r)
                return
            V[u, D_OKS] += 1


@njit
def _dist_tick(u, r, lo, hi, is_leader, out, self_out, S, V, P, meta):
    if V[u, D_ENDR] == r:
        _to_children(u, r, lo, hi, DIST_END, out, self_out, S, P, meta)
        V[u, D_ENDR] = -1
        V[u, D_ENDSENT] = 1
    if V[u, D_ENDSENT] == 1 and V[u, D_OKSENT] == 0 and V[u, D_OKS] == V[u, NCH]:
        V[u, D_OKSENT] = 1
        if is_leader:
            V[u, L_DIST] = r
        else:
            _send(out, self_out, S, V[u, PAR], DIST_OK, meta, u, r)


@njit
def _dist_launch(u, r, lo, hi, out, self_out, S, V, P, meta):
    _set_phase(V, u, PH_DIST, meta, r)
    V[u, D_LEVEL] = 0
    V[u, D_LEVELR] = r
    if V[u, NCH] == 0:
        V[u, D_ENDSENT] = 1
    else:
        _to_children(u, r, lo, hi, DIST_ONE, out, self_out, S, P, meta)
        V[u, D_ENDR] = r + 1


# -- anonymous waves ---------------------------------------------------------------


@njit
def wave_inbox(u, r, lo, hi, inbox, out, self_out, S, V, TAU, ARR, meta):
    """React to WAVE arrivals at vertex ``u`` in round ``r``.

    A first arrival opens a record and forwards on every port that stayed
    silent this round; arrivals one round later are logged and ignored.
    """
    k = 0
    for s in range(lo, hi):
        if inbox[s] == WAVE:
            k += 1
    if k == 0:
        return
    if V[u, PH] < PH_WAVE:
        _set_phase(V, u, PH_WAVE, meta, r)
    nrec = V[u, W_NREC]
    if nrec == 0 or r >= V[u, W_CUR] + 2:
        if nrec >= TAU.shape[1]:
            _fail(meta, E_WAVECOUNT, u, r)
            return
        if nrec == 0:
            V[u, W_T1] = r - V[u, D_LEVEL]
            V[u, W_TOWN] = V[u, W_T1] + WAVE_GAP * (V[u, E_NUM] - 1)
            if V[u, W_TOWN] <= r:
                _fail(meta, E_SCHEDULE, u, r)
                return
        if nrec == V[u, E_NUM] - 1:
            # this slot in the schedule belongs to our own wave
            _fail(meta, E_WINDOW, u, r)
            return
        if r - (V[u, W_T1] + WAVE_GAP * nrec) < 1:
            _fail(meta, E_WINDOW, u, r)
            return
        TAU[u, nrec] = r
        V[u, W_CUR] = r
        V[u, W_NREC] = nrec + 1
        for s in range(lo, hi):
            if inbox[s] == WAVE:
                ARR[s, nrec] = 0
            else:
                _send(out, self_out, S, s, WAVE, meta, u, r)
    elif r == V[u, W_CUR] + 1:
        cur = nrec - 1
        if cur == V[u, W_OWN]:
            _fail(meta, E_WINDOW, u, r)
            return
        for s in range(lo, hi):
            if inbox[s] == WAVE:
                if ARR[s, cur] != -1:
                    _fail(meta, E_WINDOW, u, r)
                    return
                ARR[s, cur] = 1
    else:
        _fail(meta, E_WINDOW, u, r)
        return
    V[u, W_LAST] = r


@njit
def _wave_emit(u, r, lo, hi, out, self_out, S, V, TAU, meta):
    nrec = V[u, W_NREC]
    if nrec != V[u, E_NUM] - 1 or nrec >= TAU.shape[1]:
        _fail(meta, E_WAVECOUNT, u, r)
        return
    if V[u, W_LAST] == r:
        _fail(meta, E_WINDOW, u, r)
        return
    TAU[u, nrec] = r
    V[u, W_OWN] = nrec
    V[u, W_CUR] = r
    V[u, W_NREC] = nrec + 1
    V[u, W_LAST] = r
    for s in range(lo, hi):
        _send(out, self_out, S, s, WAVE, meta, u, r)


@njit
def wave_distances(tau_row, nrec, t1):
    d = np.empty(nrec, dtype=np.int64)
    for i in range(nrec):
        d[i] = tau_row[i] - t1 - WAVE_GAP * i
    return d


@njit
def cycle_length(tau_row, arr, lo, hi, nrec, t1, own):
    """Shortest cycle length witnessed by arrival patterns, 0 when none."""
    best = 0
    for i in range(nrec):
        if i == own:
            continue
        d = tau_row[i] - t1 - WAVE_GAP * i
        c0 = 0
        c1 = 0
        for s in range(lo, hi):
            if arr[s, i] == 0:
                c0 += 1
            elif arr[s, i] == 1:
                c1 += 1
        cand = 0
        if c0 >= 2:
            cand = 2 * d
        elif c0 >= 1 and c1 >= 1:
            cand = 2 * d + 1
        if cand > 0 and (best == 0 or cand < best):
            best = cand
    return best


@njit
def cut_edge_flags(arr, lo, hi, nrec):
    """1 for every port that never saw a companion arrival at its own or the next offset."""
    flags = np.ones(hi - lo, dtype=np.int64)
    for i in range(nrec):
        c0 = 0
        c1 = 0
        for s in range(lo, hi):
            if arr[s, i] == 0:
                c0 += 1
            elif arr[s, i] == 1:
                c1 += 1
        for s in range(lo, hi):
            o = arr[s, i]
            if o == 0 and c0 + c1 >= 2:
                flags[s - lo] = 0
            elif o == 1 and c1 >= 2:
                flags[s - lo] = 0
    return flags


@njit
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit
def port_classes(arr, lo, hi, nrec):
    """Disjoint-set labels over ports: ports co-arriving in a wave share a class."""
    deg = hi - lo
    parent = np.arange(deg)
    for i in range(nrec):
        first = -1
        for s in range(lo, hi):
            if arr[s, i] >= 0:
                if first < 0:
                    first = s - lo
                else:
                    a = _find(parent, first)
                    b = _find(parent, s - lo)
                    if a != b:
                        parent[b] = a
    for j in range(deg):
        parent[j] = _find(parent, j)
    return parent


@njit
def is_cut_vertex(arr, lo, hi, nrec):
    if hi - lo < 2:
        return 0
    labels = port_classes(arr, lo, hi, nrec)
    for j in range(1, hi - lo):
        if labels[j] != labels[0]:
            return 1
    return 0


@njit
def _finalize_waves(u, r, lo, hi, V, P, TAU, ARR, AVAL, is_leader, meta):
    nrec = V[u, W_NREC]
    if is_leader and V[u, L_N] > 0 and nrec != V[u, L_N]:
        _fail(meta, E_WAVECOUNT, u, r)
        return
    d = wave_distances(TAU[u], nrec, V[u, W_T1])
    ecc = 0
    for i in range(nrec):
        if d[i] > ecc:
            ecc = d[i]
    cv = cycle_length(TAU[u], ARR, lo, hi, nrec, V[u, W_T1], V[u, W_OWN])
    flags = cut_edge_flags(ARR, lo, hi, nrec)
    for s in range(lo, hi):
        P[s, CUTF] = flags[s - lo]
    cut = is_cut_vertex(ARR, lo, hi, nrec)
    V[u, R_ECC] = ecc
    V[u, R_CV] = cv
    V[u, R_CUT] = cut
    V[u, W_QR] = r
    AVAL[u, 0] = ecc
    # shifted by one so that a Hamiltonian shortest cycle stays distinguishable from none
    AVAL[u, 1] = nrec - cv + 1 if cv > 0 else 0
    AVAL[u, 2] = cut


@njit
def _wave_tick(u, r, lo, hi, is_leader, stop_phase, out, self_out, S, V, P, TAU, ARR, AVAL, meta):
    if V[u, W_TOWN] == r:
        _wave_emit(u, r, lo, hi, out, self_out, S, V, TAU, meta)
        return
    if V[u, W_NREC] > 0 and V[u, W_QR] < 0 and r - V[u, W_LAST] >= QUIET_ROUNDS:
        if V[u, W_TOWN] > r:
            _fail(meta, E_WAVECOUNT, u, r)
            return
        _finalize_waves(u, r, lo, hi, V, P, TAU, ARR, AVAL, is_leader, meta)
        meta[M_NQUIET] += 1
        if stop_phase >= PH_AGG:
            _set_phase(V, u, PH_AGG, meta, r)
            V[u, A_READY] = r


@njit
def _wave_launch(u, r, V, meta):
    if V[u, E_NUM] != 1:
        _fail(meta, E_WAVECOUNT, u, r)
        return
    _set_phase(V, u, PH_WAVE, meta, r)
    V[u, W_T1] = r
    V[u, W_TOWN] = r


# -- unary convergecast and broadcast ------------------------------------------------


@njit
def _agg_inbox(u, r, lo, hi, inbox, nframes, P, AGS, AGC, meta):
    for s in range(lo, hi):
        sig = inbox[s]
        if sig != AGG_MAX and sig != AGG_ONE and sig != AGG_ENDMAX:
            continue
        if P[s, LINK] != LK_CHILD:
            _fail(meta, E_UNEXPECTED, u, r)
            return
        f = P[s, AG_FR]
        if f >= nframes:
            _fail(meta, E_FRAMING, u, r)
            return
        if sig == AGG_MAX:
            if AGS[s, f] != 0:
                _fail(meta, E_FRAMING, u, r)
                return
            AGS[s, f] = 1
        elif sig == AGG_ONE:
            if AGS[s, f] != 1:
                _fail(meta, E_FRAMING, u, r)
                return
            AGC[s, f] += 1
        else:
            if AGS[s, f] != 1:
                _fail(meta, E_FRAMING, u, r)
                return
            AGS[s, f] = 2
            P[s, AG_FR] = f + 1


@njit
def _agg_tick(u, r, lo, hi, is_leader, nframes, out, self_out, S, V, P, AGS, AGC, AVAL, ARES, meta):
    if V[u, A_READY] < 0 or r < V[u, A_READY]:
        return
    while V[u, A_FRAME] < nframes:
        f = V[u, A_FRAME]
        all_open = True
        all_end = True
        top = AVAL[u, f]
        for s in range(lo, hi):
            if P[s, LINK] == LK_CHILD:
                if AGS[s, f] == 0:
                    all_open = False
                if AGS[s, f] != 2:
                    all_end = False
                elif AGC[s, f] > top:
                    top = AGC[s, f]
        if is_leader:
            if not all_end:
                return
            ARES[u, f] = top
            V[u, A_FRAME] = f + 1
            continue
        if V[u, A_OPEN] < 0:
            if all_open:
                _send(out, self_out, S, V[u, PAR], AGG_MAX, meta, u, r)
                V[u, A_OPEN] = r
                V[u, A_SENT] = 0
            return
        if not all_end:
            _send(out, self_out, S, V[u, PAR], AGG_ONE, meta, u, r)
            V[u, A_SENT] += 1
            return
        if V[u, A_SENT] > top:
            _fail(meta, E_FRAMING, u, r)
            return
        if V[u, A_SENT] < top:
            _send(out, self_out, S, V[u, PAR], AGG_ONE, meta, u, r)
            V[u, A_SENT] += 1
            return
        _send(out, self_out, S, V[u, PAR], AGG_ENDMAX, meta, u, r)
        ARES[u, f] = top
        V[u, A_FRAME] = f + 1
        V[u, A_OPEN] = -1
        return
    if is_leader and V[u, L_AGG] < 0:
        V[u, L_AGG] = r


@njit
def _bcast_inbox(u, r, lo, hi, inbox, nframes, out, self_out, S, V, P, BVAL, meta):
    for s in range(lo, hi):
        sig = inbox[s]
        if sig != VAL_ONE and sig != VAL_END:
            continue
        if P[s, LINK] != LK_PARENT or V[u, C_FRAME] >= nframes:
            _fail(meta, E_UNEXPECTED, u, r)
            return
        _set_phase(V, u, PH_BCAST, meta, r)
        _to_children(u, r, lo, hi, sig, out, self_out, S, P, meta)
        if sig == VAL_ONE:
            V[u, C_CNT] += 1
        else:
            BVAL[u, V[u, C_FRAME]] = V[u, C_CNT]
            V[u, C_FRAME] += 1
            V[u, C_CNT] = 0
            if V[u, C_FRAME] == nframes:
                _set_phase(V, u, PH_DONE, meta, r)
                V[u, DONE_R] = r
                meta[M_NDONE] += 1


@njit
def _bcast_leader_tick(u, r, lo, hi, nframes, out, self_out, S, V, P, BVAL, meta):
    if V[u, PH] != PH_BCAST:
        return
    f = V[u, C_FRAME]
    if V[u, NCH] == 0:
        f = nframes
    elif V[u, C_CNT] < BVAL[u, f]:
        _to_children(u, r, lo, hi, VAL_ONE, out, self_out, S, P, meta)
        V[u, C_CNT] += 1
        return
    else:
        _to_children(u, r, lo, hi, VAL_END, out, self_out, S, P, meta)
        f += 1
        V[u, C_CNT] = 0
    V[u, C_FRAME] = f
    if f == nframes:
        _set_phase(V, u, PH_DONE, meta, r)
        V[u, DONE_R] = r
        meta[M_NDONE] += 1


@njit
def _decode_results(u, V, ARES, BVAL):
    """Leader turns convergecast maxima into the values it broadcasts."""
    BVAL[u, 0] = ARES[u, 0]
    g = ARES[u, 1]
    BVAL[u, 1] = V[u, W_NREC] + 1 - g if g > 0 else 0
    BVAL[u, 2] = ARES[u, 2]


# -- leader sequencing ------------------------------------------------------------


@njit
def _leader_tick(u, r, lo, hi, stop_phase, decode, out, self_out, S, V, P, ARES, BVAL, meta):
    if V[u, L_NEXT_R] == r:
        ph = V[u, L_NEXT_PH]
        V[u, L_NEXT_R] = -1
        if ph == PH_BFS:
            _bfs_launch(u, r, lo, hi, out, self_out, S, V, P, meta)
        elif ph == PH_ENUM:
            _enum_launch(u, r, lo, hi, out, self_out, S, V, P, meta)
        elif ph == PH_DIST:
            _dist_launch(u, r, lo, hi, out, self_out, S, V, P, meta)
        elif ph == PH_WAVE:
            _wave_launch(u, r, V, meta)
        elif ph == PH_BCAST:
            _set_phase(V, u, PH_BCAST, meta, r)


@njit
def _leader_schedule(u, r, stop_phase, decode, V, ARES, BVAL):
    if V[u, L_NEXT_R] >= 0:
        return
    ph = V[u, PH]
    if ph == PH_BFS and V[u, L_BFS] >= 0 and stop_phase >= PH_ENUM:
        V[u, L_NEXT_R] = r + 1
        V[u, L_NEXT_PH] = PH_ENUM
    elif ph == PH_ENUM and V[u, L_ENUM] >= 0 and stop_phase >= PH_DIST:
        V[u, L_NEXT_R] = r + 1
        V[u, L_NEXT_PH] = PH_DIST
    elif ph == PH_DIST and V[u, L_DIST] >= 0 and stop_phase >= PH_WAVE:
        V[u, L_NEXT_R] = r + 2
        V[u, L_NEXT_PH] = PH_WAVE
    elif ph == PH_AGG and V[u, L_AGG] >= 0 and stop_phase >= PH_BCAST:
        if decode:
            _decode_results(u, V, ARES, BVAL)
        else:
            for f in range(ARES.shape[1]):
                BVAL[u, f] = ARES[u, f]
        V[u, L_NEXT_R] = r + 1
        V[u, L_NEXT_PH] = PH_BCAST


# -- round loop ---------------------------------------------------------------------


@njit
def _step_vertex(
    u, r, leader, stop_phase, nframes, decode, off, S, inbox, self_in, out, self_out,
    V, P, TAU, ARR, AGS, AGC, AVAL, ARES, BVAL, meta,
):
    lo = off[u]
    hi = off[u + 1]
    is_leader = u == leader
    if is_leader:
        _leader_tick(u, r, lo, hi, stop_phase, decode, out, self_out, S, V, P, ARES, BVAL, meta)
    mask = 0
    for s in range(lo, hi):
        if inbox[s] != NO_SIGNAL:
            mask |= 1 << np.int64(inbox[s])
    sx = self_in[u]
    if mask != 0:
        if mask & ((1 << START) | (1 << ACCEPT) | (1 << REJECT) | (1 << OK_BFS)):
            _bfs_inbox(u, r, lo, hi, inbox, out, self_out, S, V, P, meta)
        if mask & ((1 << NUM_ONE) | (1 << NUM_END)):
            for s in range(lo, hi):
                sig = inbox[s]
                if sig == NUM_ONE or sig == NUM_END:
                    _train_signal(u, r, s, sig, lo, hi, is_leader, out, self_out, S, V, P, meta)
        if mask & ((1 << DIST_ONE) | (1 << DIST_END) | (1 << DIST_OK)):
            _dist_inbox(u, r, lo, hi, inbox, out, self_out, S, V, P, meta)
        if mask & (1 << WAVE):
            wave_inbox(u, r, lo, hi, inbox, out, self_out, S, V, TAU, ARR, meta)
        if mask & ((1 << AGG_MAX) | (1 << AGG_ONE) | (1 << AGG_ENDMAX)):
            _agg_inbox(u, r, lo, hi, inbox, nframes, P, AGS, AGC, meta)
        if mask & ((1 << VAL_ONE) | (1 << VAL_END)):
            _bcast_inbox(u, r, lo, hi, inbox, nframes, out, self_out, S, V, P, BVAL, meta)
    if sx != NO_SIGNAL:
        if sx == NUM_ONE or sx == NUM_END:
            _train_signal(u, r, S + u, sx, lo, hi, is_leader, out, self_out, S, V, P, meta)
        else:
            _fail(meta, E_UNEXPECTED, u, r)
    ph = V[u, PH]
    if ph == PH_BFS:
        _bfs_tick(u, r, is_leader, out, self_out, S, V, meta)
    elif ph == PH_ENUM:
        _train_tick(u, r, lo, hi, out, self_out, S, V, P, meta)
    elif ph == PH_DIST:
        _dist_tick(u, r, lo, hi, is_leader, out, self_out, S, V, P, meta)
    elif ph == PH_WAVE:
        _wave_tick(u, r, lo, hi, is_leader, stop_phase, out, self_out, S, V, P, TAU, ARR, AVAL, meta)
    if V[u, PH] == PH_AGG and stop_phase >= PH_AGG:
        _agg_tick(u, r, lo, hi, is_leader, nframes, out, self_out, S, V, P, AGS, AGC, AVAL, ARES, meta)
    if is_leader:
        if V[u, PH] == PH_BCAST:
            _bcast_leader_tick(u, r, lo, hi, nframes, out, self_out, S, V, P, BVAL, meta)
        _leader_schedule(u, r, stop_phase, decode, V, ARES, BVAL)


@njit
def deliver(r, rev, S, out, inbox, self_out, self_in, sym, meta, trace, trace_on):
    """Move round ``r`` emissions into round ``r + 1`` inboxes; returns the trace buffer."""
    inbox[:] = NO_SIGNAL
    busy = False
    mask = meta[M_MASK]
    tlen = meta[M_TLEN]
    for s in range(S):
        sig = out[s]
        if sig != NO_SIGNAL:
            inbox[rev[s]] = sig
            out[s] = NO_SIGNAL
            sym[s] += 1
            mask |= 1 << np.int64(sig)
            busy = True
            if trace_on:
                if tlen == trace.shape[0]:
                    grown = np.empty((2 * trace.shape[0] + 16, 3), dtype=np.int64)
                    grown[:tlen] = trace[:tlen]
                    trace = grown
                trace[tlen, 0] = r + 1
                trace[tlen, 1] = s
                trace[tlen, 2] = sig
                tlen += 1
    for u in range(self_out.shape[0]):
        self_in[u] = self_out[u]
        if self_out[u] != NO_SIGNAL:
            busy = True
        self_out[u] = NO_SIGNAL
    meta[M_MASK] = mask
    meta[M_TLEN] = tlen
    return trace, busy


@njit
def _stopped(leader, stop_phase, n, V, meta):
    if stop_phase == PH_BFS:
        return V[leader, L_BFS] >= 0
    if stop_phase == PH_ENUM:
        return V[leader, L_ENUM] >= 0
    if stop_phase == PH_DIST:
        return V[leader, L_DIST] >= 0
    if stop_phase == PH_WAVE:
        return meta[M_NQUIET] == n
    if stop_phase == PH_AGG:
        return V[leader, L_AGG] >= 0
    return meta[M_NDONE] == n


@njit
def _due(u, r, nframes, off, inbox, self_in, V):
    """False when stepping ``u`` this round is provably a no-op.

    Mirrors the guards of the per-phase ticks so that idle vertices cost a
    few loads instead of a full step.
    """
    if self_in[u] != NO_SIGNAL:
        return True
    for s in range(off[u], off[u + 1]):
        if inbox[s] != NO_SIGNAL:
            return True
    ph = V[u, PH]
    if ph == PH_BFS:
        return V[u, B_JOIN] >= 0 and V[u, B_OKSENT] == 0
    if ph == PH_ENUM:
        return V[u, L_LAUNCH_R] == r or V[u, E_PEND] > 0
    if ph == PH_DIST:
        return V[u, D_ENDR] == r or (V[u, D_ENDSENT] == 1 and V[u, D_OKSENT] == 0)
    if ph == PH_WAVE:
        return V[u, W_TOWN] == r or (
            V[u, W_NREC] > 0 and V[u, W_QR] < 0 and r - V[u, W_LAST] >= QUIET_ROUNDS
        )
    if ph == PH_AGG:
        return V[u, A_READY] >= 0 and r >= V[u, A_READY] and V[u, A_FRAME] < nframes
    return False


@njit
def run_rounds(
    off, rev, leader, stop_phase, nframes, decode, max_rounds, trace_on, start_round,
    inbox, out, self_in, self_out, V, P, TAU, ARR, AGS, AGC, AVAL, ARES, BVAL, sym, meta, trace,
):
    """Barrier loop: every vertex handles its inbox, then all emissions are delivered."""
    n = V.shape[0]
    S = off[n]
    r = start_round
    while r < max_rounds:
        for u in range(n):
            if u != leader and not _due(u, r, nframes, off, inbox, self_in, V):
                continue
            _step_vertex(
                u, r, leader, stop_phase, nframes, decode, off, S, inbox, self_in, out, self_out,
                V, P, TAU, ARR, AGS, AGC, AVAL, ARES, BVAL, meta,
            )
            if meta[M_ERR] != 0:
                meta[M_ROUNDS] = r + 1
                return trace
        trace, busy = deliver(r, rev, S, out, inbox, self_out, self_in, sym, meta, trace, trace_on)
        r += 1
        meta[M_ROUNDS] = r
        if not busy and _stopped(leader, stop_phase, n, V, meta):
            meta[M_STOPPED] = 1
            return trace
    return trace
