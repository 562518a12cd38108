"""Compiled game simulator mirroring :mod:`arenadraft.engine`.

The whole game state lives in one flat int64 vector so that the greedy
agent can clone it cheaply. Layout (offsets relative to a player block)::

    hp, max_mana, mana, fatigue, deck_len, hand_len, lane0_len, lane1_len,
    deck[30], hand[8], board[2 lanes][3 slots][6 fields]

Creature fields are ``card, attack, defense, keywords, can_attack,
has_attacked``. Action rows are ``kind, card, lane, slot, target``.

Any rule change in ``engine.py`` must be mirrored here; the test suite
replays both engines side by side and compares every chosen action.
"""

from __future__ import annotations

import numpy as np
from numba import config as _numba_config
from numba import njit, prange

# the system TBB may be too old for numba; each game writes only its own
# output slot, so results do not depend on the threading layer
if _numba_config.THREADING_LAYER == "default":
    _numba_config.THREADING_LAYER = "workqueue"

# global slots
G_ACTIVE = 0
G_TURN = 1
G_OUTCOME = 2
G_LANES = 3
P_BASE = 4
# player block
HP = 0
MAXMANA = 1
MANA = 2
FATIGUE = 3
DECKLEN = 4
HANDLEN = 5
LANELEN = 6
DECK = 8
HAND = 38
BOARD = 46
PSZ = 82
STATE_SIZE = P_BASE + 2 * PSZ
NF = 6
MAX_ACTIONS = 128

C_CARD = 0
C_ATK = 1
C_DEF = 2
C_KW = 3
C_CAN = 4
C_DONE = 5

T_KIND = 0
T_COST = 1
T_ATK = 2
T_DEF = 3
T_KW = 4
T_PHP = 5
T_OHP = 6
T_DRAW = 7

K_PASS = 0
K_SUMMON = 1
K_USE = 2
K_ATTACK = 3
FACE = -1

KW_BREAKTHROUGH = 1
KW_CHARGE = 2
KW_DRAIN = 4
KW_GUARD = 8
KW_LETHAL = 16
KW_WARD = 32

WIN_VALUE = 1 << 40

AGENT_RANDOM = 0
AGENT_GREEDY = 1

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_LO32 = np.uint64(0xFFFFFFFF)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S32 = np.uint64(32)


@njit(cache=True)
def rng_below(rng, n):
    """SplitMix64 step on ``rng[0]`` mapped to ``[0, n)`` by multiply-shift."""
    s = rng[0] + _GOLDEN
    rng[0] = s
    z = (s ^ (s >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    z = z ^ (z >> _S31)
    nn = np.uint64(n)
    hi = (z >> _S32) * nn + (((z & _LO32) * nn) >> _S32)
    return np.int64(hi >> _S32)


@njit(cache=True)
def _pb(p):
    return P_BASE + p * PSZ


@njit(cache=True)
def _cre(p, lane, slot):
    return P_BASE + p * PSZ + BOARD + (lane * 3 + slot) * NF


@njit(cache=True)
def _draw(S, p, count):
    b = _pb(p)
    for _ in range(count):
        dl = S[b + DECKLEN]
        if dl > 0:
            card = S[b + DECK + dl - 1]
            S[b + DECKLEN] = dl - 1
            hl = S[b + HANDLEN]
            if hl < 8:
                S[b + HAND + hl] = card
                S[b + HANDLEN] = hl + 1
        else:
            S[b + FATIGUE] += 1
            S[b + HP] -= S[b + FATIGUE]


@njit(cache=True)
def _check_over(S):
    d0 = S[_pb(0) + HP] <= 0
    d1 = S[_pb(1) + HP] <= 0
    if d0 or d1:
        if d0 and d1:
            S[G_OUTCOME] = 2
        elif d0:
            S[G_OUTCOME] = 1
        else:
            S[G_OUTCOME] = 0


@njit(cache=True)
def _start_turn(S):
    p = S[G_ACTIVE]
    b = _pb(p)
    mm = S[b + MAXMANA] + 1
    if mm > 12:
        mm = 12
    S[b + MAXMANA] = mm
    S[b + MANA] = mm
    for lane in range(2):
        for slot in range(S[b + LANELEN + lane]):
            o = _cre(p, lane, slot)
            S[o + C_CAN] = 1
            S[o + C_DONE] = 0
    _draw(S, p, 1)
    _check_over(S)


@njit(cache=True)
def _shuffle(arr, rng):
    for i in range(arr.shape[0] - 1, 0, -1):
        j = rng_below(rng, i + 1)
        t = arr[i]
        arr[i] = arr[j]
        arr[j] = t


@njit(cache=True)
def new_game(deck0, deck1, shuffle_seed, lanes):
    S = np.zeros(STATE_SIZE, dtype=np.int64)
    rng = np.empty(1, dtype=np.uint64)
    rng[0] = shuffle_seed
    d0 = deck0.astype(np.int64)
    d1 = deck1.astype(np.int64)
    _shuffle(d0, rng)
    _shuffle(d1, rng)
    S[G_ACTIVE] = 0
    S[G_TURN] = 1
    S[G_OUTCOME] = -1
    S[G_LANES] = lanes
    for p in range(2):
        b = _pb(p)
        S[b + HP] = 30
        d = d0 if p == 0 else d1
        for i in range(30):
            S[b + DECK + i] = d[i]
        S[b + DECKLEN] = 30
    _draw(S, 0, 4)
    _draw(S, 1, 5)
    _start_turn(S)
    return S


@njit(cache=True)
def legal_actions(S, table, acts):
    """Fill ``acts`` with the legal actions in canonical order; return the count."""
    n = 0
    p = S[G_ACTIVE]
    q = 1 - p
    b = _pb(p)
    bq = _pb(q)
    mana = S[b + MANA]
    hl = S[b + HANDLEN]
    # sorted distinct playable cards
    play = np.empty(8, dtype=np.int64)
    np_ = 0
    for i in range(hl):
        c = S[b + HAND + i]
        if table[c, T_COST] <= mana:
            dup = False
            for k in range(np_):
                if play[k] == c:
                    dup = True
                    break
            if not dup:
                j = np_
                while j > 0 and play[j - 1] > c:
                    play[j] = play[j - 1]
                    j -= 1
                play[j] = c
                np_ += 1
    for k in range(np_):
        c = play[k]
        if table[c, T_KIND] == 0:
            for lane in range(S[G_LANES]):
                if S[b + LANELEN + lane] < 3:
                    acts[n, 0] = K_SUMMON
                    acts[n, 1] = c
                    acts[n, 2] = lane
                    acts[n, 3] = FACE
                    acts[n, 4] = FACE
                    n += 1
    for k in range(np_):
        c = play[k]
        kind = table[c, T_KIND]
        if kind == 0:
            continue
        side = b if kind == 1 else bq
        for lane in range(2):
            for slot in range(S[side + LANELEN + lane]):
                acts[n, 0] = K_USE
                acts[n, 1] = c
                acts[n, 2] = lane
                acts[n, 3] = slot
                acts[n, 4] = FACE
                n += 1
        if kind == 3:
            acts[n, 0] = K_USE
            acts[n, 1] = c
            acts[n, 2] = FACE
            acts[n, 3] = FACE
            acts[n, 4] = FACE
            n += 1
    targets = np.empty(4, dtype=np.int64)
    for lane in range(2):
        ml = S[b + LANELEN + lane]
        if ml == 0:
            continue
        tl = S[bq + LANELEN + lane]
        nt = 0
        for t in range(tl):
            if S[_cre(q, lane, t) + C_KW] & KW_GUARD:
                targets[nt] = t
                nt += 1
        if nt == 0:
            for t in range(tl):
                targets[nt] = t
                nt += 1
            targets[nt] = FACE
            nt += 1
        for slot in range(ml):
            o = _cre(p, lane, slot)
            if S[o + C_CAN] == 1 and S[o + C_DONE] == 0:
                for k in range(nt):
                    acts[n, 0] = K_ATTACK
                    acts[n, 1] = 0
                    acts[n, 2] = lane
                    acts[n, 3] = slot
                    acts[n, 4] = targets[k]
                    n += 1
    acts[n, 0] = K_PASS
    acts[n, 1] = 0
    acts[n, 2] = FACE
    acts[n, 3] = FACE
    acts[n, 4] = FACE
    n += 1
    return n


@njit(cache=True)
def _bury(S, p):
    b = _pb(p)
    for lane in range(2):
        ln = S[b + LANELEN + lane]
        w = 0
        for r in range(ln):
            src = _cre(p, lane, r)
            if S[src + C_DEF] > 0:
                if w != r:
                    dst = _cre(p, lane, w)
                    for f in range(NF):
                        S[dst + f] = S[src + f]
                w += 1
        S[b + LANELEN + lane] = w


@njit(cache=True)
def _fight(S, p, lane, slot, target):
    q = 1 - p
    oa = _cre(p, lane, slot)
    od = _cre(q, lane, target)
    a_dmg = S[oa + C_ATK]
    d_dmg = S[od + C_ATK]
    a_kw = S[oa + C_KW]
    d_kw = S[od + C_KW]
    before = S[od + C_DEF]
    dealt = 0
    if a_dmg > 0:
        if d_kw & KW_WARD:
            S[od + C_KW] = S[od + C_KW] & ~KW_WARD
        else:
            dealt = a_dmg
            S[od + C_DEF] -= a_dmg
            if (a_kw & KW_LETHAL) and S[od + C_DEF] > 0:
                S[od + C_DEF] = 0
    if d_dmg > 0:
        if a_kw & KW_WARD:
            S[oa + C_KW] = S[oa + C_KW] & ~KW_WARD
        else:
            S[oa + C_DEF] -= d_dmg
            if (d_kw & KW_LETHAL) and S[oa + C_DEF] > 0:
                S[oa + C_DEF] = 0
    if dealt != 0:
        if (a_kw & KW_BREAKTHROUGH) and S[od + C_DEF] <= 0 and a_dmg > before:
            S[_pb(q) + HP] -= a_dmg - before
        if a_kw & KW_DRAIN:
            S[_pb(p) + HP] += dealt


@njit(cache=True)
def step(S, table, kind, card, lane, slot, target):
    p = S[G_ACTIVE]
    q = 1 - p
    b = _pb(p)
    bq = _pb(q)
    if kind == K_PASS:
        S[G_ACTIVE] = q
        if q == 0:
            S[G_TURN] += 1
            if S[G_TURN] > 100:
                h0 = S[_pb(0) + HP]
                h1 = S[_pb(1) + HP]
                if h0 == h1:
                    S[G_OUTCOME] = 2
                elif h0 > h1:
                    S[G_OUTCOME] = 0
                else:
                    S[G_OUTCOME] = 1
                return
        _start_turn(S)
        return
    if kind == K_ATTACK:
        oa = _cre(p, lane, slot)
        S[oa + C_DONE] = 1
        if target == FACE:
            atk = S[oa + C_ATK]
            S[bq + HP] -= atk
            if S[oa + C_KW] & KW_DRAIN:
                S[b + HP] += atk
        else:
            _fight(S, p, lane, slot, target)
            _bury(S, p)
            _bury(S, q)
        _check_over(S)
        return
    S[b + MANA] -= table[card, T_COST]
    hl = S[b + HANDLEN]
    for i in range(hl):
        if S[b + HAND + i] == card:
            for j in range(i, hl - 1):
                S[b + HAND + j] = S[b + HAND + j + 1]
            S[b + HANDLEN] = hl - 1
            break
    if kind == K_SUMMON:
        ln = S[b + LANELEN + lane]
        o = _cre(p, lane, ln)
        kw = table[card, T_KW]
        S[o + C_CARD] = card
        S[o + C_ATK] = table[card, T_ATK]
        S[o + C_DEF] = table[card, T_DEF]
        S[o + C_KW] = kw
        S[o + C_CAN] = 1 if (kw & KW_CHARGE) else 0
        S[o + C_DONE] = 0
        S[b + LANELEN + lane] = ln + 1
    else:
        ikind = table[card, T_KIND]
        if lane == FACE:
            S[bq + HP] += table[card, T_DEF]
        else:
            owner = p if ikind == 1 else q
            o = _cre(owner, lane, slot)
            a = S[o + C_ATK] + table[card, T_ATK]
            S[o + C_ATK] = a if a > 0 else 0
            S[o + C_DEF] += table[card, T_DEF]
            if ikind == 1:
                S[o + C_KW] = S[o + C_KW] | table[card, T_KW]
            else:
                S[o + C_KW] = S[o + C_KW] & ~table[card, T_KW]
            _bury(S, owner)
    S[b + HP] += table[card, T_PHP]
    S[bq + HP] += table[card, T_OHP]
    if table[card, T_DRAW] > 0:
        _draw(S, p, table[card, T_DRAW])
    _check_over(S)


@njit(cache=True)
def material(S, p):
    total = S[_pb(p) + HP] - S[_pb(1 - p) + HP]
    for side in range(2):
        sign = 1 if side == p else -1
        bs = _pb(side)
        for lane in range(2):
            for slot in range(S[bs + LANELEN + lane]):
                o = _cre(side, lane, slot)
                total += sign * (S[o + C_ATK] + S[o + C_DEF])
    return total


@njit(cache=True)
def greedy_choose(S, table, acts, n):
    p = S[G_ACTIVE]
    best = 0
    best_value = -WIN_VALUE - 1
    tmp = np.empty_like(S)
    for i in range(n):
        tmp[:] = S
        step(tmp, table, acts[i, 0], acts[i, 1], acts[i, 2], acts[i, 3], acts[i, 4])
        out = tmp[G_OUTCOME]
        if out == 0 or out == 1:
            value = WIN_VALUE if out == p else -WIN_VALUE
        else:
            value = material(tmp, p)
        if value > best_value:
            best = i
            best_value = value
            if value == WIN_VALUE:
                break
    return best


@njit(cache=True)
def play(table, deck0, deck1, seeds, kinds, lanes, trace):
    """Play one game; ``seeds`` = (shuffle, agent0, agent1).

    When ``trace`` has rows, the chosen actions are recorded there and the
    number of recorded actions is returned as the second value.
    """
    S = new_game(deck0, deck1, seeds[0], lanes)
    rngs = np.empty(2, dtype=np.uint64)
    rngs[0] = seeds[1]
    rngs[1] = seeds[2]
    acts = np.empty((MAX_ACTIONS, 5), dtype=np.int64)
    nt = 0
    while S[G_OUTCOME] < 0:
        p = S[G_ACTIVE]
        n = legal_actions(S, table, acts)
        if kinds[p] == AGENT_RANDOM:
            i = rng_below(rngs[p:p + 1], n)
        else:
            i = greedy_choose(S, table, acts, n)
        if nt < trace.shape[0]:
            for f in range(5):
                trace[nt, f] = acts[i, f]
            nt += 1
        step(S, table, acts[i, 0], acts[i, 1], acts[i, 2], acts[i, 3], acts[i, 4])
    return S[G_OUTCOME], nt


@njit(cache=True, parallel=True)
def play_many(table, decks0, decks1, seeds, kinds, lanes):
    """Play ``len(seeds)`` independent games; returns outcome codes."""
    m = seeds.shape[0]
    out = np.empty(m, dtype=np.int64)
    for g in prange(m):
        empty = np.empty((0, 5), dtype=np.int64)
        out[g], _ = play(table, decks0[g], decks1[g], seeds[g], kinds[g], lanes, empty)
    return out
