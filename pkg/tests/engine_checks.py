"""Invariant checks shared by the engine property tests."""

from arenadraft.engine import HAND_LIMIT, LANE_LIMIT, MAX_MANA, MAX_TURNS, legal_actions, step


def check_state(state) -> list[str]:
    problems = []
    for idx, p in enumerate(state.players):
        if len(p.hand) > HAND_LIMIT:
            problems.append(f"p{idx} hand {len(p.hand)}")
        for lane_idx, lane in enumerate(p.lanes):
            if len(lane) > LANE_LIMIT:
                problems.append(f"p{idx} lane {lane_idx} holds {len(lane)}")
            for c in lane:
                if c.defense <= 0:
                    problems.append(f"p{idx} dead creature left on board")
                if c.attack < 0:
                    problems.append(f"p{idx} negative attack")
                if c.lane != lane_idx:
                    problems.append(f"p{idx} creature lane mismatch")
        if not 0 <= p.mana <= p.max_mana <= MAX_MANA:
            problems.append(f"p{idx} mana {p.mana}/{p.max_mana}")
        if p.fatigue < 0:
            problems.append(f"p{idx} fatigue {p.fatigue}")
    if state.turn > MAX_TURNS + 1:
        problems.append(f"turn {state.turn}")
    dead = any(p.hp <= 0 for p in state.players)
    if dead and state.outcome is None:
        problems.append("dead player but game not over")
    return problems


def random_playout(state, rng) -> tuple[object, list[str]]:
    """Play uniformly random legal actions to the end, checking every state.

    Also checks that mana spent within a turn never exceeds that turn's
    max mana. ``rng`` is a :class:`GameRng`.
    """
    problems = check_state(state)
    spent = 0
    actions_taken = 0
    while state.outcome is None:
        actions = legal_actions(state)
        if not actions or actions[-1].kind != 0:
            problems.append("PASS missing or not last")
            break
        action = actions[rng.below(len(actions))]
        before_turn = (state.turn, state.active)
        mana_before = state.players[state.active].mana
        cap = state.players[state.active].max_mana
        step(state, action)
        actions_taken += 1
        if (state.turn, state.active) == before_turn:
            spent += mana_before - state.players[state.active].mana
            if spent > cap:
                problems.append("spent more mana than max mana in one turn")
        else:
            spent = 0
        problems.extend(check_state(state))
        if problems:
            break
        if actions_taken > 100_000:
            problems.append("no termination")
            break
    if state.outcome is not None and state.turn > MAX_TURNS + 1:
        problems.append("game ran past the turn cap")
    return state.outcome, problems
