"""Command-line interface.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
unreadable or invalid input data.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path
from typing import Optional, Sequence

from .agents import AGENT_KINDS, make_agent
from .baselines import load_ordering, ordering_to_policy
from .cardset import CardFileError, default_card_set, generate_card_set, load_card_file, serialize, validate
from .draft import DraftPolicy, count_draft_space, generate_drafts
from .engine import json_line_logger, simulate_game
from .evolution.config import ALL_VARIANTS, ConfigError, TrainerConfig
from .evolution.history import RunHistory
from .evolution.trainers import BudgetError, make_simulator
from .harness import (
    champions_analysis,
    correlation_experiment,
    default_opponent_pool,
    evaluation_drafts,
    evolution_curve,
    round_robin_eval,
    write_champions_csv,
    write_correlation_csv,
    write_curve_csv,
    write_matchup_csv,
)
from .seeding import derive_seed
from .simulation import Simulator

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _load_cards(path: Optional[str]):
    if path is None:
        return default_card_set()
    try:
        return load_card_file(path)
    except FileNotFoundError:
        raise DataError(f"card file not found: {path}") from None
    except CardFileError as exc:
        raise DataError(str(exc)) from None


def _parse_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text.lower() in ("none", "null"):
        return None
    return text


def read_config_file(path: str) -> dict:
    """``.json`` files hold an object; anything else is ``key=value`` lines."""
    p = Path(path)
    if not p.is_file():
        raise DataError(f"config file not found: {path}")
    text = p.read_text()
    if p.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: {exc}") from None
        if not isinstance(data, dict):
            raise DataError(f"{path}: expected a JSON object")
        return data
    data = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        data[key] = _parse_value(value)
    return data


# flag name -> TrainerConfig field
_TRAIN_FLAGS = {
    "variant": "variant",
    "n": "population_size",
    "drafts": "train_drafts",
    "generations": "generations",
    "pair_games": "pair_games",
    "score_rounds": "score_rounds",
    "tournament_size": "tournament_size",
    "tournament_games": "tournament_games",
    "mutation_rate": "mutation_rate",
    "elitism": "elitism",
    "merge_weight": "merge_weight",
    "k": "k",
    "budget": "budget",
    "seed": "seed",
    "player": "player",
    "lanes": "lanes",
    "top_k": "top_k",
}
_RUN_KEYS = {"cards", "out", "workers"}


def build_run_config(args) -> tuple[TrainerConfig, dict]:
    """Merge the optional config file with flags; flags win.

    File keys may be config field names or flag names (``n``, ``drafts``).
    """
    raw = read_config_file(args.config) if args.config else {}
    raw = {_TRAIN_FLAGS.get(k.replace("-", "_"), k): v for k, v in raw.items()}
    known = {f.name for f in fields(TrainerConfig)}
    unknown = set(raw) - known - _RUN_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    trainer = {k: v for k, v in raw.items() if k in known}
    run = {k: raw[k] for k in _RUN_KEYS if k in raw}
    for flag, name in _TRAIN_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            trainer[name] = value
    for key in _RUN_KEYS:
        value = getattr(args, key)
        if value is not None:
            run[key] = value
    try:
        config = TrainerConfig(**trainer)
    except (ConfigError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    if "out" not in run:
        raise UsageError("--out is required")
    run.setdefault("workers", 1)
    return config, run


def cmd_train(args) -> int:
    from .training import train

    config, run = build_run_config(args)
    card_set = _load_cards(run.get("cards"))
    drafts = generate_drafts(card_set, derive_seed(config.seed, "train"), config.train_drafts)
    out = Path(run["out"])
    sim = make_simulator(config, card_set, workers=int(run["workers"]))
    try:
        result = train(config, drafts, card_set, sim)
    except BudgetError as exc:
        raise UsageError(str(exc)) from None
    result.history.save(out)
    run_record = dict(run, cards=str(run["cards"]) if run.get("cards") else None, card_set=card_set.fingerprint)
    (out / "run.json").write_text(json.dumps(run_record, sort_keys=True, indent=2) + "\n")
    best_path = out / "best.json"
    best_path.write_text(result.best.to_json(card_set) + "\n")
    print(f"cost {result.cost}")
    print(f"best {best_path}")
    return EXIT_OK


def _load_policy(path: str, card_set) -> DraftPolicy:
    p = Path(path)
    if not p.is_file():
        raise DataError(f"policy file not found: {path}")
    try:
        if p.suffix == ".json":
            return DraftPolicy.from_json(p.read_text(), card_set)
        return ordering_to_policy(load_ordering(p, len(card_set)))
    except (ValueError, KeyError) as exc:
        raise DataError(f"{path}: {exc}") from None


def _load_history(path: str) -> RunHistory:
    try:
        return RunHistory.load(path)
    except (FileNotFoundError, ValueError, KeyError) as exc:
        raise DataError(str(exc)) from None


def _simulator(args, card_set) -> Simulator:
    return Simulator(card_set, make_agent(args.player), workers=args.workers, lanes=args.lanes)


def cmd_eval(args) -> int:
    card_set = _load_cards(args.cards)
    if len(args.policies) < 2:
        raise UsageError("eval needs at least two policies")
    policies = [_load_policy(p, card_set) for p in args.policies]
    labels = [Path(p).stem for p in args.policies]
    if len(set(labels)) < len(labels):
        labels = [f"{Path(p).parent.name}/{Path(p).stem}" for p in args.policies]
    table = round_robin_eval(_simulator(args, card_set), labels, policies, args.drafts, args.games, args.reps, args.seed)
    print(table.render())
    path = write_matchup_csv(table, Path(args.out) / "matchup.csv")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_curve(args) -> int:
    card_set = _load_cards(args.cards)
    history = _load_history(args.run)
    sim = _simulator(args, card_set)
    pool = default_opponent_pool(card_set, args.seed)
    drafts = evaluation_drafts(card_set, args.seed, args.drafts)
    points = evolution_curve(sim, history, drafts, pool, args.games, args.seed)
    for p in points:
        print(f"{p.cost}\t{p.winrate:.2f}")
    write_curve_csv(points, Path(args.out) / "curve.csv")
    return EXIT_OK


def cmd_correlate(args) -> int:
    card_set = _load_cards(args.cards)
    history = _load_history(args.run)
    sim = _simulator(args, card_set)
    pool = default_opponent_pool(card_set, args.seed)
    drafts = evaluation_drafts(card_set, args.seed, args.drafts)
    result = correlation_experiment(sim, history, history.drafts, drafts, pool, args.games, args.seed, stride=args.stride)
    r = "undefined" if result.r is None else f"{result.r:.4f}"
    print(f"pearson_r {r}")
    write_correlation_csv(result, Path(args.out) / "correlation.csv")
    return EXIT_OK


def cmd_champions(args) -> int:
    card_set = _load_cards(args.cards)
    history = _load_history(args.run)
    sim = _simulator(args, card_set)
    result = champions_analysis(sim, history, history.drafts, args.games, args.stride, args.seed)
    write_champions_csv(result, Path(args.out) / "champions.csv")
    print(f"{len(result.champion_generations)} champions x {len(result.generations)} generations")
    return EXIT_OK


def cmd_draft_space(args) -> int:
    try:
        value = count_draft_space(args.size, args.turns, args.choices)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(value)
    digits = str(value)
    print(f"~{digits[0]}.{digits[1:3]}e{len(digits) - 1}", file=sys.stderr)
    return EXIT_OK


def cmd_cards(args) -> int:
    if args.generate is not None:
        card_set = generate_card_set(args.generate, args.size)
    else:
        card_set = _load_cards(args.cards)
        problems = validate(card_set)
        if problems:
            for v in problems:
                print(v, file=sys.stderr)
            return EXIT_DATA
    text = serialize(card_set)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {len(card_set)} cards to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_deck(text: str, card_set) -> list[int]:
    try:
        deck = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"deck must be a list of card ids: {text!r}") from None
    missing = [c for c in deck if c not in card_set]
    if missing:
        raise DataError(f"unknown card ids in deck: {missing}")
    return deck


def cmd_simulate(args) -> int:
    card_set = _load_cards(args.cards)
    deck0 = _parse_deck(args.deck0, card_set)
    deck1 = _parse_deck(args.deck1, card_set)
    agent0 = make_agent(args.player0 or args.player)
    agent1 = make_agent(args.player1 or args.player)
    log = json_line_logger(sys.stdout) if args.log else None
    try:
        outcome = simulate_game(deck0, deck1, agent0, agent1, card_set, args.seed, log=log, lanes=args.lanes)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    print(json.dumps({"outcome": outcome.name}))
    return EXIT_OK


def _int_or_none(text: str):
    return None if text.lower() == "none" else int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arenadraft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--cards", help="card file (default: bundled set)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--player", choices=AGENT_KINDS, default="random")
        p.add_argument("--lanes", type=int, choices=(1, 2), default=2)
        p.add_argument("--workers", type=int, default=1)
        if out:
            p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("cards", help="validate, print or generate a card set")
    p.add_argument("--cards")
    p.add_argument("--generate", type=int, metavar="SEED", help="generate a random set from SEED")
    p.add_argument("--size", type=int, default=160)
    p.add_argument("--out", help="write the card file here")
    p.set_defaults(func=cmd_cards)

    p = sub.add_parser("train", help="train a draft policy")
    p.add_argument("--config", help="config file (.json or key=value lines)")
    p.add_argument("--cards")
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--variant", choices=ALL_VARIANTS)
    p.add_argument("--n", type=int, help="population size")
    p.add_argument("--drafts", type=int, help="training drafts")
    p.add_argument("--g", "--generations", dest="generations", type=_int_or_none)
    p.add_argument("--pair-games", type=int)
    p.add_argument("--score-rounds", type=int)
    p.add_argument("--tournament-size", type=int)
    p.add_argument("--tournament-games", type=int)
    p.add_argument("--mutation-rate", type=float)
    p.add_argument("--elitism", type=int)
    p.add_argument("--merge-weight", type=float)
    p.add_argument("--K", "--k", dest="k", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--player", choices=AGENT_KINDS)
    p.add_argument("--lanes", type=int, choices=(1, 2))
    p.add_argument("--top-k", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="round-robin matchup table")
    common(p)
    p.add_argument("--policies", nargs="+", required=True, help="policy .json or ordering files")
    p.add_argument("--drafts", type=int, default=500)
    p.add_argument("--games", type=int, default=20)
    p.add_argument("--reps", type=int, default=5)
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in (
        ("curve", cmd_curve, "win rate of each snapshot against training cost"),
        ("correlate", cmd_correlate, "train vs held-out win rates per checkpoint"),
        ("champions", cmd_champions, "snapshot champions against every generation"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--run", required=True, help="run directory written by train")
        p.add_argument("--drafts", type=int, default=250)
        p.add_argument("--games", type=int, default=10)
        p.add_argument("--stride", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("draft-space", help="exact number of distinct drafts")
    p.add_argument("--size", type=int, default=160)
    p.add_argument("--turns", type=int, default=30)
    p.add_argument("--choices", type=int, default=3)
    p.set_defaults(func=cmd_draft_space)

    p = sub.add_parser("simulate", help="play one game")
    common(p, out=False)
    p.add_argument("--deck0", required=True, help="comma or space separated card ids")
    p.add_argument("--deck1", required=True)
    p.add_argument("--player0", choices=AGENT_KINDS)
    p.add_argument("--player1", choices=AGENT_KINDS)
    p.add_argument("--log", action="store_true", help="print one JSON line per action")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
