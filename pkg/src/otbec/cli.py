"""Batch front end: protocol campaigns, audits, oracle checks, region sweeps.

Every subcommand resolves a seed (flag, then OTBEC_SEED, then a fixed
constant), validates parameters before running anything, and writes a
canonical JSON report atomically, so identical invocations produce identical
bytes. Exit codes: 0 success, 2 validation failure, 3 enumeration budget
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import __version__
from .adversary_audit import condition_suite, generate_runs, guess_choice_bit, guess_unchosen_message
from .exact_oracle import (
    BudgetError,
    TinyParams,
    enumerate_protocol,
    exact_mi,
    exact_mi_given_success,
    oracle_vs_montecarlo,
)
from .protocol_colluding import VisibilityModel
from .protocol_core import ParamError, snap_params
from .protocol_noncolluding import _clopper_pearson
from .rates import (
    ChannelSpec,
    containment_note,
    general_upper_bounds,
    region_colluding_inner,
    region_colluding_outer,
    region_noncolluding_capacity,
    region_noncolluding_outer,
    region_timesharing,
    vertices,
)

__all__ = ["DEFAULT_SEED", "SCHEMA_VERSION", "parse_prob", "main"]

DEFAULT_SEED = 101
SCHEMA_VERSION = "1"

_VARIANTS = {"p1": "noncolluding", "p2": "colluding"}

_PROB_KEYS = ("p1", "p2", "r1", "r2", "lam", "lam_prime", "s1", "s2")

_ORACLE_SPECS = {
    "choice-vs-sets": ("noncolluding", "z1", "announced-sets-1"),
    "choice-pair-vs-sets": ("noncolluding", "z-pair", "announced-sets-both"),
    "unchosen-vs-own": ("noncolluding", "m1-unchosen", "own-receiver-1"),
    "unchosen-vs-pooled": ("noncolluding", "m1-unchosen", "pooled-receivers-1"),
    "phase2-unchosen-vs-pooled": ("colluding", "m2-unchosen", "pooled-receivers-2-phase2"),
    "phase1-cross-knowledge": ("colluding", "x-sprime", "first-receiver-phase1"),
}

_ATTACKER_MAP = {
    "single": ("single-receiver", "alice"),
    "pooled": ("pooled-receivers", "alice-plus-other-receiver"),
    "wiretapper": ("wiretapper", "wiretapper"),
}

_REGION_NAMES = (
    "noncolluding-outer",
    "noncolluding-capacity",
    "colluding-outer",
    "colluding-inner",
    "timesharing",
)


def parse_prob(text):
    """Probability from a decimal or an exact fraction string like '3/10'.

    Fractions stay exact, routing downstream arithmetic to rational mode.
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    text = str(text).strip()
    value = Fraction(text) if "/" in text else float(text)
    if not 0 <= value <= 1:
        raise ValueError(f"probability {text} not in [0, 1]")
    return value


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return _jsonable(dataclasses.asdict(value))
    return value


def _canonical(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write_atomic(path: str, text: str) -> None:
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".otbec-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    env = os.environ.get("OTBEC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"OTBEC_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _report_shell(command: str, config: dict, seed: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "command": command,
        "config": _jsonable(config),
        "seed": seed,
    }


def _emit(args, report: dict, seed: int) -> None:
    path = args.out
    _write_atomic(path, _canonical(report))
    print(f"seed: {seed}")
    print(f"report: {path}")


# --- simulate -----------------------------------------------------------------


def _build_params(args):
    variant = _VARIANTS[args.variant]
    return snap_params(
        args.n, args.p1, args.p2, args.r1, args.r2, args.lam, args.lam_prime,
        s1=args.s1, s2=args.s2, variant=variant, order=args.order,
    )


def _visibility(args) -> VisibilityModel | None:
    if _VARIANTS[args.variant] != "colluding":
        return None
    return VisibilityModel(args.visibility_phase1, args.visibility_phase2)


def _config_payload(args, params, adjustments, extra: dict | None = None) -> dict:
    payload = {
        "variant": args.variant,
        "params": dataclasses.asdict(params),
        "adjustments": adjustments,
        "trials": args.trials,
        "out": args.out,
    }
    if _VARIANTS[args.variant] == "colluding":
        payload["visibility"] = {
            "phase1": args.visibility_phase1,
            "phase2": args.visibility_phase2,
        }
    if extra:
        payload.update(extra)
    return payload


def _rate_ci(successes: int, trials: int) -> dict:
    lo, hi = _clopper_pearson(successes, trials)
    return {
        "estimate": successes / trials if trials else 0.0,
        "ci": [lo, hi],
        "trials": trials,
    }


def _simulate_stats(runs) -> dict:
    trials = len(runs)
    per_link: dict = {}
    matches = 0
    decided = 0
    any_abort = 0
    reason_counts: dict = {}
    for run in runs:
        if run.record["aborted"]:
            any_abort += 1
        for reason in run.record["aborted"].values():
            key = "phase-2" if "phase-2" in reason else (
                "phase-1" if "phase-1" in reason else (
                    "no-second-phase" if "second link" in reason else "single-phase"))
            reason_counts[key] = reason_counts.get(key, 0) + 1
    for i in (1, 2):
        counts = {"completed": 0, "aborted": 0, "decode-error": 0, "no-second-phase": 0}
        link_matches = 0
        aborted = 0
        for run in runs:
            out = run.outcomes[i - 1]
            counts[out.status] += 1
            if out.status == "aborted":
                aborted += 1
            elif out.status == "completed":
                want = run.record["messages"][i - 1][run.record["z"][i - 1]]
                if out.decoded is not None and np.array_equal(out.decoded, want):
                    link_matches += 1
        link_decided = counts["completed"] + counts["decode-error"]
        matches += link_matches
        decided += link_decided
        per_link[str(i)] = {
            "counts": counts,
            "correctness_rate": link_matches / link_decided if link_decided else None,
            "abort": _rate_ci(aborted, trials),
        }
    return {
        "trials": trials,
        "correctness_rate": matches / decided if decided else None,
        "abort_rate": _rate_ci(any_abort, trials),
        "abort_reasons": reason_counts,
        "per_link": per_link,
    }


def cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    params, adjustments = _build_params(args)
    visibility = _visibility(args)
    runs = generate_runs(params, args.trials, seed, visibility)
    report = _report_shell("simulate", _config_payload(args, params, adjustments), seed)
    report["results"] = _simulate_stats(runs)
    _emit(args, report, seed)
    return 0


# --- audit --------------------------------------------------------------------


def cmd_audit(args) -> int:
    seed = _resolve_seed(args)
    params, adjustments = _build_params(args)
    visibility = _visibility(args)
    runs = generate_runs(params, args.trials, seed, visibility)
    message_attacker, choice_attacker = _ATTACKER_MAP[args.attacker]
    attack_rng = np.random.default_rng(seed)
    attacks = []
    if message_attacker:
        attacks.append(guess_unchosen_message(
            runs, attacker=message_attacker, link=args.link, rng=attack_rng))
    attacks.append(guess_choice_bit(
        runs, attacker=choice_attacker, link=args.link, rng=attack_rng))
    rows = condition_suite(runs)
    extra = {"attacker": args.attacker, "link": args.link}
    report = _report_shell("audit", _config_payload(args, params, adjustments, extra), seed)
    report["results"] = {
        "attacks": [a.as_json() for a in attacks],
        "conditions": [row.as_json() for row in rows],
        "summary": {
            "conditions_clean": all(
                row.verdict in ("no detected leakage", "holds", "informational")
                for row in rows
            ),
        },
    }
    _emit(args, report, seed)
    return 0


# --- oracle -------------------------------------------------------------------


def cmd_oracle(args) -> int:
    seed = _resolve_seed(args)
    tiny = TinyParams(
        n=args.n, p1=args.p1, p2=args.p2,
        set_size=args.set_size, key_bits=args.key_bits,
        phase1_size=args.phase1_size, sprime_size=args.sprime_size,
    )
    names = args.spec or ["choice-vs-sets", "choice-pair-vs-sets"]
    rows = []
    for name in names:
        variant, secret, view = _ORACLE_SPECS[name]
        joint = enumerate_protocol(variant, tiny, view, secret)
        mi = exact_mi(joint)
        mi_success = exact_mi_given_success(joint)
        row = {
            "spec": name,
            "variant": variant,
            "secret": secret,
            "view": view,
            "mi": float(mi),
            "mi_exact": str(mi) if isinstance(mi, (int, Fraction)) else None,
            "mi_given_success": float(mi_success),
            "mi_given_success_exact": str(mi_success)
            if isinstance(mi_success, (int, Fraction)) else None,
            "arithmetic": joint.arithmetic,
            "abort_mass": float(joint.abort_mass),
            "abort_mass_exact": str(joint.abort_mass)
            if isinstance(joint.abort_mass, Fraction) else None,
            "states": joint.states,
            "description": joint.description,
        }
        if args.compare_mc:
            row["mc"] = oracle_vs_montecarlo(
                variant, tiny, view, secret, trials=args.compare_mc, master_seed=seed)
        rows.append(row)
    config = {
        "tiny": dataclasses.asdict(tiny),
        "specs": names,
        "compare_mc": args.compare_mc,
        "out": args.out,
    }
    report = _report_shell("oracle", config, seed)
    report["results"] = rows
    _emit(args, report, seed)
    return 0


# --- region -------------------------------------------------------------------


def _load_channel(path: str) -> ChannelSpec:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    if not isinstance(payload, dict) or "rows" not in payload or "outputs" not in payload:
        raise ValueError(f"channel file {path} must contain 'outputs' and 'rows'")
    return ChannelSpec.from_json(payload)


def _named_regions(p1: float, p2: float, names) -> list:
    regions = []
    for name in names:
        if name == "noncolluding-outer":
            regions.append(region_noncolluding_outer(p1, p2))
        elif name == "noncolluding-capacity":
            regions.append(region_noncolluding_capacity(p1, p2))
        elif name == "colluding-outer":
            regions.append(region_colluding_outer(p1, p2))
        elif name == "colluding-inner":
            regions.append(region_colluding_inner(p1, p2))
        elif name == "timesharing":
            regions.append(region_timesharing(p1, p2)[2])
        else:
            raise ValueError(f"unknown region {name!r}")
    return regions


def _region_csv(regions) -> str:
    lines = ["region_label,R1,R2"]
    for region in regions:
        for x, y in vertices(region):
            lines.append(f"{region.label},{x:.12g},{y:.12g}")
    return "\n".join(lines) + "\n"


def cmd_region(args) -> int:
    seed = _resolve_seed(args)
    config = {
        "p1": args.p1, "p2": args.p2, "regions": args.region,
        "all": args.all, "channel": args.channel, "theorem": args.theorem,
        "grid": args.grid, "check_containment": args.check_containment,
        "out": args.out,
    }
    regions = []
    channel_payload = None
    if args.channel:
        spec = _load_channel(args.channel)
        channel_payload = spec.to_json()
        regions.append(general_upper_bounds(spec, theorem=args.theorem, grid=args.grid))
    if args.p1 is not None or args.p2 is not None or not args.channel:
        if args.p1 is None or args.p2 is None:
            raise ValueError("region needs both --p1 and --p2 (or a --channel file)")
        names = args.region or _REGION_NAMES
        regions.extend(_named_regions(float(args.p1), float(args.p2), names))
    report = _report_shell("region", config, seed)
    report["results"] = {"regions": [r.as_json() for r in regions]}
    if channel_payload is not None:
        report["results"]["channel"] = channel_payload
    if args.check_containment:
        if args.p1 is None or args.p2 is None:
            raise ValueError("--check-containment needs --p1 and --p2")
        p1f, p2f = float(args.p1), float(args.p2)
        checks = []
        for outer, inner in (
            (region_noncolluding_outer(p1f, p2f), region_noncolluding_capacity(p1f, p2f)),
            (region_colluding_outer(p1f, p2f), region_colluding_inner(p1f, p2f)),
            (region_noncolluding_outer(p1f, p2f), region_colluding_outer(p1f, p2f)),
        ):
            note = containment_note(outer, inner)
            checks.append({
                "outer": outer.label,
                "inner": inner.label,
                "contained": note is None,
                "note": note,
            })
        report["results"]["containment"] = checks
    _write_atomic(args.out, _canonical(report))
    csv_path = os.path.splitext(args.out)[0] + ".csv"
    _write_atomic(csv_path, _region_csv(regions))
    print(f"seed: {seed}")
    print(f"report: {args.out}")
    print(f"csv: {csv_path}")
    return 0


# --- parser plumbing ------------------------------------------------------------


def _add_common(sub) -> None:
    sub.add_argument("--config", help="JSON file with defaults mirroring the flags")
    sub.add_argument("--seed", type=int, default=None,
                     help=f"master seed (default: OTBEC_SEED or {DEFAULT_SEED})")


def _add_protocol_flags(sub, default_out: str, n: int = 256, rate=0.15,
                        lam_prime=0.05, trials: int = 1000) -> None:
    sub.add_argument("--variant", choices=("p1", "p2"), default="p1",
                     help="p1 = single-phase, p2 = two-phase collusion-resistant")
    sub.add_argument("--n", type=int, default=n)
    sub.add_argument("--p1", type=parse_prob, default=0.5)
    sub.add_argument("--p2", type=parse_prob, default=0.5)
    sub.add_argument("--r1", type=parse_prob, default=rate)
    sub.add_argument("--r2", type=parse_prob, default=rate)
    sub.add_argument("--lambda", dest="lam", type=parse_prob, default=0.05)
    sub.add_argument("--lambda-prime", dest="lam_prime", type=parse_prob, default=lam_prime)
    sub.add_argument("--s1", type=parse_prob, default=None)
    sub.add_argument("--s2", type=parse_prob, default=None)
    sub.add_argument("--order", type=int, choices=(1, 2), default=1)
    sub.add_argument("--trials", type=int, default=trials)
    sub.add_argument("--visibility-phase1", choices=("point-to-point", "broadcast-both"),
                     default="point-to-point")
    sub.add_argument("--visibility-phase2", choices=("point-to-point", "broadcast-both"),
                     default="point-to-point")
    sub.add_argument("--out", default=default_out)


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="otbec",
        description="Simulation and analysis batch tool for erasure-broadcast oblivious transfer",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)
    registry = {}

    sim = subs.add_parser("simulate", help="run a protocol campaign")
    _add_common(sim)
    _add_protocol_flags(sim, "otbec-simulate.json")
    sim.set_defaults(func=cmd_simulate)
    registry["simulate"] = sim

    # audit defaults use short keys so reconstruction attacks resolve at
    # moderate trial counts; simulate defaults stay at production block sizes
    aud = subs.add_parser("audit", help="run adversary attacks and the condition suite")
    _add_common(aud)
    _add_protocol_flags(aud, "otbec-audit.json", n=64, rate=Fraction(1, 8),
                        lam_prime=Fraction(1, 16), trials=20000)
    aud.add_argument("--attacker", choices=tuple(_ATTACKER_MAP), default="pooled")
    aud.add_argument("--link", type=int, choices=(1, 2), default=1)
    aud.set_defaults(func=cmd_audit)
    registry["audit"] = aud

    orc = subs.add_parser("oracle", help="exact small-instance enumeration checks")
    _add_common(orc)
    orc.add_argument("--n", type=int, default=4)
    orc.add_argument("--p1", type=parse_prob, default=Fraction(1, 2))
    orc.add_argument("--p2", type=parse_prob, default=Fraction(1, 2))
    orc.add_argument("--set-size", type=int, default=1)
    orc.add_argument("--key-bits", type=int, default=1)
    orc.add_argument("--phase1-size", type=int, default=1)
    orc.add_argument("--sprime-size", type=int, default=2)
    orc.add_argument("--spec", action="append", choices=tuple(_ORACLE_SPECS),
                     help="repeatable; default: choice-vs-sets and choice-pair-vs-sets")
    orc.add_argument("--compare-mc", type=int, default=0,
                     help="also sample this many Monte Carlo trials per spec")
    orc.add_argument("--out", default="otbec-oracle.json")
    orc.set_defaults(func=cmd_oracle)
    registry["oracle"] = orc

    reg = subs.add_parser("region", help="emit rate regions as JSON and CSV")
    _add_common(reg)
    reg.add_argument("--p1", type=parse_prob, default=None)
    reg.add_argument("--p2", type=parse_prob, default=None)
    reg.add_argument("--all", action="store_true", help="emit every closed-form region")
    reg.add_argument("--region", action="append", choices=_REGION_NAMES,
                     help="repeatable; default: all closed-form regions")
    reg.add_argument("--channel", help="JSON file with an explicit channel law")
    reg.add_argument("--theorem", choices=("1", "2"), default="1")
    reg.add_argument("--grid", type=int, default=201)
    reg.add_argument("--check-containment", action="store_true")
    reg.add_argument("--out", default="otbec-region.json")
    reg.set_defaults(func=cmd_region)
    registry["region"] = reg

    return parser, registry


def _config_overrides(path: str, sub: argparse.ArgumentParser) -> dict:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    if not isinstance(payload, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    known = {action.dest for action in sub._actions}
    overrides = {}
    for raw_key, value in payload.items():
        key = raw_key.replace("-", "_")
        if key == "lambda":
            key = "lam"
        if key not in known:
            raise ValueError(f"unknown config key {raw_key!r}")
        if key in _PROB_KEYS and value is not None:
            value = parse_prob(value)
        overrides[key] = value
    return overrides


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, registry = build_parser()
    try:
        subcommand = argv[0] if argv and not argv[0].startswith("-") else None
        if subcommand in registry:
            pre = argparse.ArgumentParser(add_help=False)
            pre.add_argument("--config")
            known, _ = pre.parse_known_args(argv[1:])
            if known.config:
                registry[subcommand].set_defaults(**_config_overrides(known.config, registry[subcommand]))
        args = parser.parse_args(argv)
        return args.func(args)
    except BudgetError as exc:
        print(f"error: enumeration budget exceeded: {exc} "
              f"(state estimate {exc.estimate})", file=sys.stderr)
        return 3
    except ParamError as exc:
        print(f"error: {exc.constraint} violated: {exc.message}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
