"""Command-line front end.

Every command builds a complete config dict, runs from that dict alone, and
emits a report ``{"config", "results", "summary", "version"}``. Feeding a
report back through ``entkit replay REPORT`` reproduces the same bytes.

Batch trials draw from ``SeedSequence([seed, trial_index])`` so that each
trial's stream is independent of ordering and of ``--jobs``.
"""

from __future__ import annotations

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import io
import json
import logging
import math
import re
import sys

import numpy as np

from . import __version__
from .entanglement import (
    FLAVORS,
    MESSAGES,
    SOURCES,
    SourceModel,
    correlation_experiment,
    detection_probability,
    entangler_fidelity,
    extended_decode,
    extended_encode,
    purity,
    source_density,
    source_throughput,
)
from .frames import DIRECTION_NAMES, frame_membership, nine_directions, six_frames
from .gates import ClosureError, imperfect_entangler, subgroup_check, verify_table1
from .linalg import ACCUM_ATOL, unitarity_residual
from .qkd import (
    POLARIZATION_STATES,
    VARIANTS,
    ChannelModel,
    MeasurementError,
    UniformEve,
    exact_statistics,
    run_session,
)

log = logging.getLogger("entkit")

MAX_SEED = 2**64 - 1
FORMATS = ("json", "csv", "table")


def parse_angle(text: str) -> float:
    """Radians as a number or a multiple of pi: ``0.3``, ``pi``, ``-pi/2``, ``0.5*pi``."""
    text = text.strip().replace(" ", "")
    try:
        return float(text)
    except ValueError:
        pass
    m = re.fullmatch(r"([+-]?(?:\d+\.?\d*|\.\d+)?)\*?pi(?:/(\d+\.?\d*))?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"not an angle in radians: {text!r}")
    coef = m.group(1)
    value = math.pi * (float(coef) if coef not in ("", "+", "-") else float(coef + "1"))
    return value / float(m.group(2)) if m.group(2) else value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _phase_pair(z: complex) -> list[float]:
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


# --- commands -----------------------------------------------------------------


def cmd_group_table(config: dict) -> dict:
    verdicts = verify_table1()
    results = [
        {
            "row": v.row,
            "col": v.col,
            "expected": v.expected,
            "computed": v.computed,
            "phase": v.phase_label,
            "phase_re": _phase_pair(v.phase)[0],
            "phase_im": _phase_pair(v.phase)[1],
            "exact": v.exact,
            "agrees": v.agrees,
        }
        for v in verdicts
    ]
    agreeing = sum(v.agrees for v in verdicts)
    exact = sum(v.exact for v in verdicts)
    subsets = {"IABC": subgroup_check("IABC"), "ID": subgroup_check("ID")}
    summary = {
        "products": len(verdicts),
        "agreeing": agreeing,
        "exact": exact,
        "projective": len(verdicts) - exact,
        "convention": "row label is the left factor",
        "subgroups": subsets,
        "verified": agreeing == len(verdicts) and subsets["IABC"],
    }
    return _report(config, results, summary)


def _entangler_trial(config: dict, index: int) -> dict:
    lo, hi = config["theta_range"]
    if config["grid"]:
        n = config["grid"]
        theta1 = lo if n == 1 else lo + (hi - lo) * index / (n - 1)
        theta2 = config["theta2"] if config["theta2"] is not None else 0.0
    else:
        rng = trial_rng(config["seed"], index)
        theta1, theta2 = rng.uniform(lo, hi, size=2)
    if config["theta1"] is not None:
        theta1 = config["theta1"]
    if config["theta2"] is not None:
        theta2 = config["theta2"]
    theta1, theta2 = float(theta1), float(theta2)
    fid = entangler_fidelity(theta1, theta2)
    det = detection_probability(theta1, theta2)
    return {
        "trial": index,
        "theta1": theta1,
        "theta2": theta2,
        "fidelity": fid,
        "detection": det,
        "analytic_fidelity": math.cos(theta1 / 2) ** 2,
        "analytic_detection": math.sin(theta1 / 2) ** 2,
        "unitarity_residual": unitarity_residual(imperfect_entangler(theta1, theta2)),
    }


def expected_detection(lo: float, hi: float) -> float:
    """Mean of sin²(theta/2) for theta uniform on [lo, hi]."""
    if hi == lo:
        return math.sin(lo / 2) ** 2
    return 0.5 - (math.sin(hi) - math.sin(lo)) / (2 * (hi - lo))


def cmd_entangler(config: dict) -> dict:
    n = config["grid"] or config["trials"]
    if n < 1:
        raise ValueError("trials must be at least 1")
    if config["jobs"] > 1:
        with ThreadPoolExecutor(config["jobs"]) as pool:
            results = list(pool.map(lambda i: _entangler_trial(config, i), range(n)))
    else:
        results = [_entangler_trial(config, i) for i in range(n)]
    results.sort(key=lambda r: r["trial"])
    det = np.array([r["detection"] for r in results])
    fid = np.array([r["fidelity"] for r in results])
    dev_f = max(abs(r["fidelity"] - r["analytic_fidelity"]) for r in results)
    dev_d = max(abs(r["detection"] - r["analytic_detection"]) for r in results)
    dev_sum = float(np.max(np.abs(fid + det - 1)))
    summary = {
        "trials": n,
        "mean_fidelity": float(fid.mean()),
        "mean_detection": float(det.mean()),
        "detection_std_error": float(det.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        "max_fidelity_deviation": dev_f,
        "max_detection_deviation": dev_d,
        "max_sum_deviation": dev_sum,
        "max_unitarity_residual": max(r["unitarity_residual"] for r in results),
        "verified": max(dev_f, dev_d, dev_sum) <= ACCUM_ATOL,
    }
    if not config["grid"] and config["theta1"] is None:
        summary["expected_mean_detection"] = expected_detection(*config["theta_range"])
    return _report(config, results, summary)


def cmd_bb84(config: dict) -> dict:
    channel = ChannelModel(flip_prob=config["flip_prob"], eve=UniformEve() if config["eve"] else None)
    transcript = run_session(config["variant"], config["rounds"], channel, config["seed"])
    if config["round_log"]:
        with open(config["round_log"], "w", encoding="utf-8") as fh:
            fh.write(transcript.to_jsonl())
    summary = dict(transcript.summary)
    exact = exact_statistics(config["variant"], channel)
    summary["exact_sift_rate"] = exact["sift_rate"]
    summary["exact_qber"] = exact["qber"]
    summary["verified"] = True
    results = [{"variant": config["variant"], **transcript.summary}]
    return _report(config, results, summary)


def cmd_dense_code(config: dict) -> dict:
    msg, flavor, shots = config["message"], config["flavor"], config["shots"]
    if msg not in MESSAGES:
        raise ValueError(f"message must be one of {MESSAGES}")
    other = FLAVORS[1 - FLAVORS.index(flavor)]
    state = extended_encode(msg, flavor)
    rng = np.random.default_rng(config["seed"])
    matched = [extended_decode(state, flavor, rng) for _ in range(shots)]
    crossed = [extended_decode(state, other, rng) for _ in range(shots)]
    results = []
    for decoder, outcomes in ((flavor, matched), (other, crossed)):
        for m in MESSAGES:
            count = outcomes.count(m)
            results.append({"decoder": decoder, "outcome": m, "count": count, "frequency": count / shots})
    recovery = matched.count(msg) / shots
    summary = {
        "message": msg,
        "flavor": flavor,
        "shots": shots,
        "recovery_rate": recovery,
        "mismatched_histogram": {m: crossed.count(m) / shots for m in MESSAGES if crossed.count(m)},
        "verified": recovery == 1.0,
    }
    return _report(config, results, summary)


def cmd_mixedness(config: dict) -> dict:
    source, shots = config["source"], config["shots"]
    rho = source_density(source)
    corr = correlation_experiment(source, shots, config["seed"])
    row = {
        "source": source,
        "purity": purity(rho),
        "correlation": corr,
        "analytic_correlation": correlation_experiment(source, None),
        "shots": shots,
        "seed": config["seed"],
    }
    return _report(config, [row], {**row, "verified": True})


def cmd_source(config: dict) -> dict:
    model = SourceModel(config["pair_prob"], config["double_pair_prob"])
    y = source_throughput(model, config["trials"], config["seed"])
    row = {
        "trials": y.trials,
        "expected": y.expected,
        "sigma": y.sigma,
        "post_selected": y.post_selected,
        "double_pairs": y.double_pairs,
    }
    z = (y.post_selected - y.expected) / y.sigma if y.sigma else 0.0
    return _report(config, [row], {**row, "z_score": z, "verified": True})


def cmd_directions(config: dict) -> dict:
    results = []
    for i, (name, s) in enumerate(zip(DIRECTION_NAMES, nine_directions())):
        results.append(
            {
                "index": i,
                "direction": name,
                "amplitudes": " ".join(f"{a.real:+.6f}" for a in s.amps),
                "frames": ";".join(frame_membership(s)),
            }
        )
    summary = {
        "directions": len(results),
        "frames": {f.label: f.plane for f in six_frames()},
        "polarization": {
            name: " ".join(f"{a.real:+.6f}" for a in s.amps) for name, s in POLARIZATION_STATES.items()
        },
        "verified": True,
    }
    return _report(config, results, summary)


COMMANDS = {
    "group-table": cmd_group_table,
    "entangler": cmd_entangler,
    "bb84": cmd_bb84,
    "dense-code": cmd_dense_code,
    "mixedness": cmd_mixedness,
    "source": cmd_source,
    "directions": cmd_directions,
}


def _report(config: dict, results: list, summary: dict) -> dict:
    return {"config": dict(config), "results": results, "summary": summary, "version": __version__}


def run_config(config: dict) -> dict:
    """Run the command named in ``config`` and return its report."""
    return COMMANDS[config["command"]](config)


# --- rendering ----------------------------------------------------------------


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    rows = report["results"]
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return buf.getvalue()
    if fmt == "table":
        return _table(rows) + "\n" + "\n".join(f"{k}: {v}" for k, v in report["summary"].items()) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _cell(v) -> str:
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def _table(rows: list) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    cells = [[_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="entkit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("group-table", parents=[common], help="verify the operator group table")

    p = sub.add_parser("entangler", parents=[common], help="phase-error sweep of the entangling gate")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--theta-range", nargs=2, type=parse_angle, default=[-0.1, 0.1], metavar=("LO", "HI"))
    p.add_argument("--theta1", type=parse_angle, default=None)
    p.add_argument("--theta2", type=parse_angle, default=None)
    p.add_argument("--grid", type=int, default=0, help="evenly spaced theta1 grid of this many points")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("bb84", parents=[common], help="run one key-distribution session")
    p.add_argument("--variant", choices=VARIANTS, default="standard_zx")
    p.add_argument("--rounds", "--trials", dest="rounds", type=int, default=10_000)
    p.add_argument("--eve", action="store_true", help="enable an intercept-resend eavesdropper")
    p.add_argument("--flip-prob", type=float, default=0.0)
    p.add_argument("--round-log", default=None, help="write per-round records as JSON lines")

    p = sub.add_parser("dense-code", parents=[common], help="dense-coding round trip")
    p.add_argument("--flavor", choices=FLAVORS, default="standard")
    p.add_argument("--message", choices=MESSAGES, default="00")
    p.add_argument("--shots", "--trials", dest="shots", type=int, default=10_000)

    p = sub.add_parser("mixedness", parents=[common], help="pure Bell state vs classical mixture")
    p.add_argument("--source", choices=SOURCES, default="pure_bell")
    p.add_argument("--shots", "--trials", dest="shots", type=int, default=10_000)

    p = sub.add_parser("source", parents=[common], help="post-selected pair yield of a Bernoulli source")
    p.add_argument("--pair-prob", type=float, default=1e-4)
    p.add_argument("--double-pair-prob", type=float, default=1e-8)
    p.add_argument("--trials", type=int, default=1_000_000)

    sub.add_parser("directions", parents=[common], help="list the nine qutrit directions and six frames")

    p = sub.add_parser("replay", help="re-run the config echoed in a JSON report")
    p.add_argument("report")
    p.add_argument("--format", choices=FORMATS, default=None)
    p.add_argument("--out", default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "verbose"}
    if "theta_range" in config:
        config["theta_range"] = [float(x) for x in config["theta_range"]]
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "replay":
        with open(args.report, encoding="utf-8") as fh:
            config = json.load(fh)["config"]
        if args.format:
            config["format"] = args.format
        if args.out:
            config["out"] = args.out
    else:
        config = config_from_args(args)
    log.info("running %s with seed %s", config["command"], config.get("seed"))
    try:
        report = run_config(config)
    except (ClosureError, MeasurementError) as exc:
        print(f"entkit: verification failed: {exc}", file=sys.stderr)
        return 2
    text = render(report, config["format"])
    if config["out"]:
        with open(config["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not report["summary"].get("verified", True):
        print("entkit: internal verification failed", file=sys.stderr)
        return 1
    return 0
