"""Command-line front end: every analysis as a deterministic subcommand.

Given the same arguments (and seed, where one applies) stdout is
byte-identical across runs; wall time is reported on stderr so timing noise
never touches the canonical output.  Exit codes: 0 success, 1 a verification
failed, 2 bad input.  ``--json`` swaps the table rendering for a JSON report
carrying the same values.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import bell, formats, locality, quantum, strategies, wiring


def value_str(v) -> str:
    """Exact values as plain fractions ("8/9", "1"), floats as %.17g."""
    if isinstance(v, float):
        return "%.17g" % v
    return str(Fraction(v))


def ratio_str(v) -> str:
    """Exact values with an explicit denominator ("0/1"), floats as %.17g."""
    if isinstance(v, float):
        return "%.17g" % v
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _matrix_lines(matrix) -> list[str]:
    return ["  " + " ".join("%4.1f" % v for v in row) for row in matrix]


def _report(command: str, inputs: dict, results: dict) -> dict:
    return {"command": command, "inputs": inputs, "results": results}


# ---------------------------------------------------------------------------
# subcommands: each returns (exit code, table lines, json report)


def cmd_bounds(args):
    if args.game == "chsh":
        game = strategies.chsh_game()
        local_value, _, _ = strategies.local_bound(game)
        ns_win = strategies.win_probability(locality.pr_box(), game)
        rows = [("local", value_str(local_value)), ("no-signalling", value_str(ns_win))]
        lines = [" | ".join(row) for row in rows]
        results = {"rows": [{"class": name, "win": win} for name, win in rows]}
        return 0, lines, _report("bounds", {"game": "chsh"}, results)

    game = strategies.rgb_game()
    inputs = {"game": "rgb", "tolerance": args.tolerance}

    local_value, _, _ = strategies.local_bound(game)
    bell_local, _ = bell.deterministic_bell_maximum()
    ns_win = strategies.win_probability(strategies.rgrb(), game)
    bell_ns = bell.bell_quantity(
        quantum.correlations_from_table(quantum.reduce_to_binary(strategies.rgrb()))
    )

    table = quantum.quantum_strategy_table(
        quantum.singlet(), quantum.trine_strategy(), quantum.trine_strategy()
    )
    sim_win = strategies.win_probability(table, game)
    try:
        certificate = bell.certify_quantum_bound(args.tolerance)
    except bell.CertificationError as err:
        line = f"FAIL: {err}"
        return 1, [line], _report("bounds", inputs, {"error": str(err)})
    if abs(sim_win - 11 / 12) > args.tolerance:
        line = (
            f"FAIL: simulated quantum win {value_str(sim_win)} "
            f"is not 11/12 within {value_str(args.tolerance)}"
        )
        return 1, [line], _report("bounds", inputs, {"error": line[6:]})

    rows = [
        ("local", value_str(local_value), value_str(bell_local)),
        ("quantum", "11/12", value_str(certificate.bound)),
        ("no-signalling", value_str(ns_win), value_str(bell_ns)),
    ]
    lines = [" | ".join(row) for row in rows]
    results = {"rows": [{"class": n, "win": w, "bell": r} for n, w, r in rows]}
    return 0, lines, _report("bounds", inputs, results)


def cmd_enumerate(args):
    game = strategies.rgb_game() if args.game == "rgb" else strategies.chsh_game()
    count = strategies.enumerate_winning_deterministic_boxes(game)
    lines = [f"winning deterministic boxes: {count}"]
    return 0, lines, _report("enumerate", {"game": args.game}, {"count": count})


_REDUCTIONS = ("pr-from-rgrb", "rgrb-from-pr")


def cmd_verify_reduction(args):
    if args.reduction == "pr-from-rgrb":
        protocol, base, target = wiring.pr_from_rgrb(), strategies.rgrb(), locality.pr_box()
    else:
        protocol, base, target = wiring.rgrb_from_pr(), locality.pr_box(), strategies.rgrb()
    composed = wiring.evaluate_wiring(protocol, base)
    dist = strategies.l1_distance(composed, target)
    ok = dist == 0
    lines = [f"distance {ratio_str(dist)}, {'PASS' if ok else 'FAIL'}"]
    results = {"distance": ratio_str(dist), "pass": ok}
    return (0 if ok else 1), lines, _report(
        "verify-reduction", {"reduction": args.reduction}, results
    )


def cmd_ns_check(args):
    table = formats.load_box_file(args.file)
    atol = 0 if table.is_exact else 1e-9
    ok, witness = locality.is_no_signalling(table, atol=atol)
    inputs = {"file": args.file}
    if ok:
        return 0, ["no-signalling: yes"], _report(
            "ns-check", inputs, {"no_signalling": True, "witness": None}
        )
    lines = [f"SIGNALS, witness: {witness}"]
    results = {"no_signalling": False, "witness": witness.to_json_dict()}
    return 1, lines, _report("ns-check", inputs, results)


def cmd_ns_unique(args):
    try:
        params = locality.solve_ns_unique()
    except ArithmeticError as err:
        return 1, [f"FAIL: {err}"], _report("ns-unique", {}, {"error": str(err)})
    matches = strategies.l1_distance(strategies.family_strategy(params), strategies.rgrb()) == 0
    names = strategies.parameter_names()
    values = params.as_vector()
    lines = [f"{name} = {ratio_str(v)}" for name, v in zip(names, values)]
    lines.append(f"matches rgrb: {'yes' if matches else 'no'}")
    results = {
        "parameters": {name: ratio_str(v) for name, v in zip(names, values)},
        "matches_rgrb": matches,
    }
    return (0 if matches else 1), lines, _report("ns-unique", {}, results)


def cmd_quantum(args):
    def strategy(angles):
        return quantum.QubitStrategy(
            tuple(quantum.projector_from_angle(t) for t in angles)
        )

    table = quantum.quantum_strategy_table(
        quantum.singlet(), strategy(args.alice_angles), strategy(args.bob_angles)
    )
    win = strategies.win_probability(table, strategies.rgb_game())
    corr = quantum.correlations_from_table(quantum.reduce_to_binary(table))
    r = bell.bell_quantity(corr)
    if args.output:
        formats.save_box(table, args.output)
    lines = [
        "alice angles: " + " ".join(value_str(t) for t in args.alice_angles),
        "bob angles: " + " ".join(value_str(t) for t in args.bob_angles),
        f"win probability: {value_str(win)}",
        f"bell quantity: {value_str(r)}",
        "correlations:",
    ]
    lines += ["  " + " ".join(value_str(c) for c in row) for row in corr]
    results = {
        "win": value_str(win),
        "bell_quantity": value_str(r),
        "correlations": [[value_str(c) for c in row] for row in corr],
    }
    inputs = {
        "alice_angles": list(args.alice_angles),
        "bob_angles": list(args.bob_angles),
        "output": args.output,
    }
    return 0, lines, _report("quantum", inputs, results)


def cmd_sdp_certify(args):
    inputs = {"tolerance": args.tolerance}
    try:
        report = bell.certify_quantum_bound(args.tolerance)
    except bell.CertificationError as err:
        return 1, [f"FAIL: {err}"], _report("sdp-certify", inputs, {"error": str(err)})
    lines = [
        f"primal value: {value_str(report.primal_value)}",
        f"dual value: {value_str(report.dual_value)}",
        f"gap: {value_str(report.gap)}",
        "primal eigenvalues: "
        + " ".join(value_str(e) for e in report.primal_eigenvalues),
        "dual slack eigenvalues: "
        + " ".join(value_str(e) for e in report.dual_slack_eigenvalues),
        f"bound: {value_str(report.bound)}",
        f"implied win bound: {value_str(report.implied_win_bound)}",
        "objective matrix:",
        *_matrix_lines(bell.w_matrix()),
        "optimal gram matrix:",
        *_matrix_lines(bell.optimal_gram()),
        "dual multipliers:",
        *_matrix_lines(bell.optimal_multipliers()),
    ]
    results = {
        "primal_value": value_str(report.primal_value),
        "dual_value": value_str(report.dual_value),
        "gap": value_str(report.gap),
        "primal_eigenvalues": [value_str(e) for e in report.primal_eigenvalues],
        "dual_slack_eigenvalues": [
            value_str(e) for e in report.dual_slack_eigenvalues
        ],
        "bound": value_str(report.bound),
        "implied_win_bound": value_str(report.implied_win_bound),
    }
    return 0, lines, _report("sdp-certify", inputs, results)


def cmd_sdp_optimize(args):
    result = bell.alternating_ascent(args.seed, args.restarts)
    sweeps = result.sweep_values
    monotone = all(b - a >= -1e-9 for a, b in zip(sweeps, sweeps[1:]))
    gram = bell.gram_from_vectors(
        np.vstack([result.strategy.alice, result.strategy.bob])
    )
    rank = sum(1 for e in bell.sym_eigenvalues(gram) if e > 1e-6)
    lines = [
        f"seed: {args.seed}",
        f"restarts: {args.restarts}",
        f"best value: {value_str(result.value)}",
        f"sweeps: {len(sweeps) - 1}",
        f"monotone: {'yes' if monotone else 'no'}",
        f"gram rank: {rank}",
    ]
    results = {
        "best_value": value_str(result.value),
        "sweeps": len(sweeps) - 1,
        "monotone": monotone,
        "gram_rank": rank,
    }
    inputs = {"seed": args.seed, "restarts": args.restarts}
    return 0, lines, _report("sdp-optimize", inputs, results)


def cmd_distance(args):
    table_a = formats.load_box_file(args.file_a)
    table_b = formats.load_box_file(args.file_b)
    dist = strategies.l1_distance(table_a, table_b)
    lines = [f"distance: {ratio_str(dist)}"]
    inputs = {"file_a": args.file_a, "file_b": args.file_b}
    return 0, lines, _report("distance", inputs, {"distance": ratio_str(dist)})


def _emit_document(command, inputs, doc, text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
        lines = [f"wrote {output}"]
    else:
        lines = [text.rstrip("\n")]
    return 0, lines, _report(command, inputs, doc)


def cmd_apply_wiring(args):
    protocol = formats.load_wiring_file(args.wiring_file)
    base = formats.load_box_file(args.box_file)
    composed = wiring.evaluate_wiring(protocol, base)
    doc = formats.box_to_json_dict(composed)
    inputs = {
        "wiring_file": args.wiring_file,
        "box_file": args.box_file,
        "output": args.output,
    }
    return _emit_document(
        "apply-wiring", inputs, doc, formats.dump_box(composed), args.output
    )


_NAMED_BOXES = {
    "rgb0": strategies.rgb0,
    "rgrb": strategies.rgrb,
    "pr": locality.pr_box,
    "parity-flip": wiring.parity_flip_box,
    "identity": locality.id_box,
    "sig": locality.sig_box,
    "r-sig": locality.r_sig_box,
    "l-sig": locality.l_sig_box,
}

_NAMED_WIRINGS = {
    "pr-from-rgrb": wiring.pr_from_rgrb,
    "rgrb-from-pr": wiring.rgrb_from_pr,
}


def cmd_export_box(args):
    table = _NAMED_BOXES[args.name]()
    doc = formats.box_to_json_dict(table)
    inputs = {"name": args.name, "output": args.output}
    return _emit_document(
        "export-box", inputs, doc, formats.dump_box(table), args.output
    )


def cmd_export_wiring(args):
    protocol = _NAMED_WIRINGS[args.name]()
    doc = formats.wiring_to_json_dict(protocol)
    inputs = {"name": args.name, "output": args.output}
    return _emit_document(
        "export-wiring", inputs, doc, formats.dump_wiring(protocol), args.output
    )


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rgbgame",
        description="Exact analysis of the three-colour nonlocal game: "
        "bounds, reductions, no-signalling checks, quantum simulation, "
        "and optimality certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="emit a JSON report instead of a table"
    )
    game = argparse.ArgumentParser(add_help=False)
    game.add_argument(
        "--game",
        choices=("rgb", "chsh"),
        default="rgb",
        help="which game to analyse (default rgb)",
    )

    p = sub.add_parser(
        "bounds",
        parents=[common, game],
        help="local / quantum / no-signalling win bounds and Bell bounds",
    )
    p.add_argument(
        "--tolerance",
        type=float,
        default=1e-9,
        help="slack for the quantum certificate checks (default 1e-9)",
    )
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser(
        "enumerate",
        parents=[common, game],
        help="count deterministic boxes that win on every input pair",
    )
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser(
        "verify-reduction",
        parents=[common],
        help="evaluate a built-in wiring and compare to its target box",
    )
    p.add_argument("reduction", choices=_REDUCTIONS)
    p.set_defaults(handler=cmd_verify_reduction)

    p = sub.add_parser(
        "ns-check", parents=[common], help="test a box file for signalling"
    )
    p.add_argument("file")
    p.set_defaults(handler=cmd_ns_check)

    p = sub.add_parser(
        "ns-unique",
        parents=[common],
        help="solve the no-signalling constraints on the winning family",
    )
    p.set_defaults(handler=cmd_ns_unique)

    p = sub.add_parser(
        "quantum",
        parents=[common],
        help="simulate a projective qubit strategy on the singlet",
    )
    p.add_argument(
        "--alice-angles",
        type=float,
        nargs=3,
        default=(0.0, -120.0, 120.0),
        metavar=("A0", "A1", "A2"),
        help="Bloch angles in degrees, x-z plane (default trine)",
    )
    p.add_argument(
        "--bob-angles",
        type=float,
        nargs=3,
        default=(0.0, -120.0, 120.0),
        metavar=("B0", "B1", "B2"),
        help="Bloch angles in degrees, x-z plane (default trine)",
    )
    p.add_argument("--output", help="also write the table as a box file")
    p.set_defaults(handler=cmd_quantum)

    p = sub.add_parser(
        "sdp-certify",
        parents=[common],
        help="verify the matching primal/dual certificate of the quantum bound",
    )
    p.add_argument(
        "--tolerance",
        type=float,
        default=1e-9,
        help="feasibility and gap slack (default 1e-9)",
    )
    p.set_defaults(handler=cmd_sdp_certify)

    p = sub.add_parser(
        "sdp-optimize",
        parents=[common],
        help="seeded alternating ascent over unit-vector strategies",
    )
    p.add_argument("--seed", type=int, required=True, help="RNG seed (required)")
    p.add_argument(
        "--restarts", type=int, default=20, help="independent restarts (default 20)"
    )
    p.set_defaults(handler=cmd_sdp_optimize)

    p = sub.add_parser(
        "distance", parents=[common], help="l1 distance between two box files"
    )
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(handler=cmd_distance)

    p = sub.add_parser(
        "apply-wiring",
        parents=[common],
        help="evaluate a wiring file over a base box file",
    )
    p.add_argument("wiring_file")
    p.add_argument("box_file")
    p.add_argument("--output", help="write the resulting box here instead of stdout")
    p.set_defaults(handler=cmd_apply_wiring)

    p = sub.add_parser(
        "export-box", parents=[common], help="write a named built-in box"
    )
    p.add_argument("name", choices=sorted(_NAMED_BOXES))
    p.add_argument("--output", help="write to a file instead of stdout")
    p.set_defaults(handler=cmd_export_box)

    p = sub.add_parser(
        "export-wiring", parents=[common], help="write a named built-in wiring"
    )
    p.add_argument("name", choices=sorted(_NAMED_WIRINGS))
    p.add_argument("--output", help="write to a file instead of stdout")
    p.set_defaults(handler=cmd_export_wiring)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code, lines, report = args.handler(args)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    finally:
        print(f"wall time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
