"""Command-line interface.

Exit status is 0 on success, 1 on a domain or input error (the reason code is
printed to stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import io
from .errors import FormatError, ModelkitError, PreconditionError
from .lattice import Lattice
from .localization import copper_arrows, golden_arrows, localize
from .model import (
    ModelStructure,
    check_model_axioms,
    enumerate_model_structures,
    enumerate_weak_equivalences,
    is_model_structure,
    t_min,
)
from .saturation import (
    enumerate_saturated,
    is_saturated,
    reachability_graph,
    saturated_bigger_to_smaller,
    saturated_smaller_to_bigger,
    zigzag_realize,
)
from .transfer import (
    enumerate_cotransfer_systems,
    enumerate_transfer_systems,
    is_cotransfer_system,
    is_transfer_system,
)

KINDS = ("transfer-systems", "cotransfer-systems", "model-structures", "weak-equivalences", "saturated")


class Output:
    """Collects text for stdout or the ``--out`` file."""

    def __init__(self):
        self.parts: list[str] = []

    def write(self, text: str):
        self.parts.append(text if text.endswith("\n") else text + "\n")

    def text(self) -> str:
        return "".join(self.parts)


# -- input helpers ---------------------------------------------------------------


def _lattice(args) -> Lattice | None:
    return io.load_lattice(args.lattice) if args.lattice else None


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for {args.command}")
    return value


class UsageError(Exception):
    pass


def _model(args) -> ModelStructure:
    return io.model_from_json(io.read_json(_need(args, "model")), _lattice(args))


def _arrow(args, lat: Lattice):
    return io.arrow_from_json(lat, _need(args, "arrow"))


def _fmt_set(lat: Lattice, S) -> str:
    return "{" + ", ".join(f"{lat.label(s)}->{lat.label(t)}" for s, t in S) + "}"


# -- subcommands -------------------------------------------------------------------


def cmd_enumerate(args, out: Output) -> int:
    lat = io.load_lattice(_need(args, "lattice"))
    kind = _need(args, "kind")
    kw = dict(force=args.force)
    if kind == "model-structures":
        items = enumerate_model_structures(lat, **kw)
        docs = [io.model_to_json(ms) for ms in items]
        rows = [f"W={_fmt_set(lat, ms.W)} AF={_fmt_set(lat, ms.AF)}" for ms in items]
    else:
        fn: Callable = {
            "transfer-systems": enumerate_transfer_systems,
            "cotransfer-systems": enumerate_cotransfer_systems,
            "weak-equivalences": enumerate_weak_equivalences,
            "saturated": enumerate_saturated,
        }[kind]
        sets = sorted(fn(lat, **kw), key=lambda S: S.mask)
        docs = [io.arrowset_to_json(S) for S in sets]
        rows = [_fmt_set(lat, S) for S in sets]
    if args.format == "json":
        for doc in docs:
            out.write(io.dumps_line(doc))
        out.write(io.dumps_line({"count": len(docs)}))
    else:
        width = len(str(len(rows)))
        for i, row in enumerate(rows):
            out.write(f"{i:>{width}}  {row}")
        out.write(str(len(rows)))
    return 0


def cmd_validate(args, out: Output) -> int:
    data = io.read_json(_need(args, "model"))
    lat = _lattice(args)
    if isinstance(data, dict) and "arrows" in data and "W" not in data:
        S = io.arrowset_from_json(data, lat)
        report = {
            "transfer_system": is_transfer_system(S.lattice, S),
            "cotransfer_system": is_cotransfer_system(S.lattice, S),
            "saturated": is_saturated(S) if is_transfer_system(S.lattice, S) else False,
        }
        out.write(io.dumps(report))
        return 0
    ms = io.model_from_json(data, lat)
    verdict = is_model_structure(ms.lattice, ms.W, ms.AF)
    axioms = check_model_axioms(ms.lattice, ms.W, ms.AF)
    report = {"valid": verdict.ok, "reason": verdict.reason, "detail": verdict.detail, "axioms": axioms.ok}
    out.write(io.dumps(report))
    if not verdict.ok:
        print(f"error: {verdict.reason}" + (f": {verdict.detail}" if verdict.detail else ""), file=sys.stderr)
        return 1
    return 0


def _checked_model(args) -> ModelStructure:
    ms = _model(args)
    verdict = is_model_structure(ms.lattice, ms.W, ms.AF)
    if not verdict:
        raise PreconditionError(f"input is not a model structure: {verdict.detail}", code=verdict.reason)
    return ms


def _witness_json(gen) -> list[dict]:
    return [{"arrow": list(a), "from": list(gen.witness[a])} for a in gen.arrows]


def cmd_localize(args, out: Output) -> int:
    ms = _checked_model(args)
    side = _need(args, "side")
    f = _arrow(args, ms.lattice)
    result = localize(ms, side, f)
    doc = io.model_to_json(result)
    if side == "right":
        doc["golden_arrows"] = io.arrows_to_json(golden_arrows(ms, f).arrows)
    else:
        doc["copper_arrows"] = io.arrows_to_json(copper_arrows(ms, f).arrows)
    out.write(io.dumps(doc))
    return 0


def cmd_golden(args, out: Output) -> int:
    ms = _checked_model(args)
    gen = golden_arrows(ms, _arrow(args, ms.lattice))
    out.write(io.dumps({"lattice": io.lattice_to_json(ms.lattice), "golden_arrows": _witness_json(gen)}))
    return 0


def cmd_copper(args, out: Output) -> int:
    ms = _checked_model(args)
    gen = copper_arrows(ms, _arrow(args, ms.lattice))
    out.write(io.dumps({"lattice": io.lattice_to_json(ms.lattice), "copper_arrows": _witness_json(gen)}))
    return 0


def cmd_tmin(args, out: Output) -> int:
    data = io.read_json(_need(args, "model"))
    lat = io._lattice_of(data, _lattice(args))
    W = io.arrows_from_json(lat, data.get("W", []))
    out.write(io.dumps(io.arrowset_to_json(t_min(lat, W))))
    return 0


def cmd_zigzag(args, out: Output) -> int:
    ms = _checked_model(args)
    out.write(io.dumps(io.sequence_to_json(zigzag_realize(ms))))
    return 0


def cmd_replay(args, out: Output) -> int:
    seq = io.sequence_from_json(io.read_json(args.sequence), _lattice(args))
    result = seq.replay()
    out.write(io.dumps(io.model_to_json(result)))
    if args.model:
        expected = io.model_from_json(io.read_json(args.model), seq.base.lattice)
        if expected.key != result.key:
            print("error: REPLAY_MISMATCH: replay does not reproduce the expected model structure", file=sys.stderr)
            return 1
    return 0


def cmd_reach(args, out: Output) -> int:
    lat = io.load_lattice(_need(args, "lattice"))
    graph = reachability_graph(lat, force=args.force)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(graph.to_dot())
    if args.format == "dot":
        out.write(graph.to_dot())
        return 0
    no_incoming = [ms.ident for ms in graph.without_incoming() if ms.ident != graph.root]
    summary = {
        "lattice": io.lattice_to_json(lat),
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "reachable": len(graph.reachable),
        "unreachable": sorted(ms.ident for ms in graph.unreachable),
        "no_incoming": sorted(no_incoming),
        "missing_localizations": graph.missing,
    }
    if args.format == "table":
        for key in ("nodes", "edges", "reachable", "missing_localizations"):
            out.write(f"{key}: {summary[key]}")
        out.write(f"unreachable: {len(summary['unreachable'])}")
        out.write(f"no_incoming: {len(no_incoming)}")
    else:
        out.write(io.dumps(summary))
    return 0


def cmd_bijection(args, out: Output) -> int:
    if args.datum:
        datum = io.datum_from_json(io.read_json(args.datum))
        out.write(io.dumps(io.arrowset_to_json(saturated_smaller_to_bigger(datum))))
        return 0
    data = io.read_json(_need(args, "model"))
    T = io.arrowset_from_json(data, _lattice(args))
    out.write(io.dumps(io.datum_to_json(saturated_bigger_to_smaller(T))))
    return 0


COMMANDS = {
    "enumerate": (cmd_enumerate, "list transfer systems, model structures, ..."),
    "validate": (cmd_validate, "check a model structure (or transfer system) file"),
    "localize": (cmd_localize, "left or right localization at a short edge"),
    "golden": (cmd_golden, "golden arrows of a right localization"),
    "copper": (cmd_copper, "copper arrows of a left localization"),
    "tmin": (cmd_tmin, "minimal acyclic fibrations for the W of a file"),
    "zigzag": (cmd_zigzag, "localization sequence realizing a saturated model structure"),
    "replay": (cmd_replay, "replay a localization sequence"),
    "reach": (cmd_reach, "localization graph and reachability from the trivial structure"),
    "bijection": (cmd_bijection, "saturated transfer system <-> smaller-grid datum"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modelkit", description="Model structures on finite lattices.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--lattice", help="grid:MxN, chain:N or a lattice JSON file")
        p.add_argument("--model", help="model structure JSON file")
        p.add_argument("--arrow", help='arrow as JSON, e.g. "[1,3]" or "[[1,0],[1,1]]"')
        p.add_argument("--side", choices=("left", "right"))
        p.add_argument("--kind", choices=KINDS)
        p.add_argument("--format", choices=("json", "dot", "table"), default=None)
        p.add_argument("--out", help="write the result here instead of stdout")
        p.add_argument("--force", action="store_true", help="ignore the size guard")
        if name == "replay":
            p.add_argument("sequence", help="sequence JSON file")
        if name == "reach":
            p.add_argument("--dot", help="also write the DOT graph to this file")
        if name == "bijection":
            p.add_argument("--datum", help="smaller-grid datum JSON file")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "table" if args.command == "enumerate" else "json"
    if args.format == "dot" and args.command != "reach":
        parser.error("--format dot is only available for reach")
    func = COMMANDS[args.command][0]
    out = Output()
    try:
        status = func(args, out)
    except UsageError as exc:
        parser.error(str(exc))
    except ModelkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {FormatError.code}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out.text())
    else:
        sys.stdout.write(out.text())
    return status


if __name__ == "__main__":
    sys.exit(main())
