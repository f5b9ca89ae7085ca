"""Command-line front end.

``necksplit run`` replays an update script against a necklace file with a
chosen algorithm family and streams one record per command; ``necksplit
bench`` times seeded workloads.  Run output is byte-identical for identical
inputs and seeds unless ``--times`` adds wall-clock columns.

Necklace file: an optional ``k=<int>`` header line, then one line of bead
symbols (mapped to color ids in first-appearance order).  Script files hold
one command per line, 1-based positions::

    SWAP j | RELOC j1 j2 | BATCH j1,j2 [j1,j2 ...] |
    INSERT <symbol> p1 p2 ... | DELETE p1 p2 ... | CUTS | VERIFY

Exit codes: 0 ok, 2 parse error, 3 invariant violation or update error,
4 algorithm mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .approx import ApproxConfig, OrderIndex, approx_cuts
from .batch import batch_relocate, delete_batch, insert_batch
from .core import (
    Necklace,
    build_necklace,
    derive_cuts,
    is_peelable,
    verify_fair,
)
from .dense import DenseIndex, dense_jump, dense_offline_split, dense_swap
from .dynamic2 import (
    FencePolicy,
    baseline_split,
    relocate_colorpath,
    relocate_fence,
    relocate_path,
    swap,
)
from .errors import (
    AlgorithmMismatchError,
    NecklaceError,
    ScriptParseError,
)
from .offline import offline_split
from . import benchmark

ALGOS = ("offline", "swap", "path", "colorpath", "fence", "batch", "dense", "approx")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VIOLATION = 3
EXIT_MISMATCH = 4


@dataclass
class Command:
    line: int
    name: str
    args: list[str]


def parse_necklace_file(text: str) -> tuple[list[int], dict[str, int], int | None]:
    """Returns (color ids, symbol table, k from header if present)."""
    k = None
    beads = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("k=") and beads is None:
            try:
                k = int(line[2:])
            except ValueError as exc:
                raise ScriptParseError(f"bad header {line!r}") from exc
            continue
        if beads is None:
            beads = line
        else:
            raise ScriptParseError("necklace file holds more than one bead line")
    if not beads:
        raise ScriptParseError("necklace file holds no beads")
    symbols: dict[str, int] = {}
    colors = []
    for ch in beads:
        if ch not in symbols:
            symbols[ch] = len(symbols)
        colors.append(symbols[ch])
    return colors, symbols, k


def parse_script(text: str) -> list[Command]:
    commands = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        name = parts[0].upper()
        args = parts[1:]
        if name == "SWAP":
            if len(args) != 1 or not args[0].isdigit():
                raise ScriptParseError(f"line {ln}: SWAP takes one position")
        elif name == "RELOC":
            if len(args) != 2 or not all(a.isdigit() for a in args):
                raise ScriptParseError(f"line {ln}: RELOC takes two positions")
        elif name == "BATCH":
            if not args:
                raise ScriptParseError(f"line {ln}: BATCH needs at least one j1,j2 pair")
            for a in args:
                bits = a.split(",")
                if len(bits) != 2 or not all(b.isdigit() for b in bits):
                    raise ScriptParseError(f"line {ln}: bad BATCH pair {a!r}")
        elif name == "INSERT":
            if len(args) < 2 or not all(a.isdigit() for a in args[1:]):
                raise ScriptParseError(f"line {ln}: INSERT takes a symbol then positions")
        elif name == "DELETE":
            if not args or not all(a.isdigit() for a in args):
                raise ScriptParseError(f"line {ln}: DELETE takes positions")
        elif name in ("CUTS", "VERIFY"):
            if args:
                raise ScriptParseError(f"line {ln}: {name} takes no arguments")
        else:
            raise ScriptParseError(f"line {ln}: unknown command {name!r}")
        commands.append(Command(line=ln, name=name, args=args))
    return commands


@dataclass
class Reporter:
    as_json: bool
    with_times: bool
    stream: object = field(default_factory=lambda: sys.stdout)

    def emit(self, record: dict) -> None:
        if not self.with_times:
            record.pop("ms", None)
        if self.as_json:
            print(json.dumps(record, sort_keys=True), file=self.stream)
        else:
            print(
                " ".join(f"{k}={_fmt(v)}" for k, v in record.items()),
                file=self.stream,
            )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.3f}"
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    return str(value)


class ScriptRunner:
    """Holds the necklace plus per-algorithm state across script commands."""

    def __init__(self, colors, symbols, k, args):
        self.algo = args.algo
        self.symbols = symbols
        self.verify = args.verify
        self.prune = not args.no_prune
        mode = "approx" if self.algo == "approx" else "exact"
        self.necklace: Necklace = build_necklace(colors, k, mode=mode)
        self.policy: FencePolicy | None = None
        self.dense_index: DenseIndex | None = None
        self.order_index: OrderIndex | None = None
        self.approx_config: ApproxConfig | None = None
        self.fence_moves = 0

        n = self.necklace.n
        if self.algo == "dense":
            self.dense_index = dense_offline_split(self.necklace)
            self.init_cuts = len(self.dense_index.cuts)
        elif self.algo == "approx":
            if n != 2:
                raise AlgorithmMismatchError("approx mode needs two colors")
            self.order_index = OrderIndex.from_necklace(self.necklace)
            self.approx_config = ApproxConfig(
                epsilon=args.epsilon, sample_constant=args.sample_constant, seed=args.seed
            )
            self.init_cuts = 0
        elif self.algo == "fence":
            if n == 2:
                self.init_cuts = offline_split(self.necklace).cuts
            else:
                self.init_cuts = baseline_split(self.necklace)
            budget = args.budget
            self.policy = (
                FencePolicy(extra_cut_budget=budget)
                if budget is not None
                else FencePolicy.for_necklace(self.necklace)
            )
        else:
            if n != 2:
                raise AlgorithmMismatchError(f"--algo {self.algo} needs two colors")
            self.init_cuts = offline_split(self.necklace).cuts

    # ----------------------------------------------------------------

    def run_command(self, cmd: Command) -> dict:
        handler = getattr(self, f"_cmd_{cmd.name.lower()}")
        return handler(cmd)

    def _mismatch(self, cmd: Command) -> None:
        raise AlgorithmMismatchError(f"{cmd.name} is not available under --algo {self.algo}")

    def _cuts_now(self) -> int:
        if self.algo == "dense":
            return len(self.dense_index.cuts)
        if self.algo == "approx":
            return 0
        return derive_cuts(self.necklace).size

    def _cmd_swap(self, cmd: Command) -> dict:
        j = int(cmd.args[0])
        algo = self.algo
        if algo == "swap":
            res = swap(self.necklace, j)
            return {"cuts": res.cuts, "reran": res.reran}
        if algo == "path":
            res = relocate_path(self.necklace, j, j + 1)
            return {"cuts": res.cuts, "agents": len(res.path)}
        if algo == "colorpath":
            res = relocate_colorpath(self.necklace, j, j + 1)
            return {"cuts": res.cuts, "weight": res.path_weight, "reruns": res.reruns}
        if algo == "fence":
            return self._fence(j, j + 1)
        if algo == "dense":
            res = dense_swap(self.necklace, j, self.dense_index)
            return {"cuts": len(self.dense_index.cuts), "case": res.case, "exchanges": res.exchanges}
        if algo == "approx":
            return self._approx_move(j, j + 1)
        self._mismatch(cmd)

    def _cmd_reloc(self, cmd: Command) -> dict:
        j1, j2 = int(cmd.args[0]), int(cmd.args[1])
        algo = self.algo
        if algo == "path":
            res = relocate_path(self.necklace, j1, j2)
            return {"cuts": res.cuts, "agents": len(res.path)}
        if algo == "colorpath":
            res = relocate_colorpath(self.necklace, j1, j2)
            return {"cuts": res.cuts, "weight": res.path_weight, "reruns": res.reruns}
        if algo == "fence":
            return self._fence(j1, j2)
        if algo == "batch":
            res = batch_relocate(self.necklace, [(j1, j2)], prune=self.prune)
            return {"cuts": res.cuts, "active": sorted(res.active)}
        if algo == "dense":
            res = dense_jump(self.necklace, j1, j2, self.dense_index)
            return {"cuts": len(self.dense_index.cuts), "case": res.case, "exchanges": res.exchanges}
        if algo == "approx":
            return self._approx_move(j1, j2)
        self._mismatch(cmd)

    def _fence(self, j1: int, j2: int) -> dict:
        res = relocate_fence(self.necklace, j1, j2, self.policy)
        self.fence_moves = 0 if res.rebuilt else self.fence_moves + 1
        return {"cuts": res.cuts, "added": res.added, "rebuilt": res.rebuilt}

    def _approx_move(self, j1: int, j2: int) -> dict:
        bead = self.necklace.at(j1)
        anchor = self.necklace.at(j2)
        if j2 < j1:
            self.necklace.move_before(bead, anchor)
        else:
            self.necklace.move_after(bead, anchor)
        self.order_index.relocate(j1, j2)
        return {"m": self.necklace.m}

    def _cmd_batch(self, cmd: Command) -> dict:
        if self.algo != "batch":
            self._mismatch(cmd)
        moves = []
        for a in cmd.args:
            j1, j2 = a.split(",")
            moves.append((int(j1), int(j2)))
        res = batch_relocate(self.necklace, moves, prune=self.prune)
        return {
            "cuts": res.cuts,
            "moved": len(moves),
            "imbalanced": res.k_imbalance,
            "active": sorted(res.active),
        }

    def _cmd_insert(self, cmd: Command) -> dict:
        symbol = cmd.args[0]
        positions = [int(a) for a in cmd.args[1:]]
        if symbol not in self.symbols:
            self.symbols[symbol] = len(self.symbols)
        color = self.symbols[symbol]
        if self.algo == "batch":
            res = insert_batch(self.necklace, color, positions, prune=self.prune)
            return {"cuts": res.cuts, "m": self.necklace.m, "imbalanced": res.k_imbalance}
        if self.algo == "approx":
            for p in sorted(positions, reverse=True):
                if p == self.necklace.m + 1:
                    self.necklace.insert_bead(color, after=self.necklace.tail)
                else:
                    self.necklace.insert_bead(color, before=self.necklace.at(p))
                self.order_index.insert(p, color)
            return {"m": self.necklace.m}
        self._mismatch(cmd)

    def _cmd_delete(self, cmd: Command) -> dict:
        positions = [int(a) for a in cmd.args]
        if self.algo == "batch":
            res = delete_batch(self.necklace, positions, prune=self.prune)
            return {"cuts": res.cuts, "m": self.necklace.m, "imbalanced": res.k_imbalance}
        if self.algo == "approx":
            handles = [self.necklace.at(p) for p in positions]
            for p in sorted(positions, reverse=True):
                self.order_index.delete(p)
            for h in handles:
                self.necklace.remove_bead(h)
            return {"m": self.necklace.m}
        self._mismatch(cmd)

    def _cmd_cuts(self, cmd: Command) -> dict:
        if self.algo == "approx":
            res = approx_cuts(self.order_index, self.necklace, self.approx_config)
            return {"cuts": res.cut_count, "positions": res.cuts}
        if self.algo == "dense":
            return {"cuts": len(self.dense_index.cuts), "positions": sorted(self.dense_index.cuts)}
        cutset = derive_cuts(self.necklace)
        return {"cuts": cutset.size, "positions": cutset.positions}

    def _cmd_verify(self, cmd: Command) -> dict:
        return self.check_invariants()

    def check_invariants(self) -> dict:
        neck = self.necklace
        k, n = neck.k, neck.n
        if self.algo == "approx":
            res = approx_cuts(self.order_index, neck, self.approx_config)
            eps = self.approx_config.epsilon
            ok = res.cut_count <= 2 * (k - 1) and all(
                (1 - eps) * neck.color_counts[c] / k
                <= res.counts[a][c]
                <= (1 + eps) * neck.color_counts[c] / k
                for a in range(k)
                for c in range(n)
            )
            return {"cuts": res.cut_count, "bound": 2 * (k - 1), "ok": ok}
        report = verify_fair(neck)
        record: dict = {"fair": report.is_fair}
        if self.algo == "dense":
            try:
                self.dense_index.validate(neck)
                structural = True
            except AssertionError:
                structural = False
            record.update(
                cuts=len(self.dense_index.cuts),
                bound=n * (k - 1),
                structural=structural,
                ok=report.is_fair and structural,
            )
            return record
        cuts = derive_cuts(neck).size
        if self.algo == "fence":
            bound = 2 * (k + max(self.fence_moves, 0) - 1) if n == 2 else neck.m - 1
            record.update(cuts=cuts, bound=bound, ok=report.is_fair and cuts <= bound)
            return record
        peelable = is_peelable(neck)
        bound = 2 * (k - 1)
        record.update(
            cuts=cuts,
            bound=bound,
            peelable=peelable,
            ok=report.is_fair and peelable and cuts <= bound,
        )
        return record

    def final_owners(self) -> list[int]:
        if self.algo == "approx":
            return []
        return [o + 1 for o in self.necklace.owners()]


def cmd_run(args) -> int:
    reporter = Reporter(as_json=args.json, with_times=args.times)
    try:
        with open(args.necklace) as fh:
            colors, symbols, header_k = parse_necklace_file(fh.read())
        with open(args.script) as fh:
            commands = parse_script(fh.read())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ScriptParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    k = args.k if args.k is not None else header_k
    if k is None:
        print("error: agent count missing (use --k or a k= header)", file=sys.stderr)
        return EXIT_PARSE

    try:
        runner = ScriptRunner(colors, symbols, k, args)
    except AlgorithmMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except NecklaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH

    neck = runner.necklace
    reporter.emit(
        {
            "event": "init",
            "algo": args.algo,
            "m": neck.m,
            "n": neck.n,
            "k": k,
            "cuts": runner.init_cuts,
            "seed": args.seed,
        }
    )

    status = EXIT_OK
    for step, cmd in enumerate(commands, start=1):
        t0 = time.perf_counter()
        try:
            payload = runner.run_command(cmd)
        except AlgorithmMismatchError as exc:
            reporter.emit({"event": "error", "step": step, "cmd": cmd.name, "error": str(exc)})
            return EXIT_MISMATCH
        except NecklaceError as exc:
            reporter.emit({"event": "error", "step": step, "cmd": cmd.name, "error": str(exc)})
            return EXIT_VIOLATION
        record = {"event": "step", "step": step, "cmd": cmd.name}
        if cmd.args:
            record["args"] = cmd.args
        record.update(payload)
        record["ms"] = (time.perf_counter() - t0) * 1000
        reporter.emit(record)
        if cmd.name == "VERIFY" and not payload.get("ok", True):
            status = EXIT_VIOLATION
        if args.verify and cmd.name != "VERIFY":
            check = runner.check_invariants()
            if not check.get("ok", check.get("fair", True)):
                reporter.emit({"event": "violation", "step": step, **check})
                return EXIT_VIOLATION

    owners = runner.final_owners()
    final = {"event": "final", "m": runner.necklace.m}
    if owners:
        final["owners"] = owners
    reporter.emit(final)
    return status


def cmd_bench(args) -> int:
    reporter = Reporter(as_json=args.json, with_times=True)
    if args.workload == "index":
        rows = benchmark.bench_index(args.m, args.steps, args.seed)
    elif args.workload == "batch-vs-path":
        rows = benchmark.bench_batch_vs_path(args.m, args.k, args.batch_size, args.seed)
    elif args.workload == "approx":
        rows = [benchmark.bench_approx(args.m, args.k, args.steps, args.seed, args.epsilon)]
    else:
        rows = [benchmark.bench_updates(args.workload, args.m, args.k, args.steps, args.seed)]
    for row in rows:
        record = {
            "workload": row.name,
            "updates": row.updates,
            "mean_us": round(row.mean_us, 2),
            "p50_us": round(row.p50_us, 2),
            "p90_us": round(row.p90_us, 2),
        }
        record.update(row.extra)
        reporter.emit(record)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="necksplit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"necksplit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay an update script against a necklace")
    run.add_argument("necklace", help="necklace file")
    run.add_argument("script", help="script file")
    run.add_argument("--algo", choices=ALGOS, default="offline")
    run.add_argument("--k", type=int, default=None, help="agent count (overrides header)")
    run.add_argument("--epsilon", type=float, default=0.25)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--sample-constant", type=float, default=1.0)
    run.add_argument("--budget", type=int, default=None, help="fence extra-cut budget")
    run.add_argument("--no-prune", action="store_true", help="skip flow pruning")
    run.add_argument("--verify", action="store_true", help="check invariants after every command")
    run.add_argument("--json", action="store_true", help="emit JSON lines")
    run.add_argument("--times", action="store_true", help="include wall-clock columns")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="time seeded workloads")
    bench.add_argument(
        "--workload",
        choices=("swap", "path", "colorpath", "fence", "batch", "dense", "approx", "index", "batch-vs-path"),
        default="swap",
    )
    bench.add_argument("--m", type=int, default=4096)
    bench.add_argument("--k", type=int, default=8)
    bench.add_argument("--steps", type=int, default=200)
    bench.add_argument("--batch-size", type=int, default=16)
    bench.add_argument("--epsilon", type=float, default=0.25)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--json", action="store_true")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
