"""Command line interface: `decide <command> <instance file>`.

Commands: intersect, orbit, witness (decide + force witness extraction),
oracle (brute-force enumeration only), log, exp (exact matrix log/exp of
a named element).  Exit codes are made for scripting ground truth:

    0  decided Empty (or: oracle found nothing / log/exp succeeded)
    1  decided NonEmpty (or: oracle found a collision)
    2  Unsupported instance or a work/memory budget fired
    3  input error (parse or validation)

Reports print as text by default; `--json` emits a versioned
machine-readable report (schema "decide-report/1") with all rationals as
exact "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .errors import BudgetExceeded, UnsupportedInstance
from .instances import (
    InstanceFile,
    ParseError,
    ValidationError,
    load_instance_file,
)
from .intersect import (
    Decision,
    IntersectionInstance,
    Verdict,
    decide_intersection,
    extract_witness,
    verify_witness,
)
from .matlie import NilpotentMatrix, exp_nilpotent, log_unipotent, product_of_word
from .oracle import bfs_oracle
from .orbit import OrbitInstance, decide_orbit
from .wordcraft import Word

SCHEMA = "decide-report/1"

EXIT_EMPTY = 0
EXIT_NONEMPTY = 1
EXIT_UNSUPPORTED = 2
EXIT_INPUT_ERROR = 3


@dataclass
class ResultReport:
    command: str
    verdict: str
    witnesses: list = field(default_factory=list)  # [(set name, [(gen, count), ...])]
    common_element: list | None = None
    matrix: list | None = None
    trace: list | None = None
    oracle: dict | None = None
    timing_s: float = 0.0
    message: str | None = None

    def to_jsonable(self):
        out = {
            "schema": SCHEMA,
            "command": self.command,
            "verdict": self.verdict,
            "timing_s": round(self.timing_s, 6),
        }
        if self.witnesses:
            out["witnesses"] = [
                {"set": name, "word": [[g, c] for g, c in runs]}
                for name, runs in self.witnesses
            ]
        if self.common_element is not None:
            out["common_element"] = self.common_element
        if self.matrix is not None:
            out["matrix"] = self.matrix
        if self.trace is not None:
            out["trace"] = self.trace
        if self.oracle is not None:
            out["oracle"] = self.oracle
        if self.message is not None:
            out["message"] = self.message
        return out

    def to_text(self):
        lines = [f"verdict: {self.verdict}"]
        for name, runs in self.witnesses:
            body = " ".join(f"{g}^{c}" if c != 1 else g for g, c in runs)
            lines.append(f"witness {name}: {body if body else '(empty)'}")
        if self.common_element is not None:
            lines.append("common element:")
            for row in self.common_element:
                lines.append("  " + " ".join(row))
        if self.matrix is not None:
            lines.append("matrix:")
            for row in self.matrix:
                lines.append("  " + " ".join(row))
        if self.oracle is not None:
            lines.append(f"oracle: {self.oracle}")
        if self.message is not None:
            lines.append(self.message)
        if self.trace is not None:
            lines.append(f"trace: {self.trace}")
        lines.append(f"time: {self.timing_s:.3f}s")
        return "\n".join(lines)


def _mat_rows(mat):
    return [[str(x) for x in row] for row in mat.rows]


def _word_runs(word: Word, names):
    return [(names[letter], count) for letter, count in word.runs]


def _witness_entries(inst_file: InstanceFile, built, decision: Decision):
    entries = []
    if isinstance(built, IntersectionInstance):
        set_names = inst_file.problem[1]
        for set_name, sys, word in zip(set_names, built.systems, decision.witnesses):
            entries.append((set_name, _word_runs(word, sys.names)))
    else:
        g_name, h_name = inst_file.problem[3], inst_file.problem[4]
        v, w = decision.witnesses
        entries.append((g_name, _word_runs(v, built.G.names)))
        entries.append((h_name, _word_runs(w, built.H.names)))
    return entries


def _jsonable_trace(trace):
    def conv(obj):
        if isinstance(obj, dict):
            return {str(k): conv(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [conv(v) for v in obj]
        if isinstance(obj, (frozenset, set)):
            return sorted(conv(v) for v in obj)
        if isinstance(obj, (int, str, type(None), bool)):
            return obj
        return str(obj)

    return conv(trace)


def run(command: str, inst_file: InstanceFile, *, witness=False, trace=False,
        depth=None, matrix_name=None, check_oracle=False) -> ResultReport:
    """Dispatch one command against a parsed instance file."""
    start = time.monotonic()
    options = inst_file.options

    if command in ("log", "exp"):
        if matrix_name is None:
            raise ValidationError("log/exp need --matrix NAME")
        if matrix_name not in inst_file.elements:
            raise ValidationError(f"unknown element {matrix_name!r}")
        mat = inst_file.elements[matrix_name]
        if command == "log":
            out = log_unipotent(mat)
        else:
            # instance files hold group elements, so the algebra input X
            # is carried as the unipotent matrix I + X
            x = NilpotentMatrix(
                [
                    [v if i != j else 0 for j, v in enumerate(row)]
                    for i, row in enumerate(mat.rows)
                ]
            )
            out = exp_nilpotent(x)
        report = ResultReport(command, "ok", matrix=_mat_rows(out))
        report.timing_s = time.monotonic() - start
        return report

    built = inst_file.build()

    if command == "oracle":
        d = depth if depth is not None else options.get("oracle_depth", 8)
        found = bfs_oracle(built, d, memory_budget=options.get("memory_budget"))
        report = ResultReport("oracle", "collision" if found else "none")
        if found:
            fake = Decision(Verdict.NONEMPTY, witnesses=found.words)
            report.witnesses = _witness_entries(inst_file, built, fake)
            report.common_element = _mat_rows(found.element)
        report.oracle = {"depth": d}
        report.timing_s = time.monotonic() - start
        return report

    if command == "witness":
        witness = True
        command = (
            "intersect" if isinstance(built, IntersectionInstance) else "orbit"
        )

    if command == "intersect":
        if not isinstance(built, IntersectionInstance):
            raise ValidationError("instance declares an orbit problem")
        decision = decide_intersection(built)
        if witness and decision.verdict is Verdict.NONEMPTY:
            decision = extract_witness(built, decision)
    elif command == "orbit":
        if not isinstance(built, OrbitInstance):
            raise ValidationError("instance declares an intersection problem")
        decision = decide_orbit(built)
    else:
        raise ValidationError(f"unknown command {command!r}")

    report = ResultReport(command, decision.verdict.value)
    if decision.witnesses is not None:
        report.witnesses = _witness_entries(inst_file, built, decision)
    if decision.common_element is not None:
        report.common_element = _mat_rows(decision.common_element)
    if trace:
        report.trace = _jsonable_trace(decision.trace)
    if check_oracle:
        d = options.get("oracle_depth", 8)
        found = bfs_oracle(built, d, memory_budget=options.get("memory_budget"))
        agree = (found is not None) == (decision.verdict is Verdict.NONEMPTY)
        # a missing collision at bounded depth cannot contradict nonempty
        if found is None and decision.verdict is Verdict.NONEMPTY:
            agree = True
        report.oracle = {
            "depth": d,
            "collision": found is not None,
            "consistent": agree,
        }
    report.timing_s = time.monotonic() - start
    return report


def reverify_report(report: dict, inst_file: InstanceFile) -> bool:
    """Re-check a report's witnesses by plain multiplication only.

    Rebuilds the words from their run-length encoding against the
    instance file and multiplies; no trust is placed in the producing
    run.  True when the products match the report's claim.
    """
    if report.get("schema") != SCHEMA:
        raise ValueError("unknown report schema")
    if "witnesses" not in report:
        return True
    built = inst_file.build()
    by_set = {w["set"]: w["word"] for w in report["witnesses"]}
    if isinstance(built, IntersectionInstance):
        words = []
        for set_name, sys in zip(inst_file.problem[1], built.systems):
            runs = by_set[set_name]
            idx = {name: i for i, name in enumerate(sys.names)}
            words.append(Word(sys.K, [(idx[g], c) for g, c in runs]))
        return verify_witness(built, words)
    g_name, h_name = inst_file.problem[3], inst_file.problem[4]
    gi = {name: i for i, name in enumerate(built.G.names)}
    hi = {name: i for i, name in enumerate(built.H.names)}
    v = Word(built.G.K, [(gi[g], c) for g, c in by_set[g_name]])
    w = Word(built.H.K, [(hi[g], c) for g, c in by_set[h_name]])
    left = built.T.matrix() * product_of_word(built.G, v)
    right = built.S.matrix() * product_of_word(built.H, w)
    return left == right


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="decide",
        description="exact decision procedures for semigroup intersection "
        "problems in unipotent matrix groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("intersect", "orbit", "witness", "oracle", "log", "exp"):
        p = sub.add_parser(name)
        p.add_argument("file", help="instance file")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        if name in ("intersect", "orbit", "witness"):
            p.add_argument("--witness", action="store_true",
                           help="extract witness words on a nonempty verdict")
            p.add_argument("--trace", action="store_true",
                           help="include the decision trace in the report")
            p.add_argument("--budget", type=int, default=None,
                           help="override the interleaving budget")
            p.add_argument("--check-oracle", action="store_true",
                           help="cross-check the verdict against enumeration")
        if name == "oracle":
            p.add_argument("--depth", type=int, default=None,
                           help="maximum word length to enumerate")
        if name in ("log", "exp"):
            p.add_argument("--matrix", required=True, help="element name")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        inst_file = load_instance_file(args.file)
        if getattr(args, "budget", None) is not None:
            inst_file.options["interleave_budget"] = args.budget
        report = run(
            args.command,
            inst_file,
            witness=getattr(args, "witness", False),
            trace=getattr(args, "trace", False),
            depth=getattr(args, "depth", None),
            matrix_name=getattr(args, "matrix", None),
            check_oracle=getattr(args, "check_oracle", False),
        )
    except (ParseError, ValidationError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except UnsupportedInstance as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED

    if args.json:
        print(json.dumps(report.to_jsonable(), indent=2, sort_keys=True))
    else:
        print(report.to_text())

    if report.verdict in ("empty", "none", "ok"):
        return EXIT_EMPTY
    return EXIT_NONEMPTY


if __name__ == "__main__":
    sys.exit(main())
