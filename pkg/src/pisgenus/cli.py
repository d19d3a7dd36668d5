"""Command line entry point: ``pisgenus <command> ...``.

Exit status: 0 on success (an unknown upper bound is still success),
1 on a class mismatch or a rejected certificate, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .checker import check_certificate
from .classifier import GenusClass, predict, profile_factors, verify
from .ideals import enumerate_ideals
from .pis import LabeledGraph, build_pis, export_graph, graph_from_json, graph_to_json
from .ring import OrderCapExceeded, RingSpecError, build_ring, parse_ring_spec
from .topology.bounds import genus_bounds
from .topology.budget import DEFAULT_BUDGET_MS, DEFAULT_BUDGET_NODES, Budget

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


@dataclass
class SuiteCase:
    spec: str
    expected: GenusClass
    anchor: str = ""
    budget_ms: float | None = None
    budget_nodes: int | None = None
    patterns: list[str] = field(default_factory=list)

    @classmethod
    def from_json(cls, doc: dict) -> "SuiteCase":
        return cls(doc["spec"], GenusClass.from_label(doc["expected"]), doc.get("anchor", ""),
                   doc.get("budget_ms"), doc.get("budget_nodes"), list(doc.get("patterns", [])))

    def to_json(self) -> dict:
        doc = {"spec": self.spec, "expected": self.expected.label, "anchor": self.anchor}
        if self.budget_ms is not None:
            doc["budget_ms"] = self.budget_ms
        if self.budget_nodes is not None:
            doc["budget_nodes"] = self.budget_nodes
        if self.patterns:
            doc["patterns"] = self.patterns
        return doc

    def consistency_error(self) -> str | None:
        """Parse the spec and compare the expected class with the prediction."""
        try:
            r = build_ring(parse_ring_spec(self.spec))
            got = predict(profile_factors(r))
        except (RingSpecError, OrderCapExceeded, ValueError) as exc:
            return str(exc)
        if got != self.expected:
            return f"manifest expects {self.expected.label}, classifier predicts {got.label}"
        return None


def load_manifest(path: str | None) -> list[SuiteCase]:
    if path is None:
        text = resources.files("pisgenus").joinpath("data/acceptance_suite.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    if not isinstance(doc, list):
        raise ValueError("manifest must be a JSON array of cases")
    return [SuiteCase.from_json(c) for c in doc]


# --------------------------------------------------------------------------


def _budget(args, ms=None, nodes=None) -> Budget:
    return Budget(ms if ms is not None else args.budget_ms, nodes if nodes is not None else args.budget_nodes)


def _ring_pipeline(spec: str):
    r = build_ring(parse_ring_spec(spec))
    L = enumerate_ideals(r)
    return r, L


def _read_edge_list(text: str) -> LabeledGraph:
    edges = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        u, v = line.replace(",", " ").split()[:2]
        edges.append((int(u), int(v)))
    n = 1 + max((max(e) for e in edges), default=-1)
    return LabeledGraph.from_edges(n, edges)


def load_graph_arg(arg: str) -> LabeledGraph:
    """A graph file (JSON or edge list) or else a ring spec."""
    if os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            return graph_from_json(text)
        return _read_edge_list(text)
    r, L = _ring_pipeline(arg)
    return build_pis(r, L)


def _write(path: str, doc) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def cmd_ideals(args) -> int:
    r, L = _ring_pipeline(args.spec)
    doc = L.to_json()
    if args.format == "text":
        print(f"{r.name}: {len(L)} ideals")
        for row in doc["ideals"]:
            flags = "".join(c for c, on in (("P", row["is_prime"]), ("M", row["is_maximal"])) if on)
            print(f"  {row['index']:3d}  {row['name']:<24} size {row['size']:<5} eta {row['eta']}  {flags}")
    else:
        print(json.dumps(doc, indent=1))
    return EXIT_OK


def cmd_graph(args) -> int:
    r, L = _ring_pipeline(args.spec)
    g = build_pis(r, L)
    fmt = "json" if args.format == "text" else args.format
    sys.stdout.write(export_graph(g, fmt))
    if fmt == "json":
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_genus(args) -> int:
    g = load_graph_arg(args.input)
    b = genus_bounds(g, _budget(args), seed=args.seed, patterns=args.pattern)
    doc = b.to_json(g)
    if args.cert_out:
        _write(args.cert_out, doc)
    if args.graph_out:
        _write(args.graph_out, graph_to_json(g))
    if args.format == "text":
        up = "unknown" if b.upper is None else b.upper
        kind = getattr(b.lower_certificate, "kind", "none")
        print(f"genus in [{b.lower}, {up}]  (lower via {kind}, V={g.n} E={g.m})")
        for note in b.notes:
            print(f"  note: {note}")
    else:
        print(json.dumps({k: doc[k] for k in ("lower", "upper", "lower_certificate", "upper_certificate",
                                             "supporting", "notes")}, indent=1))
    return EXIT_OK


def _summary_line(rep: dict, expected: str | None = None) -> str:
    up = "?" if rep["upper"] is None else rep["upper"]
    exp = f"{expected:<13}" if expected is not None else ""
    return (f"{rep['spec']:<36} {exp}{rep['predicted']:<13} [{rep['lower']},{up}]".ljust(70)
            + f" {rep['verdict']:<11} {rep['seconds']:7.1f}s")


def cmd_verify(args) -> int:
    rep = verify(args.spec, _budget(args), seed=args.seed, patterns=args.pattern)
    doc = rep.to_json()
    if args.cert_out:
        _write(args.cert_out, rep.certificate())
    if args.format == "json":
        print(json.dumps(doc, indent=1))
    else:
        print(_summary_line(doc))
        for note in doc["notes"]:
            print(f"  note: {note}")
    return EXIT_MISMATCH if rep.verdict == "mismatch" else EXIT_OK


def _run_case(payload):
    case_doc, ms, nodes, seed = payload
    case = SuiteCase.from_json(case_doc)
    rep = verify(case.spec, Budget(case.budget_ms or ms, case.budget_nodes or nodes), seed=seed,
                 patterns=case.patterns)
    return rep.to_json(), rep.certificate()


def run_suite(cases: list[SuiteCase], ms, nodes, seed: int = 0, jobs: int = 1):
    payloads = [(c.to_json(), ms, nodes, seed) for c in cases]
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_case, payloads))
    return [_run_case(p) for p in payloads]


def cmd_suite(args) -> int:
    cases = load_manifest(args.manifest)
    status = EXIT_OK
    for c in cases:
        err = c.consistency_error()
        if err:
            print(f"inconsistent case {c.spec!r}: {err}", file=sys.stderr)
            status = EXIT_MISMATCH
    if status != EXIT_OK:
        return status
    results = run_suite(cases, args.budget_ms, args.budget_nodes, args.seed, args.jobs)
    print(f"{'ring':<36} {'expected':<13}{'predicted':<13} bounds".ljust(70) + " verdict        time")
    reports = []
    for case, (rep, cert) in zip(cases, results):
        reports.append(rep)
        print(_summary_line(rep, case.expected.label))
        for note in rep["notes"]:
            print(f"    note: {note}")
        if rep["verdict"] == "mismatch":
            status = EXIT_MISMATCH
        if args.cert_out:
            os.makedirs(args.cert_out, exist_ok=True)
            stem = "".join(ch if ch.isalnum() else "_" for ch in case.spec).strip("_")
            _write(os.path.join(args.cert_out, f"{stem}.cert.json"), cert)
            _write(os.path.join(args.cert_out, f"{stem}.graph.json"), cert["graph"])
    counts = {v: sum(r["verdict"] == v for r in reports) for v in ("confirmed", "lower-only", "mismatch")}
    print(f"{len(reports)} cases: " + ", ".join(f"{n} {v}" for v, n in counts.items()))
    if args.report:
        _write(args.report, reports)
    return status


def cmd_verify_certificate(graph_file: str, cert_file: str, fmt: str = "text") -> int:
    with open(graph_file) as fh:
        gdoc = json.load(fh)
    with open(cert_file) as fh:
        cdoc = json.load(fh)
    if "vertices" not in gdoc and "graph" in gdoc:
        gdoc = gdoc["graph"]
    res = check_certificate(gdoc, cdoc)
    if fmt == "json":
        print(json.dumps(res.to_json(), indent=1))
    else:
        print(("OK" if res.ok else "REJECTED") + f": lower {res.lower}, upper {res.upper}")
        for line in res.checked:
            print(f"  checked {line}")
        for line in res.errors:
            print(f"  error: {line}")
    return EXIT_OK if res.ok else EXIT_MISMATCH


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "dot", "text"], default=None)
    common.add_argument("--budget-ms", type=float, default=DEFAULT_BUDGET_MS)
    common.add_argument("--budget-nodes", type=int, default=DEFAULT_BUDGET_NODES)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--cert-out", metavar="PATH")

    p = argparse.ArgumentParser(prog="pisgenus", description="Prime ideal sum graphs and their genus.")
    p.add_argument("--verify-certificate", nargs=2, metavar=("GRAPH", "CERT"))
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("ideals", parents=[common], help="list the ideal lattice of a ring")
    s.add_argument("spec")
    s.set_defaults(func=cmd_ideals, fmt_default="json")

    s = sub.add_parser("graph", parents=[common], help="export the prime ideal sum graph")
    s.add_argument("spec")
    s.set_defaults(func=cmd_graph, fmt_default="json")

    s = sub.add_parser("genus", parents=[common], help="certified genus bounds of a graph file or ring")
    s.add_argument("input", help="graph JSON, edge list file, or ring spec")
    s.add_argument("--pattern", action="append", default=[], help="also search this subdivision (repeatable)")
    s.add_argument("--graph-out", metavar="PATH")
    s.set_defaults(func=cmd_genus, fmt_default="json")

    s = sub.add_parser("verify", parents=[common], help="compare predicted class and certified bounds")
    s.add_argument("spec")
    s.add_argument("--pattern", action="append", default=[])
    s.set_defaults(func=cmd_verify, fmt_default="text")

    s = sub.add_parser("suite", parents=[common], help="run a manifest of cases (default: acceptance table)")
    s.add_argument("manifest", nargs="?")
    s.add_argument("--report", metavar="PATH", help="write all reports as JSON")
    s.set_defaults(func=cmd_suite, fmt_default="text")

    s = sub.add_parser("verify-certificate", help="re-check a certificate against a graph")
    s.add_argument("graph")
    s.add_argument("cert")
    s.add_argument("--format", choices=["json", "text"], default="text")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verify_certificate:
            return cmd_verify_certificate(*args.verify_certificate)
        if args.command == "verify-certificate":
            return cmd_verify_certificate(args.graph, args.cert, args.format)
        if args.command is None:
            parser.print_help()
            return EXIT_INPUT
        if args.format is None:
            args.format = args.fmt_default
        return args.func(args)
    except (RingSpecError, OrderCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
