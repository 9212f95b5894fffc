"""property-lab: sensitivity experiments on graph properties.

Exit codes: 0 success, 1 usage error, 2 malformed input, 3 asserted bound violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import lab
from .builtins import REGISTRY
from .hypercube import MalformedInput

EXIT_OK, EXIT_USAGE, EXIT_MALFORMED, EXIT_VIOLATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _table(rows, headers) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h)
              for k, h in enumerate(headers)]
    line = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([line(headers), line(["-" * w for w in widths])] + [line(r) for r in rows])


def _text_verify(d):
    out = [f"n={d['n']} mode={d['mode']} examined={d['examined']} seed={d['seed']} "
           f"time={d['wall_time']}s",
           f"minimum s(f) = {d['min_sensitivity']} attained by classes {d['min_property']['classes']}",
           "", _table(sorted(((int(k), v) for k, v in d["histogram"].items())), ["s", "count"]), ""]
    out.append(_table([[k, b["bound"], "asserted" if b["asserted"] else "observed", b["status"]]
                       for k, b in d["bounds"].items()], ["bound", "value", "kind", "status"]))
    return "\n".join(out)


def _text_analyze(d):
    keys = ["n", "arity", "graph_property", "nontrivial", "monotone", "s", "s_witness", "bs"]
    rows = [[k, d[k]] for k in keys if k in d]
    if "minimal" in d:
        m = d["minimal"]
        rows += [["minimal graphs", m["count"]], ["minimal sizes", m["sizes"]],
                 ["delta'(f)", m["delta_prime"]], ["c(f)", m["c"]],
                 ["complemented", m["complemented"]]]
    return _table(rows, ["field", "value"])


def _text_witness(d):
    w = d["witness"]
    lines = [f"case: {d['case']} (complemented: {d['complemented']})",
             f"witness {w['point']} via {w['method']}: verified sensitivity "
             f"{w['verified_sensitivity']}, s(f) = {d['max_sensitivity']}",
             ""]
    lines.append(_table([[t["case"], t["outcome"], len(t["steps"]), len(t["harvests"]),
                          max((h["verified_sensitivity"] for h in t["harvests"]), default="-"),
                          t["reason"]] for t in d["traces"]],
                        ["trace", "outcome", "steps", "harvests", "best", "reason"]))
    return "\n".join(lines)


def _text_classes(d):
    return f"{d['count']} classes on n={d['n']}\n" + _table(
        [[c["signature"], " ".join(f"{i}{j}" for i, j in c["edges"]) or "-"]
         for c in d["classes"]], ["signature", "edges"])


def _text_monotone(d):
    return _table([[r["property"], r["monotone"], r["nontrivial"], r.get("s", "-"),
                    r.get("bound", "-"), r["status"]] for r in d["results"]],
                  ["property", "monotone", "nontrivial", "s", "n-1", "status"])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default $PROPERTY_LAB_JOBS or 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    prop = argparse.ArgumentParser(add_help=False)
    prop.add_argument("property", nargs="?", choices=sorted(REGISTRY), help="builtin property")
    prop.add_argument("--n", type=int)
    prop.add_argument("--input", help="GPTT truth table or class-set JSON")

    p = _Parser(prog="property-lab", description="Sensitivity of graph properties.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("analyze", parents=[common, prop], help="measures of one property")
    w = sub.add_parser("witness", parents=[common, prop], help="run the witness extractor")
    w.add_argument("--short-circuit", action="store_true",
                   help="skip the case analysis when a minimal graph has >= n/2 edges")
    v = sub.add_parser("verify", parents=[common], help="sweep all or sampled properties")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--mode", choices=["exhaustive", "sample"], default="exhaustive")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=1000)
    c = sub.add_parser("classes", parents=[common], help="list isomorphism classes")
    c.add_argument("--n", type=int, required=True)
    mc = sub.add_parser("monotone-check", parents=[common], help="s >= n-1 for monotone builtins")
    mc.add_argument("--n", type=int, required=True)
    return p


def run(args) -> tuple[dict, int]:
    jobs = args.jobs if args.jobs is not None else lab.default_jobs()
    if args.command in ("analyze", "witness"):
        if args.input is None and (args.property is None or args.n is None):
            raise ValueError("give a builtin property with --n, or --input")
        f = lab.load_property(args.property, args.n, args.input)
        if args.command == "analyze":
            return lab.analyze(f), EXIT_OK
        return lab.witness(f, short_circuit=args.short_circuit), EXIT_OK
    if args.command == "verify":
        rep = lab.verify(args.n, args.mode, args.seed, args.count, jobs)
        return rep.to_json(), EXIT_OK if rep.asserted_ok else EXIT_VIOLATION
    if args.command == "classes":
        return lab.classes(args.n), EXIT_OK
    d = lab.monotone_check(args.n)
    return d, EXIT_OK if d["ok"] else EXIT_VIOLATION


_TEXT = {"analyze": _text_analyze, "witness": _text_witness, "verify": _text_verify,
         "classes": _text_classes, "monotone-check": _text_monotone}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc, code = run(args)
    except MalformedInput as exc:
        print(f"property-lab: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (ValueError, KeyError) as exc:
        print(f"property-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"property-lab: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    text = json.dumps(doc, indent=2) if args.format == "json" else _TEXT[args.command](doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
