"""Command-line surface.

The CLI is a thin client of the HTTP service: every subcommand parses its
text inputs locally, sends one JSON request through the ASGI app in-process
(no socket, no running server needed), and renders the JSON response as
plain text.  ``abckit serve`` runs the same app over a real socket.

Results go to stdout; diagnostics (warnings, traces, sidecar metadata,
seeds) go to stderr.  Exit codes: 0 success/agreement, 1 verification
disagreement, 2 parse error, 3 precondition failure.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from typing import Any

import httpx

from .bench import BENCH_SUITES
from .core import (
    Election,
    ParseError,
    PreconditionError,
    make_election,
    parse_election,
    serialize_election,
)
from .graphs import Graph, parse_graph
from .reductions import REDUCTION_IDS
from .rules import RULE_IDS
from .verify import THEOREM_IDS

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _election_payload(e: Election) -> dict[str, Any]:
    return {"m": e.m, "k": e.k, "ballots": [sorted(b) for b in e.ballots]}


def _graph_payload(g: Graph) -> dict[str, Any]:
    return {"num_vertices": g.num_vertices, "edges": sorted(g.edges)}


def _post(path: str, payload: dict[str, Any]) -> tuple[int, dict[str, Any]]:
    from .service.app import app  # deferred: keep --help fast and import-light

    async def go() -> tuple[int, dict[str, Any]]:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://abckit") as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(go())


def _fail(status: int, body: dict[str, Any]) -> int:
    detail = body.get("detail") or body.get("error") or f"http {status}"
    print(f"error: {detail}", file=sys.stderr)
    if status == 400:
        return EXIT_PARSE
    if status == 422:
        return EXIT_PRECONDITION
    return EXIT_DISAGREE


def _trace_line(t: dict[str, Any]) -> str:
    tied = ",".join(str(c) for c in t["tied"])
    return f"round={t['round']} chosen={t['chosen']} value={t['value']} tied={tied}"


def _ints(values: list[int] | list[Any]) -> str:
    return " ".join(str(v) for v in values)


def cmd_compute(args: argparse.Namespace) -> int:
    e = parse_election(_read_text(args.input))
    payload: dict[str, Any] = {"rule": args.rule, "election": _election_payload(e)}
    if args.weights is not None:
        lines = [ln.strip() for ln in _read_text(args.weights).splitlines()]
        payload["weights"] = [ln for ln in lines if ln and not ln.startswith("#")]
    status, body = _post("/compute", payload)
    if status != 200:
        return _fail(status, body)
    print(_ints(body["committee"]))
    for warning in body["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)
    if args.trace:
        for t in body["trace"]:
            print(_trace_line(t), file=sys.stderr)
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    payload: dict[str, Any] = {"name": args.name}
    if args.name == "detie":
        if args.input is None:
            raise PreconditionError("detie needs --input with an election file")
        payload["election"] = _election_payload(parse_election(_read_text(args.input)))
    else:
        if args.graph is None or args.vertex is None:
            raise PreconditionError(f"{args.name} needs --graph and --vertex")
        payload["graph"] = _graph_payload(parse_graph(_read_text(args.graph)))
        payload["vertex"] = args.vertex
        if args.k is not None:
            payload["k"] = args.k
        if args.epsilon is not None:
            payload["epsilon"] = args.epsilon
    status, body = _post("/reduce", payload)
    if status != 200:
        return _fail(status, body)
    e = body["election"]
    election = make_election(e["m"], e["k"], [frozenset(b) for b in e["ballots"]])
    sys.stdout.write(serialize_election(election))
    sidecar = []
    if body["distinguished"] is not None:
        sidecar.append(f"distinguished={body['distinguished']}")
    sidecar.append(f"rule={body['expected_rule']}")
    sidecar.append(f"sense={body['sense']}")
    if body.get("epsilon"):
        sidecar.append(f"epsilon={body['epsilon']}")
    print(" ".join(sidecar), file=sys.stderr)
    return EXIT_OK


def cmd_axis(args: argparse.Namespace) -> int:
    e = parse_election(_read_text(args.input))
    status, body = _post("/axis", {"kind": args.kind, "election": _election_payload(e)})
    if status != 200:
        return _fail(status, body)
    if body["found"]:
        print(_ints(body["order"]))
    else:
        print("not-single-peaked" if args.kind == "sp" else "not-single-crossing")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.oracle == "ovr":
        g = parse_graph(_read_text(args.graph))
        status, body = _post(
            "/oracle/ovr", {"graph": _graph_payload(g), "vertex": args.vertex, "k": args.k}
        )
        if status != 200:
            return _fail(status, body)
        print("yes" if body["result"] else "no")
        print(f"order={','.join(str(v) for v in body['deletion_order'])}", file=sys.stderr)
        return EXIT_OK
    if args.oracle == "lfmis":
        g = parse_graph(_read_text(args.graph))
        status, body = _post("/oracle/lfmis", {"graph": _graph_payload(g)})
        if status != 200:
            return _fail(status, body)
        print(_ints(body["members"]))
        return EXIT_OK
    e = parse_election(_read_text(args.input))
    status, body = _post("/oracle/cc", {"election": _election_payload(e), "cap": args.cap})
    if status != 200:
        return _fail(status, body)
    print(body["coverage"])
    print(_ints(body["committee"]))
    return EXIT_OK


def cmd_restricted(args: argparse.Namespace) -> int:
    e = parse_election(_read_text(args.input))
    status, body = _post(
        "/restricted",
        {
            "variant": args.variant,
            "election": _election_payload(e),
            "optl": args.optl,
            "workers": args.workers,
        },
    )
    if status != 200:
        return _fail(status, body)
    print(f"axis={','.join(str(c) for c in body['axis'])}", file=sys.stderr)
    if args.optl:
        optl = body["optl"]
        print(optl["optv"])
        print(_ints(optl["witness"]))
        print(optl["accepting_paths"])
    else:
        print(body["coverage"])
        print(_ints(body["committee"]))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    print(f"seed={args.seed}", file=sys.stderr)
    status, body = _post(
        "/verify",
        {
            "theorem": args.theorem,
            "trials": args.trials,
            "max_size": args.max_size,
            "seed": args.seed,
            "workers": args.workers,
        },
    )
    if status != 200:
        return _fail(status, body)
    print(body["text"])
    return EXIT_OK if body["ok"] else EXIT_DISAGREE


def cmd_bench(args: argparse.Namespace) -> int:
    status, body = _post(
        "/bench",
        {
            "suite": args.suite,
            "sizes": args.sizes,
            "threads": args.threads,
            "seed": args.seed,
        },
    )
    if status != 200:
        return _fail(status, body)
    print(body["table"])
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abckit",
        description="Exact-arithmetic committee rules, reductions, and verification harnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="run a committee rule on an election file")
    p.add_argument("rule", choices=RULE_IDS)
    p.add_argument("--input", required=True, help="election file ('-' for stdin)")
    p.add_argument("--weights", help="weight table: one marginal gain per line, as p/q")
    p.add_argument("--trace", action="store_true", help="print per-round trace to stderr")
    p.set_defaults(handler=cmd_compute)

    p = sub.add_parser("reduce", help="build an election whose committee answers a graph query")
    p.add_argument("name", choices=REDUCTION_IDS)
    p.add_argument("--graph", help="graph file ('-' for stdin)")
    p.add_argument("--vertex", type=int, help="distinguished vertex")
    p.add_argument("--k", type=int, help="deletion count (ovr-seqcc only)")
    p.add_argument("--epsilon", help="weight parameter p/q in [0, 1) (thiele reductions)")
    p.add_argument("--input", help="election file (detie only)")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("axis", help="recognize a single-peaked or single-crossing order")
    p.add_argument("--kind", choices=("sp", "sc"), required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(handler=cmd_axis)

    p = sub.add_parser("oracle", help="direct graph/brute-force oracles")
    orc = p.add_subparsers(dest="oracle", required=True)
    q = orc.add_parser("ovr", help="greedy max-degree deletion query")
    q.add_argument("--graph", required=True)
    q.add_argument("--vertex", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q = orc.add_parser("lfmis", help="lexicographically first maximal independent set")
    q.add_argument("--graph", required=True)
    q = orc.add_parser("cc", help="brute-force maximum coverage committee")
    q.add_argument("--input", required=True)
    q.add_argument("--cap", type=int, default=2_000_000, help="max committees to enumerate")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("restricted", help="exact coverage on structured elections")
    p.add_argument("variant", choices=("sp-cc", "sc-cc"))
    p.add_argument("--input", required=True)
    p.add_argument("--optl", action="store_true", help="exhaustive guess-tree enumerator")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=cmd_restricted)

    p = sub.add_parser("verify", help="run a paired-oracle equivalence suite")
    p.add_argument("theorem", choices=THEOREM_IDS)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bench", help="wall-clock timing suites")
    p.add_argument("suite", choices=BENCH_SUITES)
    p.add_argument("--sizes", type=int, nargs="+", default=None)
    p.add_argument("--threads", type=int, nargs="+", default=[1, 2, 4, 8])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main(argv=sys.argv[1:]))
