"""FastAPI application exposing the engine.

Error contract: malformed inputs (file/JSON shape, invalid elections or
graphs) answer 400 with ``{"error": "parse"}``; well-formed requests that
violate an operation's precondition answer 422 with
``{"error": "precondition"}``.  Clients map these to their own exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import __version__
from ..bench import run_bench
from ..core import ParseError, PreconditionError, parse_rational, tie_events
from ..graphs import lfmis, ovr_decide, ovr_deletion_order
from ..reductions import REDUCTION_IDS, build_reduction, detie_seqcc
from ..restricted import brute_cc, find_axis, optl_enumerate, solve_sccc, solve_spcc, to_intervals
from ..rules import ThieleWeight, compute_rule
from ..verify import run_verify
from . import schemas as s


def create_app() -> FastAPI:
    app = FastAPI(title="abckit", version=__version__)

    @app.exception_handler(ParseError)
    async def _parse_error(_: Request, exc: ParseError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": "parse", "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": "parse", "detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _shape_error(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"error": "parse", "detail": str(exc)})

    @app.exception_handler(PreconditionError)
    async def _precondition_error(_: Request, exc: PreconditionError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"error": "precondition", "detail": str(exc)})

    @app.get("/health", response_model=s.HealthResponse)
    async def health() -> s.HealthResponse:
        return s.HealthResponse(status="ok", version=__version__)

    @app.post("/compute", response_model=s.ComputeResponse)
    async def compute(req: s.ComputeRequest) -> s.ComputeResponse:
        e = req.election.to_core()
        weights = None
        if req.weights is not None:
            weights = ThieleWeight(tuple(parse_rational(w) for w in req.weights))
        result = compute_rule(req.rule, e, weights=weights)
        scores = None
        if result.scores is not None:
            scores = [s.ScoreModel.from_pair(c, v) for c, v in result.scores]
        return s.ComputeResponse(
            rule=result.rule,
            committee=list(result.committee.sorted()),
            trace=[s.TraceRoundModel.from_core(t) for t in result.trace],
            scores=scores,
            warnings=list(result.warnings),
            tie_events=tie_events(result.trace),
        )

    @app.post("/reduce", response_model=s.ReduceResponse)
    async def reduce(req: s.ReduceRequest) -> s.ReduceResponse:
        if req.name == "detie":
            if req.election is None:
                raise PreconditionError("detie needs an election")
            padded = detie_seqcc(req.election.to_core())
            return s.ReduceResponse(
                election=s.ElectionModel.from_core(padded),
                distinguished=None,
                expected_rule="seq-cc",
                sense="yes",
            )
        if req.name not in REDUCTION_IDS:
            raise PreconditionError(
                f"unknown reduction {req.name!r}; expected one of {', '.join(REDUCTION_IDS)}"
            )
        if req.graph is None or req.vertex is None:
            raise PreconditionError(f"{req.name} needs a graph and a vertex")
        epsilon = parse_rational(req.epsilon) if req.epsilon is not None else None
        out = build_reduction(req.name, req.graph.to_core(), req.vertex, k=req.k, epsilon=epsilon)
        return s.ReduceResponse(
            election=s.ElectionModel.from_core(out.election),
            distinguished=out.distinguished,
            expected_rule=out.expected_rule,
            sense=out.sense,
            epsilon=None if out.epsilon is None else f"{out.epsilon.numerator}/{out.epsilon.denominator}",
        )

    @app.post("/axis", response_model=s.AxisResponse)
    async def axis(req: s.AxisRequest) -> s.AxisResponse:
        if req.kind not in ("sp", "sc"):
            raise PreconditionError("kind must be sp or sc")
        found = find_axis(req.election.to_core(), req.kind)
        if found is None:
            return s.AxisResponse(kind=req.kind, found=False)
        return s.AxisResponse(kind=req.kind, found=True, order=list(found.order))

    @app.post("/restricted", response_model=s.RestrictedResponse)
    async def restricted(req: s.RestrictedRequest) -> s.RestrictedResponse:
        if req.variant not in ("sp-cc", "sc-cc"):
            raise PreconditionError("variant must be sp-cc or sc-cc")
        kind = "sp" if req.variant == "sp-cc" else "sc"
        e = req.election.to_core()
        found = find_axis(e, kind)
        if found is None:
            raise PreconditionError("not-single-peaked" if kind == "sp" else "not-single-crossing")
        inst = to_intervals(e, found)
        if kind == "sp":
            coverage, positions = solve_spcc(inst, workers=req.workers)
            committee = sorted(found.order[p - 1] for p in positions)
        else:
            coverage, members = solve_sccc(inst, workers=req.workers)
            committee = sorted(members)
        optl = None
        if req.optl:
            variant = "spcc" if kind == "sp" else "sccc"
            output_value, (optv, choices), accepting = optl_enumerate(inst, variant)
            witness = (
                sorted(found.order[p - 1] for p in choices) if kind == "sp" else sorted(choices)
            )
            optl = s.OptlResult(
                optv=optv, witness=witness, accepting_paths=accepting, output_value=output_value
            )
        return s.RestrictedResponse(
            variant=req.variant,
            axis=list(found.order),
            coverage=coverage,
            committee=committee,
            optl=optl,
        )

    @app.post("/oracle/ovr", response_model=s.OvrResponse)
    async def oracle_ovr(req: s.OvrRequest) -> s.OvrResponse:
        g = req.graph.to_core()
        return s.OvrResponse(
            result=ovr_decide(g, req.vertex, req.k), deletion_order=list(ovr_deletion_order(g))
        )

    @app.post("/oracle/lfmis", response_model=s.LfmisResponse)
    async def oracle_lfmis(req: s.LfmisRequest) -> s.LfmisResponse:
        return s.LfmisResponse(members=sorted(lfmis(req.graph.to_core())))

    @app.post("/oracle/cc", response_model=s.CCResponse)
    async def oracle_cc(req: s.CCRequest) -> s.CCResponse:
        coverage, committee = brute_cc(req.election.to_core(), cap=req.cap)
        return s.CCResponse(coverage=coverage, committee=sorted(committee))

    @app.post("/verify", response_model=s.VerifyResponse)
    async def verify(req: s.VerifyRequest) -> s.VerifyResponse:
        report = run_verify(
            req.theorem,
            trials=req.trials,
            max_size=req.max_size,
            seed=req.seed,
            workers=req.workers,
        )
        return s.VerifyResponse(
            theorem_id=report.theorem_id,
            trials=report.trials,
            cases=report.cases,
            agreements=report.agreements,
            disagreements=[
                s.DisagreementModel(case=d.case, vertex=d.vertex, expected=d.expected, got=d.got)
                for d in report.disagreements
            ],
            tie_events=report.tie_events,
            ok=report.ok,
            text=report.render(),
        )

    @app.post("/bench", response_model=s.BenchResponse)
    async def bench(req: s.BenchRequest) -> s.BenchResponse:
        table = run_bench(
            req.suite,
            sizes=None if req.sizes is None else tuple(req.sizes),
            workers=tuple(req.threads),
            seed=req.seed,
        )
        return s.BenchResponse(table=table)

    return app


app = create_app()
