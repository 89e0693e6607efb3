"""Request/response models for the HTTP service.

Exact rationals cross the wire as ``p/q`` strings; elections and graphs as
explicit field lists.  Every model knows how to convert to/from the core
dataclasses so endpoint bodies stay one-liners.
"""

from __future__ import annotations

from fractions import Fraction

from pydantic import BaseModel, Field

from ..core import Election, RoundTrace, format_rational, make_election
from ..graphs import Graph, make_graph


class ElectionModel(BaseModel):
    m: int
    k: int
    ballots: list[list[int]] = Field(default_factory=list)

    def to_core(self) -> Election:
        return make_election(self.m, self.k, [frozenset(b) for b in self.ballots])

    @classmethod
    def from_core(cls, e: Election) -> "ElectionModel":
        return cls(m=e.m, k=e.k, ballots=[sorted(b) for b in e.ballots])


class GraphModel(BaseModel):
    num_vertices: int
    edges: list[tuple[int, int]] = Field(default_factory=list)

    def to_core(self) -> Graph:
        return make_graph(self.num_vertices, self.edges)

    @classmethod
    def from_core(cls, g: Graph) -> "GraphModel":
        return cls(num_vertices=g.num_vertices, edges=sorted(g.edges))


class TraceRoundModel(BaseModel):
    round: int
    chosen: int
    value: str
    tied: list[int]

    @classmethod
    def from_core(cls, t: RoundTrace) -> "TraceRoundModel":
        return cls(round=t.round, chosen=t.chosen, value=format_rational(t.value), tied=list(t.tied))


class ScoreModel(BaseModel):
    candidate: int
    score: str

    @classmethod
    def from_pair(cls, candidate: int, score: Fraction | int) -> "ScoreModel":
        return cls(candidate=candidate, score=format_rational(Fraction(score)))


class ComputeRequest(BaseModel):
    rule: str
    election: ElectionModel
    weights: list[str] | None = None


class ComputeResponse(BaseModel):
    rule: str
    committee: list[int]
    trace: list[TraceRoundModel]
    scores: list[ScoreModel] | None = None
    warnings: list[str] = Field(default_factory=list)
    tie_events: int = 0


class ReduceRequest(BaseModel):
    name: str
    graph: GraphModel | None = None
    election: ElectionModel | None = None  # detie reshapes an election, not a graph
    vertex: int | None = None
    k: int | None = None
    epsilon: str | None = None


class ReduceResponse(BaseModel):
    election: ElectionModel
    distinguished: int | None
    expected_rule: str
    sense: str
    epsilon: str | None = None


class AxisRequest(BaseModel):
    kind: str
    election: ElectionModel


class AxisResponse(BaseModel):
    kind: str
    found: bool
    order: list[int] | None = None


class OptlResult(BaseModel):
    optv: int
    witness: list[int]
    accepting_paths: int
    output_value: int


class RestrictedRequest(BaseModel):
    variant: str
    election: ElectionModel
    optl: bool = False
    workers: int = 1


class RestrictedResponse(BaseModel):
    variant: str
    axis: list[int]
    coverage: int
    committee: list[int]
    optl: OptlResult | None = None


class OvrRequest(BaseModel):
    graph: GraphModel
    vertex: int
    k: int


class OvrResponse(BaseModel):
    result: bool
    deletion_order: list[int]


class LfmisRequest(BaseModel):
    graph: GraphModel


class LfmisResponse(BaseModel):
    members: list[int]


class CCRequest(BaseModel):
    election: ElectionModel
    cap: int = 2_000_000


class CCResponse(BaseModel):
    coverage: int
    committee: list[int]


class VerifyRequest(BaseModel):
    theorem: str
    trials: int = 100
    max_size: int = 8
    seed: int = 0
    workers: int = 1


class DisagreementModel(BaseModel):
    case: str
    vertex: int
    expected: str
    got: str


class VerifyResponse(BaseModel):
    theorem_id: str
    trials: int
    cases: int
    agreements: int
    disagreements: list[DisagreementModel]
    tie_events: int
    ok: bool
    text: str


class BenchRequest(BaseModel):
    suite: str
    sizes: list[int] | None = None
    threads: list[int] = Field(default_factory=lambda: [1, 2, 4, 8])
    seed: int = 0


class BenchResponse(BaseModel):
    table: str


class HealthResponse(BaseModel):
    status: str
    version: str
