"""Exact-arithmetic toolkit for approval-based committee (ABC) elections.

Subpackages and modules:

- ``core``        election model, rational arithmetic, serialization
- ``rules``       polynomial-time ABC rules (twelve rule ids) with round traces
- ``graphs``      graph model, greedy graph oracles, 3-regularization
- ``reductions``  graph-to-election constructions with equivalence metadata
- ``pqtree``      consecutive-ones ordering (PQ-tree)
- ``restricted``  single-peaked / single-crossing recognition and solvers
- ``verify``      randomized equivalence harness
- ``bench``       wall-clock benchmark suites
- ``service``     HTTP (FastAPI) facade
- ``cli``         command-line entry point
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
