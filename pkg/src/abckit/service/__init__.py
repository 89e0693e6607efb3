"""HTTP facade over the rule engine, reductions, recognizers, and harnesses."""

from .app import app, create_app

__all__ = ["app", "create_app"]
