"""HTTP service exposing the simulation and link-budget engine."""

from .app import app

__all__ = ["app"]
