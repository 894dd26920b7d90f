"""HTTP service wrapping the solver package."""

from .app import app

__all__ = ["app"]
