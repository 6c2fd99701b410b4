"""HTTP service exposing generation, solving, sweeps and theory checks."""

from .app import app, create_app

__all__ = ["app", "create_app"]
