"""HTTP service exposing scoring, filtering, evaluation and generation."""

from .app import app, create_app

__all__ = ["app", "create_app"]
