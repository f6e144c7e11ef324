"""HTTP service exposing every analysis as a POST route."""

from .app import app, create_app

__all__ = ["app", "create_app"]
