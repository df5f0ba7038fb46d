"""HTTP layer for the read-only table catalog."""

from .app import create_app

__all__ = ["create_app"]
