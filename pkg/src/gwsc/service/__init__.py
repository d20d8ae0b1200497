"""HTTP service exposing the pipeline commands."""

from gwsc.service.app import create_app

__all__ = ["create_app"]
