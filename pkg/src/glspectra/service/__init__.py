"""HTTP service wrapping the spectral toolkit.

The FastAPI app in ``glspectra.service.app`` exposes one endpoint per CLI
subcommand; the CLI itself talks to the app in-process, so the same
request/response schemas serve both transport styles.
"""

from .app import app

__all__ = ["app"]
