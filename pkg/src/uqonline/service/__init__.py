"""HTTP service wrapping the solver package."""

from . import handlers, schemas

__all__ = ["handlers", "schemas"]
