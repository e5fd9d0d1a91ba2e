"""Algebra of ontology systems over finite carriers."""

from .errors import Check, OntalgError, Refutation

__version__ = "0.1.0"

__all__ = ["Check", "OntalgError", "Refutation", "__version__"]
