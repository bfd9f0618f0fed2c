"""Exact evaluation and complexity classification of (coloured) holant problems."""
from __future__ import annotations

from .grids import ColouredPattern, Graph, SignatureGrid, canonical_form, enumerate_patterns
from .holant import HolantError, HolantResult, evaluate, holant_mod_p
from .scalars import GAUSSIAN, RATIONAL, Field, field_from_spec, prime_field
from .signatures import Signature, builtin, chi_lambda, classify, fingerprint, generate_signature
from .zeta import zeta_closed, zeta_definitional

__version__ = "0.1.0"

__all__ = [
    "ColouredPattern",
    "Graph",
    "SignatureGrid",
    "canonical_form",
    "enumerate_patterns",
    "HolantError",
    "HolantResult",
    "evaluate",
    "holant_mod_p",
    "GAUSSIAN",
    "RATIONAL",
    "Field",
    "field_from_spec",
    "prime_field",
    "Signature",
    "builtin",
    "chi_lambda",
    "classify",
    "fingerprint",
    "generate_signature",
    "zeta_closed",
    "zeta_definitional",
]
