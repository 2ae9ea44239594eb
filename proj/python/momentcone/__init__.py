"""Python interface to the truncated-moment-problem toolkit.

Structured data crosses into the native module as JSON text; this wrapper
exposes dict-in / dict-out versions of the main operations.
"""

import json as _json

from . import _core
from ._core import InvalidInput, MomentError, close_index_set, riesz_apply, sigma

__all__ = [
    "InvalidInput",
    "MomentError",
    "certify",
    "classify",
    "close_index_set",
    "mollify",
    "moments",
    "riesz_apply",
    "sigma",
    "synthesize",
]


def certify(problem):
    """Positivity certificate for a problem document (dict in, dict out)."""
    return _json.loads(_core.certify_json(_json.dumps(problem)))


def classify(problem):
    """Trichotomy classification of a problem document."""
    return _json.loads(_core.classify_json(_json.dumps(problem)))


def synthesize(problem):
    """Strictly positive representing density for a problem document."""
    return _json.loads(_core.synthesize_json(_json.dumps(problem)))


def mollify(measure, eps, ensure_positive=False):
    """Smear an atomic-measure document into a density document."""
    return _json.loads(_core.mollify_json(_json.dumps(measure), eps, ensure_positive))


def moments(doc, tol=0.0, seed=0):
    """Moments of a measure or density document over its index_set field."""
    return _json.loads(_core.moments_json(_json.dumps(doc), tol, seed))
