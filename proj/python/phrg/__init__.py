"""Parallel hyperedge replacement grammars.

Grammars, DFAs, substitutions and hypergraphs are plain dicts in the same JSON
layout the command line tool reads. Anything that takes a document also
accepts a path to a JSON file.
"""

import json
import os

from . import _phrg
from ._phrg import Error, ParseError, UnsupportedShape, ValidationError

__all__ = [
    "Error", "ParseError", "UnsupportedShape", "ValidationError",
    "load", "validate", "enumerate", "words", "is_empty", "is_member",
    "transform", "intersect", "substitute", "union", "concat", "plus",
    "homomorphism", "inverse_homomorphism", "free_product", "export_et0l",
    "canonical_form", "to_dot", "run",
]


def _text(doc):
    if isinstance(doc, (str, os.PathLike)):
        with open(doc, encoding="utf-8") as f:
            return f.read()
    return json.dumps(doc)


def _doc(text):
    return json.loads(text)


def load(doc):
    """Read a grammar, HR grammar or ET0L system and return it as a grammar dict."""
    return _doc(_phrg.normalize(_text(doc)))


def validate(grammar):
    return _phrg.validate(_text(grammar))


def enumerate(grammar, max_steps=8, max_edges=32, max_results=10000):
    """Terminal graphs within the bounds. Returns (graphs, truncated)."""
    graphs, truncated = _phrg.enumerate(_text(grammar), max_steps, max_edges, max_results)
    return [_doc(g) for g in graphs], truncated


def words(grammar, max_len=12, max_steps=8):
    """String language up to max_len, shortlex order. Returns (words, truncated)."""
    return _phrg.words(_text(grammar), max_len, max_steps)


def is_empty(grammar):
    return _phrg.is_empty(_text(grammar))


def is_member(grammar, word):
    return _phrg.is_member(_text(grammar), word)


def transform(name, grammar):
    return _doc(_phrg.transform(name, _text(grammar)))


def intersect(grammar, dfa):
    return _doc(_phrg.intersect(_text(grammar), _text(dfa)))


def substitute(grammar, subst):
    return _doc(_phrg.substitute(_text(grammar), _text(subst)))


def union(a, b):
    return _doc(_phrg.union(_text(a), _text(b)))


def concat(a, b):
    return _doc(_phrg.concat(_text(a), _text(b)))


def plus(a):
    return _doc(_phrg.plus(_text(a)))


def homomorphism(grammar, phi):
    return _doc(_phrg.homomorphism(_text(grammar), _text(phi)))


def inverse_homomorphism(grammar, phi):
    return _doc(_phrg.inverse_homomorphism(_text(grammar), _text(phi)))


def free_product(a, b):
    return _doc(_phrg.free_product(_text(a), _text(b)))


def export_et0l(grammar):
    return _doc(_phrg.export_et0l(_text(grammar)))


def canonical_form(graph):
    return _phrg.canonical_form(_text(graph))


def to_dot(grammar):
    return _phrg.to_dot(_text(grammar))


def run(*args):
    """Run the command line tool in-process. Returns (exit code, stdout, stderr)."""
    return _phrg.run([str(a) for a in args])
