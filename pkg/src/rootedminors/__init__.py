"""Rooted graph minors with three or four roots: exact search, reductions and structure."""

from .graph_core import Graph, MinorModel, RootedGraph, encode_graph6, parse_graph6
from .minor_oracle import PATTERNS, BudgetExhausted, Pattern, find_rooted_minor, get_pattern, verify_model

__all__ = [
    "Graph",
    "RootedGraph",
    "MinorModel",
    "parse_graph6",
    "encode_graph6",
    "Pattern",
    "PATTERNS",
    "get_pattern",
    "find_rooted_minor",
    "verify_model",
    "BudgetExhausted",
]
