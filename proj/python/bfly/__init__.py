"""Butterfly counting and peeling on bipartite graphs."""

from ._bfly import (
    ConfigError,
    ContractError,
    Error,
    Graph,
    ParseError,
    ResourceError,
    approx_count,
    brute_force,
    count,
    peel,
)

__all__ = [
    "ConfigError",
    "ContractError",
    "Error",
    "Graph",
    "ParseError",
    "ResourceError",
    "approx_count",
    "brute_force",
    "count",
    "peel",
]
