"""Path structure of best-response, better-response and satisficing graphs
of finite normal-form games."""

from ._core import (
    Game,
    InputError,
    ResourceError,
    absorbing_states,
    absorption_probability,
    census,
    check_conjecture_hypothesis,
    check_isp,
    check_theorem2,
    classify,
    export_dot,
    graph_edges,
    hunt_conjecture,
    named_example,
    named_example_list,
    simulate,
    transition_probability,
    witness_path,
)

__all__ = [
    "Game",
    "InputError",
    "ResourceError",
    "absorbing_states",
    "absorption_probability",
    "census",
    "check_conjecture_hypothesis",
    "check_isp",
    "check_theorem2",
    "classify",
    "export_dot",
    "graph_edges",
    "hunt_conjecture",
    "named_example",
    "named_example_list",
    "simulate",
    "transition_probability",
    "witness_path",
]
