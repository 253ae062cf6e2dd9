"""Python bindings for the slicewalk library."""
import json

from . import _core
from ._core import (
    BipartiteGraph,
    CapExceeded,
    EmptyLink,
    Graph,
    InvalidArgument,
    Slice,
    exact_distribution,
    exact_one_sided_partition,
    exact_partition,
    exact_slice_count,
    gen_bipartite_regular,
    gen_regular,
    one_sided_slice,
    regular_slice,
    run_cli,
    two_sided_slice,
)

__version__ = _core.__version__


def sample(slice_, steps, seed=0, lazy=True):
    return json.loads(_core.sample_json(slice_, steps, seed, lazy))


def estimate_two_sided_count(graph, k_x, k_y, eps=0.1, delta=0.1, seed=0, repetitions=0):
    return json.loads(_core.estimate_two_sided_count_json(graph, k_x, k_y, eps, delta, seed, repetitions))


def estimate_one_sided_partition(graph, k, lambda_, eps=0.1, delta=0.1, seed=0, repetitions=0):
    return json.loads(_core.estimate_one_sided_partition_json(graph, k, lambda_, eps, delta, seed, repetitions))


def verify_two_sided(graph, k_x, k_y):
    return json.loads(_core.verify_two_sided_json(graph, k_x, k_y))


def verify_one_sided(graph, k, lambda_):
    return json.loads(_core.verify_one_sided_json(graph, k, lambda_))


def verify_regular(graph, k):
    return json.loads(_core.verify_regular_json(graph, k))
