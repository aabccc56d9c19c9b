"""Shared fixtures and graph builders for the test suite."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from spanner_lca.graph import Graph, build_from_edge_list


def triangle() -> Graph:
    return build_from_edge_list(3, [(0, 1), (1, 2), (0, 2)])


def path_graph(n: int) -> Graph:
    return build_from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    edges = [(i, (i + 1) % n) for i in range(n)]
    return build_from_edge_list(n, edges)


def star_graph(leaves: int) -> Graph:
    return build_from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@st.composite
def small_edge_lists(draw, max_n=12, max_m=25):
    """Random simple edge lists over 0..n-1 in a random insertion order."""
    n = draw(st.integers(min_value=2, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=max_m, unique=True))
    order = draw(st.permutations(chosen)) if chosen else []
    return n, list(order)


@pytest.fixture(scope="session")
def tiny_graphs():
    return {
        "triangle": triangle(),
        "p4": path_graph(4),
        "star5": star_graph(5),
    }
