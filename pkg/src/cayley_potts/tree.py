"""Finite rooted Cayley trees.

The Cayley tree of order k is the infinite cycle-free graph in which every
vertex has exactly k+1 neighbours.  ``build_tree(k, n)`` constructs the ball
of radius n around a distinguished root: the root keeps all k+1 neighbours
as children and every other internal vertex has k children, so that degrees
match the infinite tree everywhere except on the depth-n boundary.

Vertices carry dense integer indices in breadth-first order.  Two facts the
rest of the package relies on:

* the ball of radius m < n occupies the index prefix 0 .. ball_size(k,m)-1,
* the children of any vertex form a contiguous increasing index range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# allocation guard; trees beyond this are refused outright
MAX_VERTICES = 1 << 26


class TreeSizeError(ValueError):
    """Requested tree exceeds the vertex allocation guard."""


def ball_size(k: int, n: int) -> int:
    """Vertex count of the radius-n ball: 1 + (k+1)(k^n - 1)/(k - 1)."""
    if k == 1:
        return 1 + 2 * n
    return 1 + (k + 1) * (k**n - 1) // (k - 1)


def sphere_size(k: int, m: int) -> int:
    """Vertex count of generation m: (k+1) k^(m-1) for m >= 1, else 1."""
    if m == 0:
        return 1
    return (k + 1) * k ** (m - 1)


@dataclass(frozen=True, eq=False)
class FiniteTree:
    """Radius-``depth`` ball of the order-``k`` Cayley tree, BFS-indexed."""

    k: int
    depth: int
    parent: np.ndarray      # parent[v]; -1 for the root
    generation: np.ndarray  # distance from the root
    children: tuple         # tuple of per-vertex child index tuples

    @property
    def n_vertices(self) -> int:
        return int(self.parent.shape[0])

    def __repr__(self) -> str:
        return (f"FiniteTree(k={self.k}, depth={self.depth}, "
                f"vertices={self.n_vertices})")


def build_tree(k: int, n: int) -> FiniteTree:
    """Build the radius-n ball of the order-k Cayley tree."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"tree order k must be an integer >= 1, got {k!r}")
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"tree depth n must be an integer >= 0, got {n!r}")
    total = ball_size(k, n)
    if total > MAX_VERTICES:
        raise TreeSizeError(
            f"tree with k={k}, n={n} needs {total} vertices, "
            f"above the guard of {MAX_VERTICES}")

    parent = np.full(total, -1, dtype=np.int64)
    generation = np.zeros(total, dtype=np.int64)
    kids: list[tuple[int, ...]] = [()] * total

    cursor = 1
    frontier = [0]
    for gen in range(1, n + 1):
        nxt: list[int] = []
        for v in frontier:
            width = k + 1 if v == 0 else k
            block = tuple(range(cursor, cursor + width))
            kids[v] = block
            for u in block:
                parent[u] = v
                generation[u] = gen
            nxt.extend(block)
            cursor += width
        frontier = nxt
    assert cursor == total

    parent.setflags(write=False)
    generation.setflags(write=False)
    return FiniteTree(k=int(k), depth=int(n), parent=parent,
                      generation=generation, children=tuple(kids))


def sphere(tree: FiniteTree, m: int) -> np.ndarray:
    """Vertex indices at distance m from the root, ascending."""
    if not 0 <= m <= tree.depth:
        raise ValueError(f"generation {m} outside 0..{tree.depth}")
    return np.nonzero(tree.generation == m)[0]


def children(tree: FiniteTree, x: int) -> tuple:
    """Child indices of vertex x (empty for depth-n leaves)."""
    if not 0 <= x < tree.n_vertices:
        raise ValueError(f"vertex {x} outside 0..{tree.n_vertices - 1}")
    return tree.children[x]


def edges(tree: FiniteTree) -> list[tuple[int, int]]:
    """All (parent, child) pairs; a radius-n ball has |V_n| - 1 of them."""
    return [(int(tree.parent[v]), v) for v in range(1, tree.n_vertices)]


def level_sizes(tree: FiniteTree) -> list[int]:
    """Sphere sizes |W_0| .. |W_depth|."""
    return [int(np.count_nonzero(tree.generation == m))
            for m in range(tree.depth + 1)]
