"""Potts model on finite Cayley trees.

Implements the q-state Hamiltonian, exact finite-volume probability measures
with boundary log-weights on the outermost generation, the one-step
boundary-field map and its bottom-up propagation, and an exhaustive
marginalisation check that decides whether a per-vertex field assignment
produces a compatible family of measures.

This module is the brute-force oracle for the analytic machinery in the rest
of the package, so it favours exactness over asymptotics: measures are
enumerated configuration by configuration (guarded by ENUMERATION_GUARD),
weights are assembled in log space, and the partition sum adds terms in
ascending order.

Conventions
-----------
* Spin states are 1..q.  A configuration on an N-vertex tree is encoded as
  the base-q integer whose digit at position v (vertex 0 least significant)
  is state-1.  Because vertex indices are breadth-first, restricting to the
  radius-(n-1) sub-ball is the remainder modulo q**|V_{n-1}|.
* Boundary log-weight vectors live in R^{q-1}; the q-th component is
  gauge-fixed to zero and the measure adds an implicit 0 for state q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .tree import FiniteTree, build_tree, edges, sphere

# hard ceiling on q**|V_n| for exhaustive enumeration
ENUMERATION_GUARD = 20_000_000


class EnumerationLimitError(ValueError):
    """State space too large for the exhaustive oracle."""


@dataclass(frozen=True)
class ModelParams:
    """Model constants: tree order k, number of states q, coupling J,
    inverse temperature beta, and the activity theta = exp(J*beta).

    theta < 1 is the antiferromagnetic regime (J < 0), theta > 1
    ferromagnetic.  Use the classmethods; they keep the activity identity
    consistent by construction.
    """

    k: int
    q: int
    J: float
    beta: float
    theta: float

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if not isinstance(self.q, (int, np.integer)) or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q!r}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta must be positive and finite, got {self.beta!r}")
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValueError(f"theta must be positive and finite, got {self.theta!r}")
        if not math.isclose(self.theta, math.exp(self.J * self.beta),
                            rel_tol=1e-12):
            raise ValueError("theta must equal exp(J*beta); "
                             "use from_theta or from_coupling")

    @classmethod
    def from_coupling(cls, k: int, q: int, J: float, beta: float) -> "ModelParams":
        J = float(J)
        beta = float(beta)
        return cls(k=k, q=q, J=J, beta=beta, theta=math.exp(J * beta))

    @classmethod
    def from_theta(cls, k: int, q: int, theta: float) -> "ModelParams":
        """Activity-first construction: beta = 1, J back-filled as ln(theta)."""
        theta = float(theta)
        if not (math.isfinite(theta) and theta > 0):
            raise ValueError(f"theta must be positive and finite, got {theta!r}")
        return cls(k=k, q=q, J=math.log(theta), beta=1.0, theta=theta)

    @property
    def antiferromagnetic(self) -> bool:
        return self.theta < 1.0


@dataclass(frozen=True)
class Configuration:
    """Spin assignment; spins[v] in 1..q for every vertex index v."""

    spins: tuple[int, ...]


def config_index(spins: Sequence[int], q: int) -> int:
    """Base-q encoding of a configuration, vertex 0 least significant."""
    idx = 0
    for v, s in enumerate(spins):
        if not 1 <= s <= q:
            raise ValueError(f"spin state {s} at vertex {v} outside 1..{q}")
        idx += (s - 1) * q**v
    return idx


def config_at(index: int, n_vertices: int, q: int) -> Configuration:
    """Inverse of config_index."""
    if not 0 <= index < q**n_vertices:
        raise ValueError(f"configuration index {index} out of range")
    spins = []
    for _ in range(n_vertices):
        index, digit = divmod(index, q)
        spins.append(digit + 1)
    return Configuration(spins=tuple(spins))


def hamiltonian(tree: FiniteTree, config, params: ModelParams) -> float:
    """Energy -J * (number of monochromatic edges) of one configuration."""
    spins = np.asarray(
        config.spins if isinstance(config, Configuration) else config,
        dtype=np.int64)
    if spins.shape != (tree.n_vertices,):
        raise ValueError("configuration must assign one state per vertex")
    if ((spins < 1) | (spins > params.q)).any():
        raise ValueError(f"spin states must lie in 1..{params.q}")
    if tree.n_vertices == 1:
        return 0.0
    mono = int(np.count_nonzero(spins[tree.parent[1:]] == spins[1:]))
    return -params.J * mono


def _logsumexp(a: np.ndarray) -> float:
    m = float(np.max(a))
    return m + math.log(float(np.sum(np.exp(a - m))))


def f_map(h, params: ModelParams) -> np.ndarray:
    """One-step boundary-field map.

    Component i of the output is

        ln( (theta e^{h_i} + sum_{j != i} e^{h_j} + 1) /
            (theta + sum_j e^{h_j}) )

    with the sums over j = 1..q-1.  Both numerator and denominator are sums
    of positive exponentials, so they are evaluated in log space; this keeps
    the numerator structurally positive and can never emit a silent NaN.
    Non-finite inputs or outputs raise instead.
    """
    q = params.q
    h = np.asarray(h, dtype=float)
    if h.shape != (q - 1,):
        raise ValueError(f"field vector must have shape ({q - 1},), "
                         f"got {h.shape}")
    if not np.isfinite(h).all():
        raise ValueError("field components must be finite")

    log_theta = math.log(params.theta)
    den = _logsumexp(np.append(h, log_theta))
    terms = np.append(h, 0.0)
    out = np.empty(q - 1)
    for i in range(q - 1):
        saved = terms[i]
        terms[i] = log_theta + h[i]
        out[i] = _logsumexp(terms) - den
        terms[i] = saved
    if not np.isfinite(out).all():
        raise ValueError("field map produced a non-finite component")
    return out


def propagate_fields(tree: FiniteTree, leaf_fields, params: ModelParams) -> np.ndarray:
    """Fill fields on every vertex from given depth-n leaf fields.

    Each internal vertex x gets the sum of f_map over its children; leaves
    keep their inputs.  Returns an (n_vertices, q-1) array.
    """
    q = params.q
    leaves = sphere(tree, tree.depth)
    leaf = np.asarray(leaf_fields, dtype=float)
    if leaf.shape != (len(leaves), q - 1):
        raise ValueError(f"leaf fields must have shape ({len(leaves)}, {q - 1}), "
                         f"got {leaf.shape}")
    if not np.isfinite(leaf).all():
        raise ValueError("leaf field components must be finite")

    fields = np.zeros((tree.n_vertices, q - 1))
    fields[leaves] = leaf
    # children always carry higher indices, so one reverse sweep suffices
    for v in range(tree.n_vertices - 1, -1, -1):
        block = tree.children[v]
        if block:
            acc = np.zeros(q - 1)
            for u in block:
                acc += f_map(fields[u], params)
            fields[v] = acc
    return fields


@lru_cache(maxsize=8)
def _enum_tables(k: int, depth: int, q: int):
    """Per-(tree, q) enumeration tables: monochromatic edge counts for every
    configuration and the boundary-digit group index.  Cached because the
    consistency oracle revisits the same tree many times."""
    tree = build_tree(k, depth)
    total = q**tree.n_vertices
    if total > ENUMERATION_GUARD:
        raise EnumerationLimitError(
            f"enumeration guard exceeded: q^|V_n| = {q}^{tree.n_vertices} "
            f"= {total} > {ENUMERATION_GUARD}")
    idx = np.arange(total, dtype=np.int64)
    mono = np.zeros(total, dtype=np.int16)
    for p, c in edges(tree):
        dp = (idx // q**p) % q
        dc = (idx // q**c) % q
        mono += dp == dc
    interior = q ** (tree.n_vertices - len(sphere(tree, depth)))
    group = (idx // interior).astype(np.int32)
    mono.setflags(write=False)
    group.setflags(write=False)
    return mono, group


@dataclass(frozen=True, eq=False)
class MeasureTable:
    """Exact finite-volume measure as a dense probability table over all
    q**N configurations, indexed by the base-q encoding."""

    probs: np.ndarray
    tree: FiniteTree
    q: int

    def __len__(self) -> int:
        return len(self.probs)

    def probability(self, config) -> float:
        spins = config.spins if isinstance(config, Configuration) else config
        return float(self.probs[config_index(spins, self.q)])

    def config_at(self, index: int) -> Configuration:
        return config_at(index, self.tree.n_vertices, self.q)


def finite_volume_measure(tree: FiniteTree, boundary_fields,
                          params: ModelParams) -> MeasureTable:
    """Exhaustive measure with weights theta^{mono edges} * exp(boundary sum).

    boundary_fields: (|W_n|, q-1) array, one row per depth-n vertex in
    ascending index order.  Probabilities are positive and sum to 1.
    """
    q = params.q
    boundary = sphere(tree, tree.depth)
    H = np.asarray(boundary_fields, dtype=float)
    if H.shape != (len(boundary), q - 1):
        raise ValueError(f"boundary fields must have shape "
                         f"({len(boundary)}, {q - 1}), got {H.shape}")
    if not np.isfinite(H).all():
        raise ValueError("boundary field components must be finite")

    mono, group = _enum_tables(tree.k, tree.depth, q)

    # weight table over the boundary digits alone, then one gather
    n_groups = q ** len(boundary)
    gidx = np.arange(n_groups, dtype=np.int64)
    table = np.zeros(n_groups)
    for j in range(len(boundary)):
        full = np.append(H[j], 0.0)  # gauge component for state q
        table += full[(gidx // q**j) % q]

    logw = math.log(params.theta) * mono + table[group]
    if not np.isfinite(logw).all():
        raise ValueError("non-finite configuration weight")
    logw -= logw.max()
    w = np.exp(logw)
    z = float(np.sort(w).sum())  # ascending order, stable
    probs = w / z
    probs.setflags(write=False)
    return MeasureTable(probs=probs, tree=tree, q=q)


def check_consistency(tree: FiniteTree, fields, params: ModelParams) -> float:
    """Max-norm violation of the compatibility between volumes n and n-1.

    Builds the measure on the radius-n ball from fields[W_n], sums out the
    boundary generation, and compares against the measure on the radius-(n-1)
    ball built from fields[W_{n-1}].  Fields produced by propagate_fields
    pass at the 1e-12 level; anything else does not.

    Only the W_n and W_{n-1} rows of ``fields`` enter the two measures;
    deeper interior values are irrelevant to this check.
    """
    if tree.depth < 1:
        raise ValueError("consistency check needs depth >= 1")
    q = params.q
    F = np.asarray(fields, dtype=float)
    if F.shape != (tree.n_vertices, q - 1):
        raise ValueError(f"fields must have shape ({tree.n_vertices}, {q - 1}), "
                         f"got {F.shape}")

    outer = sphere(tree, tree.depth)
    inner = sphere(tree, tree.depth - 1)
    mu_n = finite_volume_measure(tree, F[outer], params)

    sub = build_tree(tree.k, tree.depth - 1)
    mu_prev = finite_volume_measure(sub, F[inner], params)

    block = q**sub.n_vertices
    marginal = mu_n.probs.reshape(-1, block).sum(axis=0)
    return float(np.max(np.abs(marginal - mu_prev.probs)))
