"""Tensor network states: data model, contraction, embedding, reductions.

A state is a normalized graph, one bond dimension per edge, one physical
dimension per vertex, and one factor tensor per vertex.  Factor mode layout
is fixed: incident edges in ascending edge-id order, then the physical mode
last.  Contraction pairs bond indices symmetrically, so edge orientation is
never represented.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import tensor as tz
from .graph import GraphError, NetworkGraph, incident_weight_product, validate_rank_tuple
from .scalars import EXACT, FLOAT, GaussianRational, check_same_mode
from .tensor import Tensor


@dataclass(frozen=True)
class ProblemSpec:
    """The symbol (G; r_1..r_c; n_1..n_d): a network shape without factors."""

    graph: NetworkGraph
    edge_dims: tuple[int, ...]
    vertex_dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "edge_dims", validate_rank_tuple(self.graph, self.edge_dims))
        nd = tuple(int(x) for x in self.vertex_dims)
        if len(nd) != self.graph.d:
            raise GraphError(f"need {self.graph.d} vertex dims, got {len(nd)}")
        if any(x < 1 for x in nd):
            raise GraphError("vertex dims must be positive")
        object.__setattr__(self, "vertex_dims", nd)

    def factor_shape(self, i: int) -> tuple[int, ...]:
        bonds = tuple(self.edge_dims[e - 1] for e in self.graph.incident_edges(i))
        return bonds + (self.vertex_dims[i - 1],)

    def parameter_count(self) -> int:
        return sum(int(np.prod(self.factor_shape(i), dtype=np.int64)) for i in range(1, self.graph.d + 1))


@dataclass(frozen=True)
class TNState:
    graph: NetworkGraph
    edge_dims: tuple[int, ...]
    vertex_dims: tuple[int, ...]
    factors: tuple[Tensor, ...]

    def __post_init__(self):
        g = self.graph
        if not g.is_simple():
            raise GraphError("TNState graph must be normalized (simple)")
        if g.d > 1 and any(g.degree(i) == 0 for i in range(1, g.d + 1)):
            raise GraphError("TNState graph must not have isolated vertices")
        object.__setattr__(
            self, "edge_dims", validate_rank_tuple(g, self.edge_dims, allow_zero=True)
        )
        object.__setattr__(self, "vertex_dims", tuple(int(x) for x in self.vertex_dims))
        if len(self.vertex_dims) != g.d:
            raise GraphError("vertex_dims length mismatch")
        if len(self.factors) != g.d:
            raise GraphError(f"need {g.d} factors, got {len(self.factors)}")
        check_same_mode(*[f.mode for f in self.factors])
        for i, f in enumerate(self.factors, start=1):
            want = tuple(self.edge_dims[e - 1] for e in g.incident_edges(i)) + (
                self.vertex_dims[i - 1],
            )
            if f.dims != want:
                raise GraphError(
                    f"factor {i} has dims {f.dims}, expected {want} "
                    "(incident edges ascending, physical last)"
                )

    @property
    def mode(self) -> str:
        return self.factors[0].mode

    def spec(self) -> ProblemSpec:
        return ProblemSpec(self.graph, self.edge_dims, self.vertex_dims)


@dataclass(frozen=True)
class CPDecomposition:
    """A sum of rank-one terms; term p is the outer product of its vectors."""

    order: int
    terms: tuple[tuple[Tensor, ...], ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("CP order must be >= 1")
        terms = tuple(tuple(t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("CP decomposition needs at least one term")
        check_same_mode(*[v.mode for t in terms for v in t])
        dims = self.vertex_dims
        for t in terms:
            if len(t) != self.order:
                raise ValueError("every CP term needs one vector per mode")
            for slot, v in enumerate(t):
                if v.order != 1 or v.dims[0] != dims[slot]:
                    raise ValueError("CP vectors in one slot must share their length")

    @property
    def rank(self) -> int:
        return len(self.terms)

    @property
    def vertex_dims(self) -> tuple[int, ...]:
        return tuple(v.dims[0] for v in self.terms[0])

    @property
    def mode(self) -> str:
        return self.terms[0][0].mode

    def to_tensor(self) -> Tensor:
        total = None
        for t in self.terms:
            prod = t[0]
            for v in t[1:]:
                prod = tz.outer(prod, v)
            total = prod if total is None else tz.add(total, prod)
        return total


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------


@dataclass
class _Partial:
    data: np.ndarray
    labels: list  # ("bond", edge_id) or ("phys", vertex)
    vertices: frozenset = field(default_factory=frozenset)


def contract_network(state: TNState) -> Tensor:
    """Contract all bonds, returning the order-d tensor of the state.

    Schedule: greedily contract the connected pair of partial tensors whose
    result has the smallest total size, ties broken by lowest involved
    vertex id.  The result is schedule-independent.
    """
    g = state.graph
    mode = state.mode
    if any(r == 0 for r in state.edge_dims):
        return tz.zeros(state.vertex_dims, mode)

    parts: list[_Partial] = []
    for i, f in enumerate(state.factors, start=1):
        labels = [("bond", e) for e in g.incident_edges(i)] + [("phys", i)]
        parts.append(_Partial(f.data, labels, frozenset([i])))

    def result_size(a: _Partial, b: _Partial, shared):
        size = 1
        for part in (a, b):
            for lab, ext in zip(part.labels, part.data.shape):
                if lab not in shared:
                    size *= ext
        return size

    while len(parts) > 1:
        best = None
        for ia in range(len(parts)):
            for ib in range(ia + 1, len(parts)):
                a, b = parts[ia], parts[ib]
                shared = set(a.labels) & set(b.labels)
                if not shared:
                    continue
                key = (
                    result_size(a, b, shared),
                    min(a.vertices | b.vertices),
                    tuple(sorted(a.vertices | b.vertices)),
                )
                if best is None or key < best[0]:
                    best = (key, ia, ib)
        if best is None:
            # Disconnected graph: combine remaining components by outer
            # product, lowest vertex id first.
            parts.sort(key=lambda p: min(p.vertices))
            a, b = parts[0], parts[1]
            data = np.tensordot(a.data, b.data, axes=0)
            merged = _Partial(data, a.labels + b.labels, a.vertices | b.vertices)
            parts = [merged] + parts[2:]
            continue
        _, ia, ib = best
        a, b = parts[ia], parts[ib]
        if min(b.vertices) < min(a.vertices):
            a, b = b, a
        # Sorted so the axis pairing (and float summation order) is stable.
        shared = sorted(set(a.labels) & set(b.labels))
        ax_a = [a.labels.index(s) for s in shared]
        ax_b = [b.labels.index(s) for s in shared]
        data = np.tensordot(a.data, b.data, axes=(ax_a, ax_b))
        labels = [l for k, l in enumerate(a.labels) if k not in ax_a] + [
            l for k, l in enumerate(b.labels) if k not in ax_b
        ]
        merged = _Partial(data, labels, a.vertices | b.vertices)
        parts = [p for k, p in enumerate(parts) if k not in (ia, ib)]
        parts.append(merged)

    final = parts[0]
    order = [final.labels.index(("phys", i)) for i in range(1, g.d + 1)]
    return Tensor(np.transpose(final.data, order), mode)


def random_state(spec: ProblemSpec, seed: int) -> TNState:
    """Factors filled with i.i.d. standard complex Gaussians (float mode)."""
    rng = np.random.default_rng(seed)
    factors = []
    for i in range(1, spec.graph.d + 1):
        shape = spec.factor_shape(i)
        data = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
        factors.append(Tensor(data, FLOAT))
    return TNState(spec.graph, spec.edge_dims, spec.vertex_dims, tuple(factors))


def universal_embed(cp: CPDecomposition, g: NetworkGraph) -> TNState:
    """Realize a CP decomposition as a network state on any connected graph.

    Every edge gets bond dimension equal to the CP rank; the factor at
    vertex i places the i-th CP vectors on the bond diagonal.  Contraction
    reproduces the CP sum exactly.
    """
    if not g.is_simple():
        raise GraphError("universal_embed expects a normalized graph")
    if not g.is_connected():
        raise GraphError("universal_embed requires a connected graph")
    if g.d != cp.order:
        raise GraphError(f"graph has {g.d} vertices but CP order is {cp.order}")
    if g.d > 1 and any(g.degree(i) == 0 for i in range(1, g.d + 1)):
        raise GraphError("graph has an isolated vertex")
    r = cp.rank
    mode = cp.mode
    dims = cp.vertex_dims
    factors = []
    for i in range(1, g.d + 1):
        deg = g.degree(i)
        shape = (r,) * deg + (dims[i - 1],)
        if mode == EXACT:
            data = np.full(shape, GaussianRational(0), dtype=object)
        else:
            data = np.zeros(shape, dtype=np.complex128)
        if deg == 0:
            # Single-vertex graph: the factor is the plain CP sum.
            for p in range(r):
                data = data + cp.terms[p][i - 1].data
        else:
            for p in range(r):
                data[(p,) * deg] = cp.terms[p][i - 1].data
        factors.append(Tensor(data, mode))
    return TNState(g, (r,) * g.c, dims, tuple(factors))


_SYMBOLS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def environment(graph: NetworkGraph, factors, i: int) -> np.ndarray:
    """Contract every factor except vertex i (float arrays only).

    Output modes: physical modes of the other vertices ascending, then the
    bond modes of vertex i's incident edges ascending.  The contracted state
    is linear in factor i against this environment.
    """
    d = graph.d
    if graph.c + d > len(_SYMBOLS):
        raise GraphError("graph too large for einsum-based environment")
    bond_sym = {e: _SYMBOLS[e - 1] for e in range(1, graph.c + 1)}
    phys_sym = {v: _SYMBOLS[graph.c + v - 1] for v in range(1, d + 1)}
    operands = []
    subs = []
    for j in range(1, d + 1):
        if j == i:
            continue
        subs.append("".join(bond_sym[e] for e in graph.incident_edges(j)) + phys_sym[j])
        operands.append(factors[j - 1].data if isinstance(factors[j - 1], Tensor) else factors[j - 1])
    out = "".join(phys_sym[j] for j in range(1, d + 1) if j != i)
    out += "".join(bond_sym[e] for e in graph.incident_edges(i))
    expr = ",".join(subs) + "->" + out
    return np.einsum(expr, *operands, optimize=True)


# ---------------------------------------------------------------------------
# criticality and reductions
# ---------------------------------------------------------------------------


def criticality(spec: ProblemSpec):
    """Per-vertex labels and the overall label of the spec.

    Vertex i compares its dimension n_i with the product m_i of incident
    bond dimensions; the overall label is subcritical/critical/supercritical
    when the comparison holds uniformly, otherwise "mixed".
    """
    labels = {}
    any_sub = any_super = False
    for i in range(1, spec.graph.d + 1):
        m = incident_weight_product(spec.graph, spec.edge_dims, i)
        n = spec.vertex_dims[i - 1]
        if n < m:
            labels[i] = "subcritical"
            any_sub = True
        elif n == m:
            labels[i] = "critical"
        else:
            labels[i] = "supercritical"
            any_super = True
    if any_sub and any_super:
        overall = "mixed"
    elif any_sub:
        overall = "subcritical"
    elif any_super:
        overall = "supercritical"
    else:
        overall = "critical"
    return labels, overall


@dataclass(frozen=True)
class MergeRecord:
    """Bookkeeping for one degree-one reduction.

    The removed vertex's space is absorbed into the neighbor's: the merged
    dimension is removed_dim * neighbor_dim with the removed index slow
    (row-major).  Maps send old labels to new ones.
    """

    removed: int
    neighbor: int
    edge_id: int
    removed_dim: int
    neighbor_dim: int
    vertex_map: dict[int, int]
    edge_map: dict[int, int]


def reduce_degree_one(spec: ProblemSpec, vertex: int | None = None):
    """Absorb a subcritical-or-critical degree-one vertex into its neighbor.

    Returns the reduced spec and a MergeRecord.  With no vertex given, the
    lowest-id eligible vertex is used.
    """
    g = spec.graph
    candidates = []
    for i in range(1, g.d + 1):
        inc = g.incident_edges(i)
        if len(inc) != 1:
            continue
        if spec.vertex_dims[i - 1] <= spec.edge_dims[inc[0] - 1]:
            candidates.append(i)
    if vertex is not None:
        if vertex not in candidates:
            raise GraphError(
                f"vertex {vertex} is not an eligible degree-one subcritical/critical vertex"
            )
        i = vertex
    else:
        if not candidates:
            raise GraphError("no degree-one subcritical or critical vertex to reduce")
        i = candidates[0]

    edge_id = g.incident_edges(i)[0]
    u, v = g.endpoints(edge_id)
    j = v if u == i else u
    vertex_map = {}
    for old in range(1, g.d + 1):
        if old == i:
            continue
        vertex_map[old] = old if old < i else old - 1
    edge_map = {}
    new_edges = []
    for old_id, (a, b, w) in enumerate(g.edges, start=1):
        if old_id == edge_id:
            continue
        na, nb = vertex_map[a], vertex_map[b]
        new_edges.append((min(na, nb), max(na, nb), w))
        edge_map[old_id] = len(new_edges)
    new_graph = NetworkGraph(g.d - 1, tuple(new_edges))

    n_i = spec.vertex_dims[i - 1]
    n_j = spec.vertex_dims[j - 1]
    new_vdims = []
    for old in range(1, g.d + 1):
        if old == i:
            continue
        new_vdims.append(n_i * n_j if old == j else spec.vertex_dims[old - 1])
    new_edims = tuple(spec.edge_dims[e - 1] for e in sorted(edge_map))
    record = MergeRecord(i, j, edge_id, n_i, n_j, vertex_map, edge_map)
    return ProblemSpec(new_graph, new_edims, tuple(new_vdims)), record


def remove_unit_edges(spec: ProblemSpec):
    """Delete every bond-dimension-one edge; the state set is unchanged.

    Edges are processed in id order; raises if a removal would isolate a
    vertex.  Returns the reduced spec and the list of removed edge ids.
    """
    g = spec.graph
    keep = list(range(1, g.c + 1))
    removed = []
    for e in range(1, g.c + 1):
        if spec.edge_dims[e - 1] != 1:
            continue
        u, v = g.endpoints(e)
        current = [x for x in keep if x != e]
        deg_u = sum(1 for x in current if u in g.endpoints(x))
        deg_v = sum(1 for x in current if v in g.endpoints(x))
        if deg_u == 0 or deg_v == 0:
            raise GraphError(f"removing edge {e} would isolate a vertex")
        keep = current
        removed.append(e)
    new_graph = NetworkGraph(g.d, tuple(g.edges[e - 1] for e in keep))
    new_edims = tuple(spec.edge_dims[e - 1] for e in keep)
    return ProblemSpec(new_graph, new_edims, spec.vertex_dims), removed
