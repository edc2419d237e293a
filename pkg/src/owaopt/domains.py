"""Combinatorial domains Q as linear constraints plus exhaustive enumerators.

A DomainSpec couples a linear-inequality description of Q over binary
design variables (with optional auxiliary variables, e.g. flows) with a
deterministic enumerator of the feasible design vectors.  The enumerator
is the ground truth used by the oracle and by validity tests; the
constraint rows are what the MILP builders embed.

For the shortest-path domain the constraint system admits supersets of
paths (an activated edge may carry no flow), so the enumerator yields
the minimal feasible supports: the characteristic vectors of simple
source-sink paths.  With non-negative costs this never changes optimal
values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Mapping, Sequence

from .core import Rational, to_rational

DEFAULT_ENUM_CAP = 10_000_000
ENUM_CAP_ENV = "OWAOPT_ENUM_CAP"

__all__ = [
    "Graph",
    "LinearConstraint",
    "AuxVariable",
    "DomainSpec",
    "DomainTooLargeError",
    "explicit_cardinality_domain",
    "shortest_path_domain",
    "perfect_matching_domain",
    "explicit_set_domain",
    "enumerate_domain",
    "aux_completion",
    "point_satisfies",
]


class DomainTooLargeError(RuntimeError):
    """Enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class Graph:
    """Undirected graph with vertices 1..n_vertices and edges (u, v), u < v."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    coordinates: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u < v <= self.n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range or unordered")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """vertex -> sorted list of (neighbor, edge index)."""
        adj: dict[int, list[tuple[int, int]]] = {u: [] for u in range(1, self.n_vertices + 1)}
        for e, (u, v) in enumerate(self.edges):
            adj[u].append((v, e))
            adj[v].append((u, e))
        for u in adj:
            adj[u].sort()
        return adj


@dataclass(frozen=True)
class LinearConstraint:
    """A sparse row: sum of coeff * var  (sense)  rhs, tagged by family."""

    coeffs: tuple[tuple[int, Fraction], ...]
    sense: str  # '<=', '=', '>='
    rhs: Fraction
    tag: str

    def __post_init__(self):
        if self.sense not in ("<=", "=", ">="):
            raise ValueError(f"bad sense {self.sense!r}")

    def evaluate(self, values: Sequence[Rational]) -> Fraction:
        return sum((c * to_rational(values[k]) for k, c in self.coeffs), Fraction(0))

    def satisfied_by(self, values: Sequence[Rational], tol: Fraction = Fraction(0)) -> bool:
        lhs = self.evaluate(values)
        if self.sense == "<=":
            return lhs <= self.rhs + tol
        if self.sense == ">=":
            return lhs >= self.rhs - tol
        return abs(lhs - self.rhs) <= tol


@dataclass(frozen=True)
class AuxVariable:
    name: str
    lower: Fraction
    upper: Fraction
    kind: str = "continuous"  # flows and hull multipliers stay continuous


@dataclass(frozen=True)
class DomainSpec:
    """Linear description of Q plus an exhaustive enumerator.

    Constraint rows index design variables as 0..n_design-1 and auxiliary
    variables as n_design..n_design+len(aux)-1.
    """

    label: str
    n_design: int
    aux: tuple[AuxVariable, ...]
    rows: tuple[LinearConstraint, ...]
    enumerator: Callable[[], Iterator[tuple[int, ...]]] = field(repr=False)
    meta: Mapping = field(default_factory=dict, repr=False)

    @property
    def n_aux(self) -> int:
        return len(self.aux)


def _enum_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(ENUM_CAP_ENV)
    return int(env) if env else DEFAULT_ENUM_CAP


def enumerate_domain(dom: DomainSpec, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield each feasible design vector exactly once, deterministic order."""
    limit = _enum_cap(cap)
    count = 0
    for x in dom.enumerator():
        count += 1
        if count > limit:
            raise DomainTooLargeError(
                f"domain {dom.label!r} exceeds enumeration cap of {limit} points"
            )
        yield x


def explicit_cardinality_domain(n: int, k: int) -> DomainSpec:
    """Q = all binary vectors of length n with exactly k ones."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    row = LinearConstraint(
        coeffs=tuple((j, Fraction(1)) for j in range(n)),
        sense="=",
        rhs=Fraction(k),
        tag="card",
    )

    def enum() -> Iterator[tuple[int, ...]]:
        for ones in combinations(range(n), k):
            x = [0] * n
            for j in ones:
                x[j] = 1
            yield tuple(x)

    return DomainSpec(
        label="explicit-cardinality",
        n_design=n,
        aux=(),
        rows=(row,),
        enumerator=enum,
        meta={"n": n, "k": k},
    )


def shortest_path_domain(g: Graph, source: int, sink: int) -> DomainSpec:
    """Unit flow from source to sink over a bidirected copy of the graph.

    Design variable x_e activates edge e; continuous flows phi on both
    orientations satisfy conservation and phi_uv + phi_vu <= x_e.  The
    enumerator yields the characteristic vectors of simple source-sink
    paths (depth-first, neighbors in ascending vertex order).
    """
    if source == sink:
        raise ValueError("source and sink must differ")
    for v in (source, sink):
        if not 1 <= v <= g.n_vertices:
            raise ValueError(f"vertex {v} not in graph")
    m = g.n_edges
    aux = []
    arc_index: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(g.edges):
        for (a, b) in ((u, v), (v, u)):
            arc_index[(a, b)] = m + len(aux)
            aux.append(AuxVariable(name=f"f{a}_{b}", lower=Fraction(0), upper=Fraction(1)))

    rows = []
    for u in range(1, g.n_vertices + 1):
        coeffs: dict[int, Fraction] = {}
        for (a, b), idx in arc_index.items():
            if a == u:
                coeffs[idx] = coeffs.get(idx, Fraction(0)) + 1
            if b == u:
                coeffs[idx] = coeffs.get(idx, Fraction(0)) - 1
        if u == source:
            rhs, tag = Fraction(1), "SPPb"
        elif u == sink:
            rhs, tag = Fraction(-1), "SPPc"
        else:
            rhs, tag = Fraction(0), "SPPd"
        rows.append(
            LinearConstraint(coeffs=tuple(sorted(coeffs.items())), sense="=", rhs=rhs, tag=tag)
        )
    for e, (u, v) in enumerate(g.edges):
        coeffs = ((e, Fraction(-1)), (arc_index[(u, v)], Fraction(1)), (arc_index[(v, u)], Fraction(1)))
        rows.append(LinearConstraint(coeffs=coeffs, sense="<=", rhs=Fraction(0), tag="SPPe"))

    adj = g.adjacency()

    def enum() -> Iterator[tuple[int, ...]]:
        path_edges: list[int] = []
        visited = {source}

        def dfs(u: int) -> Iterator[tuple[int, ...]]:
            if u == sink:
                x = [0] * m
                for e in path_edges:
                    x[e] = 1
                yield tuple(x)
                return
            for v, e in adj[u]:
                if v in visited:
                    continue
                visited.add(v)
                path_edges.append(e)
                yield from dfs(v)
                path_edges.pop()
                visited.remove(v)

        yield from dfs(source)

    return DomainSpec(
        label="shortest-path",
        n_design=m,
        aux=tuple(aux),
        rows=tuple(rows),
        enumerator=enum,
        meta={"graph": g, "source": source, "sink": sink, "arc_index": arc_index},
    )


def perfect_matching_domain(g: Graph) -> DomainSpec:
    """Q = perfect matchings: every vertex has degree exactly one."""
    if g.n_vertices % 2:
        raise ValueError("perfect matchings need an even vertex count")
    m = g.n_edges
    adj = g.adjacency()
    rows = []
    for u in range(1, g.n_vertices + 1):
        coeffs = tuple((e, Fraction(1)) for e in sorted(e for _, e in adj[u]))
        rows.append(LinearConstraint(coeffs=coeffs, sense="=", rhs=Fraction(1), tag="PM1"))

    def enum() -> Iterator[tuple[int, ...]]:
        chosen: list[int] = []

        def pair(unmatched: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
            if not unmatched:
                x = [0] * m
                for e in chosen:
                    x[e] = 1
                yield tuple(x)
                return
            u = unmatched[0]
            rest = unmatched[1:]
            for v, e in adj[u]:
                if v not in rest:
                    continue
                chosen.append(e)
                yield from pair(tuple(w for w in rest if w != v))
                chosen.pop()

        yield from pair(tuple(range(1, g.n_vertices + 1)))

    return DomainSpec(
        label="perfect-matching",
        n_design=m,
        aux=(),
        rows=tuple(rows),
        enumerator=enum,
        meta={"graph": g},
    )


def explicit_set_domain(vectors: Sequence[Sequence[int]]) -> DomainSpec:
    """Q given by an explicit finite list of binary vectors.

    The linear description selects one vector through hull multipliers
    lambda_r with sum 1 and x = sum_r lambda_r v_r.  When every vector
    owns an identifying coordinate (a position where it alone has a 1),
    binary x forces the multipliers to be binary, so they can stay
    continuous; otherwise they are declared binary.
    """
    vs = [tuple(int(v) for v in vec) for vec in vectors]
    if not vs:
        raise ValueError("empty vector list")
    n = len(vs[0])
    if any(len(v) != n for v in vs):
        raise ValueError("vectors must share one length")
    if any(c not in (0, 1) for v in vs for c in v):
        raise ValueError("vectors must be binary")
    if len(set(vs)) != len(vs):
        raise ValueError("duplicate vectors")

    def has_identifier(r: int) -> bool:
        return any(
            vs[r][j] == 1 and all(vs[t][j] == 0 for t in range(len(vs)) if t != r)
            for j in range(n)
        )

    kind = "continuous" if all(has_identifier(r) for r in range(len(vs))) else "binary"
    aux = tuple(
        AuxVariable(name=f"l{r}", lower=Fraction(0), upper=Fraction(1), kind=kind)
        for r in range(len(vs))
    )
    rows = [
        LinearConstraint(
            coeffs=tuple((n + r, Fraction(1)) for r in range(len(vs))),
            sense="=",
            rhs=Fraction(1),
            tag="hull",
        )
    ]
    for j in range(n):
        coeffs = [(j, Fraction(1))]
        coeffs += [(n + r, Fraction(-vs[r][j])) for r in range(len(vs)) if vs[r][j]]
        rows.append(
            LinearConstraint(coeffs=tuple(coeffs), sense="=", rhs=Fraction(0), tag="hull")
        )

    def enum() -> Iterator[tuple[int, ...]]:
        yield from vs

    return DomainSpec(
        label="explicit-set",
        n_design=n,
        aux=aux,
        rows=tuple(rows),
        enumerator=enum,
        meta={"vectors": tuple(vs)},
    )


def aux_completion(dom: DomainSpec, x: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Feasible auxiliary values for a design vector, or None if impossible.

    Shortest-path domains route one unit of flow along a breadth-first
    path inside the active edge set; hull domains select the matching
    vector's multiplier.
    """
    if dom.label == "shortest-path":
        g: Graph = dom.meta["graph"]
        source, sink = dom.meta["source"], dom.meta["sink"]
        arc_index: dict[tuple[int, int], int] = dom.meta["arc_index"]
        active = {e for e, v in enumerate(x) if v}
        adj = g.adjacency()
        prev: dict[int, tuple[int, int]] = {}
        frontier = [source]
        seen = {source}
        while frontier:
            nxt = []
            for u in frontier:
                for v, e in adj[u]:
                    if e in active and v not in seen:
                        seen.add(v)
                        prev[v] = (u, e)
                        nxt.append(v)
            frontier = nxt
        if sink not in seen:
            return None
        values = [Fraction(0)] * dom.n_aux
        node = sink
        while node != source:
            u, _ = prev[node]
            values[arc_index[(u, node)] - dom.n_design] = Fraction(1)
            node = u
        return tuple(values)
    if dom.label == "explicit-set":
        vs: tuple[tuple[int, ...], ...] = dom.meta["vectors"]
        key = tuple(int(v) for v in x)
        if key not in vs:
            return None
        values = [Fraction(0)] * dom.n_aux
        values[vs.index(key)] = Fraction(1)
        return tuple(values)
    if dom.n_aux == 0:
        return ()
    raise NotImplementedError(f"no completion rule for domain {dom.label!r}")


def point_satisfies(dom: DomainSpec, x: Sequence[int], aux: Sequence[Rational] | None = None) -> bool:
    """Exact check of all domain rows at (x, aux)."""
    if aux is None:
        aux = aux_completion(dom, x)
        if aux is None:
            return False
    values = list(x) + list(aux)
    return all(row.satisfied_by(values) for row in dom.rows)
