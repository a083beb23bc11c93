"""Brute-force ground truth: Holant sums, Eulerian-orientation statistics,
Tutte polynomial, #CSP enumeration, perfect-matching signatures.

Everything here is exponential-time and capped; the point is exactness.
The backtracking over edge orientations orders edges along a search tree
so the six-pattern support prunes early, and the cap can be raised with
the SIXV_ORACLE_CAP environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .instance import MapError, PlainGraph, PlanarInstance, RotationMap
from .scalar import ONE, ZERO, Scalar
from .signature import (
    BinarySignature,
    GeneralSignature4,
    SixVertexSignature,
    UnarySignature,
)


class OracleCapExceeded(RuntimeError):
    pass


def oracle_cap(default: int = 24) -> int:
    value = os.environ.get("SIXV_ORACLE_CAP")
    return int(value) if value else default


def _check_cap(edges: int, cap: Optional[int]) -> None:
    limit = cap if cap is not None else oracle_cap()
    if edges > limit:
        raise OracleCapExceeded(f"{edges} edges exceeds the brute-force cap {limit}")


# -- Holant ---------------------------------------------------------------------


def holant_brute(
    inst: PlanarInstance,
    cap: Optional[int] = None,
    fixed: Optional[dict[int, int]] = None,
) -> Scalar:
    """Exact Holant value by backtracking over edge orientations.

    `fixed` optionally pins chosen half-edges to values (the paired half-edge
    is forced through the implicit Disequality), which supports splitting
    the search across workers and evaluating gadget signatures.
    """
    m = inst.map
    _check_cap(m.edge_count, cap)
    values: list[Optional[int]] = [None] * m.half_edge_count
    counts = [[0, 0] for _ in range(m.vertex_count)]
    filled = [0] * m.vertex_count
    labels = inst.labels
    degrees = m.degrees()

    def vertex_value(v: int) -> Scalar:
        label = labels[v]
        bits = tuple(values[h] for h in m.vertices[v])
        return label.value(*bits)

    def place(h: int, bit: int, touched: list[int]) -> Optional[Scalar]:
        """Set h := bit; return the vertex factor (or None when pruned)."""
        v = m.vertex_of[h]
        values[h] = bit
        counts[v][bit] += 1
        filled[v] += 1
        touched.append(h)
        if isinstance(labels[v], SixVertexSignature):
            if counts[v][0] > 2 or counts[v][1] > 2:
                return None
        if filled[v] == degrees[v]:
            val = vertex_value(v)
            return None if val.is_zero() else val
        return ONE

    def unplace(touched: list[int]) -> None:
        for h in touched:
            v = m.vertex_of[h]
            counts[v][values[h]] -= 1
            filled[v] -= 1
            values[h] = None

    pre_factor = ONE
    pre_touched: list[int] = []
    if fixed:
        for h, bit in fixed.items():
            for hh, b in ((h, bit), (m.involution[h], 1 - bit)):
                if values[hh] is not None:
                    if values[hh] != b:
                        unplace(pre_touched)
                        return ZERO
                    continue
                f = place(hh, b, pre_touched)
                if f is None:
                    unplace(pre_touched)
                    return ZERO
                pre_factor = pre_factor * f

    # order the free edges along a vertex DFS for early support pruning
    order: list[int] = []
    seen_edges: set[int] = set()
    seen_vertices: set[int] = set()
    stack = list(range(m.vertex_count))
    while stack:
        v = stack.pop()
        if v in seen_vertices:
            continue
        seen_vertices.add(v)
        for h in m.vertices[v]:
            e = min(h, m.involution[h])
            if e not in seen_edges and values[e] is None:
                seen_edges.add(e)
                order.append(e)
            stack.append(m.vertex_of[m.involution[h]])

    def run(idx: int, acc: Scalar) -> Scalar:
        if idx == len(order):
            return acc
        h = order[idx]
        hp = m.involution[h]
        total = ZERO
        for bit in (0, 1):
            touched: list[int] = []
            f1 = place(h, bit, touched)
            ok = f1 is not None
            f2: Optional[Scalar] = ONE
            if ok:
                f2 = place(hp, 1 - bit, touched)
                ok = f2 is not None
            if ok:
                total = total + run(idx + 1, acc * f1 * f2)
            unplace(touched)
        return total

    result = run(0, pre_factor)
    unplace(pre_touched)
    return result


def gadget_signature(
    inst: PlanarInstance,
    ports: Sequence[int],
    cap: Optional[int] = None,
) -> list[Scalar]:
    """Signature of a gadget whose external variables are the given half-edges.

    Each port half-edge must belong to the instance map (its partner is
    forced through the implicit Disequality as usual).  Entry S of the
    result pins port t to bit S_t; entries are lexicographic in the ports.
    """
    k = len(ports)
    out = []
    for mask in range(2 ** k):
        fixed = {
            ports[t]: (mask >> (k - 1 - t)) & 1 for t in range(k)
        }
        out.append(holant_brute(inst, cap=cap, fixed=fixed))
    return out


# -- Eulerian statistics -----------------------------------------------------------


@dataclass(frozen=True)
class OrientationStats:
    count: int
    saddle_histogram: dict[int, int]

    def weighted_sum(self, base: int = 2) -> int:
        return sum(mult * base ** beta for beta, mult in self.saddle_histogram.items())


def eulerian_stats(map_: RotationMap, cap: Optional[int] = None) -> OrientationStats:
    """Exhaustive Eulerian-orientation census with saddle counts.

    Saddle vertices have their half-edge values alternating in the
    counterclockwise rotation (in, out, in, out).
    """
    if any(d != 4 for d in map_.degrees()):
        raise MapError("eulerian statistics need a 4-regular map")
    _check_cap(map_.edge_count, cap)
    if map_.half_edge_count == 0:
        return OrientationStats(1, {})
    values: list[Optional[int]] = [None] * map_.half_edge_count
    counts = [[0, 0] for _ in range(map_.vertex_count)]
    filled = [0] * map_.vertex_count
    histogram: dict[int, int] = {}
    edges = [(h, map_.involution[h]) for h in range(map_.half_edge_count) if h < map_.involution[h]]

    def saddle(v: int) -> bool:
        bits = [values[h] for h in map_.vertices[v]]
        return bits in ([0, 1, 0, 1], [1, 0, 1, 0])

    def recurse(idx: int, saddles: int) -> None:
        if idx == len(edges):
            histogram[saddles] = histogram.get(saddles, 0) + 1
            return
        h, hp = edges[idx]
        for bit in (0, 1):
            ok = True
            delta = 0
            touched = []
            for hh, b in ((h, bit), (hp, 1 - bit)):
                v = map_.vertex_of[hh]
                values[hh] = b
                counts[v][b] += 1
                filled[v] += 1
                touched.append(hh)
                if counts[v][0] > 2 or counts[v][1] > 2:
                    ok = False
                    break
                if filled[v] == 4:
                    delta += 1 if saddle(v) else 0
            if ok:
                recurse(idx + 1, saddles + delta)
            for hh in touched:
                v = map_.vertex_of[hh]
                counts[v][values[hh]] -= 1
                filled[v] -= 1
                values[hh] = None

    recurse(0, 0)
    total = sum(histogram.values())
    return OrientationStats(total, histogram)


# -- Tutte polynomial ----------------------------------------------------------------


def tutte(graph: PlainGraph, x: Scalar, y: Scalar, cap: int = 14) -> Scalar:
    """Deletion-contraction with loop/bridge base cases."""
    edges = graph.edge_list()
    n = graph.vertex_count
    if len(edges) > cap:
        raise OracleCapExceeded(f"{len(edges)} edges exceeds the Tutte cap {cap}")
    return _tutte_rec([(a, b) for a, b in edges], n, x, y)


def _tutte_rec(edges: list[tuple[int, int]], n: int, x: Scalar, y: Scalar) -> Scalar:
    if not edges:
        return ONE
    a, b = edges[0]
    rest = edges[1:]
    if a == b:
        return y * _tutte_rec(rest, n, x, y)
    if _is_bridge(edges, n, 0):
        merged = _contract(rest, a, b)
        return x * _tutte_rec(merged, n - 1, x, y)
    deleted = _tutte_rec(rest, n, x, y)
    contracted = _tutte_rec(_contract(rest, a, b), n - 1, x, y)
    return deleted + contracted


def _contract(edges: list[tuple[int, int]], a: int, b: int) -> list[tuple[int, int]]:
    out = []
    for u, v in edges:
        uu = a if u == b else u
        vv = a if v == b else v
        out.append((uu, vv))
    return out


def _is_bridge(edges: list[tuple[int, int]], n: int, idx: int) -> bool:
    a, b = edges[idx]
    adj: dict[int, set[int]] = {}
    for j, (u, v) in enumerate(edges):
        if j == idx:
            continue
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen = {a}
    stack = [a]
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):  # type: ignore[arg-type]
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return b not in seen


# -- #CSP enumeration -------------------------------------------------------------------


def csp_brute(
    n_vars: int,
    constraints: Sequence[tuple[object, tuple[int, ...]]],
    cap: int = 20,
) -> Scalar:
    """Sum over {0,1}^n of constraint products.

    Constraints are (signature, variable tuple) with signatures of arity
    1, 2 or 4; variables may repeat.
    """
    if n_vars > cap:
        raise OracleCapExceeded(f"{n_vars} variables exceeds the #CSP cap {cap}")
    total = ZERO
    for mask in range(2 ** n_vars):
        assign = [(mask >> (n_vars - 1 - t)) & 1 for t in range(n_vars)]
        term = ONE
        for sig, var_tuple in constraints:
            args = tuple(assign[v] for v in var_tuple)
            if isinstance(sig, UnarySignature):
                val = sig.value(*args)
            elif isinstance(sig, BinarySignature):
                val = sig.value(*args)
            elif isinstance(sig, (SixVertexSignature, GeneralSignature4)):
                val = sig.value(*args)
            else:
                raise TypeError(f"unsupported constraint {sig!r}")
            if val.is_zero():
                term = ZERO
                break
            term = term * val
        total = total + term
    return total


# -- perfect matchings --------------------------------------------------------------------


@dataclass
class WeightedGraph:
    """A weighted multigraph for matching enumeration (no embedding needed)."""

    n: int
    edges: list[tuple[int, int, Scalar]]


def perfect_matching_sum(graph: WeightedGraph, cap: int = 16) -> Scalar:
    """Weighted count of perfect matchings by branch on the lowest vertex."""
    if graph.n > 2 * cap:
        raise OracleCapExceeded(f"{graph.n} vertices exceeds the matching cap")
    adj: list[list[tuple[int, Scalar]]] = [[] for _ in range(graph.n)]
    for u, v, w in graph.edges:
        if u == v:
            continue  # loops never enter matchings
        if w.is_zero():
            continue
        adj[u].append((v, w))
        adj[v].append((u, w))
    matched = [False] * graph.n

    def recurse(start: int) -> Scalar:
        v = start
        while v < graph.n and matched[v]:
            v += 1
        if v == graph.n:
            return ONE
        matched[v] = True
        total = ZERO
        for u, w in adj[v]:
            if matched[u]:
                continue
            matched[u] = True
            total = total + w * recurse(v + 1)
            matched[u] = False
        matched[v] = False
        return total

    if graph.n % 2:
        return ZERO
    return recurse(0)


def matching_signature(
    graph: WeightedGraph,
    externals: Sequence[int],
    cap: int = 16,
) -> list[Scalar]:
    """Entries of the matchgate signature: entry(S) is the weighted perfect
    matching sum of the gadget with the externals flagged 1 in S removed
    (flag 1 = external matched outward).  Lexicographic in the flags.
    """
    k = len(externals)
    out = []
    for mask in range(2 ** k):
        removed = {
            externals[t] for t in range(k) if (mask >> (k - 1 - t)) & 1
        }
        keep = [v for v in range(graph.n) if v not in removed]
        index = {v: i for i, v in enumerate(keep)}
        sub = WeightedGraph(
            len(keep),
            [
                (index[u], index[v], w)
                for u, v, w in graph.edges
                if u in index and v in index
            ],
        )
        out.append(perfect_matching_sum(sub, cap))
    return out
