"""Planar evaluation by matchgates, Kasteleyn orientations and Pfaffians.

Every vertex of an instance is replaced by a weighted planar gadget whose
perfect-matching signature equals the vertex signature (up to a tracked
scalar), every instance edge by a path with one interior vertex (the
Disequality join), and the resulting planar graph is evaluated exactly
with a Pfaffian under a Kasteleyn orientation.  The Hadamard-transformed
path replaces the edge function by a single edge of weight -1 (an equality
join with a sign) and synthesizes gadgets for the transformed vertex
signature instead.

The gadget weight formulas below are derived from the perfect-matching
enumeration of small templates and are re-verified against the matching
oracle on every synthesis, so a formula slip fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .instance import MapError, PlanarInstance, RotationMap
from .membership import is_matchgate, is_matchgate_general, is_matchgate_hat
from .oracle import WeightedGraph, matching_signature
from .scalar import ONE, ZERO, Scalar, rational
from .signature import (
    GeneralSignature4,
    SixVertexSignature,
    chain_n,
    compose_n,
    hadamard_image,
)


class SynthesisError(ValueError):
    pass


# -- plane gadgets ---------------------------------------------------------------


@dataclass
class PlaneGadget:
    """A weighted plane graph under construction.

    Rotations list ports in counterclockwise order; a port is either
    ("edge", edge_index, end) or ("open", external_index).  Externals lie
    on the outer face in counterclockwise order x1..x4.
    """

    rotations: list[list] = field(default_factory=list)
    edges: list[tuple[int, int, Scalar]] = field(default_factory=list)
    externals: list[int] = field(default_factory=list)

    def add_vertex(self) -> int:
        self.rotations.append([])
        return len(self.rotations) - 1

    def add_external(self, vertex: int) -> None:
        self.rotations[vertex].append(("open", len(self.externals)))
        self.externals.append(vertex)

    def add_edge(self, u: int, v: int, weight: Scalar) -> None:
        """Append an edge; ports are appended in call order, so callers add
        the edges around each vertex counterclockwise.  Zero weights are
        dropped entirely."""
        if weight.is_zero():
            return
        idx = len(self.edges)
        self.edges.append((u, v, weight))
        self.rotations[u].append(("edge", idx, 0))
        self.rotations[v].append(("edge", idx, 1))

    def reorder(self, vertex: int, ports: list) -> None:
        """Rearrange a vertex's rotation into the given ccw port order."""
        current = self.rotations[vertex]
        if sorted(map(str, current)) != sorted(map(str, ports)):
            raise SynthesisError("reorder must permute the existing ports")
        self.rotations[vertex] = list(ports)

    @property
    def n(self) -> int:
        return len(self.rotations)

    def weighted_graph(self) -> WeightedGraph:
        return WeightedGraph(self.n, list(self.edges))

    def signature(self, cap: int = 16) -> list[Scalar]:
        return matching_signature(self.weighted_graph(), self.externals, cap)

    def shifted(self, shift: int) -> "PlaneGadget":
        """Cyclically relabel the externals (a rotation of the signature)."""
        out = PlaneGadget(
            [list(r) for r in self.rotations], list(self.edges), list(self.externals)
        )
        k = len(self.externals)
        out.externals = [self.externals[(t + shift) % k] for t in range(k)]
        remap = {(t + shift) % k: t for t in range(k)}
        for rot in out.rotations:
            for pos, port in enumerate(rot):
                if port[0] == "open":
                    rot[pos] = ("open", remap[port[1]])
        return out


# -- gadget templates --------------------------------------------------------------


def _wheel_gadget(f: SixVertexSignature) -> PlaneGadget:
    """Hub-and-rim template with a parity flip on x1.

    Valid when c != 0 (weights close over c) or when the signature is
    supported on the (a, b) slots only.  The perfect-matching expansion
    forces spoke1 = 0 and, via the matchgate identity cz = ax + by, makes
    the remaining weights consistent.
    """
    if not f.c.is_zero():
        spoke2, spoke3, spoke4 = f.a, f.c, f.b
        rim41, rim12 = f.x / f.c, f.y / f.c
    elif f.x.is_zero() and f.y.is_zero() and f.z.is_zero():
        spoke2, spoke3, spoke4 = f.a, ZERO, f.b
        rim41 = rim12 = ZERO
    else:
        raise SynthesisError("wheel template needs c != 0 or support in (a,b)")
    g = PlaneGadget()
    e1, e2, e3, e4 = (g.add_vertex() for _ in range(4))
    hub = g.add_vertex()
    q1, q2, x_ext = (g.add_vertex() for _ in range(3))
    # edges; rotations fixed afterwards
    g.add_edge(e1, e2, rim12)
    g.add_edge(e4, e1, rim41)
    g.add_edge(hub, e2, spoke2)
    g.add_edge(hub, e3, spoke3)
    g.add_edge(hub, e4, spoke4)
    g.add_edge(e1, q1, ONE)
    g.add_edge(q1, q2, ONE)
    g.add_edge(q2, x_ext, ONE)
    g.add_external(x_ext)
    g.add_external(e2)
    g.add_external(e3)
    g.add_external(e4)
    _fix_rotations_ccw(
        g,
        {
            e1: [(e1, e2), (e4, e1), (e1, q1)],
            e2: [(hub, e2), (e1, e2), ("open", 1)],
            e3: [("open", 2), (hub, e3)],
            e4: [(e4, e1), (hub, e4), ("open", 3)],
            hub: [(hub, e2), (hub, e3), (hub, e4)],
            q1: [(e1, q1), (q1, q2)],
            q2: [(q1, q2), (q2, x_ext)],
            x_ext: [(q2, x_ext), ("open", 0)],
        },
    )
    return g


def _fix_rotations_ccw(g: PlaneGadget, orders: dict[int, list]) -> None:
    """Set each vertex's rotation to the given ccw order of edge endpoints
    or ("open", k) markers, skipping dropped zero-weight edges."""
    edge_port: dict[tuple[int, int, int], tuple] = {}
    counts: dict[tuple[int, int], int] = {}
    for idx, (u, v, _) in enumerate(g.edges):
        occurrence = counts.get((u, v), 0)
        counts[(u, v)] = occurrence + 1
        edge_port[(u, v, occurrence)] = ("edge", idx, 0)
        edge_port[(v, u, occurrence)] = ("edge", idx, 1)
    for vertex, order in orders.items():
        ports = []
        used: dict[tuple[int, int], int] = {}
        for item in order:
            if item[0] == "open":
                ports.append(("open", item[1]))
                continue
            u, v = item
            endpoint = vertex
            other = v if u == vertex else u
            key = (vertex, other)
            occurrence = used.get(key, 0)
            used[key] = occurrence + 1
            port = edge_port.get((vertex, other, occurrence))
            if port is None:
                port = edge_port.get((other, vertex, occurrence))
                if port is not None:
                    port = ("edge", port[1], 1 - port[2])
            if port is None:
                continue  # zero-weight edge was dropped
            ports.append(port)
        g.reorder(vertex, ports)


def _scaled_propto(sig_values: Sequence[Scalar], target: Sequence[Scalar]) -> Optional[Scalar]:
    """The scalar s with sig = s * target, if one exists."""
    scale = None
    for got, want in zip(sig_values, target):
        if want.is_zero():
            if not got.is_zero():
                return None
            continue
        ratio = got / want
        if scale is None:
            scale = ratio
        elif scale != ratio:
            return None
    if scale is None:
        scale = ZERO if all(v.is_zero() for v in sig_values) else None
    return scale


def synthesize(f: SixVertexSignature) -> tuple[PlaneGadget, Scalar]:
    """A plane gadget whose matching signature equals scale * f (scale != 0
    unless f = 0).  Raises SynthesisError when f is not a matchgate."""
    if not is_matchgate(f):
        raise SynthesisError("signature violates the matchgate identity")
    if f.is_zero():
        g = PlaneGadget()
        ports = [g.add_vertex() for _ in range(4)]
        g.add_vertex()  # isolated vertex kills every matching
        for p in ports:
            g.add_external(p)
        return g, ONE
    candidates = []
    for r in range(4):
        rotated = f.rotate(r)
        if not rotated.c.is_zero():
            candidates.append((r, rotated))
    if not candidates:
        # c = z = 0 everywhere in the inner slots
        if (f.a * f.x).is_zero():
            for r in range(4):
                rotated = f.rotate(r)
                if rotated.x.is_zero() and rotated.y.is_zero() and rotated.z.is_zero():
                    candidates.append((r, rotated))
        else:
            return _chain_synthesis(f)
    if not candidates:
        raise SynthesisError(f"no template applies to {f!r}")
    errors = []
    for r, rotated in candidates:
        gadget = _wheel_gadget(rotated)
        for shift in range(4):
            shifted = gadget.shifted(shift)
            scale = _scaled_propto(shifted.signature(), f.to_general().entries)
            if scale is not None and not scale.is_zero():
                return shifted, scale
        errors.append(r)
    raise SynthesisError(f"wheel template failed for rotations {errors} of {f!r}")


def _chain_synthesis(f: SixVertexSignature) -> tuple[PlaneGadget, Scalar]:
    """The c = z = 0, ax = -by != 0 family as a chain of two wheel gadgets.

    With g1 = (1,1,1,1,1,2) and g2 = (a, 2b, -y, x, y, -b), both matchgates
    with nonzero inner entries, the double-Disequality chain g1 * N * g2
    reproduces f exactly.
    """
    g1 = SixVertexSignature.from_values(1, 1, 1, 1, 1, 2)
    g2 = SixVertexSignature(
        f.a, rational(2) * f.b, -f.y, f.x, f.y, -f.b
    )
    composed = compose_n(g1, g2).try_six_vertex()
    if composed is None or composed != f:
        raise SynthesisError("chain closed form failed; not in the ax=-by family")
    left, scale_left = synthesize_simple(g1)
    right, scale_right = synthesize_simple(g2)
    gadget = _join_chain(left, right)
    scale = _scaled_propto(gadget.signature(), f.to_general().entries)
    if scale is None or scale.is_zero():
        raise SynthesisError("chain synthesis verification failed")
    return gadget, scale


def synthesize_simple(f: SixVertexSignature) -> tuple[PlaneGadget, Scalar]:
    """Wheel synthesis only (no chain recursion); c or z must be nonzero."""
    for r in range(4):
        rotated = f.rotate(r)
        if rotated.c.is_zero():
            continue
        gadget = _wheel_gadget(rotated)
        for shift in range(4):
            shifted = gadget.shifted(shift)
            scale = _scaled_propto(shifted.signature(), f.to_general().entries)
            if scale is not None and not scale.is_zero():
                return shifted, scale
    raise SynthesisError(f"wheel synthesis failed for {f!r}")


def _join_chain(left: PlaneGadget, right: PlaneGadget) -> PlaneGadget:
    """Connect left.x4 -- m -- right.x1 and left.x3 -- m' -- right.x2 (the
    double Disequality), yielding externals (left.x1, left.x2, right.x3,
    right.x4) in ccw order."""
    g = PlaneGadget()
    offset_left = 0
    for rot in left.rotations:
        g.add_vertex()
    offset_right = g.n
    for rot in right.rotations:
        g.add_vertex()
    edge_offset_left = 0
    for u, v, w in left.edges:
        g.edges.append((u, v, w))
    edge_offset_right = len(g.edges)
    for u, v, w in right.edges:
        g.edges.append((u + offset_right, v + offset_right, w))
    # middle vertices of the two Disequality joins
    m_top = g.add_vertex()
    m_bot = g.add_vertex()
    join_edges = {
        ("L", 3): len(g.edges),  # left.x4 -- m_top
    }
    g.edges.append((left.externals[3], m_top, ONE))
    join_edges[("R", 0)] = len(g.edges)
    g.edges.append((right.externals[0] + offset_right, m_top, ONE))
    join_edges[("L", 2)] = len(g.edges)
    g.edges.append((left.externals[2], m_bot, ONE))
    join_edges[("R", 1)] = len(g.edges)
    g.edges.append((right.externals[1] + offset_right, m_bot, ONE))
    # rotations: copy, replacing consumed open slots by the join edges
    new_external_index = {("L", 0): 0, ("L", 1): 1, ("R", 2): 2, ("R", 3): 3}
    externals: list[Optional[int]] = [None] * 4
    for vid, rot in enumerate(left.rotations):
        ports = []
        for port in rot:
            if port[0] == "open":
                key = ("L", port[1])
                if key in join_edges:
                    eidx = join_edges[key]
                    end = 0 if g.edges[eidx][0] == vid else 1
                    ports.append(("edge", eidx, end))
                else:
                    ports.append(("open", new_external_index[key]))
                    externals[new_external_index[key]] = vid
            else:
                ports.append(port)
        g.rotations[vid] = ports
    for vid, rot in enumerate(right.rotations):
        ports = []
        for port in rot:
            if port[0] == "open":
                key = ("R", port[1])
                if key in join_edges:
                    eidx = join_edges[key]
                    end = 0 if g.edges[eidx][0] == vid + offset_right else 1
                    ports.append(("edge", eidx, end))
                else:
                    ports.append(("open", new_external_index[key]))
                    externals[new_external_index[key]] = vid + offset_right
            else:
                port_kind, eidx, end = port
                ports.append(("edge", eidx + edge_offset_right, end))
        g.rotations[vid + offset_right] = ports
    g.rotations[m_top] = [
        ("edge", join_edges[("L", 3)], 1),
        ("edge", join_edges[("R", 0)], 1),
    ]
    g.rotations[m_bot] = [
        ("edge", join_edges[("L", 2)], 1),
        ("edge", join_edges[("R", 1)], 1),
    ]
    assert all(v is not None for v in externals)
    g.externals = externals  # type: ignore[assignment]
    return g


# -- gadgets for Hadamard images ---------------------------------------------------


def _even_image_entries(m: GeneralSignature4):
    val = m.value
    p = val(0, 0, 0, 0)
    q = val(0, 0, 1, 1)
    r = val(0, 1, 1, 0)
    s = val(0, 1, 0, 1)
    symmetric = (
        p == val(1, 1, 1, 1)
        and q == val(1, 1, 0, 0)
        and r == val(1, 0, 0, 1)
        and s == val(1, 0, 1, 0)
    )
    odd_zero = all(
        m.entries[idx].is_zero() for idx in range(16) if bin(idx).count("1") & 1
    )
    if not (symmetric and odd_zero):
        return None
    return p, q, r, s


def synthesize_even_image(m: GeneralSignature4) -> tuple[PlaneGadget, Scalar]:
    """Gadgets for the even-parity Hadamard images of six-vertex signatures.

    These have entries (p, q, r, s) on the complement-symmetric even
    patterns with either (r, s) = (-p, -q) or (q, s) = (-p, -r); each shape
    splits into closed-form templates verified against the matching oracle.
    """
    shape = _even_image_entries(m)
    if shape is None:
        raise SynthesisError("not a symmetric even-parity image")
    p, q, r, s = shape
    attempts = []
    if r == -p and s == -q:
        if not p.is_zero() and not q.is_zero():
            attempts.append(_image_template_general_b0(p, q))
        if not p.is_zero() and q.is_zero():
            attempts.append(_image_template_sides(p, pair="vertical"))
        if p.is_zero() and not q.is_zero():
            attempts.append(_image_template_paths(q, split="14-23"))
    if q == -p and s == -r:
        if not p.is_zero() and not r.is_zero():
            attempts.append(_image_template_general_a0(p, r))
        if not p.is_zero() and r.is_zero():
            attempts.append(_image_template_sides(p, pair="horizontal"))
        if p.is_zero() and not r.is_zero():
            attempts.append(_image_template_paths(r, split="12-34"))
    if p.is_zero() and q.is_zero() and r.is_zero() and s.is_zero():
        g = PlaneGadget()
        ports = [g.add_vertex() for _ in range(4)]
        g.add_vertex()
        for v in ports:
            g.add_external(v)
        return g, ONE
    for gadget in attempts:
        scale = _scaled_propto(gadget.signature(), m.entries)
        if scale is not None and not scale.is_zero():
            return gadget, scale
    raise SynthesisError("no even-image template matched")


def _image_template_general_b0(p: Scalar, q: Scalar) -> PlaneGadget:
    """Shape [[p,q],[q,p]] outer, [[-p,-q],[-q,-p]] inner; p, q != 0."""
    g = PlaneGadget()
    e1, e2, e3, e4, u, v = (g.add_vertex() for _ in range(6))
    g.add_edge(u, v, p)
    g.add_edge(e1, e2, q / p)  # r12
    g.add_edge(e3, e4, q / p)  # r34
    g.add_edge(e4, e1, (q * q - p * p) / (p * p))  # r41
    g.add_edge(u, e1, ONE)
    g.add_edge(u, e2, p / q)
    g.add_edge(v, e3, -q)
    g.add_edge(v, e4, -(q * q) / p)
    for vtx in (e1, e2, e3, e4):
        g.add_external(vtx)
    _fix_rotations_ccw(
        g,
        {
            e1: [(e1, e2), (u, e1), (e4, e1), ("open", 0)],
            e2: [(u, e2), (e1, e2), ("open", 1)],
            e3: [("open", 2), (e3, e4), (v, e3)],
            e4: [(e3, e4), ("open", 3), (e4, e1), (v, e4)],
            u: [(u, v), (u, e1), (u, e2)],
            v: [(v, e3), (v, e4), (u, v)],
        },
    )
    return g


def _image_template_general_a0(p: Scalar, r: Scalar) -> PlaneGadget:
    """Shape [[p,-p],[-p,p]] outer, [[r,-r],[-r,r]] inner; p, r != 0."""
    g = PlaneGadget()
    e1, e2, e3, e4, u, v = (g.add_vertex() for _ in range(6))
    rho = (r - p) / p
    g.add_edge(u, v, p)
    g.add_edge(e1, e2, rho)  # r12
    g.add_edge(e2, e3, r / p)  # r23
    g.add_edge(e3, e4, rho)  # r34
    g.add_edge(u, e1, ONE)
    g.add_edge(u, e4, ONE)
    g.add_edge(v, e2, -r)
    g.add_edge(v, e3, -r)
    g.add_edge(v, e4, r)
    for vtx in (e1, e2, e3, e4):
        g.add_external(vtx)
    _fix_rotations_ccw(
        g,
        {
            e1: [(e1, e2), (u, e1), ("open", 0)],
            e2: [(e2, e3), (v, e2), (e1, e2), ("open", 1)],
            e3: [("open", 2), (e3, e4), (v, e3), (e2, e3)],
            e4: [(e3, e4), ("open", 3), (u, e4), (v, e4)],
            u: [(u, v), (u, e4), (u, e1)],
            v: [(v, e3), (v, e4), (u, v), (v, e2)],
        },
    )
    return g


def _image_template_sides(p: Scalar, pair: str) -> PlaneGadget:
    """Two -1 edges on opposite sides, global scalar p."""
    g = PlaneGadget()
    e1, e2, e3, e4 = (g.add_vertex() for _ in range(4))
    if pair == "vertical":  # edges (e1,e4), (e2,e3)
        g.add_edge(e4, e1, -ONE)
        g.add_edge(e2, e3, -ONE)
        orders = {
            e1: [(e4, e1), ("open", 0)],
            e2: [(e2, e3), ("open", 1)],
            e3: [("open", 2), (e2, e3)],
            e4: [("open", 3), (e4, e1)],
        }
    else:  # horizontal: (e1,e2), (e3,e4)
        g.add_edge(e1, e2, -ONE)
        g.add_edge(e3, e4, -ONE)
        orders = {
            e1: [(e1, e2), ("open", 0)],
            e2: [(e1, e2), ("open", 1)],
            e3: [("open", 2), (e3, e4)],
            e4: [(e3, e4), ("open", 3)],
        }
    for vtx in (e1, e2, e3, e4):
        g.add_external(vtx)
    # externals were appended after edges; rebuild orders with open markers
    _fix_rotations_ccw(g, orders)
    return g


def _image_template_paths(weight: Scalar, split: str) -> PlaneGadget:
    """Two odd 2-paths carrying (0, w, -w, 0)-type factors."""
    g = PlaneGadget()
    e1, e2, e3, e4, mid_a, mid_b = (g.add_vertex() for _ in range(6))
    if split == "14-23":
        g.add_edge(e1, mid_a, weight)
        g.add_edge(mid_a, e4, -weight)
        g.add_edge(e2, mid_b, ONE)
        g.add_edge(mid_b, e3, -ONE)
        orders = {
            e1: [(e1, mid_a), ("open", 0)],
            e2: [(e2, mid_b), ("open", 1)],
            e3: [("open", 2), (mid_b, e3)],
            e4: [("open", 3), (mid_a, e4)],
            mid_a: [(e1, mid_a), (mid_a, e4)],
            mid_b: [(e2, mid_b), (mid_b, e3)],
        }
    else:  # "12-34"
        g.add_edge(e1, mid_a, -weight)
        g.add_edge(mid_a, e2, weight)
        g.add_edge(e3, mid_b, ONE)
        g.add_edge(mid_b, e4, -ONE)
        orders = {
            e1: [(e1, mid_a), ("open", 0)],
            e2: [(mid_a, e2), ("open", 1)],
            e3: [("open", 2), (e3, mid_b)],
            e4: [("open", 3), (mid_b, e4)],
            mid_a: [(e1, mid_a), (mid_a, e2)],
            mid_b: [(e3, mid_b), (mid_b, e4)],
        }
    for vtx in (e1, e2, e3, e4):
        g.add_external(vtx)
    _fix_rotations_ccw(g, orders)
    return g


def add_flip_pigtail(g: PlaneGadget, external_index: int = 0) -> PlaneGadget:
    """Compose one external with Disequality: a 3-edge pigtail whose far end
    becomes the new external (flips that variable of the signature)."""
    out = PlaneGadget(
        [list(r) for r in g.rotations], list(g.edges), list(g.externals)
    )
    old_vertex = out.externals[external_index]
    q1 = out.add_vertex()
    q2 = out.add_vertex()
    x_new = out.add_vertex()
    e_a = len(out.edges)
    out.edges.append((old_vertex, q1, ONE))
    e_b = len(out.edges)
    out.edges.append((q1, q2, ONE))
    e_c = len(out.edges)
    out.edges.append((q2, x_new, ONE))
    # the old open slot becomes the pigtail edge
    rot = out.rotations[old_vertex]
    for pos, port in enumerate(rot):
        if port == ("open", external_index):
            rot[pos] = ("edge", e_a, 0)
            break
    else:
        raise SynthesisError("external slot not found")
    out.rotations[q1] = [("edge", e_a, 1), ("edge", e_b, 0)]
    out.rotations[q2] = [("edge", e_b, 1), ("edge", e_c, 0)]
    out.rotations[x_new] = [("edge", e_c, 1), ("open", external_index)]
    out.externals[external_index] = x_new
    return out


# -- Pfaffians --------------------------------------------------------------------


def pfaffian_dense(matrix: list[list[Scalar]]) -> Scalar:
    """Textbook exact Pfaffian by elimination; odd dimension gives 0."""
    n = len(matrix)
    for i in range(n):
        for j in range(n):
            if matrix[i][j] != -matrix[j][i]:
                raise ValueError("matrix is not skew-symmetric")
    if n % 2:
        return ZERO
    a = [row[:] for row in matrix]
    sign = ONE
    result = ONE
    idx = 0
    while idx < n:
        pivot = None
        for j in range(idx + 1, n):
            if not a[idx][j].is_zero():
                pivot = j
                break
        if pivot is None:
            return ZERO
        if pivot != idx + 1:
            a[idx + 1], a[pivot] = a[pivot], a[idx + 1]
            for row in a:
                row[idx + 1], row[pivot] = row[pivot], row[idx + 1]
            sign = -sign
        piv = a[idx][idx + 1]
        result = result * piv
        for i in range(idx + 2, n):
            for j in range(idx + 2, n):
                a[i][j] = a[i][j] + (
                    a[idx][j] * a[idx + 1][i] - a[idx][i] * a[idx + 1][j]
                ) / piv
        idx += 2
    return sign * result


def pfaffian_sparse(n: int, entries: dict[tuple[int, int], Scalar]) -> Scalar:
    """Exact Pfaffian of a sparse skew matrix with min-degree pivoting.

    `entries` holds A[u][v] for u < v; A[v][u] = -A[u][v] implied.
    """
    if n % 2:
        return ZERO
    rows: dict[int, dict[int, Scalar]] = {i: {} for i in range(n)}
    for (u, v), w in entries.items():
        if w.is_zero():
            continue
        rows[u][v] = rows[u].get(v, ZERO) + w
        rows[v][u] = rows[v].get(u, ZERO) - w
    for i in list(rows):
        for j in [j for j, w in rows[i].items() if w.is_zero()]:
            del rows[i][j]
    order = list(range(n))
    position = {v: i for i, v in enumerate(order)}
    sign_flips = 0
    result = ONE
    alive = set(range(n))

    def move_to_front(vertex: int, target: int) -> None:
        nonlocal sign_flips
        pos = position[vertex]
        while pos > target:
            other = order[pos - 1]
            order[pos - 1], order[pos] = order[pos], order[pos - 1]
            position[other], position[vertex] = pos, pos - 1
            sign_flips += 1
            pos -= 1

    while alive:
        i = min(alive, key=lambda v: (len(rows[v]), v))
        if not rows[i]:
            return ZERO
        j = min(rows[i], key=lambda v: (len(rows[v]), v))
        move_to_front(i, 0)
        move_to_front(j, 1)
        piv = rows[i][j]
        result = result * piv
        neighbors_i = [(u, w) for u, w in rows[i].items() if u not in (i, j)]
        neighbors_j = [(u, w) for u, w in rows[j].items() if u not in (i, j)]
        # Schur update: A'[u][v] += (A[i][v] A[j][u] - A[i][u] A[j][v]) / piv
        for u, wju in neighbors_j:
            for v, wiv in neighbors_i:
                if u == v:
                    continue
                delta = wiv * wju / piv
                cur = rows[u].get(v, ZERO) + delta
                if cur.is_zero():
                    rows[u].pop(v, None)
                    rows[v].pop(u, None)
                else:
                    rows[u][v] = cur
                    rows[v][u] = -cur
        for u, _ in neighbors_i:
            rows[u].pop(i, None)
        for u, _ in neighbors_j:
            rows[u].pop(j, None)
        del rows[i], rows[j]
        alive.discard(i)
        alive.discard(j)
        # drop the two front positions from the order bookkeeping
        order.pop(0)
        order.pop(0)
        for pos, vtx in enumerate(order):
            position[vtx] = pos
    return -result if sign_flips % 2 else result


# -- Kasteleyn orientation -----------------------------------------------------------


def kasteleyn_orient(
    map_: RotationMap, outer_choice: int = 0
) -> dict[tuple[int, int], int]:
    """An orientation where every inner face has an odd number of edges
    agreeing with its traversal direction.

    Returns a direction per edge keyed by the sorted half-edge pair: 0
    keeps (low half -> high half), 1 reverses it.  Tree edges are oriented
    arbitrarily; the non-tree edges form a spanning tree of the dual, so
    processing inner faces from the deepest inward always finds exactly
    one undecided edge per face.  `outer_choice` rotates which face of each
    component plays the outer role, giving genuinely different orientations
    for self-checks.
    """
    faces = map_.faces()
    if not faces:
        return {}
    edge_of = {}
    for h in range(map_.half_edge_count):
        edge_of[h] = (min(h, map_.involution[h]), max(h, map_.involution[h]))
    face_of_half = {}
    for idx, face in enumerate(faces):
        for h in face:
            face_of_half[h] = idx
    # spanning forest over vertices
    tree_edges: set[tuple[int, int]] = set()
    seen = set()
    for root in range(map_.vertex_count):
        if root in seen:
            continue
        seen.add(root)
        stack = [root]
        while stack:
            v = stack.pop()
            for h in map_.vertices[v]:
                u = map_.vertex_of[map_.involution[h]]
                if u not in seen:
                    seen.add(u)
                    tree_edges.add(edge_of[h])
                    stack.append(u)
    direction: dict[tuple[int, int], int] = {e: 0 for e in tree_edges}
    # dual adjacency through non-tree edges
    dual: dict[int, list[tuple[int, tuple[int, int]]]] = {i: [] for i in range(len(faces))}
    for h, hp in map_.edges():
        e = edge_of[h]
        if e in tree_edges:
            continue
        fa, fb = face_of_half[h], face_of_half[hp]
        dual[fa].append((fb, e))
        dual[fb].append((fa, e))
    # find dual components, then BFS each from its chosen outer face
    face_seen = [False] * len(faces)
    components: list[list[int]] = []
    for start in range(len(faces)):
        if face_seen[start]:
            continue
        comp = [start]
        face_seen[start] = True
        queue = [start]
        while queue:
            fa = queue.pop(0)
            for fb, _ in dual[fa]:
                if not face_seen[fb]:
                    face_seen[fb] = True
                    comp.append(fb)
                    queue.append(fb)
        components.append(comp)
    process_order: list[tuple[int, tuple[int, int]]] = []  # (face, parent edge)
    for comp in components:
        outer = comp[outer_choice % len(comp)]
        parents: dict[int, tuple[int, int]] = {}
        order = [outer]
        visited = {outer}
        queue = [outer]
        while queue:
            fa = queue.pop(0)
            for fb, e in dual[fa]:
                if fb not in visited:
                    visited.add(fb)
                    parents[fb] = e
                    order.append(fb)
                    queue.append(fb)
        for f in reversed(order):
            if f in parents:
                process_order.append((f, parents[f]))
    for face_idx, parent_edge in process_order:
        face = faces[face_idx]
        agree = 0
        for hh in face:
            ee = edge_of[hh]
            if ee == parent_edge or ee not in direction:
                continue
            if hh == (ee[0] if direction[ee] == 0 else ee[1]):
                agree += 1
        # count the parent edge as many times as the face traverses it
        h_occurrences = [hh for hh in face if edge_of[hh] == parent_edge]
        assert len(h_occurrences) == 1, "non-tree edge must border two faces"
        h = h_occurrences[0]
        direction[parent_edge] = 0 if h == parent_edge[0] else 1
        if agree % 2 == 1:
            direction[parent_edge] = 1 - direction[parent_edge]
    for e in edge_of.values():
        direction.setdefault(e, 0)
    _verify_kasteleyn(map_, faces, edge_of, direction, process_order)
    return direction


def _verify_kasteleyn(map_, faces, edge_of, direction, process_order):
    inner = {f for f, _ in process_order}
    for idx in inner:
        agree = 0
        for h in faces[idx]:
            e = edge_of[h]
            if h == (e[0] if direction[e] == 0 else e[1]):
                agree += 1
        if agree % 2 == 0:
            raise MapError("Kasteleyn orientation failed on an inner face")


# -- full evaluation -----------------------------------------------------------------


@dataclass
class AssembledGraph:
    map: RotationMap
    weights: dict[tuple[int, int], Scalar]  # by sorted half-edge pair
    scale: Scalar  # product of gadget scales


def _assemble(
    inst: PlanarInstance,
    gadget_of: Sequence[PlaneGadget],
    scales: Sequence[Scalar],
    edge_joiner: str,
) -> AssembledGraph:
    """Glue vertex gadgets along the instance map.

    edge_joiner "diseq" inserts one interior vertex per instance edge
    (weight-1 Disequality join); "minus-eq" adds a single direct edge of
    weight -1 (the Hadamard-transformed equality join).
    """
    m = inst.map
    vertex_offset: list[int] = []
    total_vertices = 0
    for g in gadget_of:
        vertex_offset.append(total_vertices)
        total_vertices += g.n
    middle_of_edge: dict[tuple[int, int], int] = {}
    if edge_joiner == "diseq":
        for h, hp in m.edges():
            middle_of_edge[(h, hp)] = total_vertices
            total_vertices += 1
    elif edge_joiner == "minus-eq":
        # an even path A - p - q - B with weights (-1, 1, 1) is matching-
        # equivalent to a direct -1 edge but can never collide with gadget
        # edges or create parallels
        for h, hp in m.edges():
            middle_of_edge[(h, hp)] = total_vertices
            total_vertices += 2

    rotations: list[list[int]] = [[] for _ in range(total_vertices)]
    counter = 0
    internal_half: dict[tuple[int, int, int], int] = {}  # (vid, eidx, end)
    open_half: dict[tuple[int, int], int] = {}  # (vid, external index)
    for vid, g in enumerate(gadget_of):
        off = vertex_offset[vid]
        for local_v, rot in enumerate(g.rotations):
            for port in rot:
                hid = counter
                counter += 1
                rotations[off + local_v].append(hid)
                if port[0] == "edge":
                    internal_half[(vid, port[1], port[2])] = hid
                else:
                    open_half[(vid, port[1])] = hid
    involution: dict[int, int] = {}
    weights: dict[tuple[int, int], Scalar] = {}

    def bind(h1: int, h2: int, w: Scalar) -> None:
        involution[h1] = h2
        involution[h2] = h1
        weights[(min(h1, h2), max(h1, h2))] = w

    for vid, g in enumerate(gadget_of):
        for eidx, (_, _, w) in enumerate(g.edges):
            bind(internal_half[(vid, eidx, 0)], internal_half[(vid, eidx, 1)], w)
    for h, hp in m.edges():
        side_a = open_half[(m.vertex_of[h], m.slot_of[h])]
        side_b = open_half[(m.vertex_of[hp], m.slot_of[hp])]
        if edge_joiner == "diseq":
            mid = middle_of_edge[(h, hp)]
            ha = counter
            hb = counter + 1
            counter += 2
            rotations[mid].extend([ha, hb])
            bind(side_a, ha, ONE)
            bind(side_b, hb, ONE)
        elif edge_joiner == "minus-eq":
            p = middle_of_edge[(h, hp)]
            q = p + 1
            hp1, hp2, hq1, hq2 = counter, counter + 1, counter + 2, counter + 3
            counter += 4
            rotations[p].extend([hp1, hp2])
            rotations[q].extend([hq1, hq2])
            bind(side_a, hp1, -ONE)
            bind(hp2, hq1, ONE)
            bind(hq2, side_b, ONE)
        else:
            raise ValueError(f"unknown joiner {edge_joiner!r}")
    assembled = RotationMap(rotations, involution)
    assembled.validate_planar()
    scale = ONE
    for s in scales:
        scale = scale * s
    return AssembledGraph(assembled, weights, scale)


def _pfaffian_value(assembled: AssembledGraph, outer_choice: int = 0) -> Scalar:
    """Signed perfect-matching sum through a Kasteleyn orientation.

    The per-term sign under a valid orientation is uniform; it is fixed by
    comparing against the all-ones specialization, whose Pfaffian is +-
    the (positive) matching count.
    """
    amap = assembled.map
    n = amap.vertex_count
    if n == 0:
        return ONE
    direction = kasteleyn_orient(amap, outer_choice)
    entries: dict[tuple[int, int], Scalar] = {}
    ones: dict[tuple[int, int], Scalar] = {}
    for h, hp in amap.edges():
        u, v = amap.vertex_of[h], amap.vertex_of[hp]
        if u == v:
            raise SynthesisError("assembled graphs must be loop-free")
        e = (min(h, hp), max(h, hp))
        w = assembled.weights[e]
        tail = amap.vertex_of[e[0]] if direction[e] == 0 else amap.vertex_of[e[1]]
        key = (min(u, v), max(u, v))
        if key in entries:
            raise SynthesisError("assembled graphs must have no parallel edges")
        entries[key] = w if tail == key[0] else -w
        ones[key] = ONE if tail == key[0] else -ONE
    pf_ones = pfaffian_sparse(n, ones)
    if pf_ones.is_zero():
        return ZERO  # no perfect matchings at all
    sigma = ONE if pf_ones.as_rational() > 0 else -ONE
    pf_weighted = pfaffian_sparse(n, entries)
    return sigma * pf_weighted


def fkt_eval(
    inst: PlanarInstance, orientation_seed: int = 0
) -> Scalar:
    """Exact Holant value through matchgate synthesis and the Pfaffian.

    Every vertex label must be a matchgate six-vertex signature."""
    gadgets = []
    scales = []
    for label in inst.labels:
        if not isinstance(label, SixVertexSignature):
            raise SynthesisError("fkt_eval needs six-vertex labels")
        gadget, scale = synthesize(label)
        if scale.is_zero():
            return ZERO
        gadgets.append(gadget)
        scales.append(scale)
    assembled = _assemble(inst, gadgets, scales, "diseq")
    value = _pfaffian_value(assembled, orientation_seed)
    return value / assembled.scale


def fkt_eval_hat(inst: PlanarInstance) -> Scalar:
    """Evaluation for Hadamard-transformed matchgates.

    Holant(!= | f) = 2^{-|E|} Holant([1,0,0,-1]-equality | H f), where the
    signed equality is one direct edge of weight -1 and H f is synthesized
    per parity (odd images flip variable 1 with a pigtail)."""
    gadgets = []
    scales = []
    for label in inst.labels:
        if not isinstance(label, SixVertexSignature):
            raise SynthesisError("fkt_eval_hat needs six-vertex labels")
        if not is_matchgate_hat(label):
            raise SynthesisError("label is not in M-hat")
        image = hadamard_image(label)
        odd = any(
            not image.entries[idx].is_zero()
            for idx in range(16)
            if bin(idx).count("1") & 1
        )
        if odd:
            flipped = image.flip_variable(1)
            gadget, scale = synthesize_even_image(flipped)
            gadget = add_flip_pigtail(gadget, 0)
        else:
            gadget, scale = synthesize_even_image(image)
        if scale.is_zero():
            return ZERO
        gadgets.append(gadget)
        scales.append(scale)
    assembled = _assemble(inst, gadgets, scales, "minus-eq")
    value = _pfaffian_value(assembled)
    half = Scalar.from_rational(1) / Scalar.from_rational(2 ** inst.map.edge_count)
    return value / assembled.scale * half
