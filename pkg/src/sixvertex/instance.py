"""Planar instances as rotation systems (combinatorial maps).

A map stores, per vertex, its incident half-edges in counterclockwise
order, plus a fixed-point-free involution pairing half-edges into edges.
Faces are the orbits of (rotation-successor o involution); an instance is
accepted as planar when every connected component satisfies
V - E + F = 2.

Instances label every vertex with a signature whose arity equals the
vertex degree.  Every edge implicitly carries binary Disequality, so a
half-edge value of 1 reads "edge directed away from this vertex" and the
nonzero terms of the all-ones six-vertex signature are exactly the
Eulerian orientations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .signature import (
    BinarySignature,
    GeneralSignature4,
    SixVertexSignature,
    UnarySignature,
    format_signature,
    parse_signature,
)


class MapError(ValueError):
    pass


class RotationMap:
    """Half-edges 0..2m-1 with vertex rotations and an edge involution."""

    __slots__ = ("vertices", "involution", "vertex_of", "slot_of")

    def __init__(self, vertices: Sequence[Sequence[int]], involution: Mapping[int, int]):
        self.vertices = tuple(tuple(v) for v in vertices)
        inv = dict(involution)
        half_edges = [h for v in self.vertices for h in v]
        n = len(half_edges)
        if sorted(half_edges) != list(range(n)):
            raise MapError("half-edges must be 0..2m-1, each in exactly one vertex")
        if n % 2:
            raise MapError("odd number of half-edges")
        if sorted(inv) != list(range(n)):
            raise MapError("involution must cover every half-edge")
        for h, k in inv.items():
            if h == k or inv[k] != h:
                raise MapError("involution must be a fixed-point-free pairing")
        self.involution = tuple(inv[h] for h in range(n))
        vertex_of = [0] * n
        slot_of = [0] * n
        for vid, rot in enumerate(self.vertices):
            for slot, h in enumerate(rot):
                vertex_of[h] = vid
                slot_of[h] = slot
        self.vertex_of = tuple(vertex_of)
        self.slot_of = tuple(slot_of)

    # -- basic structure -------------------------------------------------

    @property
    def half_edge_count(self) -> int:
        return len(self.involution)

    @property
    def edge_count(self) -> int:
        return self.half_edge_count // 2

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        return [(h, self.involution[h]) for h in range(self.half_edge_count) if h < self.involution[h]]

    def rotation_next(self, h: int) -> int:
        """The next half-edge counterclockwise around h's vertex."""
        rot = self.vertices[self.vertex_of[h]]
        return rot[(self.slot_of[h] + 1) % len(rot)]

    def rotation_prev(self, h: int) -> int:
        rot = self.vertices[self.vertex_of[h]]
        return rot[(self.slot_of[h] - 1) % len(rot)]

    def opposite(self, h: int) -> int:
        """The half-edge two slots away (degree-4 vertices only)."""
        rot = self.vertices[self.vertex_of[h]]
        if len(rot) != 4:
            raise MapError("opposite() needs a degree-4 vertex")
        return rot[(self.slot_of[h] + 2) % 4]

    def faces(self) -> list[list[int]]:
        """Face orbits of next = rotation-successor of involution."""
        seen = [False] * self.half_edge_count
        out = []
        for start in range(self.half_edge_count):
            if seen[start]:
                continue
            cycle = []
            h = start
            while not seen[h]:
                seen[h] = True
                cycle.append(h)
                h = self.rotation_next(self.involution[h])
            out.append(cycle)
        return out

    def components(self) -> list[set[int]]:
        """Connected components as sets of vertex ids."""
        seen: set[int] = set()
        comps = []
        for v0 in range(self.vertex_count):
            if v0 in seen:
                continue
            comp = {v0}
            stack = [v0]
            seen.add(v0)
            while stack:
                v = stack.pop()
                for h in self.vertices[v]:
                    u = self.vertex_of[self.involution[h]]
                    if u not in seen:
                        seen.add(u)
                        comp.add(u)
                        stack.append(u)
            comps.append(comp)
        return comps

    def validate_planar(self) -> None:
        """Euler check V - E + F = 2 per connected component."""
        faces = self.faces()
        for comp in self.components():
            v = len(comp)
            halves = {h for vid in comp for h in self.vertices[vid]}
            e = len(halves) // 2
            f = sum(1 for cycle in faces if cycle and self.vertex_of[cycle[0]] in comp)
            if v - e + f != 2:
                raise MapError(
                    f"component is not planar: V={v} E={e} F={f}, V-E+F={v - e + f}"
                )

    def is_planar(self) -> bool:
        try:
            self.validate_planar()
            return True
        except MapError:
            return False

    def degrees(self) -> list[int]:
        return [len(rot) for rot in self.vertices]


Signature = "SixVertexSignature | BinarySignature | GeneralSignature4"


@dataclass(frozen=True)
class PlanarInstance:
    """A rotation map with a signature label on every vertex."""

    map: RotationMap
    labels: tuple

    def __post_init__(self):
        if len(self.labels) != self.map.vertex_count:
            raise MapError("one label per vertex required")
        for rot, label in zip(self.map.vertices, self.labels):
            arity = _arity(label)
            if arity != len(rot):
                raise MapError(
                    f"label arity {arity} does not match vertex degree {len(rot)}"
                )

    def validate(self) -> None:
        self.map.validate_planar()

    def relabel(self, labels: Sequence) -> "PlanarInstance":
        return PlanarInstance(self.map, tuple(labels))

    def with_uniform_label(self, f) -> "PlanarInstance":
        labels = []
        for rot in self.map.vertices:
            if len(rot) == _arity(f):
                labels.append(f)
            else:
                raise MapError("uniform label arity mismatch")
        return PlanarInstance(self.map, tuple(labels))


def _arity(label) -> int:
    if isinstance(label, SixVertexSignature) or isinstance(label, GeneralSignature4):
        return 4
    if isinstance(label, BinarySignature):
        return 2
    if isinstance(label, UnarySignature):
        return 1
    raise MapError(f"unsupported label {label!r}")


def uniform_instance(map_: RotationMap, f: SixVertexSignature) -> PlanarInstance:
    return PlanarInstance(map_, tuple(f for _ in range(map_.vertex_count)))


# -- plain graphs and medials -------------------------------------------------


class PlainGraph:
    """A connected plane multigraph given by vertex rotations over edge-end ids.

    Edge-end ids follow the same half-edge discipline as RotationMap but no
    labels are attached; used as input to medial construction and the Tutte
    oracle.
    """

    def __init__(self, vertices: Sequence[Sequence[int]], involution: Mapping[int, int]):
        self.map = RotationMap(vertices, involution)

    @property
    def vertex_count(self):
        return self.map.vertex_count

    @property
    def edge_count(self):
        return self.map.edge_count

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges as (vertex, vertex) pairs, loops included."""
        out = []
        for h, k in self.map.edges():
            out.append((self.map.vertex_of[h], self.map.vertex_of[k]))
        return out


def medial(graph: PlainGraph) -> RotationMap:
    """The medial map: one degree-4 vertex per edge of the input graph.

    Corners (h, next h) of the input become medial edges; around the medial
    vertex of edge {h, h'} the counterclockwise order is

        (prev h, h), (h', next h'), (prev h', h'), (h, next h).
    """
    gm = graph.map
    if len(gm.components()) != 1:
        raise MapError("medial construction needs a connected graph")
    gm.validate_planar()
    # A corner (g, sigma g) of the input joins the medial vertices of
    # edge(g) and edge(sigma g); the slot keyed (corner, 0) belongs to the
    # first component's medial vertex and (corner, 1) to the second's.
    half_ids: dict[tuple[tuple[int, int], int], int] = {}
    counter = 0
    vertices: list[list[int]] = []
    for h0 in range(gm.half_edge_count):
        if h0 > gm.involution[h0]:
            continue
        h, hp = h0, gm.involution[h0]
        slots = []
        for c, side in (
            ((gm.rotation_prev(h), h), 1),
            ((hp, gm.rotation_next(hp)), 0),
            ((gm.rotation_prev(hp), hp), 1),
            ((h, gm.rotation_next(h)), 0),
        ):
            half_ids[(c, side)] = counter
            slots.append(counter)
            counter += 1
        vertices.append(slots)
    involution = {}
    for (c, side), hid in half_ids.items():
        involution[hid] = half_ids[(c, 1 - side)]
    result = RotationMap(vertices, involution)
    if result.edge_count != 2 * graph.edge_count:
        raise MapError("medial edge count mismatch")
    result.validate_planar()
    return result


# -- generators ---------------------------------------------------------------


def cycle_graph(n: int) -> PlainGraph:
    """The n-cycle as a plane graph (n >= 1; n = 1 is a single loop)."""
    if n < 1:
        raise ValueError("cycle needs n >= 1")
    if n == 1:
        return PlainGraph([[0, 1]], {0: 1, 1: 0})
    vertices = []
    involution = {}
    for v in range(n):
        fwd = 2 * v
        back = (2 * ((v - 1) % n)) + 1
        vertices.append([fwd, back])
        involution[fwd] = 2 * v + 1
        involution[2 * v + 1] = fwd
    return PlainGraph(vertices, involution)


def path_graph(n_edges: int) -> PlainGraph:
    if n_edges < 1:
        raise ValueError("path needs at least one edge")
    vertices: list[list[int]] = [[] for _ in range(n_edges + 1)]
    involution = {}
    for e in range(n_edges):
        a, b = 2 * e, 2 * e + 1
        vertices[e].append(a)
        vertices[e + 1].append(b)
        involution[a] = b
        involution[b] = a
    return PlainGraph(vertices, involution)


def grid_graph(rows: int, cols: int) -> PlainGraph:
    """The rows x cols grid as a plane graph with ccw rotations."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs at least two vertices")
    counter = 0
    slots: dict[tuple[int, int, str], int] = {}
    involution = {}
    vertices = []

    def vid(r, c):
        return r * cols + c

    # assign half-edge ids edge by edge
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                slots[(r, c, "E")] = counter
                slots[(r, c + 1, "W")] = counter + 1
                involution[counter] = counter + 1
                involution[counter + 1] = counter
                counter += 2
            if r + 1 < rows:
                slots[(r, c, "S")] = counter
                slots[(r + 1, c, "N")] = counter + 1
                involution[counter] = counter + 1
                involution[counter + 1] = counter
                counter += 2
    for r in range(rows):
        for c in range(cols):
            rot = []
            # ccw in screen coordinates with row growing downward: E, N, W, S
            for d in ("E", "N", "W", "S"):
                if (r, c, d) in slots:
                    rot.append(slots[(r, c, d)])
            vertices.append(rot)
    return PlainGraph(vertices, involution)


def cycle_medial(n: int) -> RotationMap:
    """Medial of the n-cycle: the doubled n-cycle, 4-regular."""
    return medial(cycle_graph(n))


def grid_patch(rows: int, cols: int) -> RotationMap:
    """A 4-regular patch: the medial of the rows x cols grid."""
    return medial(grid_graph(rows, cols))


def random_plane_graph(n_edges: int, seed: int) -> PlainGraph:
    """A random connected plane multigraph grown edge by edge.

    Each step either subdivides nothing: it adds an edge from a random
    vertex into a random face corner, or doubles an existing edge, or adds
    a loop, all by splicing into rotations so the embedding stays planar.
    """
    rng = random.Random(seed)
    # start from a single loop
    vertices: list[list[int]] = [[0, 1]]
    involution = {0: 1, 1: 0}

    while len(involution) // 2 < n_edges:
        m = RotationMap([list(v) for v in vertices], dict(involution))
        choice = rng.random()
        faces = m.faces()
        face = rng.choice(faces)
        if choice < 0.45:
            # new vertex hanging off a face corner
            h = rng.choice(face)
            v = m.vertex_of[h]
            pos = m.slot_of[h]
            new_vid = len(vertices)
            h1 = len(involution)
            h2 = h1 + 1
            involution[h1] = h2
            involution[h2] = h1
            vertices[v].insert(pos, h1)
            vertices.append([h2])
        elif choice < 0.9 and len(face) >= 2:
            # chord across one face between two of its corners
            h_a, h_b = rng.sample(face, 2)
            va, pa = m.vertex_of[h_a], m.slot_of[h_a]
            vb, pb = m.vertex_of[h_b], m.slot_of[h_b]
            h1 = len(involution)
            h2 = h1 + 1
            involution[h1] = h2
            involution[h2] = h1
            if va == vb:
                first, second = sorted([pa, pb])
                vertices[va].insert(second, h2)
                vertices[va].insert(first, h1)
            else:
                vertices[va].insert(pa, h1)
                vertices[vb].insert(pb, h2)
        else:
            # loop at a face corner
            h = rng.choice(face)
            v, pos = m.vertex_of[h], m.slot_of[h]
            h1 = len(involution)
            h2 = h1 + 1
            involution[h1] = h2
            involution[h2] = h1
            vertices[v].insert(pos, h1)
            vertices[v].insert(pos, h2)
    graph = PlainGraph(vertices, involution)
    graph.map.validate_planar()
    return graph


def medial_of_random_plane_graph(n_edges: int, seed: int) -> RotationMap:
    return medial(random_plane_graph(n_edges, seed))


# -- serialization --------------------------------------------------------------

HEADER = "sixvertex-instance v1"


def serialize_instance(inst: PlanarInstance) -> str:
    names: dict[str, str] = {}
    label_names = []
    for label in inst.labels:
        text = format_signature(label)
        if text not in names:
            names[text] = f"s{len(names)}"
        label_names.append(names[text])
    lines = [HEADER, "signatures:"]
    for text, name in names.items():
        lines.append(f"{name}: {text}")
    lines.append("vertices:")
    for vid, rot in enumerate(inst.map.vertices):
        slots = " ".join(f"h{h}" for h in rot)
        lines.append(f"v{vid}: {label_names[vid]} : {slots}")
    lines.append("edges:")
    for h, k in inst.map.edges():
        lines.append(f"h{h} - h{k}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> PlanarInstance:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != HEADER:
        raise MapError(f"missing header {HEADER!r}")
    section = None
    signatures: dict[str, object] = {}
    vertex_rows: list[tuple[int, str, list[int]]] = []
    involution: dict[int, int] = {}
    for ln in lines[1:]:
        if ln == "signatures:":
            section = "signatures"
            continue
        if ln == "vertices:":
            section = "vertices"
            continue
        if ln == "edges:":
            section = "edges"
            continue
        if section == "signatures":
            name, _, literal = ln.partition(":")
            if not literal:
                raise MapError(f"bad signature line {ln!r}")
            signatures[name.strip()] = parse_signature(literal.strip())
        elif section == "vertices":
            head, _, slots_text = ln.rpartition(":")
            vid_text, _, sig_name = head.partition(":")
            if not slots_text or not sig_name:
                raise MapError(f"bad vertex line {ln!r}")
            vid = _parse_id(vid_text.strip(), "v")
            slots = [_parse_id(tok, "h") for tok in slots_text.split()]
            vertex_rows.append((vid, sig_name.strip(), slots))
        elif section == "edges":
            left, _, right = ln.partition("-")
            a = _parse_id(left.strip(), "h")
            b = _parse_id(right.strip(), "h")
            involution[a] = b
            involution[b] = a
        else:
            raise MapError(f"content outside any section: {ln!r}")
    vertex_rows.sort()
    if [vid for vid, _, _ in vertex_rows] != list(range(len(vertex_rows))):
        raise MapError("vertex ids must be v0..vN-1")
    labels = []
    for _, name, _ in vertex_rows:
        if name not in signatures:
            raise MapError(f"unknown signature name {name!r}")
        labels.append(signatures[name])
    rotation = RotationMap([slots for _, _, slots in vertex_rows], involution)
    inst = PlanarInstance(rotation, tuple(labels))
    inst.validate()
    return inst


def _parse_id(token: str, prefix: str) -> int:
    if not token.startswith(prefix):
        raise MapError(f"expected {prefix}<int>, got {token!r}")
    try:
        return int(token[len(prefix):])
    except ValueError as exc:
        raise MapError(f"expected {prefix}<int>, got {token!r}") from exc
