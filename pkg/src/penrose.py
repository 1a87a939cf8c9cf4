"""
Brute-force spin-network evaluation by permutation sums.

Each edge is replaced by label-many parallel strands, strands are joined
without crossings at the vertices, and every choice of one permutation per
edge contributes (-2)^loops * (-1)^crossings. The sum is divided by the
number of diagrams. Edges are summed one at a time, merging partial diagrams
that leave the same open strands joined. This is the reference the closed forms in
``recoupling`` must reproduce.
"""

import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Tuple

import networkx as nx

import config
from errors import BadInput, CapExceeded, Inadmissible
from recoupling import LabelSextuple, is_admissible_triple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrivalentNet:
    """A labelled planar trivalent graph.

    ``vertices`` lists, for each vertex, its three incident edge names in
    counter-clockwise order; each edge name appears at exactly two vertices.
    """

    name: str
    vertices: Tuple[Tuple[str, str, str], ...]
    labels: Mapping[str, int]

    def edge_ends(self):
        ends = {}
        for index, vertex in enumerate(self.vertices):
            for edge in vertex:
                ends.setdefault(edge, []).append(index)
        return ends

    def validate(self):
        """Check trivalence, two distinct ends per edge, and planarity"""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(len(self.vertices)))
        for edge, ends in self.edge_ends().items():
            if len(ends) != 2 or ends[0] == ends[1]:
                raise BadInput(f"Edge {edge!r} of {self.name} must join two distinct vertices")
            if edge not in self.labels:
                raise BadInput(f"Edge {edge!r} of {self.name} has no label")
            graph.add_edge(ends[0], ends[1], key=edge)
        for node, degree in graph.degree():
            if degree != 3:
                raise BadInput(f"Vertex {node} of {self.name} has degree {degree}")
        planar, _ = nx.check_planarity(nx.Graph(graph))
        if not planar:
            raise BadInput(f"{self.name} is not planar")
        return True


def theta_net(a, b, c):
    # left vertex sees the edges bottom, middle, top; the right vertex the reverse
    return TrivalentNet(
        name="theta",
        vertices=(("c", "b", "a"), ("a", "b", "c")),
        labels={"a": a, "b": b, "c": c},
    )


def mercedes_net(labels):
    """Tetrahedral net dual to the sextuple: one vertex per face triple.

    The (f,d,b) vertex sits in the centre, the other three on the outer
    triangle joined by the a, c and e edges.
    """
    labels = LabelSextuple(*labels)
    return TrivalentNet(
        name="mercedes",
        vertices=(
            ("b", "d", "f"),
            ("c", "b", "a"),
            ("e", "d", "c"),
            ("a", "f", "e"),
        ),
        labels=dict(labels._asdict()),
    )


def inversions(perm):
    return sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])


def _vertex_chords(net, endpoint):
    chords = {}
    for index, (x, y, z) in enumerate(net.vertices):
        n = net.labels
        for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
            count = (n[p] + n[q] - n[r]) // 2
            for t in range(count):
                i = endpoint[(index, p, n[p] - 1 - t)]
                j = endpoint[(index, q, t)]
                chords[i] = j
                chords[j] = i
    return tuple(chords[i] for i in range(len(endpoint)))


def _attach(state, pairs):
    """Join strand ends into the open-path matching ``state``; returns the new state and closed loops"""
    partner = list(state)
    loops = 0
    for x, y in pairs:
        px, py = partner[x], partner[y]
        if px == y:
            loops += 1
        else:
            partner[px] = py
            partner[py] = px
        partner[x] = partner[y] = -1
    return tuple(partner), loops


def penrose_evaluate(net, cap=None):
    if cap is None:
        cap = config.ORACLE_CAP
    net.validate()
    for edge, label in net.labels.items():
        if label > cap:
            raise CapExceeded(f"Label {label} on edge {edge!r} exceeds the oracle cap {cap}")
    for vertex in net.vertices:
        triple = tuple(net.labels[e] for e in vertex)
        if not is_admissible_triple(*triple):
            raise Inadmissible(f"Vertex triple {triple} of {net.name} is not admissible")

    endpoint = {}
    for index, vertex in enumerate(net.vertices):
        for edge in vertex:
            for pos in range(net.labels[edge]):
                endpoint[(index, edge, pos)] = len(endpoint)
    if not endpoint:
        return Fraction(1)

    # per edge: every permutation as (sign, list of endpoint pairs)
    options = {}
    for edge, (u, v) in net.edge_ends().items():
        n = net.labels[edge]
        if n == 0:
            continue
        choices = []
        for perm in itertools.permutations(range(n)):
            sign = -1 if inversions(perm) % 2 else 1
            # strand leaving u at ccw position p arrives at v at ccw position n-1-perm[p]
            pairs = [(endpoint[(u, edge, p)], endpoint[(v, edge, n - 1 - perm[p])]) for p in range(n)]
            choices.append((sign, pairs))
        options[edge] = choices

    diagrams = math.prod(len(choices) for choices in options.values())
    logger.info(f"Evaluating {net.name} net {dict(net.labels)} over {diagrams} diagrams")

    # diagrams sharing the same open-path matching are merged after each edge
    states = {_vertex_chords(net, endpoint): 1}
    for edge in sorted(options, key=lambda name: (-net.labels[name], name)):
        merged = defaultdict(int)
        for state, weight in states.items():
            for sign, pairs in options[edge]:
                closed, loops = _attach(state, pairs)
                merged[closed] += weight * sign * (-2) ** loops
        states = {state: weight for state, weight in merged.items() if weight}

    return Fraction(sum(states.values()), diagrams)
