"""Hypothesis strategies for small instances."""
from hypothesis import strategies as st

from balance_forge.model import Edge, Endpoint, Instance

tenths = st.integers(1, 10).map(lambda i: i / 10)
costs = st.integers(0, 20).map(lambda i: i / 20)


@st.composite
def graphs(draw, max_vertices=4, max_edges=6, related=True, max_arity=2, loops=True):
    n = draw(st.integers(2, max_vertices))
    verts = [f"v{i}" for i in range(n)]
    m = draw(st.integers(1, max_edges))
    edges = []
    for eid in range(m):
        lo = 1 if loops else 2
        arity = draw(st.integers(lo, min(max_arity, n)))
        members = draw(st.permutations(verts))[:arity]
        if related:
            p = draw(tenths)
            eps = tuple(Endpoint(v, p, draw(costs)) for v in members)
        else:
            eps = tuple(Endpoint(v, draw(tenths), draw(costs)) for v in members)
        edges.append(Edge(eid, eps))
    return Instance(tuple(verts), tuple(edges), {})
