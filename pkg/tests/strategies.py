from hypothesis import strategies as st

from liftlab.graph import MultiGraph


@st.composite
def connected_multigraphs(draw, max_vertices=6, max_extra=5):
    n = draw(st.integers(1, max_vertices))
    edges = []
    # random tree first so the graph is connected, then extra edges (loops and parallels allowed)
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.append((u, v) if draw(st.booleans()) else (v, u))
    for _ in range(draw(st.integers(0, max_extra))):
        edges.append((draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))))
    order = draw(st.permutations(range(len(edges))))
    return MultiGraph(n, tuple(edges[i] for i in order))


@st.composite
def walks(draw, g, max_len=8):
    """Random walk on ``g`` as (start, steps)."""
    at = start = draw(st.integers(0, g.vertex_count - 1))
    steps = []
    for _ in range(draw(st.integers(0, max_len))):
        options = g.incidence[at]
        if not options:
            break
        e, w, forward = draw(st.sampled_from(options))
        steps.append((e, forward))
        at = w
    return start, tuple(steps)


seeds = st.integers(0, 2**32 - 1)
