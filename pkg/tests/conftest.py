from itertools import combinations

from hypothesis import strategies as st

from bergecycle.hypergraph import UniformHypergraph


@st.composite
def hypergraphs(draw, n_min=3, n_max=7, r_min=2, r_max=4):
    n = draw(st.integers(n_min, n_max))
    r = draw(st.integers(r_min, min(r_max, n)))
    pool = list(combinations(range(n), r))
    chosen = draw(st.lists(st.sampled_from(pool), unique=True, max_size=len(pool)))
    return UniformHypergraph(n, r, tuple(chosen))


@st.composite
def walks_in(draw, h, kind=None):
    """Arbitrary (mostly invalid) walks over ``h``'s vertex and edge ids."""
    kind = kind or draw(st.sampled_from(["path", "cycle"]))
    length = draw(st.integers(0 if kind == "path" else 2, max(h.n, 2)))
    nv = length if kind == "cycle" else length + 1
    vs = draw(st.lists(st.integers(0, h.n - 1), min_size=nv, max_size=nv))
    if h.num_edges:
        es = draw(st.lists(st.integers(0, h.num_edges - 1), min_size=length, max_size=length))
    else:
        es = []
        vs = vs[:1] if kind == "path" else vs
    return kind, vs, es
