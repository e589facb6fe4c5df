import itertools

from hypothesis import strategies as st

from kmatch.graphs import Graph


@st.composite
def small_graphs(draw, max_vertices=7, max_edges=10, min_edges=0):
    n = draw(st.integers(1, max_vertices))
    vs = [str(i) for i in range(n)]
    pairs = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    if not pairs:
        return Graph(vs, [])
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min(min_edges, len(pairs)), max_size=min(max_edges, len(pairs))))
    return Graph(vs, chosen)


@st.composite
def max_degree_3_graphs(draw, max_vertices=5):
    """Connected graphs of maximum degree at most 3, grown from a tree plus a few extra edges."""
    n = draw(st.integers(2, max_vertices))
    vs = [str(i) for i in range(n)]
    deg = {v: 0 for v in vs}
    edges = []
    for i in range(1, n):
        options = [v for v in vs[:i] if deg[v] < 3]
        p = draw(st.sampled_from(options))
        edges.append((p, vs[i]))
        deg[p] += 1
        deg[vs[i]] += 1
    extra = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n) if (vs[i], vs[j]) not in edges and (vs[j], vs[i]) not in edges]
    for u, v in draw(st.lists(st.sampled_from(extra), unique=True, max_size=2)) if extra else []:
        if deg[u] < 3 and deg[v] < 3:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph(vs, edges)


def brute_k_matchings(g: Graph, k: int) -> set[frozenset]:
    """Every edge subset in which each vertex meets at most k chosen edges."""
    labels = list(g.labels)
    out = set()
    for r in range(len(labels) + 1):
        for combo in itertools.combinations(labels, r):
            load = {}
            ok = True
            for lab in combo:
                for v in g.endpoints(lab):
                    load[v] = load.get(v, 0) + 1
                    if load[v] > k:
                        ok = False
            if ok:
                out.add(frozenset(combo))
    return out
