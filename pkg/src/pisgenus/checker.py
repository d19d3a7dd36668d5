"""Stand-alone re-verification of genus certificates.

Deliberately imports nothing from the solver packages: graph loading, face
tracing, blocks, girth, pattern graphs and the exhaustive refutation are all
re-implemented here in a plain style, so a bug in the search cannot vouch
for itself.
"""

from __future__ import annotations

import json
import math
import sys
from collections import deque
from dataclasses import dataclass, field


class CertificateError(ValueError):
    pass


@dataclass
class CheckResult:
    ok: bool
    lower: int | None = None
    upper: int | None = None
    checked: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "lower": self.lower, "upper": self.upper,
                "checked": self.checked, "errors": self.errors}


class _Graph:
    def __init__(self, n: int, edges):
        self.n = n
        self.nb: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise CertificateError(f"bad edge {u}-{v}")
            self.nb[u].add(v)
            self.nb[v].add(u)

    def edge_set(self) -> set[frozenset]:
        return {frozenset((u, v)) for u in range(self.n) for v in self.nb[u]}

    def induced_edges(self, vs) -> set[frozenset]:
        s = set(vs)
        return {e for e in self.edge_set() if e <= s}


def load_graph(doc) -> _Graph:
    if isinstance(doc, str):
        doc = json.loads(doc)
    return _Graph(len(doc["vertices"]), doc["edges"])


# --------------------------------------------------------------------------
# small graph utilities, edge sets given as sets of frozensets


def _adjacency(edges) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for e in edges:
        u, v = tuple(e)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def _connected(edges) -> bool:
    adj = _adjacency(edges)
    if not adj:
        return True
    start = next(iter(adj))
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(adj)


def _girth(edges) -> float:
    adj = _adjacency(edges)
    best = math.inf
    for e in edges:
        # shortest cycle through e = 1 + distance between its ends without e
        u, v = tuple(e)
        dist = {u: 0}
        q = deque([u])
        while q:
            x = q.popleft()
            if x == v:
                break
            for y in adj[x]:
                if (x, y) in ((u, v), (v, u)) or y in dist:
                    continue
                dist[y] = dist[x] + 1
                q.append(y)
        if v in dist:
            best = min(best, dist[v] + 1)
    return best


def _euler_bound(nv: int, ne: int, gam: float) -> int:
    if gam == math.inf or ne == 0:
        return 0
    # faces <= 2E/gamma, so 2g >= 2 - V + E - 2E/gamma
    val = (gam * (2 - nv + ne) - 2 * ne)
    return max(0, math.ceil(val / (2 * gam)))


def _blocks(edges) -> list[set[frozenset]]:
    """Biconnected components via recursive lowpoint search."""
    adj = _adjacency(edges)
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[frozenset] = []
    out: list[set[frozenset]] = []
    counter = [0]
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10 * len(adj) + 100))

    def dfs(x, parent):
        disc[x] = low[x] = counter[0]
        counter[0] += 1
        for y in adj[x]:
            if y == parent:
                continue
            if y not in disc:
                stack.append(frozenset((x, y)))
                dfs(y, x)
                low[x] = min(low[x], low[y])
                if low[y] >= disc[x]:
                    comp = set()
                    while True:
                        e = stack.pop()
                        comp.add(e)
                        if e == frozenset((x, y)):
                            break
                    out.append(comp)
            elif disc[y] < disc[x]:
                stack.append(frozenset((x, y)))
                low[x] = min(low[x], disc[y])

    try:
        for x in adj:
            if x not in disc:
                dfs(x, None)
    finally:
        sys.setrecursionlimit(old)
    return out


def _count_faces(rot: dict[int, list[int]]) -> int:
    nextpos = {}
    for v, o in rot.items():
        for i, u in enumerate(o):
            nextpos[v, u] = o[(i + 1) % len(o)]
    left = set(nextpos)
    faces = 0
    while left:
        start = left.pop()
        faces += 1
        u, v = start
        cur = (v, nextpos[v, u])
        while cur != start:
            left.remove(cur)
            u, v = cur
            cur = (v, nextpos[v, u])
    return faces


# --------------------------------------------------------------------------
# patterns


def _pattern(name: str) -> tuple[int, set[frozenset], int]:
    """(vertex count, edges, genus) of K_n / K_m,n and their one-point or disjoint unions."""
    for sep in (".", "+"):
        if sep in name:
            pieces = [_pattern(p) for p in name.split(sep)]
            n, edges, gen = pieces[0][0], set(pieces[0][1]), pieces[0][2]
            for pn, pe, pg in pieces[1:]:
                # piece vertex 0 is glued to vertex 0 for '.', fresh otherwise
                if sep == ".":
                    remap = {0: 0, **{v: n + v - 1 for v in range(1, pn)}}
                    n += pn - 1
                else:
                    remap = {v: n + v for v in range(pn)}
                    n += pn
                edges |= {frozenset(remap[x] for x in e) for e in pe}
                gen += pg
            return n, edges, gen
    if not name.startswith("K"):
        raise CertificateError(f"unknown pattern {name}")
    body = name[1:]
    if "," in body:
        a, b = (int(x) for x in body.split(","))
        edges = {frozenset((i, a + j)) for i in range(a) for j in range(b)}
        gen = 0 if min(a, b) < 2 else math.ceil((a - 2) * (b - 2) / 4)
        return a + b, edges, gen
    k = int(body)
    edges = {frozenset((i, j)) for i in range(k) for j in range(i + 1, k)}
    gen = 0 if k < 3 else math.ceil((k - 3) * (k - 4) / 12)
    return k, edges, gen


def _check_witness(g: _Graph, w: dict) -> tuple[set[frozenset], int]:
    n, pedges, gen = _pattern(w["pattern"])
    bm = [int(x) for x in w["branch_map"]]
    if len(bm) != n or len(set(bm)) != n or any(not (0 <= x < g.n) for x in bm):
        raise CertificateError("branch map is not an injective map into the host")
    listed = [frozenset(e) for e in w["pattern_edges"]]
    if len(listed) != len(pedges) or set(listed) != pedges:
        raise CertificateError("pattern edges do not match the pattern")
    if len(w["paths"]) != len(listed):
        raise CertificateError("one path per pattern edge expected")
    used_inner: set[int] = set()
    branch = set(bm)
    out: set[frozenset] = set()
    for (a, b), path in zip(w["pattern_edges"], w["paths"]):
        path = [int(x) for x in path]
        if len(path) < 2 or {path[0], path[-1]} != {bm[a], bm[b]}:
            raise CertificateError(f"path {path} does not join the images of {a},{b}")
        if len(set(path)) != len(path):
            raise CertificateError(f"path {path} repeats a vertex")
        for x, y in zip(path, path[1:]):
            if y not in g.nb[x]:
                raise CertificateError(f"path uses missing edge {x}-{y}")
            out.add(frozenset((x, y)))
        inner = set(path[1:-1])
        if inner & branch or inner & used_inner:
            raise CertificateError(f"path {path} is not internally disjoint")
        used_inner |= inner
    return out, gen


# --------------------------------------------------------------------------
# exhaustive refutation (independent of the solver's search)


def _embeds_with_genus_at_most(nv: int, edges: set[frozenset], k: int, node_cap: int | None) -> bool:
    """Brute-force edge insertion in BFS order with face recomputation."""
    adj = _adjacency(edges)
    verts = sorted(adj)
    if not verts:
        return True
    # start at a busiest vertex and visit busier neighbours first
    root = max(verts, key=lambda v: (len(adj[v]), -v))
    order: list[tuple[int, int]] = []
    seen = {root}
    q = deque([root])
    placed_order = [root]
    while q:
        x = q.popleft()
        for y in sorted(adj[x], key=lambda y: (-len(adj[y]), y)):
            if y not in seen:
                seen.add(y)
                placed_order.append(y)
                q.append(y)
    pos = {v: i for i, v in enumerate(placed_order)}
    for v in placed_order[1:]:
        earlier = sorted((u for u in adj[v] if pos[u] < pos[v]), key=lambda u: pos[u])
        for u in earlier:
            order.append((u, v))  # the first one attaches v, the rest close cycles

    rot: dict[int, list[int]] = {root: []}
    nodes = [0]

    def face_sets():
        nextpos = {}
        for v, o in rot.items():
            for i, u in enumerate(o):
                nextpos[v, u] = o[(i + 1) % len(o)]
        left = set(nextpos)
        fid = {}
        members = []
        while left:
            start = left.pop()
            f = len(members)
            vs = set()
            cur = start
            while True:
                fid[cur] = f
                vs.add(cur[0])
                u, v = cur
                cur = (v, nextpos[v, u])
                if cur == start:
                    break
                left.discard(cur)
            members.append(vs)
        return fid, members

    def genus_now(nfaces, ne):
        nvp = len(rot)
        if ne == 0:
            return 0
        return (2 - nvp + ne - nfaces) // 2

    def hopeless(i, members):
        # no handles left: remaining edges must stay inside single faces
        vf = {}
        for f, vs in enumerate(members):
            for v in vs:
                vf.setdefault(v, set()).add(f)
        for u, v in order[i:]:
            if u in rot and v in rot and rot[u] and rot[v]:
                if not (vf.get(u, set()) & vf.get(v, set())):
                    return True
        for w in verts:
            if w in rot:
                continue
            common = None
            for x in adj[w]:
                if x in rot and rot[x]:
                    common = set(vf.get(x, set())) if common is None else common & vf.get(x, set())
                    if not common:
                        return True
        return False

    def step(i, ne):
        nodes[0] += 1
        if node_cap is not None and nodes[0] > node_cap:
            raise CertificateError("exhaustive check exceeded its node cap")
        fid, members = face_sets()
        gen = genus_now(len(members), ne)
        if gen > k:
            return False
        if i == len(order):
            return True
        if gen == k and ne and hopeless(i, members):
            return False
        u, v = order[i]
        new_v = v not in rot
        slots_u = range(max(1, len(rot[u])))
        slots_v = [0] if new_v else range(max(1, len(rot[v])))
        if new_v:
            rot[v] = []
        for a in slots_u:
            for b in slots_v:
                # joining two different faces costs a handle
                if gen == k and not new_v and rot[u] and rot[v] and \
                        fid[rot[u][a], u] != fid[rot[v][b], v]:
                    continue
                rot[u].insert(a + 1 if rot[u] else 0, v)
                rot[v].insert(b + 1 if rot[v] else 0, u)
                ok = step(i + 1, ne + 1)
                rot[v].remove(u)
                rot[u].remove(v)
                if ok:
                    return True
        if new_v:
            del rot[v]
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(order) + 200))
    try:
        return step(0, 0)
    finally:
        sys.setrecursionlimit(old)


# --------------------------------------------------------------------------


def _check_lower(g: _Graph, cert: dict, res: CheckResult, node_cap: int | None) -> tuple[int, set[frozenset]]:
    kind = cert["kind"]
    claim = int(cert["genus"])
    if kind == "euler":
        es = g.induced_edges(cert["vertices"])
        if not _connected(es):
            raise CertificateError("Euler certificate on a disconnected subgraph")
        nv = len({v for e in es for v in e})
        bound = _euler_bound(nv, len(es), _girth(es))
        if claim > bound:
            raise CertificateError(f"Euler count gives {bound}, certificate claims {claim}")
        res.checked.append(f"euler: V={nv} E={len(es)} bound {bound}")
        return claim, es
    if kind == "subdivision":
        es, gen = _check_witness(g, cert["witness"])
        if claim != gen:
            raise CertificateError(f"{cert['witness']['pattern']} has genus {gen}, certificate claims {claim}")
        res.checked.append(f"subdivision of {cert['witness']['pattern']}: genus {gen}")
        return claim, es
    if kind == "exhaustive":
        es = g.induced_edges(cert["vertices"])
        if not _connected(es):
            raise CertificateError("exhaustive certificate on a disconnected subgraph")
        if claim > 0 and _embeds_with_genus_at_most(g.n, es, claim - 1, node_cap):
            raise CertificateError(f"found an embedding of genus <= {claim - 1}")
        res.checked.append(f"exhaustive: no embedding of genus < {claim} on {len(es)} edges")
        return claim, es
    if kind == "blocksum":
        parts = [_check_lower(g, p, res, node_cap) for p in cert["parts"]]
        union = set().union(*(es for _, es in parts)) if parts else set()
        blocks = _blocks(union)
        homes = []
        for _, es in parts:
            home = [i for i, b in enumerate(blocks) if es <= b]
            if not home:
                raise CertificateError("a block-sum part spans several blocks of the union")
            homes.append(home[0])
        if len(set(homes)) != len(homes):
            raise CertificateError("two block-sum parts share a block")
        total = sum(c for c, _ in parts)
        if claim != total:
            raise CertificateError(f"parts sum to {total}, certificate claims {claim}")
        res.checked.append(f"block sum of {len(parts)} parts: {total}")
        return total, union
    raise CertificateError(f"unknown certificate kind {kind}")


def check_certificate(graph_doc, cert_doc, node_cap: int | None = 5_000_000) -> CheckResult:
    res = CheckResult(ok=False)
    try:
        g = load_graph(graph_doc)
        if isinstance(cert_doc, str):
            cert_doc = json.loads(cert_doc)
        if "graph" in cert_doc:
            inner = load_graph(cert_doc["graph"])
            if inner.n != g.n or inner.edge_set() != g.edge_set():
                raise CertificateError("certificate was issued for a different graph")
        lower = 0
        if cert_doc.get("lower_certificate"):
            lower, _ = _check_lower(g, cert_doc["lower_certificate"], res, node_cap)
        if lower != cert_doc["lower"]:
            raise CertificateError(f"lower certificate proves {lower}, document says {cert_doc['lower']}")
        for extra in cert_doc.get("supporting", []):
            _check_lower(g, extra, res, node_cap)
        res.lower = lower
        up = cert_doc.get("upper_certificate")
        if up is not None:
            rot = {v: [int(x) for x in o] for v, o in enumerate(up["rotation"])}
            if len(rot) != g.n:
                raise CertificateError("rotation lists the wrong number of vertices")
            for v, o in rot.items():
                if len(o) != len(set(o)) or set(o) != g.nb[v]:
                    raise CertificateError(f"rotation at {v} is not a cyclic order of its neighbours")
            nf = _count_faces({v: o for v, o in rot.items() if o})
            if up.get("faces") is not None and nf != up["faces"]:
                raise CertificateError(f"traced {nf} faces, document says {up['faces']}")
            # genus per component; faces never cross components
            comps = _components(g)
            ne = len(g.edge_set())
            nv = sum(len(c) for c in comps)
            twice = 2 * len(comps) - nv + ne - nf
            if twice % 2 or twice < 0:
                raise CertificateError("Euler characteristic has the wrong parity")
            res.upper = twice // 2
            if res.upper != cert_doc["upper"]:
                raise CertificateError(f"rotation has genus {res.upper}, document says {cert_doc['upper']}")
            res.checked.append(f"rotation: {nf} faces, genus {res.upper}")
            if lower > res.upper:
                raise CertificateError("lower bound exceeds upper bound")
        elif cert_doc.get("upper") is not None:
            raise CertificateError("upper bound given without a rotation")
        res.ok = True
    except (CertificateError, KeyError, TypeError, ValueError) as exc:
        res.errors.append(str(exc) or type(exc).__name__)
    return res


def _components(g: _Graph) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for s in range(g.n):
        if s in seen or not g.nb[s]:
            continue
        comp = {s}
        todo = [s]
        while todo:
            x = todo.pop()
            for y in g.nb[x]:
                if y not in comp:
                    comp.add(y)
                    todo.append(y)
        seen |= comp
        out.append(comp)
    return out


def verify_certificate(graph_file: str, cert_file: str) -> CheckResult:
    with open(graph_file) as fh:
        graph_doc = json.load(fh)
    with open(cert_file) as fh:
        cert_doc = json.load(fh)
    return check_certificate(graph_doc, cert_doc)
