"""Deterministic graph generators behind a small spec syntax.

Accepted forms (both styles parse): "path(8,1)" or "path 8 1".

    path(n, w)                  path on n vertices, every edge length w
    cycle(n, w)                 cycle on n vertices
    grid(a, b, w)               a x b grid, vertex r*b + c
    gnp(n, p, wmax, seed)       G(n, p), integer lengths uniform in [1, wmax]
    geometric(n, r, wscale, seed) random points in the unit square joined
                                below distance r, length ceil(dist * wscale)

Random generators enforce connectivity by resampling a bounded number of
times and then, if still disconnected, deterministically adding bridge edges
between components. Everything is a pure function of the spec string.
"""

from __future__ import annotations

import re

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .graph import Graph, GraphError
from .sampling import RandomStream

_RETRIES = 64


class GeneratorError(ValueError):
    pass


def parse_graph_spec(spec: str):
    """Normalize a spec string to (kind, [numeric args])."""
    text = spec.strip()
    m = re.fullmatch(r"([a-z_]+)\s*\(([^()]*)\)", text)
    if m:
        kind = m.group(1)
        arg_text = [a.strip() for a in m.group(2).split(",") if a.strip()]
    else:
        parts = text.split()
        if not parts:
            raise GeneratorError("empty graph spec")
        kind, arg_text = parts[0], parts[1:]
    args = []
    for a in arg_text:
        try:
            args.append(int(a))
        except ValueError:
            try:
                args.append(float(a))
            except ValueError:
                raise GeneratorError(f"bad numeric argument {a!r}") from None
    return kind, args


def _path_edges(n: int, w: int):
    u = np.arange(n - 1, dtype=np.int64)
    return u, u + 1, np.full(n - 1, float(w))


def _components(n, eu, ev):
    m = csr_matrix((np.ones(len(eu)), (eu, ev)), shape=(n, n))
    return connected_components(m, directed=False)


def _gnp_once(n, p, wmax, stream):
    iu, iv = np.triu_indices(n, k=1)
    mask = stream.uniform01(size=len(iu)) < p
    eu, ev = iu[mask].astype(np.int64), iv[mask].astype(np.int64)
    w = np.floor(stream.uniform01(size=len(eu)) * wmax).astype(np.int64) + 1
    w = np.minimum(w, wmax)
    return eu, ev, w.astype(np.float64)


def _augment_connect(n, eu, ev, ew, weight_fn):
    """Join components with deterministic bridge edges (smallest ids)."""
    ncomp, label = _components(n, eu, ev)
    if ncomp == 1:
        return eu, ev, ew
    firsts = [int(np.argmax(label == c)) for c in range(ncomp)]
    add_u, add_v, add_w = [], [], []
    for a, b in zip(firsts[:-1], firsts[1:]):
        u, v = (a, b) if a < b else (b, a)
        add_u.append(u)
        add_v.append(v)
        add_w.append(weight_fn(u, v))
    return (np.concatenate([eu, np.array(add_u, dtype=np.int64)]),
            np.concatenate([ev, np.array(add_v, dtype=np.int64)]),
            np.concatenate([ew, np.array(add_w, dtype=np.float64)]))


def generate_graph(spec: str) -> Graph:
    kind, args = parse_graph_spec(spec)
    if kind == "path":
        n, w = _two_int(args, kind)
        if n < 1:
            raise GeneratorError("path needs n >= 1")
        return Graph._from_arrays(np.arange(n, dtype=np.int64),
                                  *_path_edges(n, w))
    if kind == "cycle":
        n, w = _two_int(args, kind)
        if n < 3:
            raise GeneratorError("cycle needs n >= 3")
        eu, ev, ew = _path_edges(n, w)
        eu = np.append(eu, 0)
        ev = np.append(ev, n - 1)
        ew = np.append(ew, float(w))
        order = np.lexsort((ev, eu))
        return Graph._from_arrays(np.arange(n, dtype=np.int64),
                                  eu[order], ev[order], ew[order])
    if kind == "grid":
        if len(args) != 3:
            raise GeneratorError("grid takes (a, b, w)")
        a, b, w = int(args[0]), int(args[1]), int(args[2])
        if a < 1 or b < 1 or w < 1:
            raise GeneratorError("grid needs positive dimensions and length")
        edges = []
        for r in range(a):
            for c in range(b):
                v = r * b + c
                if c + 1 < b:
                    edges.append((v, v + 1, float(w)))
                if r + 1 < a:
                    edges.append((v, v + b, float(w)))
        return Graph.from_edges(a * b, edges)
    if kind == "gnp":
        if len(args) != 4:
            raise GeneratorError("gnp takes (n, p, wmax, seed)")
        n, p, wmax, seed = int(args[0]), float(args[1]), int(args[2]), int(args[3])
        if n < 1 or not (0 <= p <= 1) or wmax < 1:
            raise GeneratorError("bad gnp parameters")
        root = RandomStream(seed, ("gen", "gnp", n, wmax))
        for attempt in range(_RETRIES):
            s = root.child("attempt", attempt)
            eu, ev, ew = _gnp_once(n, p, wmax, s)
            if _components(n, eu, ev)[0] == 1:
                break
        else:
            aug = root.child("augment")
            eu, ev, ew = _augment_connect(
                n, eu, ev, ew,
                lambda u, v: float(int(aug.uniform01() * wmax) + 1))
        return Graph.from_edges(n, list(zip(eu.tolist(), ev.tolist(),
                                            ew.tolist())))
    if kind == "geometric":
        if len(args) != 4:
            raise GeneratorError("geometric takes (n, r, wscale, seed)")
        n, r, wscale, seed = (int(args[0]), float(args[1]), float(args[2]),
                              int(args[3]))
        if n < 1 or r <= 0 or wscale <= 0:
            raise GeneratorError("bad geometric parameters")
        root = RandomStream(seed, ("gen", "geometric", n))
        for attempt in range(_RETRIES):
            s = root.child("attempt", attempt)
            pts = s.uniform01(size=(n, 2))
            diff = pts[:, None, :] - pts[None, :, :]
            dist = np.sqrt((diff**2).sum(axis=2))
            iu, iv = np.triu_indices(n, k=1)
            mask = dist[iu, iv] <= r
            eu, ev = iu[mask].astype(np.int64), iv[mask].astype(np.int64)
            ew = np.maximum(np.ceil(dist[eu, ev] * wscale), 1.0)
            if _components(n, eu, ev)[0] == 1:
                break
        else:
            ncomp, label = _components(n, eu, ev)
            while ncomp > 1:
                # Bridge the closest pair straddling component 0.
                in0 = label == label[0]
                sub = dist[np.ix_(in0, ~in0)]
                i, j = np.unravel_index(np.argmin(sub), sub.shape)
                u = int(np.where(in0)[0][i])
                v = int(np.where(~in0)[0][j])
                a, b = (u, v) if u < v else (v, u)
                eu = np.append(eu, a)
                ev = np.append(ev, b)
                ew = np.append(ew, max(np.ceil(dist[a, b] * wscale), 1.0))
                ncomp, label = _components(n, eu, ev)
        return Graph.from_edges(n, list(zip(eu.tolist(), ev.tolist(),
                                            ew.tolist())))
    raise GeneratorError(f"unknown generator {kind!r}")


def _two_int(args, kind):
    if len(args) != 2:
        raise GeneratorError(f"{kind} takes (n, w)")
    n, w = int(args[0]), int(args[1])
    if w < 1:
        raise GeneratorError("edge length must be a positive integer")
    return n, w
