"""Projection systems, standard paths, and the graphs built from them.

Indices are the integers ``0..n-1``; ``names`` holds display labels.  Each
index Y carries a finite connected graph ``C(Y)`` on local vertices
``0..size-1``, and ``proj[(Y, X)]`` is the projection of X into ``C(Y)``.

Throughout, ``d[Y, X, Z] = diam(pi_Y(X) u pi_Y(Z))`` and the value -1 marks
the undefined entries where ``Y`` equals ``X`` or ``Z``.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

# Above this many indices the dense d-tensor is not built.
DENSE_LIMIT = 400
MAX_COUNTEREXAMPLES = 5


class OrderError(ValueError):
    """The standard-path order is not a total order; the axioms fail."""


def _graph_distances(size: int, edges: Sequence[tuple[int, int]], weights=None) -> np.ndarray:
    if size == 0:
        return np.zeros((0, 0))
    rows = [u for u, v in edges] + [v for u, v in edges]
    cols = [v for u, v in edges] + [u for u, v in edges]
    data = list(weights) * 2 if weights is not None else [1] * len(rows)
    g = csr_matrix((data, (rows, cols)), shape=(size, size))
    return shortest_path(g, directed=False, unweighted=weights is None)


class ProjectionSystem:
    def __init__(
        self,
        names: Sequence[str],
        spaces: Sequence[tuple[int, Sequence[tuple[int, int]]]],
        proj: dict,
        theta: int = 0,
        vertex_names: Sequence[Sequence[str]] | None = None,
    ):
        self.names = list(names)
        n = self.n = len(self.names)
        if len(spaces) != n:
            raise ValueError("one space per index is required")
        self.sizes = [int(s) for s, _ in spaces]
        self.edges = [[(int(u), int(v)) for u, v in e] for _, e in spaces]
        self.theta = theta
        self.vertex_names = vertex_names
        self.dist = []
        for Y in range(n):
            if self.sizes[Y] < 1:
                raise ValueError(f"space {self.names[Y]} is empty")
            dY = _graph_distances(self.sizes[Y], self.edges[Y])
            if np.isinf(dY).any():
                raise ValueError(f"space {self.names[Y]} is disconnected")
            self.dist.append(dY.astype(np.int32))
        self.proj: dict = {}
        for Y in range(n):
            for X in range(n):
                if X == Y:
                    continue
                p = proj.get((Y, X))
                if not p:
                    raise ValueError(f"empty projection of {self.names[X]} into {self.names[Y]}")
                p = frozenset(int(v) for v in p)
                if not all(0 <= v < self.sizes[Y] for v in p):
                    raise ValueError(f"projection of {self.names[X]} leaves {self.names[Y]}")
                self.proj[(Y, X)] = p
        self.singletons = all(len(p) == 1 for p in self.proj.values())
        # I[Y, X] = local vertex of pi_Y(X) in singleton systems; -1 on the diagonal
        self.I = np.full((n, n), -1, dtype=np.int64)
        if self.singletons:
            for (Y, X), p in self.proj.items():
                self.I[Y, X] = next(iter(p))
            m = max(self.sizes)
            self._padded = np.zeros((n, m, m), dtype=np.int32)
            for Y in range(n):
                s = self.sizes[Y]
                self._padded[Y, :s, :s] = self.dist[Y]
        self._tensor = None

    def __repr__(self) -> str:
        return f"ProjectionSystem(n={self.n}, vertices={self.total_vertices}, theta={self.theta})"

    @property
    def total_vertices(self) -> int:
        return sum(self.sizes)

    def d(self, Y: int, X: int, Z: int) -> int:
        if Y in (X, Z):
            raise ValueError("d_Y(X, Z) needs X, Z different from Y")
        if self._tensor is not None:
            return int(self._tensor[Y, X, Z])
        pts = list(self.proj[(Y, X)] | self.proj[(Y, Z)])
        return int(self.dist[Y][np.ix_(pts, pts)].max())

    def matrix(self, Y: int) -> np.ndarray:
        """``M[X, Z] = d_Y(X, Z)`` with -1 in row and column Y."""
        n = self.n
        if self._tensor is not None:
            return self._tensor[Y]
        if self.singletons:
            idx = self.I[Y].copy()
            idx[Y] = 0
            M = self.dist[Y][idx[:, None], idx[None, :]].copy()
        else:
            dY = self.dist[Y]
            sets = [sorted(self.proj[(Y, X)]) if X != Y else [0] for X in range(n)]
            far = np.stack([dY[s].max(axis=0) for s in sets])  # far[X, v] = max over pi_Y(X)
            diam = np.array([dY[np.ix_(s, s)].max() for s in sets])
            cross = np.stack([far[:, s].max(axis=1) for s in sets], axis=1)
            M = np.maximum(cross, np.maximum(diam[:, None], diam[None, :]))
        M[Y, :] = -1
        M[:, Y] = -1
        return M

    def rows(self, Xs: np.ndarray, Y: int) -> np.ndarray:
        """``R[i, Z] = d_{Xs[i]}(Y, Z)``, -1 where undefined."""
        Xs = np.asarray(Xs, dtype=np.int64)
        if self._tensor is not None:
            R = self._tensor[Xs, Y, :].copy()
        elif self.singletons:
            iy = self.I[Xs, Y].copy()
            iz = self.I[Xs, :].copy()
            iy[iy < 0] = 0
            iz[iz < 0] = 0
            R = self._padded[Xs[:, None], iy[:, None], iz]
            R[Xs == Y, :] = -1
            R[np.arange(len(Xs)), Xs] = -1
        else:
            R = np.stack([self.matrix(int(X))[Y] for X in Xs])
        return R

    def tensor(self) -> np.ndarray:
        if self._tensor is None:
            if self.n > DENSE_LIMIT:
                raise ValueError(f"{self.n} indices exceeds the dense limit {DENSE_LIMIT}")
            self._tensor = np.stack([self.matrix(Y) for Y in range(self.n)]) if self.n else np.zeros((0, 0, 0), int)
        return self._tensor

    def projection_ids(self, X: int) -> np.ndarray:
        """Equal ids for equal projection sets inside ``C(X)``."""
        ids: dict = {}
        out = np.full(self.n, -1, dtype=np.int64)
        for Y in range(self.n):
            if Y != X:
                out[Y] = ids.setdefault(self.proj[(X, Y)], len(ids))
        return out

    def to_json(self) -> dict:
        return {
            "kind": "explicit",
            "names": self.names,
            "spaces": [{"size": s, "edges": e} for s, e in zip(self.sizes, self.edges)],
            "projections": [[Y, X, sorted(p)] for (Y, X), p in sorted(self.proj.items())],
            "theta": self.theta,
        }


# -- axioms ----------------------------------------------------------------------


@dataclass
class AxiomReport:
    theta: int
    theta_min: int
    values: dict  # axiom -> smallest theta for which it holds
    witnesses: dict  # axiom -> the triple forcing that value
    max_between: int  # largest number of Y with d_Y(X, Z) > theta

    @property
    def ok(self) -> bool:
        return self.theta_min <= self.theta

    def violations(self) -> dict:
        return {a: self.witnesses[a] for a, v in self.values.items() if v > self.theta}

    def to_json(self, names=None) -> dict:
        def label(t):
            return [names[i] for i in t] if names and t is not None else t

        return {
            "ok": self.ok,
            "theta": self.theta,
            "theta_min": self.theta_min,
            "values": self.values,
            "violations": {a: label(w) for a, w in self.violations().items()},
            "max_between": self.max_between,
        }


def verify_axioms(sys: ProjectionSystem, theta: int | None = None) -> AxiomReport:
    """Exhaustive check of the strong projection axioms over all index triples.

    Each axiom is monotone in theta, so the least admissible theta is a max
    over triples: diameters for the first, ``min(d_Y(X,Z), d_X(Y,Z))`` for the
    second, and ``d_Y(X,Z)`` over triples whose projections into X differ for
    the third.  Finiteness holds trivially for a finite index set.
    """
    theta = sys.theta if theta is None else theta
    n = sys.n
    best = {"diameter": (0, None), "projection_separation": (0, None), "equal_projection": (0, None)}
    between = np.zeros((n, n), dtype=np.int64)
    ids = np.stack([sys.projection_ids(X) for X in range(n)]) if n else np.zeros((0, 0), int)
    offdiag = ~np.eye(n, dtype=bool)
    for Y in range(n):
        if sys.sizes[Y] == 1:
            continue  # every d_Y vanishes on a one-point space
        M = sys.matrix(Y)
        diag = np.diagonal(M).copy()
        diag[Y] = -1
        X = int(diag.argmax()) if n > 1 else 0
        if n > 1 and diag[X] > best["diameter"][0]:
            best["diameter"] = (int(diag[X]), (Y, X, X))
        A = np.where(offdiag, M, -1)
        between += A > theta
        xs, zs = np.nonzero(A > 0)
        if len(xs) == 0:
            continue
        a = A[xs, zs]
        if sys.singletons:
            r = sys._padded[xs, sys.I[xs, Y], sys.I[xs, zs]]
        else:
            T = sys.tensor()
            r = T[xs, Y, zs]
        both = np.minimum(a, r)
        i = int(both.argmax())
        if both[i] > best["projection_separation"][0]:
            best["projection_separation"] = (int(both[i]), (Y, int(xs[i]), int(zs[i])))
        cand = np.where(ids[xs, Y] != ids[xs, zs], a, -1)
        i = int(cand.argmax())
        if cand[i] > best["equal_projection"][0]:
            best["equal_projection"] = (int(cand[i]), (Y, int(xs[i]), int(zs[i])))
    values = {a: v for a, (v, _) in best.items()}
    witnesses = {a: w for a, (_, w) in best.items()}
    return AxiomReport(theta, max(values.values()), values, witnesses, int(between.max()) if n else 0)


# -- standard paths ----------------------------------------------------------------


def _theta(sys: ProjectionSystem, theta) -> int:
    return sys.theta if theta is None else theta


def between_set(sys: ProjectionSystem, K: int, X: int, Z: int) -> list:
    if X == Z:
        return []
    if sys._tensor is not None:
        col = sys._tensor[:, X, Z]
        return [int(Y) for Y in np.flatnonzero(col > K)]
    return [Y for Y in range(sys.n) if Y not in (X, Z) and sys.d(Y, X, Z) > K]


def precedes(sys: ProjectionSystem, X: int, Y: int, Y2: int, theta=None) -> bool:
    """``Y < Y2`` on a standard path starting at X."""
    return sys.d(Y, X, Y2) > _theta(sys, theta)


def standard_path(sys: ProjectionSystem, K: int, X: int, Z: int, theta=None) -> tuple:
    theta = _theta(sys, theta)
    if K < 2 * theta:
        raise ValueError(f"K={K} is below 2*theta={2 * theta}")
    if X == Z:
        return (X,)
    inner = between_set(sys, K, X, Z)
    k = len(inner)
    if k > 1:
        if sys._tensor is not None:
            M = sys._tensor[np.ix_(inner, [X], inner)][:, 0, :]
        else:
            M = np.array([[sys.d(a, X, b) if a != b else -1 for b in inner] for a in inner])
        less = M > theta
        np.fill_diagonal(less, False)
        off = ~np.eye(k, dtype=bool)
        if not np.all((less ^ less.T)[off]):
            raise OrderError(f"order is not total between {sys.names[X]} and {sys.names[Z]}")
        rank = less.sum(axis=0)
        if sorted(rank.tolist()) != list(range(k)):
            raise OrderError(f"order is not transitive between {sys.names[X]} and {sys.names[Z]}")
        inner = [inner[i] for i in np.argsort(rank)]
    return (X, *inner, Z)


# -- complexes --------------------------------------------------------------------


@dataclass
class ComplexBundle:
    K: int
    basepoint: int
    seed: int
    adjacency: np.ndarray  # projection complex, index level
    tree_edges: list  # sorted (X, Y) pairs with X < Y
    paths_from_base: list
    reps: dict  # (X, Y) -> chosen vertex of pi_X(Y), local numbering
    offset: list
    owner: np.ndarray
    ck_edges: list  # (u, v, w) on global vertex numbers
    ckt_edges: list

    @property
    def n_vertices(self) -> int:
        return len(self.owner)

    def pk_edges(self) -> list:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(np.triu(self.adjacency, 1)))]


def projection_complex(sys: ProjectionSystem, K: int) -> np.ndarray:
    n = sys.n
    if n == 0:
        return np.zeros((0, 0), bool)
    T = sys.tensor()
    adj = ((T > K).sum(axis=0) == 0) & ~np.eye(n, dtype=bool)
    return adj


def build_complexes(sys: ProjectionSystem, K: int, basepoint: int = 0, seed: int = 0, theta=None) -> ComplexBundle:
    theta = _theta(sys, theta)
    if K < 4 * theta:
        raise ValueError(f"K={K} is below 4*theta={4 * theta}")
    n = sys.n
    adj = projection_complex(sys, K)
    paths = [standard_path(sys, K, basepoint, X, theta) for X in range(n)]
    tree = sorted({(min(a, b), max(a, b)) for p in paths for a, b in zip(p, p[1:])})
    offset = list(itertools.accumulate([0] + sys.sizes[:-1])) if n else []
    owner = np.repeat(np.arange(n), sys.sizes) if n else np.zeros(0, int)
    # p(X, Y): least vertex of pi_X(Y) under a seeded ranking of all vertices
    rank = list(range(len(owner)))
    random.Random(seed).shuffle(rank)
    reps = {}
    for X, Y in zip(*np.nonzero(adj)):
        X, Y = int(X), int(Y)
        reps[(X, Y)] = min(sys.proj[(X, Y)], key=lambda v: rank[offset[X] + v])
    intra = [(offset[Y] + u, offset[Y] + v, 1) for Y in range(n) for u, v in sys.edges[Y]]
    transverse = []
    for X, Y in (e for e in zip(*np.nonzero(np.triu(adj, 1)))):
        X, Y = int(X), int(Y)
        for a in sorted(sys.proj[(X, Y)]):
            for b in sorted(sys.proj[(Y, X)]):
                transverse.append((offset[X] + a, offset[Y] + b, K))
    tree_transverse = [(offset[X] + reps[(X, Y)], offset[Y] + reps[(Y, X)], K) for X, Y in tree]
    return ComplexBundle(K, basepoint, seed, adj, tree, paths, reps, offset, owner, intra + transverse, intra + tree_transverse)


def _weighted_distances(n_vertices: int, edges: list) -> np.ndarray:
    if not edges:
        D = np.full((n_vertices, n_vertices), np.inf)
        np.fill_diagonal(D, 0)
        return D
    u, v, w = zip(*edges)
    return _graph_distances(n_vertices, list(zip(u, v)), w)


def _index_distances(n: int, edges: list) -> np.ndarray:
    return _graph_distances(n, edges) if n else np.zeros((0, 0))


# -- verification -------------------------------------------------------------------


@dataclass
class Check:
    name: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)
    failures: int = 0

    def record(self, ok: bool, example=None) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append(example)

    def bulk(self, count: int, bad: Iterable) -> None:
        self.checked += count
        for ex in bad:
            self.failures += 1
            if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
                self.counterexamples.append(ex)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"pass": self.ok, "checked": self.checked, "failures": self.failures, "counterexamples": self.counterexamples}


ALL_CHECKS = (
    "order_laws",
    "order_conditions_agree",
    "far_projection_lies_between",
    "subpaths_are_standard",
    "path_sandwich",
    "tree_acyclic",
    "tree_quasiisometry",
    "distance_formula",
    "tree_of_spaces_quasiisometry",
    "triangle_middle",
    "local_projection_bounds",
)


def all_standard_paths(sys: ProjectionSystem, K: int, theta=None) -> tuple[dict, list]:
    paths, errors = {}, []
    for X in range(sys.n):
        paths[(X, X)] = (X,)
        for Z in range(X + 1, sys.n):
            try:
                p = standard_path(sys, K, X, Z, theta)
            except OrderError as exc:
                errors.append([sys.names[X], sys.names[Z], str(exc)])
                continue
            paths[(X, Z)] = p
            paths[(Z, X)] = p[::-1]
    return paths, errors


def _sample_triples(n: int, limit: int, rng: random.Random) -> list:
    if n < 3:
        return []
    if n * (n - 1) * (n - 2) <= limit:
        return list(itertools.permutations(range(n), 3))
    return [tuple(rng.sample(range(n), 3)) for _ in range(limit)]


def _middle(path: tuple, first: tuple, second: tuple) -> tuple:
    a = 0
    while a < min(len(path), len(first)) and path[a] == first[a]:
        a += 1
    b = 0
    while b < min(len(path) - a, len(second)) and path[-1 - b] == second[-1 - b]:
        b += 1
    return path[a : len(path) - b]


def verify_section5(
    sys: ProjectionSystem,
    bundle: ComplexBundle,
    checks: Sequence[str] | None = None,
    n_triples: int = 1000,
    seed: int = 0,
    triple_limit: int = 20000,
    theta=None,
) -> dict:
    """Run the standard-path, tree and distance checks; returns a JSON-ready report."""
    theta = _theta(sys, theta)
    wanted = set(ALL_CHECKS if checks is None else checks)
    unknown = wanted - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    K, n, names = bundle.K, sys.n, sys.names
    rng = random.Random(seed)
    T = sys.tensor()
    out = {name: Check(name) for name in ALL_CHECKS if name in wanted}
    paths, errors = all_standard_paths(sys, K, theta)

    if "order_laws" in out:
        c = out["order_laws"]
        c.bulk(len(errors), errors)
        for (X, Z), p in paths.items():
            if X >= Z or len(p) < 3:
                continue
            ref = T[p[1:-1], X, Z]
            for j in range(1, len(p) - 1):
                got = T[p[j], list(p[:j]), :][:, list(p[j + 1 :])]
                bad = got != ref[j - 1]
                c.record(not bad.any(), [names[X], names[Z], names[p[j]]])

    if "order_conditions_agree" in out:
        c = out["order_conditions_agree"]
        for (X, Z), p in paths.items():
            if X >= Z or len(p) < 4:
                continue
            inner = list(p[1:-1])
            Y, Y2 = np.meshgrid(inner, inner, indexing="ij")
            c1 = T[Y, X, Y2] > theta
            c2 = T[Y2, Y, Z] > theta
            c3 = T[Y, Y2, Z] <= theta
            c4 = T[Y2, X, Y] <= theta
            off = ~np.eye(len(inner), dtype=bool)
            agree = (c1 == c2) & (c1 == c3) & (c1 == c4)
            c.record(bool(agree[off].all()), [names[X], names[Z]])
            a, b = rng.sample(inner, 2)
            # stability of projections for sampled W, with the decisive W always included
            Ws = {b, a} | {rng.randrange(n) for _ in range(3)}
            five = all(T[a, b, W] == T[a, Z, W] for W in Ws if W != a and W != b and W != Z) and T[a, b, b] == T[a, Z, b]
            six = all(T[b, a, W] == T[b, X, W] for W in Ws if W not in (a, b, X)) and T[b, a, a] == T[b, X, a]
            first = bool(T[a, X, b] > theta)
            c.record(five == first and six == first, [names[X], names[Z], names[a], names[b]])

    if "far_projection_lies_between" in out:
        c = out["far_projection_lies_between"]
        for _ in range(n_triples):
            if n < 2:
                break
            X, Z = rng.sample(range(n), 2)
            p = paths.get((X, Z))
            if p is None or len(p) < 2:
                continue
            inner = set(p[1:-1])
            i, k = sorted(rng.sample(range(len(p)), 2))
            far = np.flatnonzero(T[:, p[i], p[k]] > K)
            bad = [int(W) for W in far if int(W) not in inner]
            c.record(not bad, [names[X], names[Z], names[p[i]], names[p[k]]] + [names[W] for W in bad[:1]])

    if "subpaths_are_standard" in out:
        c = out["subpaths_are_standard"]
        for (X, Z), p in paths.items():
            if X >= Z:
                continue
            for i in range(len(p)):
                for j in range(i + 1, len(p)):
                    c.record(paths.get((p[i], p[j])) == p[i : j + 1], [names[X], names[Z], i, j])

    need_index = {"path_sandwich", "tree_acyclic", "tree_quasiisometry"} & wanted
    if need_index:
        dP = _index_distances(n, bundle.pk_edges())
        dT = _index_distances(n, bundle.tree_edges)
    if "path_sandwich" in out:
        c = out["path_sandwich"]
        for (X, Z), p in paths.items():
            if X >= Z:
                continue
            L = len(p)
            c.record(L - 1 <= 2 * dP[X, Z] and dP[X, Z] <= L - 1, [names[X], names[Z], L, dP[X, Z]])
    if "tree_acyclic" in out:
        c = out["tree_acyclic"]
        n_comp = connected_components(csr_matrix(dT < np.inf))[0] if n else 0
        c.record(len(bundle.tree_edges) == max(n - 1, 0) and n_comp <= 1, ["edges", len(bundle.tree_edges), "vertices", n])
        off_complex = [list(e) for e in bundle.tree_edges if not bundle.adjacency[e]]
        c.record(not off_complex, off_complex[:1])
    if "tree_quasiisometry" in out:
        c = out["tree_quasiisometry"]
        bad = np.argwhere((dT < dP) | (2 * dP < dT - 5))
        c.bulk(n * n, ([names[a], names[b], dP[a, b], dT[a, b]] for a, b in bad))

    need_vertex = {"distance_formula", "tree_of_spaces_quasiisometry"} & wanted
    if need_vertex:
        V = bundle.n_vertices
        dC = _weighted_distances(V, bundle.ck_edges)
        owner = bundle.owner
    if "distance_formula" in out:
        c = out["distance_formula"]
        Tk = np.where(T > K, T, 0)
        S = Tk.sum(axis=0)  # over Y outside {X, Z}
        # endpoint terms: e[v, Z] = diam({v} u pi_X(Z)) for v in C(X)
        e = np.zeros((V, n))
        for X in range(n):
            dX = sys.dist[X]
            for Z in range(n):
                if Z == X:
                    continue
                pts = sorted(sys.proj[(X, Z)])
                diam = dX[np.ix_(pts, pts)].max()
                e[bundle.offset[X] : bundle.offset[X] + sys.sizes[X], Z] = np.maximum(dX[:, pts].max(axis=1), diam)
        e = np.where(e > K, e, 0)
        total = S[owner[:, None], owner[None, :]] + e[:, owner] + e[:, owner].T
        same = owner[:, None] == owner[None, :]
        local = np.zeros((V, V))
        for X in range(n):
            sl = slice(bundle.offset[X], bundle.offset[X] + sys.sizes[X])
            local[sl, sl] = sys.dist[X]
        # for x, z in one space the index-level sum is over diam(pi_Y(X)) terms
        same_sum = np.array([sum(d for Y in range(n) if Y != X and (d := T[Y, X, X]) > K) for X in range(n)])
        total = np.where(same, same_sum[owner][:, None] + np.where(local > K, local, 0), total)
        bad = np.argwhere((dC * 4 < total) | (dC > 2 * total + 3 * K))
        c.bulk(V * V, ([int(a), int(b), float(dC[a, b]), float(total[a, b])] for a, b in bad))
    if "tree_of_spaces_quasiisometry" in out:
        c = out["tree_of_spaces_quasiisometry"]
        dCT = _weighted_distances(V, bundle.ckt_edges)
        bad = np.argwhere((dCT < dC) | (dCT > 8 * dC + 20 * K))
        c.bulk(V * V, ([int(a), int(b), float(dC[a, b]), float(dCT[a, b])] for a, b in bad))

    if "triangle_middle" in out:
        c = out["triangle_middle"]
        for X, Y, Z in _sample_triples(n, n_triples, rng):
            pXZ, pXY, pYZ = paths.get((X, Z)), paths.get((X, Y)), paths.get((Y, Z))
            if None in (pXZ, pXY, pYZ):
                continue
            mid = _middle(pXZ, pXY, pYZ)
            ok = len(mid) <= 2 and not (set(mid) & (set(pXY) | set(pYZ)))
            c.record(ok, [names[X], names[Y], names[Z], [names[m] for m in mid]])

    if "local_projection_bounds" in out:
        c = out["local_projection_bounds"]
        for X, Y, Z in _sample_triples(n, triple_limit, rng):
            pXY, pXZ, pYZ = paths.get((X, Y)), paths.get((X, Z)), paths.get((Y, Z))
            if None in (pXY, pXZ, pYZ):
                continue
            sXZ, sYZ = set(pXZ), set(pYZ)
            for W in pXY:
                if W in sXZ and W not in sYZ:
                    c.record(T[W, Y, Z] <= K, [names[X], names[Y], names[Z], names[W], "shared"])
                elif W not in sXZ and W not in sYZ:
                    c.record(T[W, X, Y] <= 2 * K, [names[X], names[Y], names[Z], names[W], "private"])

    checks_json = {name: chk.to_json() for name, chk in out.items()}
    return {"K": K, "theta": theta, "basepoint": names[bundle.basepoint] if n else None, "indices": n, "vertices": bundle.n_vertices, "checks": checks_json, "ok": all(ch.ok for ch in out.values())}


# -- instances -------------------------------------------------------------------------


def _tree_bfs(n: int, adj: list, sources: Iterable[int]) -> list:
    dist = [-1] * n
    frontier = list(sources)
    for s in frontier:
        dist[s] = 0
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def tree_segments_system(tree_edges: Sequence[Sequence[int]], segments: Sequence[Sequence[int]]) -> ProjectionSystem:
    """Nearest-point projections between disjoint geodesic segments of a tree.

    ``segments`` lists vertex paths; consecutive entries must be tree edges.
    """
    verts = sorted({int(v) for e in tree_edges for v in e} | {int(v) for s in segments for v in s})
    n_vert = (max(verts) + 1) if verts else 0
    adj: list = [[] for _ in range(n_vert)]
    edge_set = set()
    for e in tree_edges:
        if len(e) != 2:
            raise ValueError(f"bad tree edge {e!r}")
        u, v = int(e[0]), int(e[1])
        adj[u].append(v)
        adj[v].append(u)
        edge_set.add((min(u, v), max(u, v)))
    if len(edge_set) != len(verts) - 1 or (verts and _tree_bfs(n_vert, adj, [verts[0]]).count(-1) != n_vert - len(verts)):
        raise ValueError("tree_edges do not form a tree")
    used: set = set()
    for s in segments:
        if not s:
            raise ValueError("empty segment")
        for a, b in zip(s, s[1:]):
            if (min(a, b), max(a, b)) not in edge_set:
                raise ValueError(f"segment step {a}-{b} is not a tree edge")
        if used & set(s) or len(set(s)) != len(s):
            raise ValueError("segments must be disjoint simple paths")
        used |= set(s)
    proj = {}
    for X, sX in enumerate(segments):
        dist = _tree_bfs(n_vert, adj, sX)
        for Y, sY in enumerate(segments):
            if X == Y:
                continue
            ds = [dist[v] for v in sY]
            m = min(ds)
            proj[(Y, X)] = [i for i, dv in enumerate(ds) if dv == m]
    spaces = [(len(s), [(i, i + 1) for i in range(len(s) - 1)]) for s in segments]
    sys = ProjectionSystem([f"S{i}" for i in range(len(segments))], spaces, proj, theta=0, vertex_names=[[str(v) for v in s] for s in segments])
    sys.source = {"kind": "tree_segments", "tree_edges": sorted([list(e) for e in edge_set]), "segments": [list(map(int, s)) for s in segments]}
    return sys


def tree_segments_instance(
    seed: int, n_vertices: int, n_segments: int, max_length: int = 10, attempts: int = 10000, window: int = 4
) -> ProjectionSystem:
    """Random tree whose vertex v hangs off one of the ``window`` previous vertices.

    A small window gives long branches, so segments are long and standard
    paths have interior indices; ``window >= n_vertices`` is a uniform
    recursive tree.
    """
    if n_vertices < 1 or n_segments < 1 or window < 1:
        raise ValueError("need at least one vertex, one segment and a positive window")
    rng = random.Random(seed)
    parent = [-1] + [rng.randrange(max(0, v - window), v) for v in range(1, n_vertices)]
    children: list = [[] for _ in range(n_vertices)]
    for v in range(1, n_vertices):
        children[parent[v]].append(v)
    edges = [(parent[v], v) for v in range(1, n_vertices)]
    depth = [0] * n_vertices
    for v in range(1, n_vertices):
        depth[v] = depth[parent[v]] + 1

    def tree_path(u: int, v: int) -> list:
        left, right = [u], [v]
        while u != v:
            if depth[u] >= depth[v]:
                u = parent[u]
                left.append(u)
            else:
                v = parent[v]
                right.append(v)
        return left[:-1] + right[::-1] if left[-1] == right[-1] else left + right[::-1]

    used: set = set()
    segments: list = []
    for _ in range(attempts):
        if len(segments) == n_segments:
            break
        u = rng.randrange(n_vertices)
        v = u
        prev = -1
        for _ in range(rng.randrange(max_length)):
            # non-backtracking, so the walk is already a geodesic
            nbrs = [w for w in ([parent[v]] if parent[v] >= 0 else []) + children[v] if w != prev]
            if not nbrs:
                break
            prev, v = v, rng.choice(nbrs)
        p = tree_path(u, v)
        if used & set(p):
            continue
        used |= set(p)
        segments.append(p)
    if len(segments) < n_segments:
        raise ValueError(f"could not place {n_segments} disjoint segments")
    return tree_segments_system(edges, segments)


def star_instance(arms: int = 3) -> ProjectionSystem:
    """Centre 0 with arms 0 - u_i - l_i; segment i is the leaf edge u_i l_i."""
    edges, segments = [], []
    for i in range(arms):
        u, l = 2 * i + 1, 2 * i + 2
        edges += [(0, u), (u, l)]
        segments.append([u, l])
    return tree_segments_system(edges, segments)


def chain_instance(n_segments: int, seg_len: int, gap: int = 1) -> ProjectionSystem:
    """Segments of ``seg_len`` vertices laid along a path, ``gap`` edges apart."""
    segments, v = [], 0
    for _ in range(n_segments):
        segments.append(list(range(v, v + seg_len)))
        v += seg_len + gap - 1
    edges = [(i, i + 1) for i in range(v - gap + 1 - 1)]
    return tree_segments_system(edges, segments)


# -- free product of two copies of Z^2 --------------------------------------------------

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _fp_norm(g) -> int:
    return sum(abs(a) + abs(b) for _, (a, b) in g)


def _fp_mul_syllable(g: tuple, f: int, v: tuple) -> tuple:
    if g and g[-1][0] == f:
        s = (g[-1][1][0] + v[0], g[-1][1][1] + v[1])
        return g[:-1] + (((f, s),) if s != (0, 0) else ())
    return g + ((f, v),) if v != (0, 0) else g


def _fp_first_syllable_of_quotient(g: tuple, x: tuple):
    """First syllable of ``g^-1 x`` in normal form, or None for the identity."""
    i = 0
    while i < min(len(g), len(x)) and g[i] == x[i]:
        i += 1
    if i == len(g):
        return x[i] if i < len(x) else None
    f, (a, b) = g[-1]
    if len(g) - i >= 2 or i == len(x):
        return (f, (-a, -b))
    fx, (c, d) = x[i]
    if fx == g[i][0]:
        return (fx, (c - g[i][1][0], d - g[i][1][1]))
    return (g[i][0], (-g[i][1][0], -g[i][1][1]))


def fp_format(g) -> str:
    return ".".join(f"{'xy'[f]}({a},{b})" for f, (a, b) in g) or "e"


def fp_ball(radius: int) -> list:
    seen = {()}
    layer = [()]
    for _ in range(radius):
        nxt = set()
        for g in layer:
            for f in (0, 1):
                for v in _STEPS:
                    h = _fp_mul_syllable(g, f, v)
                    if h not in seen:
                        nxt.add(h)
        seen |= nxt
        layer = list(nxt)
    return sorted(seen, key=lambda g: (_fp_norm(g), g))


FREE_PRODUCT_RADIUS_CAP = 5


def free_product_instance(radius: int) -> ProjectionSystem:
    """Cosets of the two Z^2 factors meeting the radius ball, truncated to it.

    A coset is keyed by its shortest element g (normal form not ending in
    the factor) and the factor f; ``C(Y)`` is the grid ``{g h : |g| + |h| <= radius}``.
    The projection of X into Y collects, over every x in truncated X, the
    point where a normal-form geodesic from g to x leaves Y.
    """
    if radius < 0 or radius > FREE_PRODUCT_RADIUS_CAP:
        raise ValueError(f"radius must lie in [0, {FREE_PRODUCT_RADIUS_CAP}]")
    elements = fp_ball(radius)
    keys = sorted({(x[:-1] if x and x[-1][0] == f else x, f) for x in elements for f in (0, 1)}, key=lambda k: (_fp_norm(k[0]), k))
    spaces, points, members = [], [], []
    for g, f in keys:
        r = radius - _fp_norm(g)
        pts = [(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1) if abs(a) + abs(b) <= r]
        index = {p: i for i, p in enumerate(pts)}
        edges = [(index[p], index[(p[0] + 1, p[1])]) for p in pts if (p[0] + 1, p[1]) in index]
        edges += [(index[p], index[(p[0], p[1] + 1)]) for p in pts if (p[0], p[1] + 1) in index]
        spaces.append((len(pts), edges))
        points.append(index)
        members.append([_fp_mul_syllable(g, f, p) for p in pts])
    coset_of = {}
    for X, (g, f) in enumerate(keys):
        for x in members[X]:
            coset_of.setdefault(x, []).append(X)
    proj: dict = {}
    for Y, (g, f) in enumerate(keys):
        origin = points[Y][(0, 0)]
        for x, owners in coset_of.items():
            s = _fp_first_syllable_of_quotient(g, x)
            v = points[Y][s[1]] if s is not None and s[0] == f else origin
            for X in owners:
                if X != Y:
                    proj.setdefault((Y, X), set()).add(v)
    names = [f"{fp_format(g)}:{'XY'[f]}" for g, f in keys]
    sys = ProjectionSystem(names, spaces, proj, theta=0)
    sys.source = {"kind": "free_product", "radius": radius}
    sys.keys = keys
    return sys


# -- serialization -----------------------------------------------------------------------


def instance_from_json(doc) -> ProjectionSystem:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("instance document needs a 'kind'")
    kind = doc["kind"]
    if kind == "tree_segments":
        return tree_segments_system(doc["tree_edges"], doc["segments"])
    if kind == "free_product":
        return free_product_instance(int(doc["radius"]))
    if kind == "explicit":
        spaces = [(s["size"], [tuple(e) for e in s["edges"]]) for s in doc["spaces"]]
        proj = {(int(Y), int(X)): v for Y, X, v in doc["projections"]}
        return ProjectionSystem(doc["names"], spaces, proj, theta=int(doc.get("theta", 0)))
    raise ValueError(f"unknown instance kind {kind!r}")


def instance_to_json(sys: ProjectionSystem) -> dict:
    return getattr(sys, "source", None) or sys.to_json()


def load_instance(text: str) -> ProjectionSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"instance is not valid JSON: {exc}") from None
    try:
        return instance_from_json(doc)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance: {exc!r}") from None
