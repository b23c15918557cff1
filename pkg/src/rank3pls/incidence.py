"""Incidence structures and their verification predicates.

Lines are stored as strictly sorted tuples of point indices; duplicates are
rejected at ingestion (a duplicate from a constructor is a bug, not data).
The partial-linear-space check counts lines through every point pair
exactly, vectorized over packed pair keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class IncidenceStructure:

    def __init__(self, num_points: int, lines, params: dict | None = None):
        self.num_points = num_points
        seen = set()
        norm = []
        for line in lines:
            t = tuple(int(x) for x in line)
            if list(t) != sorted(set(t)):
                raise ValueError(f"line {t} is not strictly sorted")
            if len(t) < 2:
                raise ValueError(f"line {t} has fewer than 2 points")
            if t[-1] >= num_points or t[0] < 0:
                raise ValueError(f"line {t} out of range")
            if t in seen:
                raise ValueError(f"duplicate line {t}")
            seen.add(t)
            norm.append(t)
        norm.sort()
        self.lines = norm
        self.params = dict(params or {})

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    def line_sizes(self) -> set[int]:
        return {len(l) for l in self.lines}

    def line_set(self) -> frozenset:
        return frozenset(self.lines)

    def point_degrees(self) -> np.ndarray:
        deg = np.zeros(self.num_points, dtype=np.int64)
        for line in self.lines:
            for p in line:
                deg[p] += 1
        return deg

    def _pair_keys(self) -> np.ndarray:
        n = self.num_points
        keys = []
        for line in self.lines:
            m = len(line)
            for i in range(m):
                for j in range(i + 1, m):
                    keys.append(line[i] * n + line[j])
        return np.array(keys, dtype=np.int64)

    def __repr__(self):
        return (f"IncidenceStructure({self.num_points} points, "
                f"{self.num_lines} lines)")

    # -- serialization --------------------------------------------------------

    def to_json(self) -> str:
        sizes = self.line_sizes()
        return json.dumps({
            "points": self.num_points,
            "line_size": max(sizes) if len(sizes) == 1 else sorted(sizes),
            "lines": [list(l) for l in self.lines],
            "params": self.params,
        })

    @classmethod
    def from_json(cls, text: str) -> "IncidenceStructure":
        data = json.loads(text)
        return cls(data["points"], data["lines"], data.get("params"))

    def to_csv(self) -> str:
        out = [f"# points={self.num_points}"]
        for line in self.lines:
            out.append(",".join(str(p) for p in line))
        return "\n".join(out) + "\n"

    def to_dot(self) -> str:
        """Collinearity graph for small instances."""
        if self.num_points > 200:
            raise ValueError("DOT export is limited to 200 points")
        edges = set()
        for line in self.lines:
            for i in range(len(line)):
                for j in range(i + 1, len(line)):
                    edges.add((line[i], line[j]))
        body = "\n".join(f"  {a} -- {b};" for a, b in sorted(edges))
        return "graph collinearity {\n" + body + "\n}\n"


@dataclass
class PLSReport:
    is_pls: bool
    multiplicity: int
    line_size_constant: bool
    point_degree_constant: bool
    line_size: int | None = None
    collinear_pairs: int = 0


def validate_pls(D: IncidenceStructure) -> PLSReport:
    """Exact multiplicity over all point pairs via a pair -> count table."""
    sizes = D.line_sizes()
    size_const = len(sizes) == 1
    deg = D.point_degrees()
    deg_const = bool((deg == deg[0]).all()) if D.num_points else True
    if not D.lines:
        return PLSReport(True, 0, True, deg_const, None, 0)
    keys = D._pair_keys()
    _, counts = np.unique(keys, return_counts=True)
    mult = int(counts.max())
    return PLSReport(mult <= 1, mult, size_const, deg_const,
                     (max(sizes) if size_const else None), len(counts))


def multiplicity_bruteforce(D: IncidenceStructure) -> int:
    """Independent per-pair scan; quadratic, for structures <= ~500 points."""
    best = 0
    for i in range(D.num_points):
        through = [set(l) for l in D.lines if i in l]
        for j in range(i + 1, D.num_points):
            c = sum(1 for s in through if j in s)
            best = max(best, c)
    return best


def is_proper(D: IncidenceStructure) -> bool:
    """Neither a linear space nor a graph: line size >= 3 and some point
    pair lies on no line."""
    rep = validate_pls(D)
    if not rep.is_pls:
        raise ValueError("properness is defined for partial linear spaces")
    if min(D.line_sizes(), default=0) < 3:
        return False
    all_pairs = D.num_points * (D.num_points - 1) // 2
    return rep.collinear_pairs < all_pairs


def components(D: IncidenceStructure) -> list[list[int]]:
    parent = np.arange(D.num_points, dtype=np.int64)

    def find(x):
        root = x
        while parent[root] != root:
            root = int(parent[root])
        while parent[x] != root:
            parent[x], x = root, int(parent[x])
        return root

    for line in D.lines:
        r0 = find(line[0])
        for p in line[1:]:
            parent[find(p)] = r0
    buckets: dict[int, list[int]] = {}
    for x in range(D.num_points):
        buckets.setdefault(find(x), []).append(x)
    return sorted(buckets.values(), key=lambda c: (len(c), c))


def is_connected(D: IncidenceStructure) -> bool:
    return len(components(D)) == 1


def fingerprint(D: IncidenceStructure) -> tuple:
    """Isomorphism-invariant summary: equal structures (same labelling or
    relabelled) have equal fingerprints."""
    n = D.num_points
    deg = D.point_degrees()
    partners = [set() for _ in range(n)]
    for line in D.lines:
        for i in range(len(line)):
            for j in range(i + 1, len(line)):
                partners[line[i]].add(line[j])
                partners[line[j]].add(line[i])
    concurrence = tuple(sorted(len(s) for s in partners))
    comp_sizes = tuple(sorted(len(c) for c in components(D)))
    sizes = tuple(sorted(D.line_sizes()))
    return (n, D.num_lines, sizes, tuple(sorted(deg.tolist())),
            concurrence, comp_sizes)


def preserved_by(D: IncidenceStructure, gens) -> bool:
    """True iff each generator maps the line set onto itself."""
    lines = D.line_set()
    for g in gens:
        if len(g) != D.num_points:
            raise ValueError("generator degree does not match the point count")
        for line in D.lines:
            if tuple(sorted(int(g[p]) for p in line)) not in lines:
                return False
    return True


def relabel(D: IncidenceStructure, perm) -> IncidenceStructure:
    return IncidenceStructure(
        D.num_points,
        [tuple(sorted(int(perm[p]) for p in line)) for line in D.lines],
        D.params)
