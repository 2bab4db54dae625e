"""Problem Hamiltonians (MaxCut, ANNNI), the transverse-field driver, and graph I/O."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import networkx as nx

from .pauli import Observable, PauliString


class GraphParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: tuple[tuple[int, int, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        clean = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.num_vertices} vertices")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not math.isfinite(w):
                raise ValueError(f"non-finite weight on edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            clean.append((u, v, w))
        object.__setattr__(self, "edges", tuple(clean))

    @property
    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    def cut_value(self, bits: int) -> float:
        """Weight of edges crossing the partition encoded by basis index ``bits``."""
        return sum(w for u, v, w in self.edges if ((bits >> u) ^ (bits >> v)) & 1)


@dataclass(frozen=True)
class AnnniParams:
    length: int
    kappa: float
    g: float
    j_coupling: float = 1.0

    def __post_init__(self):
        if self.length < 4:
            raise ValueError("ANNNI chain needs L >= 4 for distinct periodic NNN bonds")
        if self.j_coupling != 1.0:
            raise ValueError("the energy scale is fixed by j_coupling = 1")


def maxcut_hamiltonian(g: Graph) -> Observable:
    """``-sum_edges w/2 (1 - Z_u Z_v)``; one term per undirected edge."""
    terms = [(w / 2, PauliString.from_dict({u: "Z", v: "Z"})) for u, v, w in g.edges]
    return Observable.from_terms(g.num_vertices, terms, constant=-g.total_weight / 2)


def annni_hamiltonian(p: AnnniParams) -> Observable:
    """Periodic ANNNI chain ``-J sum_j (Z_j Z_{j+1} - kappa Y_j Y_{j+2} + g X_j)``."""
    L, J = p.length, p.j_coupling
    terms = []
    for j in range(L):
        terms.append((-J, PauliString.from_dict({j: "Z", (j + 1) % L: "Z"})))
        terms.append((J * p.kappa, PauliString.from_dict({j: "Y", (j + 2) % L: "Y"})))
        terms.append((-J * p.g, PauliString.single("X", j)))
    return Observable.from_terms(L, terms)


def driver_hamiltonian(num_qubits: int) -> Observable:
    if num_qubits < 1:
        raise ValueError("driver needs at least one qubit")
    return Observable.from_terms(
        num_qubits, [(1.0, PauliString.single("X", j)) for j in range(num_qubits)]
    )


def _content_lines(text: str | TextIO) -> Iterable[tuple[int, str]]:
    lines = text.splitlines() if isinstance(text, str) else text
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def load_graph(text: str | TextIO) -> Graph:
    """Parse the edge-list format: a vertex-count header, then ``u v w`` lines.

    ``#`` starts a comment. Errors carry the offending line number.
    """
    n = None
    edges = []
    seen = set()
    for lineno, line in _content_lines(text):
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise GraphParseError(lineno, "expected a single vertex count")
            try:
                n = int(fields[0])
            except ValueError:
                raise GraphParseError(lineno, f"invalid vertex count {fields[0]!r}") from None
            if n < 1:
                raise GraphParseError(lineno, "vertex count must be positive")
            continue
        if len(fields) != 3:
            raise GraphParseError(lineno, "expected 'u v w'")
        try:
            u, v = int(fields[0]), int(fields[1])
            w = float(fields[2])
        except ValueError:
            raise GraphParseError(lineno, f"malformed edge {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(lineno, f"vertex index out of range in {line!r}")
        if u == v:
            raise GraphParseError(lineno, f"self-loop on vertex {u}")
        if not math.isfinite(w):
            raise GraphParseError(lineno, f"non-finite weight {fields[2]!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(lineno, f"duplicate edge {key}")
        seen.add(key)
        edges.append((u, v, w))
    if n is None:
        raise GraphParseError(0, "missing vertex count header")
    return Graph(n, tuple(edges))


def dump_graph(g: Graph) -> str:
    lines = [str(g.num_vertices)]
    lines += [f"{u} {v} {w!r}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def random_regular_graph(num_vertices: int, seed: int, degree: int = 3) -> Graph:
    """Seeded unweighted random regular graph (deterministic for a given seed)."""
    nxg = nx.random_regular_graph(degree, num_vertices, seed=seed)
    edges = sorted((min(u, v), max(u, v)) for u, v in nxg.edges())
    return Graph(num_vertices, tuple((u, v, 1.0) for u, v in edges))
