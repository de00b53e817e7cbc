"""Cayley multigraphs on subgroups of finite abelian groups.

The adjacency operator of Cay(H, S) is diagonalized exactly by the characters
of H (lambda_chi = sum of chi over S), and numerically by a dense symmetric
eigensolver as a cross-check.  On top of that sit the expansion measure and
the scan that finds the smallest prime-norm bound B making the class-group
graph a two-sided delta-expander, with the scan table kept for the
main-term/error-term study.
"""
from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass
from math import log, sqrt
from typing import Optional, Sequence

import numpy as np
from scipy.special import expi

from .abelian import (
    Character,
    GroupElement,
    Subgroup,
    characters_of,
    op_inv,
    subgroup_generated,
)
from .errors import InputError, InternalConsistencyError, PreconditionError
from .ntheory import primes_below
from .quadform import ClassGroup, generating_multiset

__all__ = [
    "CayleyGraph",
    "Spectrum",
    "EstimateParams",
    "ScanRow",
    "build",
    "spectrum_by_characters",
    "spectrum_numeric",
    "expansion",
    "find_expander_bound",
    "eigenvalue_prediction",
    "log_integral",
    "connected_components",
    "to_dot",
    "to_json_adjacency",
    "scan_table_csv",
]

_IMAG_TOL = 1e-9
_NUMERIC_LIMIT = 4096

SCAN_CSV_HEADER = "B,lambda_triv,c,delta2,li_over_index,error_envelope"


class CayleyGraph:
    """k-regular labeled multigraph Cay(H, S); immutable after build()."""

    def __init__(self, subgroup: Subgroup, generators: Sequence[tuple[str, GroupElement]]):
        self.subgroup = subgroup
        self.generators = tuple((str(lbl), g) for lbl, g in generators)
        self.vertices = subgroup.elements  # sorted by coords
        self._index = {v.coords: i for i, v in enumerate(self.vertices)}
        self._step_table: Optional[np.ndarray] = None
        self._inverse_slot: Optional[list[int]] = None

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return len(self.generators)

    def vertex_index(self, v: GroupElement) -> int:
        try:
            return self._index[v.coords]
        except KeyError:
            raise InputError(f"{v} is not a vertex of this graph") from None

    @property
    def step_table(self) -> np.ndarray:
        """(k, n) array: step_table[j, i] = index of s_j * v_i."""
        if self._step_table is None:
            k, n = self.degree, self.order
            table = np.empty((k, n), dtype=np.int64)
            for j, (_, s) in enumerate(self.generators):
                for i, v in enumerate(self.vertices):
                    table[j, i] = self._index[(s * v).coords]
            table.setflags(write=False)
            self._step_table = table
        return self._step_table

    @property
    def inverse_slot(self) -> list[int]:
        """Pairing of generator slots with their inverses (an involution)."""
        if self._inverse_slot is None:
            pairing = [-1] * self.degree
            by_coords: dict[tuple[int, ...], list[int]] = {}
            for j, (_, s) in enumerate(self.generators):
                by_coords.setdefault(s.coords, []).append(j)
            for j, (_, s) in enumerate(self.generators):
                if pairing[j] != -1:
                    continue
                inv = op_inv(s).coords
                if inv == s.coords:
                    pairing[j] = j
                    continue
                partner = next(
                    (t for t in by_coords.get(inv, ()) if pairing[t] == -1), None
                )
                if partner is None:
                    raise InternalConsistencyError("generator multiset not inversion-closed")
                pairing[j] = partner
                pairing[partner] = j
            self._inverse_slot = pairing
        return self._inverse_slot

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.order, self.order), dtype=np.int64)
        table = self.step_table
        for j in range(self.degree):
            for i in range(self.order):
                a[i, table[j, i]] += 1
        return a

    def __repr__(self) -> str:
        return f"CayleyGraph(order={self.order}, degree={self.degree})"


def build(subgroup: Subgroup, generators: Sequence[tuple[str, GroupElement]]) -> CayleyGraph:
    """Build Cay(H, S) from labeled generators; S must be inversion-closed."""
    gens = list(generators)
    for _, g in gens:
        if g not in subgroup:
            raise InputError(f"generator {g} lies outside the subgroup")
    direct = Counter(g.coords for _, g in gens)
    inv = Counter(op_inv(g).coords for _, g in gens)
    if direct != inv:
        raise InputError("generator multiset is not closed under inversion")
    return CayleyGraph(subgroup, gens)


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[tuple[Character, float], ...]
    lambda_triv: float
    c: float

    def sorted_values(self) -> list[float]:
        return sorted((lam for _, lam in self.entries), reverse=True)


def spectrum_by_characters(graph: CayleyGraph) -> Spectrum:
    """One exact eigenvalue per character: lambda_chi = sum over S of chi(s)."""
    chars = characters_of(graph.subgroup)
    entries = []
    lambda_triv = None
    c = 0.0
    for chi in chars:
        total = 0j
        for _, s in graph.generators:
            total += chi.value(s)
        if abs(total.imag) > _IMAG_TOL:
            raise InternalConsistencyError(
                f"character eigenvalue has imaginary residue {total.imag:.3e}"
            )
        lam = total.real
        entries.append((chi, lam))
        if chi.is_trivial:
            lambda_triv = lam
        else:
            c = max(c, abs(lam))
    if lambda_triv is None:
        raise InternalConsistencyError("no trivial character found")
    return Spectrum(tuple(entries), lambda_triv, c)


def spectrum_numeric(graph: CayleyGraph) -> list[float]:
    """Eigenvalues of the explicit adjacency matrix, sorted descending."""
    if graph.order > _NUMERIC_LIMIT:
        raise PreconditionError(
            f"numeric spectrum limited to order {_NUMERIC_LIMIT}, got {graph.order}"
        )
    vals = np.linalg.eigvalsh(graph.adjacency().astype(np.float64))
    return [float(x) for x in vals[::-1]]


def expansion(graph: CayleyGraph) -> tuple[float, float, float]:
    """(delta_one_sided, delta_two_sided, c) from the spectrum.

    Character spectrum where available; any other regular graph carrying
    the walk interface falls back to the numeric adjacency eigenvalues.
    """
    if graph.degree == 0:
        raise PreconditionError("expansion of an edgeless graph is undefined")
    if hasattr(graph, "subgroup"):
        spec = spectrum_by_characters(graph)
        k = spec.lambda_triv
        nontrivial = [lam for chi, lam in spec.entries if not chi.is_trivial]
        if not nontrivial:
            return 1.0, 1.0, 0.0
        c = spec.c
        return 1.0 - max(nontrivial) / k, 1.0 - c / k, c
    values = spectrum_numeric(graph)
    k = values[0]
    rest = values[1:]
    if not rest:
        return 1.0, 1.0, 0.0
    c = max(abs(lam) for lam in rest)
    return 1.0 - rest[0] / k, 1.0 - c / k, c


def connected_components(graph: CayleyGraph) -> int:
    """Component count by breadth-first traversal over the step table."""
    n = graph.order
    if n == 0:
        return 0
    if graph.degree == 0:
        return n
    table = graph.step_table
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        seen[start] = True
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for j in range(graph.degree):
                nxt = int(table[j, cur])
                if not seen[nxt]:
                    seen[nxt] = True
                    queue.append(nxt)
    return count


# ---------------------------------------------------------------------------
# Main-term prediction and the B-scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EstimateParams:
    """Inputs of the eigenvalue main-term/error-envelope estimate."""

    n: int
    d_k: int
    nfm: int
    index: int
    b: int

    def __post_init__(self) -> None:
        if min(self.n, self.d_k, self.nfm, self.index, self.b) <= 0:
            raise InputError("estimate parameters must all be positive")


def log_integral(b: float) -> float:
    """Integral of 1/ln t from 2 to b, evaluated exactly as Ei(ln b) - Ei(ln 2)."""
    if b < 2:
        raise InputError(f"li is taken from 2; got upper limit {b}")
    if b == 2:
        return 0.0
    return float(expi(log(float(b))) - expi(log(2.0)))


def eigenvalue_prediction(params: EstimateParams, trivial: bool) -> tuple[float, float]:
    """(main term, error envelope): li(B)/index for the trivial character,
    0 otherwise; envelope n * sqrt(B) * ln(B * d_K * Nfm) either way."""
    if params.b < 2:
        raise InputError("prediction needs B >= 2")
    main = log_integral(params.b) / params.index if trivial else 0.0
    envelope = params.n * sqrt(params.b) * log(params.b * params.d_k * params.nfm)
    return main, envelope


@dataclass(frozen=True)
class ScanRow:
    b: int
    lambda_triv: int
    c: float
    delta2: float
    li_over_index: float
    error_envelope: float


def scan_table_csv(rows: Sequence[ScanRow]) -> str:
    lines = [SCAN_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.b},{r.lambda_triv},{r.c:.12g},{r.delta2:.12g},"
            f"{r.li_over_index:.12g},{r.error_envelope:.12g}"
        )
    return "\n".join(lines) + "\n"


def find_expander_bound(
    cls_group: ClassGroup,
    subgroup: Subgroup,
    delta: float,
    b_max: int,
    avoid: Sequence[int] = (),
) -> tuple[int, list[ScanRow]]:
    """Smallest B on the prime+1 grid making Cay(H, S_B) a two-sided
    delta-expander, plus the full scan table up to b_max.

    The grid steps through B = p + 1 for each prime p < b_max, since the
    spectrum only moves when a new prime enters S_B.  The subgroup must be
    generated by the full prime-form set below b_max.
    """
    if subgroup.ambient != cls_group.group:
        raise InputError("subgroup does not live in the given class group")
    if subgroup.order == 1:
        # single vertex: every bound works vacuously
        return 2, []

    s_all = generating_multiset(cls_group, b_max, subgroup, avoid)
    generated = subgroup_generated(cls_group.group, [g.element for g in s_all])
    if generated != subgroup:
        raise PreconditionError(
            f"prime forms below {b_max} generate a subgroup of order "
            f"{generated.order}, not the requested {subgroup.order}"
        )

    by_prime: dict[int, list] = {}
    for g in s_all:
        by_prime.setdefault(g.ell, []).append(g)

    chars = characters_of(subgroup)
    triv_pos = next(i for i, chi in enumerate(chars) if chi.is_trivial)
    acc = [0j] * len(chars)
    k = 0

    disc = cls_group.discriminant
    nfm = disc.conductor * disc.conductor if disc.conductor > 1 else 1
    index = subgroup.index

    rows: list[ScanRow] = []
    best: Optional[int] = None
    for p in primes_below(b_max):
        for g in by_prime.get(p, ()):
            k += 1
            for i, chi in enumerate(chars):
                acc[i] += chi.value(g.element)
        b = p + 1
        if k == 0:
            c = 0.0
            delta2 = 0.0
        else:
            c = 0.0
            for i, chi in enumerate(chars):
                if i == triv_pos:
                    continue
                if abs(acc[i].imag) > _IMAG_TOL * max(1, k):
                    raise InternalConsistencyError("imaginary residue in scan eigenvalue")
                c = max(c, abs(acc[i].real))
            delta2 = 1.0 - c / k
        params = EstimateParams(n=2, d_k=abs(disc.fundamental), nfm=nfm, index=index, b=b)
        main, envelope = eigenvalue_prediction(params, trivial=True)
        rows.append(ScanRow(b, k, c, delta2, main, envelope))
        if best is None and k > 0 and delta2 >= delta:
            best = b
    if best is None:
        raise PreconditionError(
            f"no bound B <= {b_max} reaches two-sided expansion {delta}"
        )
    return best, rows


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def _vertex_name(graph: CayleyGraph, i: int, names: Optional[Sequence[str]]) -> str:
    if names is not None:
        return names[i]
    return ",".join(str(c) for c in graph.vertices[i].coords)


def to_dot(graph: CayleyGraph, names: Optional[Sequence[str]] = None, title: str = "cayley") -> str:
    """DOT text; one undirected edge per generator slot pair, loops kept.

    An edge {v, s*v} with v before s*v in vertex order is emitted for the
    slot of s; the paired slot of s^{-1} accounts for the reverse direction,
    so multiplicities come out right.  Loops are emitted once per slot.
    """
    if names is not None and len(names) != graph.order:
        raise InputError("vertex name list has the wrong length")
    out = [f"graph {json.dumps(title)} {{"]
    for i in range(graph.order):
        out.append(f'  v{i} [label="{_vertex_name(graph, i, names)}"];')
    table = graph.step_table
    for j, (label, _) in enumerate(graph.generators):
        for i in range(graph.order):
            t = int(table[j, i])
            if i <= t:  # the paired inverse slot emits the other direction
                out.append(f'  v{i} -- v{t} [label="{label}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def to_json_adjacency(graph: CayleyGraph, names: Optional[Sequence[str]] = None) -> dict:
    """JSON-ready adjacency list with labeled directed slots per vertex."""
    table = graph.step_table
    adjacency = [
        [[int(table[j, i]), graph.generators[j][0]] for j in range(graph.degree)]
        for i in range(graph.order)
    ]
    return {
        "order": graph.order,
        "degree": graph.degree,
        "vertices": [_vertex_name(graph, i, names) for i in range(graph.order)],
        "generators": [label for label, _ in graph.generators],
        "adjacency": adjacency,
    }
