"""Finite groups, TNC generating pairs, and left-right Cayley complexes.

Groups are explicit multiplication tables over element ids 0..order-1,
which keeps every check (associativity, TNC, generation) exhaustive at
desk scale.  The complex carries its canonical square table and, per
vertex, the Delta x Delta local-view array of square ids used by the
quantum code assembly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from random import Random
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import (
    ConvergenceError,
    InvariantViolationError,
    SearchExhaustedError,
    ValidationError,
)


class FiniteGroup:
    """Finite group as an order x order multiplication table."""

    def __init__(
        self,
        name: str,
        mul_table: np.ndarray,
        identity: int,
        element_names: Optional[Sequence[str]] = None,
    ):
        table = np.asarray(mul_table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValidationError("multiplication table must be square")
        if not (0 <= identity < n):
            raise ValidationError("identity id out of range")
        self.name = name
        self.order = n
        self.table = table
        self.identity = identity
        self.element_names = list(element_names) if element_names else None
        self.inverse = self._build_inverse()

    def _build_inverse(self) -> np.ndarray:
        inv = np.full(self.order, -1, dtype=np.int32)
        for g in range(self.order):
            hits = np.flatnonzero(self.table[g] == self.identity)
            if hits.size != 1:
                raise ValidationError(f"element {g} has {hits.size} inverses")
            inv[g] = hits[0]
        return inv

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def validate(self, rng_seed: int = 0) -> None:
        """Identity and inverse laws everywhere; associativity exhaustively
        for order <= 200, else on 1000 sampled triples."""
        n = self.order
        e = self.identity
        if not np.array_equal(self.table[e], np.arange(n)):
            raise ValidationError("left identity law fails")
        if not np.array_equal(self.table[:, e], np.arange(n)):
            raise ValidationError("right identity law fails")
        for g in range(n):
            if self.mul(g, self.inv(g)) != e or self.mul(self.inv(g), g) != e:
                raise ValidationError(f"inverse law fails at element {g}")
        if n <= 200:
            t = self.table
            # (ab)c == a(bc) via tensor indexing.
            left = t[t, :]  # left[a,b,c] = (ab)c
            right = t[:, t]  # right[a,b,c] = a(bc)
            if not np.array_equal(left, right):
                raise ValidationError("associativity fails")
        else:
            rng = Random(rng_seed)
            for _ in range(1000):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise ValidationError(f"associativity fails at {(a, b, c)}")


def build_cyclic(n: int) -> FiniteGroup:
    """Z_n with addition; identity 0."""
    if n < 1:
        raise ValidationError(f"cyclic order must be >= 1, got {n}")
    idx = np.arange(n, dtype=np.int32)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(name=f"cyclic:{n}", mul_table=table, identity=0)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def build_psl2(q: int) -> FiniteGroup:
    """PSL(2, q) for odd prime q, order q(q^2-1)/2.

    Elements are determinant-1 matrices (a,b;c,d) over F_q modulo +-I,
    canonicalized as the lexicographically smaller of the pair and sorted,
    so element ids are deterministic.
    """
    if q % 2 == 0 or q < 3:
        raise ValidationError(f"invalid-q: {q} (need an odd prime)")
    if not _is_prime(q):
        raise ValidationError(
            f"invalid-q: {q} (extension fields PSL2(p^i) are not supported)"
        )

    def canon(m: Tuple[int, int, int, int]) -> Tuple[int, int, int, int]:
        neg = tuple((-x) % q for x in m)
        return min(m, neg)

    elements: Set[Tuple[int, int, int, int]] = set()
    for a in range(q):
        for b in range(q):
            for c in range(q):
                for d in range(q):
                    if (a * d - b * c) % q == 1:
                        elements.add(canon((a, b, c, d)))
    reps = sorted(elements)
    expected = q * (q * q - 1) // 2
    if len(reps) != expected:
        raise InvariantViolationError(
            f"PSL2({q}) enumeration found {len(reps)} elements, expected {expected}"
        )
    index: Dict[Tuple[int, int, int, int], int] = {m: i for i, m in enumerate(reps)}
    n = len(reps)
    table = np.zeros((n, n), dtype=np.int32)
    for i, (a1, b1, c1, d1) in enumerate(reps):
        for j, (a2, b2, c2, d2) in enumerate(reps):
            prod = (
                (a1 * a2 + b1 * c2) % q,
                (a1 * b2 + b1 * d2) % q,
                (c1 * a2 + d1 * c2) % q,
                (c1 * b2 + d1 * d2) % q,
            )
            table[i, j] = index[canon(prod)]
    identity = index[canon((1, 0, 0, 1))]
    names = ["({},{};{},{})".format(*m) for m in reps]
    return FiniteGroup(
        name=f"psl2:{q}", mul_table=table, identity=identity, element_names=names
    )


def build_from_table(
    name: str, mul_table: Sequence[Sequence[int]], identity: int
) -> FiniteGroup:
    group = FiniteGroup(name=name, mul_table=np.asarray(mul_table), identity=identity)
    group.validate()
    return group


@dataclass(frozen=True)
class GeneratingSetPair:
    """Two symmetric generating sets of equal size Delta."""

    gens_a: Tuple[int, ...]
    gens_b: Tuple[int, ...]

    @property
    def delta(self) -> int:
        return len(self.gens_a)


@dataclass
class TncVerdict:
    ok: bool
    violation: Optional[Tuple[int, int, int]] = None  # (a, b, g)

    def __bool__(self) -> bool:
        return self.ok


def check_tnc(group: FiniteGroup, pair: GeneratingSetPair) -> TncVerdict:
    """Exhaustive check that a*g != g*b over all Delta^2 |G| triples."""
    for a in pair.gens_a:
        left = group.table[a, :]  # a*g over all g
        for b in pair.gens_b:
            right = group.table[:, b]  # g*b over all g
            hits = np.flatnonzero(left == right)
            if hits.size:
                return TncVerdict(ok=False, violation=(a, b, int(hits[0])))
    return TncVerdict(ok=True)


def _is_symmetric(group: FiniteGroup, gens: Sequence[int]) -> bool:
    s = set(gens)
    return len(s) == len(gens) and all(group.inv(g) in s for g in s)


def _generates(group: FiniteGroup, gens: Sequence[int]) -> bool:
    if not gens:
        return group.order == 1
    reached = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for a in gens:
                h = group.mul(a, g)
                if h not in reached:
                    reached.add(h)
                    nxt.append(h)
        frontier = nxt
    return len(reached) == group.order


def validate_pair(group: FiniteGroup, pair: GeneratingSetPair) -> None:
    """All GeneratingSetPair invariants; raises on the first failure."""
    if len(pair.gens_a) != len(pair.gens_b):
        raise ValidationError("generating sets have unequal sizes")
    for label, gens in (("A", pair.gens_a), ("B", pair.gens_b)):
        if any(not 0 <= g < group.order for g in gens):
            raise ValidationError(f"{label} contains an out-of-range element id")
        if not _is_symmetric(group, gens):
            raise ValidationError(f"{label} is not symmetric (closed under inverse)")
        if not _generates(group, gens):
            raise ValidationError(f"{label} does not generate the group")
    verdict = check_tnc(group, pair)
    if not verdict.ok:
        raise ValidationError(f"TNC violated at (a,b,g) = {verdict.violation}")


def _random_symmetric_subset(group: FiniteGroup, delta: int, rng: Random) -> Optional[List[int]]:
    """Symmetric subset of non-identity elements with exactly delta members."""
    involutions = [
        g for g in range(group.order) if g != group.identity and group.inv(g) == g
    ]
    pair_reps = [
        g
        for g in range(group.order)
        if g != group.identity and group.inv(g) > g
    ]
    rng.shuffle(involutions)
    rng.shuffle(pair_reps)
    chosen: List[int] = []
    needed = delta
    # Odd remainders must come from involutions.
    if needed % 2 == 1:
        if not involutions:
            return None
        chosen.append(involutions.pop())
        needed -= 1
    while needed > 0:
        use_pair = pair_reps and (not involutions or rng.random() < 0.7 or needed < 2)
        if needed >= 2 and pair_reps and (use_pair or len(involutions) < 2):
            g = pair_reps.pop()
            chosen.extend([g, group.inv(g)])
            needed -= 2
        elif len(involutions) >= 2 and needed >= 2:
            chosen.append(involutions.pop())
            chosen.append(involutions.pop())
            needed -= 2
        else:
            return None
    return sorted(chosen)


def find_generating_pair(
    group: FiniteGroup,
    delta: int,
    rng_seed: int,
    max_attempts: int = 2000,
) -> Tuple[GeneratingSetPair, int]:
    """Random search for a symmetric, generating, TNC pair; reports attempts."""
    if delta > group.order - 1:
        raise ValidationError(f"delta {delta} exceeds |G|-1 = {group.order - 1}")
    rng = Random(rng_seed)
    for attempt in range(1, max_attempts + 1):
        gens_a = _random_symmetric_subset(group, delta, rng)
        gens_b = _random_symmetric_subset(group, delta, rng)
        if gens_a is None or gens_b is None:
            continue
        pair = GeneratingSetPair(tuple(gens_a), tuple(gens_b))
        if not (_generates(group, gens_a) and _generates(group, gens_b)):
            continue
        if check_tnc(group, pair).ok:
            return pair, attempt
    raise SearchExhaustedError(
        f"no TNC generating pair of size {delta} found in {max_attempts} attempts",
        attempts=max_attempts,
    )


@dataclass
class Square:
    """Canonical square: key (g, a, b) is the lexicographically smaller of
    the two parameterizations (g,a,b) and (agb, a^-1, b^-1)."""

    index: int
    g: int
    a: int
    b: int
    corners: Tuple[int, int, int, int]  # (g,0), (ag,1), (gb,1), (agb,0)


class LeftRightCayleyComplex:
    """Double-covered left-right Cayley complex with local-view tables.

    Vertex ids: V0 vertex (g,0) has id g; V1 vertex (h,1) has id |G| + h.
    Local views are Delta x Delta arrays of square ids:

    - V0 vertex (g,0):  view[i][j] = square(g, A[i], B[j]).
    - V1 vertex (h,1):  view[i][j] = square(A[i]*h, A[i]^-1, B[j]), i.e.
      row i holds the faces whose V0 A-neighbor is A[i]*h and column j the
      faces whose V0 B-neighbor is h*B[j].

    The V1 orientation keeps shared rows/columns aligned with matching
    generator labels on both sides of every edge, which is what makes the
    X and Z Tanner generators commute.
    """

    def __init__(self, group: FiniteGroup, pair: GeneratingSetPair):
        validate_pair(group, pair)
        self.group = group
        self.pair = pair
        self.delta = pair.delta
        self._build_squares()
        self._build_local_views()
        self._check_invariants()

    # -- construction -------------------------------------------------

    def _canonical_key(self, g: int, a: int, b: int) -> Tuple[int, int, int]:
        grp = self.group
        flip = (grp.mul(grp.mul(a, g), b), grp.inv(a), grp.inv(b))
        return min((g, a, b), flip)

    def _build_squares(self) -> None:
        grp, pair = self.group, self.pair
        keys = set()
        for g in range(grp.order):
            for a in pair.gens_a:
                for b in pair.gens_b:
                    keys.add(self._canonical_key(g, a, b))
        ordered = sorted(keys)
        self.squares: List[Square] = []
        self.square_index: Dict[Tuple[int, int, int], int] = {}
        for idx, (g, a, b) in enumerate(ordered):
            ag = grp.mul(a, g)
            gb = grp.mul(g, b)
            agb = grp.mul(ag, b)
            corners = (g, ag, gb, agb)
            if len({(g, 0), (ag, 1), (gb, 1), (agb, 0)}) != 4:
                raise InvariantViolationError(
                    f"square {(g, a, b)} has repeated corners"
                )
            self.squares.append(Square(idx, g, a, b, corners))
            self.square_index[(g, a, b)] = idx

    def square_id(self, g: int, a: int, b: int) -> int:
        return self.square_index[self._canonical_key(g, a, b)]

    def _build_local_views(self) -> None:
        grp, pair, d = self.group, self.pair, self.delta
        order = grp.order
        self.view_v0 = np.zeros((order, d, d), dtype=np.int32)
        self.view_v1 = np.zeros((order, d, d), dtype=np.int32)
        for g in range(order):
            for i, a in enumerate(pair.gens_a):
                for j, b in enumerate(pair.gens_b):
                    self.view_v0[g, i, j] = self.square_id(g, a, b)
        for h in range(order):
            for i, a in enumerate(pair.gens_a):
                base = grp.mul(a, h)
                a_inv = grp.inv(a)
                for j, b in enumerate(pair.gens_b):
                    self.view_v1[h, i, j] = self.square_id(base, a_inv, b)

    # -- invariants ----------------------------------------------------

    def _check_invariants(self) -> None:
        d, order = self.delta, self.group.order
        expected = d * d * order // 2
        if len(self.squares) != expected:
            raise InvariantViolationError(
                f"|Q| = {len(self.squares)}, expected Delta^2 |G| / 2 = {expected}"
            )
        for name, views in (("V0", self.view_v0), ("V1", self.view_v1)):
            for v in range(order):
                flat = views[v].reshape(-1)
                if len(set(flat.tolist())) != d * d:
                    raise InvariantViolationError(
                        f"{name} local view at {v} is not a bijection onto Q(v)"
                    )
        # Each vertex is incident to exactly Delta^2 squares; local-view
        # bijectivity plus corner membership gives that.
        incident_v0: Dict[int, int] = {g: 0 for g in range(order)}
        incident_v1: Dict[int, int] = {g: 0 for g in range(order)}
        for sq in self.squares:
            g, ag, gb, agb = sq.corners
            incident_v0[g] += 1
            incident_v0[agb] += 1
            incident_v1[ag] += 1
            incident_v1[gb] += 1
        if set(incident_v0.values()) != {d * d} or set(incident_v1.values()) != {d * d}:
            raise InvariantViolationError("vertex square-incidence != Delta^2")

    # -- queries -------------------------------------------------------

    @property
    def num_squares(self) -> int:
        return len(self.squares)

    def v1_corners(self, square: Square) -> Tuple[Tuple[int, int, int], Tuple[int, int, int]]:
        """The two V1 corners of a square with their local-view positions.

        Returns ((h, row, col), (h', row, col)) entries such that
        view_v1[h][row][col] == square.index.
        """
        grp, pair = self.group, self.pair
        g, a, b = square.g, square.a, square.b
        ag = grp.mul(a, g)
        gb = grp.mul(g, b)
        a_idx = pair.gens_a.index(grp.inv(a))
        b_idx = pair.gens_b.index(b)
        first = (ag, a_idx, b_idx)
        a_idx2 = pair.gens_a.index(a)
        b_idx2 = pair.gens_b.index(grp.inv(b))
        second = (gb, a_idx2, b_idx2)
        return first, second

    def to_json(self) -> str:
        """Deterministic JSON with group order, generators, and the square table."""
        payload = {
            "format": "left-right-cayley-complex/1",
            "group": {
                "name": self.group.name,
                "order": self.group.order,
                "identity": self.group.identity,
            },
            "delta": self.delta,
            "gens_a": list(self.pair.gens_a),
            "gens_b": list(self.pair.gens_b),
            "squares": [
                {"key": [sq.g, sq.a, sq.b], "corners": list(sq.corners)}
                for sq in self.squares
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


# -- derived graphs ----------------------------------------------------


@dataclass
class Graph:
    """Regular (multi)graph: dense adjacency with multiplicities plus an
    edge list carrying square/edge ids."""

    name: str
    num_vertices: int
    degree: int
    adjacency: np.ndarray  # (n, n) int32, symmetric, counts multiplicity
    edges: List[Tuple[int, int, int]]  # (u, v, edge_id)
    bipartition: Optional[np.ndarray] = None  # +-1 per vertex when bipartite

    def edge_count(self) -> int:
        return len(self.edges)


def derived_graph(complex_: LeftRightCayleyComplex, which: str) -> Graph:
    """union: the 1-skeleton on 2|G| vertices; square0/square1: one edge per
    square between its same-side corners."""
    grp = complex_.group
    order = grp.order
    d = complex_.delta
    if which == "union":
        n = 2 * order
        adj = np.zeros((n, n), dtype=np.int32)
        edges = []
        eid = 0
        for g in range(order):
            for a in complex_.pair.gens_a:
                u, v = g, order + grp.mul(a, g)
                if adj[u, v] == 0:  # simple graph: at most one edge
                    adj[u, v] += 1
                    adj[v, u] += 1
                    edges.append((u, v, eid))
                    eid += 1
                else:
                    raise InvariantViolationError("parallel edge in union graph")
            for b in complex_.pair.gens_b:
                u, v = g, order + grp.mul(g, b)
                if adj[u, v] == 0:
                    adj[u, v] += 1
                    adj[v, u] += 1
                    edges.append((u, v, eid))
                    eid += 1
                else:
                    raise InvariantViolationError("parallel edge in union graph")
        sign = np.ones(n)
        sign[order:] = -1.0
        return Graph(
            name="union",
            num_vertices=n,
            degree=2 * d,
            adjacency=adj,
            edges=edges,
            bipartition=sign,
        )
    if which in ("square0", "square1"):
        adj = np.zeros((order, order), dtype=np.int32)
        edges = []
        for sq in complex_.squares:
            g, ag, gb, agb = sq.corners
            u, v = (g, agb) if which == "square0" else (ag, gb)
            adj[u, v] += 1
            adj[v, u] += 1
            edges.append((u, v, sq.index))
        return Graph(
            name=which,
            num_vertices=order,
            degree=d * d,
            adjacency=adj,
            edges=edges,
            bipartition=_bipartition_sign(adj),
        )
    raise ValidationError(f"unknown derived graph {which!r}")


def _bipartition_sign(adj: np.ndarray) -> Optional[np.ndarray]:
    """Two-coloring sign vector when the graph is bipartite, else None."""
    n = adj.shape[0]
    color = np.zeros(n, dtype=np.int8)
    for start in range(n):
        if color[start]:
            continue
        color[start] = 1
        stack = [start]
        while stack:
            u = stack.pop()
            for v in np.flatnonzero(adj[u]):
                if adj[v, v]:
                    return None  # self-loop
                if color[v] == 0:
                    color[v] = -color[u]
                    stack.append(int(v))
                elif color[v] == color[u]:
                    return None
    return color.astype(np.float64)


def is_connected(graph: Graph) -> bool:
    n = graph.num_vertices
    if n == 0:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(graph.adjacency[u]):
            if not seen[v]:
                seen[v] = True
                stack.append(int(v))
    return bool(seen.all())


def second_eigenvalue(
    graph: Graph,
    tolerance: float = 1e-8,
    max_iters: int = 200_000,
    rng_seed: int = 12345,
) -> float:
    """Largest |eigenvalue| of the adjacency outside the trivial eigenspace.

    Deflates the all-ones vector (top eigenvector of a connected regular
    graph) and, for bipartite graphs, the signed bipartition vector, then
    power-iterates the squared deflated operator; the square makes the
    iteration monotone even when +-lambda pairs are present.  Absolute
    accuracy is bounded by the residual check; raises ConvergenceError at
    the iteration cap.
    """
    if not is_connected(graph):
        raise ValidationError("second_eigenvalue requires a connected graph")
    n = graph.num_vertices
    a = graph.adjacency.astype(np.float64)
    ones = np.ones(n) / np.sqrt(n)
    deflate = [ones]
    if graph.bipartition is not None:
        chi = graph.bipartition / np.linalg.norm(graph.bipartition)
        deflate.append(chi)
    if n <= len(deflate):
        return 0.0

    def project(x: np.ndarray) -> np.ndarray:
        for d in deflate:
            x = x - (d @ x) * d
        return x

    def op(x: np.ndarray) -> np.ndarray:
        return project(a @ project(x))

    rng = np.random.default_rng(rng_seed)
    best: Optional[float] = None
    for _restart in range(2):
        x = project(rng.standard_normal(n))
        norm = np.linalg.norm(x)
        if norm == 0:
            continue
        x /= norm
        prev_rq = -1.0
        lam = None
        for _ in range(max_iters):
            y = op(op(x))  # one step of power iteration on (PAP)^2
            rq = float(x @ y)  # Rayleigh quotient of the PSD squared operator
            # Residual certifies |rq - mu| <= res for some eigenvalue mu of
            # the squared operator; near convergence mu is the top one, and
            # the sqrt halves the relative error.
            res = float(np.linalg.norm(y - rq * x))
            cur = float(np.sqrt(max(rq, 0.0)))
            if res <= tolerance * max(2.0 * cur, tolerance) and abs(
                rq - prev_rq
            ) <= tolerance * max(1.0, rq):
                lam = cur
                break
            prev_rq = rq
            ny = np.linalg.norm(y)
            if ny == 0:
                lam = 0.0
                break
            x = y / ny
        if lam is not None:
            best = lam if best is None else max(best, lam)
    if best is None:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iters} iterations"
        )
    return best


def edge_count_between(graph: Graph, s: Sequence[int], t: Sequence[int]) -> int:
    """|E(S,T)| as a multiset count: edges inside S intersect T count twice."""
    ind_s = np.zeros(graph.num_vertices, dtype=np.int64)
    ind_t = np.zeros(graph.num_vertices, dtype=np.int64)
    ind_s[list(s)] = 1
    ind_t[list(t)] = 1
    return int(ind_s @ graph.adjacency.astype(np.int64) @ ind_t)


def mixing_bound(graph: Graph, s_size: int, t_size: int, lam: float) -> float:
    d = graph.degree
    n = graph.num_vertices
    return d * s_size * t_size / n + lam * float(np.sqrt(s_size * t_size))
