"""Quivers, dimension-vector linear algebra, and the canonical models.

All matrix work is done with exact Python integers (Fractions during
elimination), so Coxeter powers and radical vectors are never subject to
floating-point or fixed-width overflow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .errors import NotEuclidean

Vertex = str
DimVector = tuple  # one integer per vertex, in quiver vertex order
IntMatrix = tuple  # tuple of row tuples


@dataclass(frozen=True)
class Quiver:
    """Finite acyclic quiver; parallel arrows allowed, loops are not."""

    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "arrows", tuple((s, t) for s, t in self.arrows)
        )
        if not self.vertices:
            raise ValueError("quiver needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        known = set(self.vertices)
        for s, t in self.arrows:
            if s not in known or t not in known:
                raise ValueError(f"arrow ({s}, {t}) uses unknown vertex")
            if s == t:
                raise ValueError(f"loop at vertex {s}")
        self.topological_order  # acyclicity check happens here

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def arrow_index_pairs(self) -> tuple:
        idx = self.index
        return tuple((idx[s], idx[t]) for s, t in self.arrows)

    @cached_property
    def out_neighbors(self) -> tuple:
        """Per vertex index: list of (target index, multiplicity)."""
        counts = [dict() for _ in self.vertices]
        for s, t in self.arrow_index_pairs:
            counts[s][t] = counts[s].get(t, 0) + 1
        return tuple(tuple(sorted(c.items())) for c in counts)

    @cached_property
    def in_neighbors(self) -> tuple:
        counts = [dict() for _ in self.vertices]
        for s, t in self.arrow_index_pairs:
            counts[t][s] = counts[t].get(s, 0) + 1
        return tuple(tuple(sorted(c.items())) for c in counts)

    @cached_property
    def topological_order(self) -> tuple:
        """Vertex indices, sources first; raises if a cycle exists."""
        indeg = [0] * self.n
        for _, t in self.arrow_index_pairs:
            indeg[t] += 1
        ready = sorted(i for i in range(self.n) if indeg[i] == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            fresh = []
            for t, mult in self.out_neighbors[v]:
                indeg[t] -= mult
                if indeg[t] == 0:
                    fresh.append(t)
            ready = sorted(ready + fresh)
        if len(order) != self.n:
            raise ValueError("quiver contains an oriented cycle")
        return tuple(order)

    def is_sink(self, v: Vertex) -> bool:
        return not self.out_neighbors[self.index[v]]

    def is_source(self, v: Vertex) -> bool:
        return not self.in_neighbors[self.index[v]]

    def sinks(self):
        return tuple(v for v in self.vertices if self.is_sink(v))

    def sources(self):
        return tuple(v for v in self.vertices if self.is_source(v))

    def underlying_edges(self):
        """Multiset of undirected edges as a sorted tuple of frozensets-ish pairs."""
        return tuple(sorted(tuple(sorted((s, t))) for s, t in self.arrows))


def quiver_from_json(data) -> Quiver:
    """Build a quiver from ``{"vertices": [...], "arrows": [[s, t], ...]}``."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "vertices" not in data or "arrows" not in data:
        raise ValueError("quiver JSON needs 'vertices' and 'arrows' keys")
    vertices = [str(v) for v in data["vertices"]]
    arrows = []
    for pair in data["arrows"]:
        if len(pair) != 2:
            raise ValueError(f"arrow entry {pair!r} is not a pair")
        arrows.append((str(pair[0]), str(pair[1])))
    return Quiver(tuple(vertices), tuple(arrows))


# ----------------------------------------------------------------------
# exact integer matrix helpers


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p))
        for i in range(n)
    )


def mat_vec(a: IntMatrix, v) -> DimVector:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def mat_pow_vec(a: IntMatrix, power: int, v) -> DimVector:
    for _ in range(power):
        v = mat_vec(a, v)
    return v


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_transpose(a: IntMatrix) -> IntMatrix:
    return tuple(zip(*a))


def _invert_exact(a: IntMatrix) -> IntMatrix:
    """Inverse of an integer matrix that must be integral (det = +-1)."""
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        pv = work[col][col]
        work[col] = [x / pv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    inv = []
    for row in work:
        out = []
        for x in row[n:]:
            if x.denominator != 1:
                raise ValueError("matrix inverse is not integral")
            out.append(int(x))
        inv.append(tuple(out))
    return tuple(inv)


def _kernel_basis(a: IntMatrix):
    """Rational kernel basis of an integer matrix (list of Fraction tuples)."""
    n = len(a)
    m = len(a[0])
    work = [[Fraction(x) for x in row] for row in a]
    pivots = []
    row = 0
    for col in range(m):
        pivot = next((r for r in range(row, n) if work[r][col] != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        pv = work[row][col]
        work[row] = [x / pv for x in work[row]]
        for r in range(n):
            if r != row and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * m
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -work[r][fc]
        basis.append(tuple(vec))
    return basis


# ----------------------------------------------------------------------
# the standard operations


def cartan_matrix(q: Quiver) -> IntMatrix:
    """Path-count matrix: entry (i, j) counts paths from j to i.

    Column i is then the dimension vector of the projective at i, and row i
    the dimension vector of the injective at i.
    """
    n = q.n
    paths = [[0] * n for _ in range(n)]
    for v in reversed(q.topological_order):
        paths[v][v] = 1
        for t, mult in q.out_neighbors[v]:
            for w in range(n):
                paths[v][w] += mult * paths[t][w]
    # paths[v][w] currently counts paths v -> w; entry (i, j) = paths j -> i
    return tuple(tuple(paths[j][i] for j in range(n)) for i in range(n))


def coxeter_matrix(q: Quiver):
    """The pair (Phi, Phi^-1) with Phi = -C^t C^-1, both integral."""
    c = cartan_matrix(q)
    c_inv = _invert_exact(c)
    ct = mat_transpose(c)
    phi = tuple(tuple(-x for x in row) for row in mat_mul(ct, c_inv))
    phi_inv = _invert_exact(phi)
    assert mat_mul(phi, phi_inv) == identity_matrix(q.n)
    return phi, phi_inv


def euler_form(q: Quiver, d, e) -> int:
    """Sum_i d_i e_i - sum over arrows i->j of d_i e_j."""
    if len(d) != q.n or len(e) != q.n:
        raise ValueError("dimension vector size mismatch")
    total = sum(int(x) * int(y) for x, y in zip(d, e))
    for s, t in q.arrow_index_pairs:
        total -= int(d[s]) * int(e[t])
    return total


def radical_vector(q: Quiver) -> DimVector:
    """Primitive positive integer generator of ker(Phi - Id).

    Raises NotEuclidean when the fixed space is not one-dimensional or has
    no positive generator (e.g. for Dynkin quivers).
    """
    phi, _ = coxeter_matrix(q)
    n = q.n
    shifted = tuple(
        tuple(phi[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)
    )
    basis = _kernel_basis(shifted)
    if len(basis) != 1:
        raise NotEuclidean(
            f"fixed space of the Coxeter matrix has dimension {len(basis)}, not 1"
        )
    vec = basis[0]
    denom_lcm = 1
    for x in vec:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if all(x < 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x > 0 for x in ints):
        raise NotEuclidean("radical generator is not positive")
    return tuple(ints)


def dim_projective(q: Quiver, v: Vertex, cartan: IntMatrix = None) -> DimVector:
    c = cartan if cartan is not None else cartan_matrix(q)
    j = q.index[v]
    return tuple(c[i][j] for i in range(q.n))


def dim_injective(q: Quiver, v: Vertex, cartan: IntMatrix = None) -> DimVector:
    c = cartan if cartan is not None else cartan_matrix(q)
    return tuple(c[q.index[v]])


def dim_simple(q: Quiver, v: Vertex) -> DimVector:
    j = q.index[v]
    return tuple(1 if i == j else 0 for i in range(q.n))


# ----------------------------------------------------------------------
# euclidean types and canonical models


@dataclass(frozen=True)
class EuclideanType:
    """One of A(r, s), D(n) (= extended D with n+3 vertices), E6, E7, E8."""

    kind: str
    r: int = 0
    s: int = 0
    n: int = 0

    @classmethod
    def A(cls, r: int, s: int) -> "EuclideanType":
        if r < 1 or s < 1:
            raise ValueError("A(r, s) needs r >= 1 and s >= 1")
        return cls("A", r=r, s=s)

    @classmethod
    def D(cls, n: int) -> "EuclideanType":
        if n < 1:
            raise ValueError("D(n) needs n >= 1")
        return cls("D", n=n)

    @classmethod
    def E(cls, rank: int) -> "EuclideanType":
        if rank not in (6, 7, 8):
            raise ValueError("extended E types have rank 6, 7 or 8")
        return cls(f"E{rank}")

    @classmethod
    def parse(cls, text: str) -> "EuclideanType":
        """Grammar: "A:r:s", "D:n", "E6", "E7", "E8"."""
        text = text.strip()
        if text in ("E6", "E7", "E8"):
            return cls(text)
        parts = text.split(":")
        try:
            if parts[0] == "A" and len(parts) == 3:
                return cls.A(int(parts[1]), int(parts[2]))
            if parts[0] == "D" and len(parts) == 2:
                return cls.D(int(parts[1]))
        except ValueError as exc:
            raise ValueError(f"bad type parameters in {text!r}: {exc}") from None
        raise ValueError(f"unknown type syntax {text!r}")

    def __str__(self):
        if self.kind == "A":
            return f"A:{self.r}:{self.s}"
        if self.kind == "D":
            return f"D:{self.n}"
        return self.kind


def _quiver_A(r: int, s: int) -> Quiver:
    total = r + s
    vertices = tuple(str(i) for i in range(total))
    arrows = [(str(i), str(i + 1)) for i in range(r)]
    chain = [0] + list(range(total - 1, r, -1)) + [r]
    arrows += [(str(a), str(b)) for a, b in zip(chain, chain[1:])]
    return Quiver(vertices, tuple(arrows))


def _quiver_D(n: int) -> Quiver:
    cs = [f"c{i}" for i in range(1, n + 1)]
    vertices = tuple(["a1", "a2"] + cs + ["b1", "b2"])
    arrows = [("a1", "c1"), ("a2", "c1")]
    arrows += [(cs[i], cs[i + 1]) for i in range(n - 1)]
    arrows += [(cs[-1], "b1"), (cs[-1], "b2")]
    return Quiver(vertices, tuple(arrows))


_E_QUIVERS = {
    "E6": (
        ("1", "2", "3", "4", "5", "6", "7"),
        (("3", "2"), ("2", "1"), ("5", "4"), ("4", "1"), ("7", "6"), ("6", "1")),
        "7",
    ),
    "E7": (
        ("1", "2", "3", "4", "5", "6", "7", "8"),
        (
            ("4", "3"), ("3", "2"), ("2", "1"), ("5", "1"),
            ("6", "1"), ("7", "6"), ("8", "7"),
        ),
        "8",
    ),
    "E8": (
        ("1", "2", "3", "4", "5", "6", "7", "8", "9"),
        (
            ("3", "2"), ("2", "1"), ("4", "1"), ("5", "1"),
            ("6", "5"), ("7", "6"), ("8", "7"), ("9", "8"),
        ),
        "9",
    ),
}


@dataclass(frozen=True)
class CanonicalModel:
    """A euclidean quiver in its standard orientation, with derived data.

    The tube table is attached by the tubes module during construction; it
    is part of the frozen value so a model can be shared freely between
    concurrent computations.
    """

    type: EuclideanType
    quiver: Quiver
    e: Vertex
    delta: DimVector
    cartan: IntMatrix
    coxeter: IntMatrix
    coxeter_inverse: IntMatrix
    tube_table: tuple = field(default=())

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def nvars(self) -> int:
        return self.quiver.n

    def variable_names(self):
        return tuple(f"u{v}" for v in self.quiver.vertices)

    def defect(self, d) -> int:
        return euler_form(self.quiver, self.delta, d)

    def dim_projective(self, v: Vertex) -> DimVector:
        return dim_projective(self.quiver, v, self.cartan)

    def dim_injective(self, v: Vertex) -> DimVector:
        return dim_injective(self.quiver, v, self.cartan)

    def dim_simple(self, v: Vertex) -> DimVector:
        return dim_simple(self.quiver, v)


def defect(model: CanonicalModel, d) -> int:
    """Pairing of the radical vector against d; sign separates the families."""
    return model.defect(d)


def _bare_model(t: EuclideanType) -> CanonicalModel:
    if t.kind == "A":
        q = _quiver_A(t.r, t.s)
        e = next(v for v in sorted(q.vertices, key=int) if q.is_sink(v))
    elif t.kind == "D":
        q = _quiver_D(t.n)
        e = "b1"
    else:
        vertices, arrows, e = _E_QUIVERS[t.kind]
        q = Quiver(vertices, arrows)
    delta = radical_vector(q)
    phi, phi_inv = coxeter_matrix(q)
    model = CanonicalModel(
        type=t,
        quiver=q,
        e=e,
        delta=delta,
        cartan=cartan_matrix(q),
        coxeter=phi,
        coxeter_inverse=phi_inv,
    )
    _validate_model(model)
    return model


def _validate_model(model: CanonicalModel):
    q = model.quiver
    delta = model.delta
    assert mat_vec(model.coxeter, delta) == delta
    assert euler_form(q, delta, delta) == 0
    assert delta[q.index[model.e]] == 1
    assert q.is_sink(model.e) or q.is_source(model.e)
    g = 0
    for x in delta:
        g = gcd(g, x)
    assert g == 1 and all(x >= 1 for x in delta)


def build_canonical(t: EuclideanType) -> CanonicalModel:
    """Canonical model for the given euclidean type, tube table included."""
    from . import tubes  # deferred: tubes needs the bare model to recognise labels

    model = _bare_model(t)
    table = tubes.build_tube_table(model)
    return CanonicalModel(
        type=model.type,
        quiver=model.quiver,
        e=model.e,
        delta=model.delta,
        cartan=model.cartan,
        coxeter=model.coxeter,
        coxeter_inverse=model.coxeter_inverse,
        tube_table=table,
    )
