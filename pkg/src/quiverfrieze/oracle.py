"""Independent ground truth: seed mutation and finite-field point counting.

Neither generator shares code paths with the frieze engine beyond the
polynomial ring itself, which is what makes their agreement with it a real
check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import CapExceeded, InterpolationInconsistent
from .laurent import LaurentPoly, exact_div, poly_prod
from .quivers import CanonicalModel, Quiver
from .transjective import ZQPoint, symbolic_init
from .tubes import CharacterCache

# ----------------------------------------------------------------------
# seed mutation


@dataclass(frozen=True)
class Seed:
    """Skew-symmetric exchange matrix plus the current cluster."""

    b_matrix: tuple
    cluster: tuple

    def __post_init__(self):
        n = len(self.b_matrix)
        for i in range(n):
            for j in range(n):
                if self.b_matrix[i][j] != -self.b_matrix[j][i]:
                    raise ValueError("exchange matrix must be skew-symmetric")
        if any(x.is_zero for x in self.cluster):
            raise ValueError("cluster entries must be nonzero")


def seed_from_quiver(q: Quiver, cluster=None) -> Seed:
    """Initial seed: b[i][j] = #arrows i->j minus #arrows j->i."""
    n = q.n
    b = [[0] * n for _ in range(n)]
    for s, t in q.arrow_index_pairs:
        b[s][t] += 1
        b[t][s] -= 1
    if cluster is None:
        cluster = tuple(LaurentPoly.variable(n, i) for i in range(n))
    return Seed(tuple(tuple(row) for row in b), tuple(cluster))


def mutate(seed: Seed, k: int) -> Seed:
    """One seed mutation at direction k (an involution)."""
    b = seed.b_matrix
    n = len(b)
    nvars = seed.cluster[0].nvars
    pos = [(i, b[i][k]) for i in range(n) if b[i][k] > 0]
    neg = [(i, -b[i][k]) for i in range(n) if b[i][k] < 0]
    plus = poly_prod(
        [seed.cluster[i] ** m for i, m in pos], nvars
    )
    minus = poly_prod(
        [seed.cluster[i] ** m for i, m in neg], nvars
    )
    new_xk = exact_div(plus + minus, seed.cluster[k])
    cluster = tuple(
        new_xk if i == k else x for i, x in enumerate(seed.cluster)
    )
    new_b = [
        [
            -b[i][j]
            if i == k or j == k
            else b[i][j] + (abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])) // 2
            for j in range(n)
        ]
        for i in range(n)
    ]
    return Seed(tuple(tuple(row) for row in new_b), cluster)


@dataclass(frozen=True)
class TransportReport:
    ok: bool
    slices_checked: int
    values_checked: int
    first_divergence: str = ""


def slice_transport_check(model: CanonicalModel, n_max: int,
                          cache: CharacterCache = None) -> TransportReport:
    """Compare mutation sweeps against frieze slices.

    One sweep mutates at every vertex in topological order; each vertex is
    a source of the current quiver when its turn comes, and a full sweep
    restores the exchange matrix while transporting the cluster one
    translate step.  After sweep n the cluster must coincide, as a set of
    polynomials matched by denominator vector, with frieze slice -n.
    """
    ws = cache if cache is not None else CharacterCache(model)
    q = model.quiver
    seed = seed_from_quiver(q, ws.init)
    original_b = seed.b_matrix
    order = q.topological_order
    values_checked = 0
    for sweep in range(1, n_max + 1):
        for k in order:
            seed = mutate(seed, k)
        if seed.b_matrix != original_b:
            return TransportReport(
                False, sweep - 1, values_checked,
                f"sweep {sweep}: exchange matrix not restored",
            )
        frieze_side = {}
        for v in q.vertices:
            value = ws.transjective_value(ZQPoint(-sweep, v))
            frieze_side[value.denominator_vector()] = value
        for x in seed.cluster:
            denom = x.denominator_vector()
            if denom not in frieze_side:
                return TransportReport(
                    False, sweep - 1, values_checked,
                    f"sweep {sweep}: no frieze value has denominator {denom}",
                )
            if frieze_side[denom] != x:
                return TransportReport(
                    False, sweep - 1, values_checked,
                    f"sweep {sweep}: polynomials with denominator {denom} differ",
                )
            values_checked += 1
    return TransportReport(True, n_max, values_checked)


# ----------------------------------------------------------------------
# finite-field point counting


TOTAL_DIM_CAP = 8
TUPLE_CAP = 10_000_000


@dataclass(frozen=True)
class ExplicitModule:
    """A representation given by dimensions and integer arrow matrices.

    ``maps[a]`` is the matrix of the a-th quiver arrow, shaped
    (target dimension, source dimension); entries are read modulo each
    sample prime.  A ``None`` entry stands for the zero map, which is the
    only possibility when either endpoint has dimension zero.
    """

    quiver: Quiver
    dims: tuple
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != self.quiver.n:
            raise ValueError("one dimension per vertex required")
        if len(self.maps) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow required")
        normalized = []
        for (s, t), mat in zip(self.quiver.arrow_index_pairs, self.maps):
            ds, dt = self.dims[s], self.dims[t]
            if mat is None:
                mat = tuple(tuple(0 for _ in range(ds)) for _ in range(dt))
            else:
                mat = tuple(tuple(int(x) for x in row) for row in mat)
            if ds == 0 or dt == 0:
                mat = tuple(tuple(0 for _ in range(ds)) for _ in range(dt))
            elif len(mat) != dt or any(len(r) != ds for r in mat):
                raise ValueError(
                    f"matrix for arrow {s}->{t} must be {dt} x {ds}"
                )
            normalized.append(mat)
        object.__setattr__(self, "maps", tuple(normalized))

    def total_dim(self) -> int:
        return sum(self.dims)


def _first_primes(count: int):
    primes = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes):
            primes.append(candidate)
        candidate += 1
    return primes


def _echelon_subspaces(dim: int, p: int):
    """All subspaces of F_p^dim as reduced-echelon row bases with pivots."""
    spaces = [((), ())]  # (rows, pivots); the zero subspace
    for k in range(1, dim + 1):
        for pivots in combinations(range(dim), k):
            free_cols = [
                [c for c in range(pivots[i] + 1, dim) if c not in pivots]
                for i in range(k)
            ]
            free_total = sum(len(cols) for cols in free_cols)
            for combo in product(range(p), repeat=free_total):
                rows = []
                pos = 0
                for i in range(k):
                    row = [0] * dim
                    row[pivots[i]] = 1
                    for c in free_cols[i]:
                        row[c] = combo[pos]
                        pos += 1
                    rows.append(tuple(row))
                spaces.append((tuple(rows), tuple(pivots)))
    return spaces


def _reduces_to_zero(vector, rows, pivots, p: int) -> bool:
    v = list(vector)
    for row, piv in zip(rows, pivots):
        c = v[piv] % p
        if c:
            v = [(x - c * y) % p for x, y in zip(v, row)]
    return all(x % p == 0 for x in v)


def _count_subrepresentations(module: ExplicitModule, p: int) -> int:
    q = module.quiver
    per_vertex = []
    total_tuples = 1
    for d in module.dims:
        spaces = _echelon_subspaces(d, p)
        per_vertex.append(spaces)
        total_tuples *= len(spaces)
        if total_tuples > TUPLE_CAP:
            raise CapExceeded(
                f"subspace tuple count exceeds {TUPLE_CAP} at prime {p}"
            )
    arrows = list(zip(q.arrow_index_pairs, module.maps))
    count = 0
    for choice in product(*per_vertex):
        ok = True
        for (s, t), mat in arrows:
            rows_s, _ = choice[s]
            rows_t, pivots_t = choice[t]
            for row in rows_s:
                image = tuple(
                    sum(mat[r][c] * row[c] for c in range(len(row))) % p
                    for r in range(len(mat))
                )
                if not _reduces_to_zero(image, rows_t, pivots_t, p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


def grassmannian_chi(module: ExplicitModule, primes=None) -> int:
    """Euler characteristic of the complete grassmannian by point counting.

    Counts arrow-closed subspace tuples over several prime fields,
    interpolates the counting polynomial, and evaluates it at one.  The
    polynomial-count assumption is never taken silently: every sampled
    count must be reproduced by the interpolant.
    """
    if module.total_dim() > TOTAL_DIM_CAP:
        raise CapExceeded(
            f"total dimension {module.total_dim()} exceeds cap {TOTAL_DIM_CAP}"
        )
    degree_bound = sum((d * d) // 4 for d in module.dims)
    if primes is None:
        primes = _first_primes(degree_bound + 2)
    primes = list(primes)
    if len(primes) < degree_bound + 1:
        raise ValueError(
            f"need at least {degree_bound + 1} primes for degree {degree_bound}"
        )
    counts = [(p, _count_subrepresentations(module, p)) for p in primes]
    fit = counts[: degree_bound + 1]
    # Lagrange interpolation evaluated at q = 1, exactly.
    at_one = Fraction(0)
    for i, (xi, yi) in enumerate(fit):
        term = Fraction(yi)
        for j, (xj, _) in enumerate(fit):
            if i != j:
                term *= Fraction(1 - xj, xi - xj)
        at_one += term
    # Consistency: the interpolant must reproduce every sample.
    for x, y in counts:
        value = Fraction(0)
        for i, (xi, yi) in enumerate(fit):
            term = Fraction(yi)
            for j, (xj, _) in enumerate(fit):
                if i != j:
                    term *= Fraction(x - xj, xi - xj)
            value += term
        if value != y:
            raise InterpolationInconsistent(
                f"count at q={x} is {y}, interpolant gives {value}"
            )
    if at_one.denominator != 1:
        raise InterpolationInconsistent(
            f"value at q=1 is not an integer: {at_one}"
        )
    return int(at_one)
