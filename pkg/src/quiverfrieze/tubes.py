"""Tube data tables, generalized Chebyshev polynomials, regular characters.

Characters of objects in a rank-p tube reduce to the p values at the tube
mouth; those in turn come from one exchange relation per mouth object,
whose three transjective ingredients live on a handful of translate orbits.
For deep orbit points a three-term recurrence derived from the same
exchange relation replaces raw mesh evaluation, whose intermediate slices
would otherwise grow beyond any feasible size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RecognitionFailed
from .laurent import (
    LaurentPoly,
    exact_div,
    poly_prod,
    substitute_as_fraction,
)
from .quivers import CanonicalModel, mat_vec
from .transjective import (
    PostProjective,
    PreInjective,
    ShiftedProjective,
    ZQPoint,
    frieze_value,
    label_dimension,
    label_to_point,
    point_to_label,
    recognize,
    symbolic_init,
    unit_init,
)

TAGS = ("zero", "one", "infinity", "homogeneous")

# Routing budget (rough pairwise-operation units) above which a mesh cone is
# considered too expensive and the orbit recurrence or a translate hop is
# used instead.  Correctness does not depend on the value.
DEFAULT_BUDGET = 120_000_000

_DENSE_DISCOUNT = 16
_DENSE_CELL_CAP = 40_000_000


@dataclass(frozen=True)
class TubeData:
    """One tube of the regular part: rank, frame objects, and the point e.

    ``anchor`` shifts the public mouth numbering against the exchange-frame
    numbering; the published Euler tables for the largest exceptional star
    start their rows one translate step away from the frame the other types
    use, and the golden data follows that convention.
    """

    tag: str
    rank: int
    B: object
    Bprime: object
    e_used: str
    anchor: int = 0

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tube tag {self.tag!r}")
        if self.rank < 1:
            raise ValueError("tube rank must be >= 1")


@dataclass(frozen=True)
class RegularIndex:
    """Names the indecomposable regular object (tube, mouth offset, length)."""

    tag: str
    k: int
    length: int

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tube tag {self.tag!r}")
        if self.length < 1:
            raise ValueError("quasi-length must be >= 1")


# ----------------------------------------------------------------------
# generalized Chebyshev polynomials


def chebyshev(length: int, vals):
    """Evaluate the three-term recurrence P_l at the given values.

    P_{-1} = 0, P_0 = 1 and P_{j+1} = vals[j] * P_j - P_{j-1}; equals the
    tridiagonal determinant with vals reversed down the diagonal and unit
    off-diagonals.  Works on integers and polynomials alike.
    """
    vals = list(vals)
    if length < 0:
        raise ValueError("length must be >= 0")
    if len(vals) != length:
        raise ValueError("need exactly one value per recurrence step")
    prev, current = 0, 1
    for j in range(length):
        prev, current = current, vals[j] * current - prev
    return current


def tridiagonal_determinant(vals):
    """Integer determinant of the tridiagonal comparison matrix.

    Diagonal carries vals reversed (vals[-1] top-left, vals[0] bottom-right)
    with ones off the diagonal.  Fraction-free Bareiss elimination; used as
    an independent cross-check of :func:`chebyshev` on integer inputs.
    """
    n = len(vals)
    if n == 0:
        return 1
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = vals[n - 1 - i]
        if i + 1 < n:
            a[i][i + 1] = 1
            a[i + 1][i] = 1
    sign = 1
    denom = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // denom
        denom = a[k][k]
    return sign * a[n - 1][n - 1]


# ----------------------------------------------------------------------
# tube tables


def _shift_label(label, k):
    return point_to_label(ZQPoint(label_to_point(label).n - k, label_to_point(label).vertex))


def _recognize_or_fail(model, d, what):
    try:
        return recognize(model, d)
    except Exception as exc:
        raise RecognitionFailed(f"cannot resolve {what} with dims {d}: {exc}") from exc


def _homogeneous_pair(model: CanonicalModel):
    """Frame objects for rank-one tubes, from their dimension vectors."""
    q = model.quiver
    delta = model.delta
    e = model.e
    se = model.dim_simple(e)
    b = _recognize_or_fail(
        model, tuple(a + b_ for a, b_ in zip(delta, se)), "homogeneous frame"
    )
    if q.is_sink(e):
        c = _recognize_or_fail(
            model, tuple(a - b_ for a, b_ in zip(delta, se)), "homogeneous coframe"
        )
        return b, _shift_label(c, -1)
    tau_se = mat_vec(model.coxeter, model.dim_injective(e))
    if all(x <= d for x, d in zip(tau_se, delta)):
        bp = _recognize_or_fail(
            model,
            tuple(d - x for d, x in zip(delta, tau_se)),
            "homogeneous coframe",
        )
        return b, bp
    c = _recognize_or_fail(
        model, tuple(x - d for x, d in zip(tau_se, delta)), "homogeneous coframe"
    )
    return b, _shift_label(c, -1)


def build_tube_table(model: CanonicalModel):
    """Tube records for a canonical model, validated against the identities
    that tie frame dimension vectors to the radical vector."""
    t = model.type
    q = model.quiver
    if t.kind == "A":
        e = model.e
        r, s = t.r, t.s
        clockwise_src = str(r - 1)
        counter_src = str(r + 1) if s > 1 else "0"
        rows = [
            TubeData("zero", r, PostProjective(clockwise_src, 0),
                     ShiftedProjective(counter_src), e),
            TubeData("one", s, PostProjective(counter_src, 0),
                     ShiftedProjective(clockwise_src), e),
        ]
    elif t.kind == "D":
        n = t.n
        pc = model.dim_projective(f"c{n}")
        pb2 = model.dim_simple("b2")  # dim P_b2 at the sink b2
        frame1 = _recognize_or_fail(
            model, tuple(a - b for a, b in zip(pc, pb2)), "rank n+1 frame"
        )
        rows = [
            TubeData("one", n + 1, frame1, ShiftedProjective("b2"), "b1"),
            TubeData("zero", 2, PostProjective("a1", 0),
                     PreInjective("a2", n - 1), "b1"),
            TubeData("infinity", 2, PostProjective("a2", 0),
                     PreInjective("a1", n - 1), "b1"),
        ]
    else:
        rows = {
            "E6": [
                TubeData("zero", 2, PreInjective("7", 3), PostProjective("7", 1), "7"),
                TubeData("one", 3, PreInjective("5", 2), PostProjective("3", 0), "7"),
                TubeData("infinity", 3, PreInjective("5", 2), PostProjective("7", 0), "3"),
            ],
            "E7": [
                TubeData("infinity", 2, PreInjective("4", 6), PostProjective("4", 4), "8"),
                TubeData("zero", 3, PreInjective("8", 4), PostProjective("8", 2), "8"),
                TubeData("one", 4, PreInjective("4", 3), PostProjective("4", 1), "8"),
            ],
            "E8": [
                TubeData("infinity", 2, PreInjective("9", 15), PostProjective("9", 13), "9", anchor=-1),
                TubeData("zero", 3, PreInjective("9", 10), PostProjective("9", 8), "9", anchor=-1),
                TubeData("one", 5, PreInjective("9", 6), PostProjective("9", 4), "9", anchor=-1),
            ],
        }[t.kind]
    hom_b, hom_bp = _homogeneous_pair(model)
    rows.append(TubeData("homogeneous", 1, hom_b, hom_bp, model.e))
    table = tuple(rows)
    _validate_tube_table(model, table)
    return table


def _simple_at(model, vertex):
    return model.dim_simple(vertex)


def _validate_tube_table(model: CanonicalModel, table):
    for td in table:
        dim_b = label_dimension(model, td.B)
        dim_n = tuple(
            a - b for a, b in zip(dim_b, _simple_at(model, td.e_used))
        )
        if any(x < 0 for x in dim_n):
            raise RecognitionFailed(
                f"tube {td.tag}: frame minus simple has a negative entry {dim_n}"
            )
        total = [0] * model.quiver.n
        current = dim_n
        for _ in range(td.rank):
            total = [a + b for a, b in zip(total, current)]
            current = mat_vec(model.coxeter, current)
        if tuple(total) != model.delta:
            raise RecognitionFailed(
                f"tube {td.tag}: mouth dimension vectors do not sum to the "
                f"radical vector ({tuple(total)} != {model.delta})"
            )


def tube_table(t_or_model):
    """Tube records for a euclidean type or an already built model."""
    if isinstance(t_or_model, CanonicalModel):
        return t_or_model.tube_table
    from .quivers import build_canonical

    return build_canonical(t_or_model).tube_table


# ----------------------------------------------------------------------
# evaluation workspace


def _s_label(model, e_used):
    """The simple at e as a frieze point: projective for a sink, injective
    for a source."""
    if model.quiver.is_sink(e_used):
        return PostProjective(e_used, 0)
    return PreInjective(e_used, 0)


class CharacterCache:
    """Evaluation context for one (model, init) pair.

    Holds the mesh memo, computed tube-mouth characters, and an
    integer-valued twin used solely to estimate costs when routing between
    the mesh and the orbit recurrence.  Not internally locked: share one
    cache across threads only with external mutual exclusion.
    """

    def __init__(self, model: CanonicalModel, init=None, max_slice: int = 64,
                 budget: int = DEFAULT_BUDGET):
        self.model = model
        self.init = tuple(init) if init is not None else symbolic_init(model)
        self.mesh = {}
        self.mouths = {}
        self.max_slice = max_slice
        self.budget = budget
        self.symbolic = self.init == symbolic_init(model)
        self._proxy = None
        self._unbounded = budget is None
        self._mouth_stack = set()
        self._dims_memo = {}
        self._step_memo = {}
        for i, value in enumerate(self.init):
            self.mesh[(0, i)] = value

    # -- integer twin ---------------------------------------------------

    def proxy(self) -> "CharacterCache":
        if self._proxy is None:
            self._proxy = CharacterCache(
                self.model, unit_init(self.model),
                max_slice=max(self.max_slice, 256), budget=None,
            )
        return self._proxy

    def _mass(self, key) -> int:
        value = self.proxy()._value_by_key(key)
        return min(max(1, abs(value.eval_ones())), 10 ** 18)

    # -- cost model ------------------------------------------------------

    def _point_dims(self, key):
        if key in self._dims_memo:
            return self._dims_memo[key]
        n, i = key
        model = self.model
        v = model.vertices[i]
        if n == 0:
            dims = model.dim_simple(v)
        else:
            dims = label_dimension(model, point_to_label(ZQPoint(n, v)))
        self._dims_memo[key] = dims
        return dims

    def _step_cost(self, key) -> float:
        if key in self._step_memo:
            return self._step_memo[key]
        cost = self._step_cost_fresh(key)
        self._step_memo[key] = cost
        return cost

    def _step_cost_fresh(self, key) -> float:
        q = self.model.quiver
        n, i = key
        factors, divisor = _mesh_deps(q, n, i)
        sizes = []
        spans = []
        for m, j, mult in factors:
            mass = float(self._mass((m, j)))
            dims = self._point_dims((m, j))
            for _ in range(mult):
                sizes.append(mass)
                spans.append(dims)
        order = sorted(range(len(sizes)), key=lambda a: sizes[a])
        total_dims = [0] * q.n
        running = 1.0
        cost = 0.0
        for pos in order:
            pair = running * sizes[pos]
            total_dims = [a + b for a, b in zip(total_dims, spans[pos])]
            cells = 1.0
            for d in total_dims:
                cells *= 2 * d + 3
            dense = (
                min(running, sizes[pos]) * cells / _DENSE_DISCOUNT
                if cells <= _DENSE_CELL_CAP
                else float("inf")
            )
            cost += min(pair, dense)
            running = min(pair, cells)
        cost += running  # division work is of the numerator's order
        return cost

    def _cone_cost(self, key) -> float:
        """Total routing cost of mesh-evaluating key with current cache."""
        if key in self.mesh:
            return 0.0
        q = self.model.quiver
        seen = set()
        stack = [key]
        total = 0.0
        limit = float(self.budget) if self.budget else float("inf")
        while stack:
            k = stack.pop()
            if k in seen or k in self.mesh:
                continue
            seen.add(k)
            n, i = k
            if n == 0:
                continue
            total += self._step_cost(k)
            if total > limit:
                return total
            factors, divisor = _mesh_deps(q, n, i)
            stack.extend((m, j) for m, j, _ in factors)
            stack.append(divisor)
        return total

    # -- frieze values ---------------------------------------------------

    def _value_by_key(self, key) -> LaurentPoly:
        n, i = key
        return self.transjective_value(ZQPoint(n, self.model.vertices[i]))

    def transjective_value(self, point: ZQPoint) -> LaurentPoly:
        model = self.model
        key = (point.n, model.quiver.index[point.vertex])
        if key in self.mesh:
            return self.mesh[key]
        if (
            self._unbounded
            or not self.symbolic
            or self._cone_cost(key) <= self.budget
        ):
            return frieze_value(model, point, self.init, self.mesh,
                                max_slice=max(self.max_slice, abs(point.n)))
        value = self._orbit_recurrence(point)
        if value is None:
            return frieze_value(model, point, self.init, self.mesh,
                                max_slice=max(self.max_slice, abs(point.n)))
        self.mesh[key] = value
        return value

    def label_value(self, label) -> LaurentPoly:
        return self.transjective_value(label_to_point(label))

    # -- the orbit recurrence ---------------------------------------------

    def _relation_points(self, td: TubeData, j: int):
        """The three frieze points of the exchange relation at shift j."""
        b = label_to_point(td.B)
        bp = label_to_point(td.Bprime)
        s = label_to_point(_s_label(self.model, td.e_used))
        return (
            ZQPoint(b.n - j, b.vertex),
            ZQPoint(bp.n - j, bp.vertex),
            ZQPoint(s.n - j, s.vertex),
        )

    def _best_candidate(self, point: ZQPoint):
        """Pick an exchange relation resolving ``point`` from strictly
        shallower ingredients, avoiding mouths currently being computed."""
        candidates = []
        for t_idx, td in enumerate(self.model.tube_table):
            base = {
                "B": label_to_point(td.B),
                "Bprime": label_to_point(td.Bprime),
                "S": label_to_point(_s_label(self.model, td.e_used)),
            }
            for role, bp in base.items():
                if bp.vertex != point.vertex:
                    continue
                j = bp.n - point.n
                if (t_idx, j % td.rank) in self._mouth_stack:
                    continue
                others = [
                    p for r, p in zip(
                        ("B", "Bprime", "S"), self._relation_points(td, j)
                    )
                    if r != role
                ]
                depth = max(abs(p.n) for p in others)
                if depth < abs(point.n):
                    candidates.append((depth, t_idx, role, j, others))
        if not candidates:
            return None
        return min(candidates, key=lambda c: (c[0], c[1], c[2]))

    def _route_cost(self, key) -> float:
        """Estimated cost of obtaining a point through the router."""
        if key in self.mesh:
            return 0.0
        cone = self._cone_cost(key)
        if cone <= self.budget:
            return cone
        point = ZQPoint(key[0], self.model.vertices[key[1]])
        candidate = self._best_candidate(point)
        if candidate is None:
            return cone
        _, _, _, _, others = candidate
        q = self.model.quiver
        total = 1000.0
        for p in others:
            total += self._route_cost((p.n, q.index[p.vertex]))
        return min(cone, total)

    def _orbit_recurrence(self, point: ZQPoint):
        """Resolve a deep point through an exchange relation whose other two
        ingredients are strictly shallower; returns None if no tube offers
        one."""
        candidate = self._best_candidate(point)
        if candidate is None:
            return None
        depth, t_idx, role, j, others = candidate
        td = self.model.tube_table[t_idx]
        mouth = self.mouth_value(t_idx, j % td.rank)
        if role == "S":
            numerator = (
                self.transjective_value(others[0])
                + self.transjective_value(others[1])
            )
            return exact_div(numerator, mouth)
        other_value = self.transjective_value(others[0])
        s_value = self.transjective_value(others[1])
        return mouth * s_value - other_value

    # -- tube mouths -------------------------------------------------------

    def tube(self, tag: str) -> TubeData:
        for td in self.model.tube_table:
            if td.tag == tag:
                return td
        raise KeyError(f"model {self.model.type} has no tube tagged {tag!r}")

    def _tube_index(self, tag: str) -> int:
        for idx, td in enumerate(self.model.tube_table):
            if td.tag == tag:
                return idx
        raise KeyError(f"model {self.model.type} has no tube tagged {tag!r}")

    def _mouth_direct(self, td: TubeData, j: int) -> LaurentPoly:
        pb, pbp, ps = self._relation_points(td, j)
        numerator = self.transjective_value(pb) + self.transjective_value(pbp)
        return exact_div(numerator, self.transjective_value(ps))

    def _translate_images(self, direction: int):
        """Slice +-1 values: the substitution realising one translate step."""
        return [
            self.transjective_value(ZQPoint(-direction, v))
            for v in self.model.vertices
        ]

    def mouth_value(self, t_idx: int, r: int) -> LaurentPoly:
        """Mouth character in exchange-frame numbering (no anchor applied)."""
        td = self.model.tube_table[t_idx]
        p = td.rank
        r %= p
        key = (t_idx, r)
        if key in self.mouths:
            return self.mouths[key]
        if self._unbounded or not self.symbolic:
            self._mouth_stack.add(key)
            try:
                self.mouths[key] = self._mouth_direct(td, r)
            finally:
                self._mouth_stack.discard(key)
            return self.mouths[key]

        # Plan all p mouths at once: direct where the router keeps the work
        # cheap, translate hops from a computed neighbour otherwise.  The
        # tube's own mouths are masked while planning so estimates match
        # what the router will actually be allowed to do.
        all_keys = {(t_idx, rr) for rr in range(p)}
        self._mouth_stack.update(all_keys - set(self.mouths))
        try:
            plans = {}
            for rr in range(p):
                best = None
                for j in range(-(2 * p + 2), 2 * p + 3):
                    if j % p != rr:
                        continue
                    cost = sum(
                        self._route_cost(
                            (pt.n, self.model.quiver.index[pt.vertex])
                        )
                        for pt in self._relation_points(td, j)
                    )
                    if best is None or cost < best[0] or (
                        cost == best[0] and abs(j) < abs(best[1])
                    ):
                        best = (cost, j)
                plans[rr] = best
            ready = {
                rr for rr in range(p)
                if plans[rr][0] <= self.budget or (t_idx, rr) in self.mouths
            }
            if not ready:
                ready = {min(range(p), key=lambda rr: plans[rr][0])}
            for rr in sorted(ready):
                if (t_idx, rr) not in self.mouths:
                    self.mouths[(t_idx, rr)] = self._mouth_direct(
                        td, plans[rr][1]
                    )
                    self._mouth_stack.discard((t_idx, rr))
            missing = [rr for rr in range(p) if (t_idx, rr) not in self.mouths]
            while missing:
                progressed = False
                for rr in list(missing):
                    if (t_idx, (rr - 1) % p) in self.mouths:
                        source = self.mouths[(t_idx, (rr - 1) % p)]
                        images = self._translate_images(+1)
                        self.mouths[(t_idx, rr)] = substitute_as_fraction(
                            source, images
                        )
                    elif (t_idx, (rr + 1) % p) in self.mouths:
                        source = self.mouths[(t_idx, (rr + 1) % p)]
                        images = self._translate_images(-1)
                        self.mouths[(t_idx, rr)] = substitute_as_fraction(
                            source, images
                        )
                    else:
                        continue
                    missing.remove(rr)
                    self._mouth_stack.discard((t_idx, rr))
                    progressed = True
                assert progressed, "mouth propagation stalled"
        finally:
            self._mouth_stack.difference_update(all_keys)
        return self.mouths[key]

    def mouth_char(self, t_idx: int, k: int) -> LaurentPoly:
        """Mouth character in the public numbering (tube anchor applied)."""
        td = self.model.tube_table[t_idx]
        return self.mouth_value(t_idx, (k + td.anchor) % td.rank)


def _mesh_deps(q, n, i):
    if n > 0:
        factors = [(n - 1, j, mult) for j, mult in q.in_neighbors[i]]
        factors += [(n, k, mult) for k, mult in q.out_neighbors[i]]
        divisor = (n - 1, i)
    else:
        factors = [(n, j, mult) for j, mult in q.in_neighbors[i]]
        factors += [(n + 1, k, mult) for k, mult in q.out_neighbors[i]]
        divisor = (n + 1, i)
    return factors, divisor


# ----------------------------------------------------------------------
# public character operations


def quasi_simple_char(model: CanonicalModel, tag: str, k: int,
                      init=None, cache: CharacterCache = None) -> LaurentPoly:
    """Character of the k-th mouth object of the tagged tube.

    k is reduced modulo the tube rank (mouth objects are rank-periodic).
    """
    ws = cache if cache is not None else CharacterCache(model, init)
    t_idx = ws._tube_index(tag)
    return ws.mouth_char(t_idx, k)


def regular_char(model: CanonicalModel, idx: RegularIndex,
                 init=None, cache: CharacterCache = None) -> LaurentPoly:
    """Character of a regular object: Chebyshev evaluation over the mouth.

    The arguments are the l consecutive mouth characters starting at offset
    k, indices wrapping around the tube rank.
    """
    ws = cache if cache is not None else CharacterCache(model, init)
    t_idx = ws._tube_index(idx.tag)
    p = ws.model.tube_table[t_idx].rank
    vals = [ws.mouth_char(t_idx, (idx.k + j) % p) for j in range(idx.length)]
    value = chebyshev(idx.length, vals)
    if isinstance(value, int):
        value = LaurentPoly.constant(model.quiver.n, value)
    return value
