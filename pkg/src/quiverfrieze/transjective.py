"""Frieze evaluation on the transjective component.

Points of the component are indexed by (slice, vertex) with the object at
``(n, i)`` being the n-th inverse-translate of the shifted projective at i.
Slice 0 carries the initial values; positive slices are reached by the mesh
relation solved forward (sinks first within a slice), negative slices by the
dual solve (sources first).  Evaluation is lazy and memoised in an explicit
cache dictionary owned by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotTransjective, WindowExceeded
from .laurent import LaurentPoly, exact_div, poly_prod
from .quivers import CanonicalModel, Quiver, mat_vec


@dataclass(frozen=True)
class ZQPoint:
    n: int
    vertex: str


@dataclass(frozen=True)
class ShiftedProjective:
    vertex: str


@dataclass(frozen=True)
class PostProjective:
    vertex: str
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("translate count must be >= 0")


@dataclass(frozen=True)
class PreInjective:
    vertex: str
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("translate count must be >= 0")


TransjectiveLabel = (ShiftedProjective, PostProjective, PreInjective)


def label_to_point(label) -> ZQPoint:
    if isinstance(label, ShiftedProjective):
        return ZQPoint(0, label.vertex)
    if isinstance(label, PostProjective):
        return ZQPoint(label.m + 1, label.vertex)
    if isinstance(label, PreInjective):
        return ZQPoint(-(label.m + 1), label.vertex)
    raise TypeError(f"not a transjective label: {label!r}")


def point_to_label(p: ZQPoint):
    if p.n == 0:
        return ShiftedProjective(p.vertex)
    if p.n > 0:
        return PostProjective(p.vertex, p.n - 1)
    return PreInjective(p.vertex, -p.n - 1)


def shift(p: ZQPoint, k: int) -> ZQPoint:
    """Apply the suspension k times: (n, i) -> (n - k, i)."""
    return ZQPoint(p.n - k, p.vertex)


def shift_label(label, k: int):
    return point_to_label(shift(label_to_point(label), k))


def label_dimension(model: CanonicalModel, label):
    """Dimension vector of the module named by the label.

    Shifted projectives are not modules and have no dimension vector.
    """
    if isinstance(label, PostProjective):
        d = model.dim_projective(label.vertex)
        for _ in range(label.m):
            d = mat_vec(model.coxeter_inverse, d)
        return d
    if isinstance(label, PreInjective):
        d = model.dim_injective(label.vertex)
        for _ in range(label.m):
            d = mat_vec(model.coxeter, d)
        return d
    raise ValueError(f"{label!r} is not a module")


def recognize(model: CanonicalModel, d):
    """Resolve a dimension vector to its transjective label.

    Walks the translate orbits of the projectives (negative defect) or the
    injectives (positive defect) until the vector is met.  The search cap
    only converts divergence into a clean error: transjective dimension
    vectors grow without bound along their orbits, so an unmatched vector
    past the cap cannot be transjective.
    """
    d = tuple(int(x) for x in d)
    if len(d) != model.quiver.n:
        raise ValueError("dimension vector size mismatch")
    if any(x < 0 for x in d) or all(x == 0 for x in d):
        raise ValueError("expected a nonzero, componentwise nonnegative vector")
    sign = model.defect(d)
    if sign == 0:
        raise NotTransjective(f"defect 0: {d} is regular or decomposable")
    cap = sum(d) + model.quiver.n + 1
    if sign < 0:
        seeds = {v: model.dim_projective(v) for v in model.vertices}
        step = model.coxeter_inverse
        make = PostProjective
    else:
        seeds = {v: model.dim_injective(v) for v in model.vertices}
        step = model.coxeter
        make = PreInjective
    current = dict(seeds)
    for m in range(cap + 1):
        for v in model.vertices:
            if current[v] == d:
                return make(v, m)
        current = {v: mat_vec(step, vec) for v, vec in current.items()}
    raise NotTransjective(f"no transjective label matches {d} within cap {cap}")


# ----------------------------------------------------------------------
# mesh evaluation


def symbolic_init(model: CanonicalModel):
    """Initial-cluster assignment: the point (0, i) gets the i-th variable."""
    n = model.quiver.n
    return tuple(LaurentPoly.variable(n, i) for i in range(n))


def unit_init(model: CanonicalModel):
    """All-ones assignment; frieze values become exact integers."""
    n = model.quiver.n
    return tuple(LaurentPoly.one(n) for _ in range(n))


def _mesh_dependencies(q: Quiver, n: int, i: int):
    """Cache keys needed before (n, i) can be solved, plus product factors.

    Returns (deps, factors, divisor): ``factors`` lists (slice, vertex,
    multiplicity) entering the mesh product and ``divisor`` the already
    known opposite point.
    """
    if n > 0:
        factors = [(n - 1, j, mult) for j, mult in q.in_neighbors[i]]
        factors += [(n, k, mult) for k, mult in q.out_neighbors[i]]
        divisor = (n - 1, i)
    else:
        factors = [(n, j, mult) for j, mult in q.in_neighbors[i]]
        factors += [(n + 1, k, mult) for k, mult in q.out_neighbors[i]]
        divisor = (n + 1, i)
    return factors, divisor


def frieze_value(model, point: ZQPoint, init, cache,
                 max_slice: int = 64) -> LaurentPoly:
    """Value of the mesh frieze at ``point`` for the given slice-0 values.

    ``model`` may be a canonical model or a bare quiver.  ``cache`` maps
    (slice, vertex index) pairs to values and is mutated; share a cache
    only between calls with the same quiver and init.
    """
    q = model.quiver if isinstance(model, CanonicalModel) else model
    nv = q.n
    if point.vertex not in q.index:
        raise ValueError(f"unknown vertex {point.vertex!r}")
    target = (point.n, q.index[point.vertex])
    if abs(point.n) > max_slice:
        raise WindowExceeded(
            f"slice {point.n} is outside the window |n| <= {max_slice}"
        )
    if not cache:
        for i, value in enumerate(init):
            cache[(0, i)] = value
    stack = [target]
    while stack:
        key = stack[-1]
        if key in cache:
            stack.pop()
            continue
        n, i = key
        factors, divisor = _mesh_dependencies(q, n, i)
        missing = [
            (m, j) for m, j, _ in factors if (m, j) not in cache
        ]
        if divisor not in cache:
            missing.append(divisor)
        if missing:
            stack.extend(missing)
            continue
        product = poly_prod(
            [cache[(m, j)] ** mult if mult > 1 else cache[(m, j)]
             for m, j, mult in factors],
            nv,
        )
        cache[key] = exact_div(product + 1, cache[divisor])
        stack.pop()
    return cache[target]


def mesh_defect_points(model: CanonicalModel, cache):
    """Interior cached points whose full mesh neighbourhood is cached.

    At each such point the defining relation can be re-checked post hoc.
    """
    q = model.quiver
    out = []
    for (n, i) in cache:
        if n == 0:
            lower = (0, i)
            upper = (1, i)
            factors, _ = _mesh_dependencies(q, 1, i)
            if upper in cache and all((m, j) in cache for m, j, _ in factors):
                out.append((1, i))
            continue
        factors, divisor = _mesh_dependencies(q, n, i)
        if divisor in cache and all((m, j) in cache for m, j, _ in factors):
            out.append((n, i) if n > 0 else (n + 1, i))
    return sorted(set(out))


def check_mesh_relation(model: CanonicalModel, cache, point_key) -> bool:
    """Exact re-check of the mesh relation at an interior point key (n, i).

    The key names the *upper* point of a mesh: the relation couples (n, i)
    with (n-1, i) and the product over the arrows between the two slices.
    """
    q = model.quiver
    n, i = point_key
    factors = [(n - 1, j, mult) for j, mult in q.in_neighbors[i]]
    factors += [(n, k, mult) for k, mult in q.out_neighbors[i]]
    product = poly_prod(
        [cache[(m, j)] ** mult if mult > 1 else cache[(m, j)]
         for m, j, mult in factors],
        q.n,
    )
    lhs = cache[(n, i)] * cache[(n - 1, i)]
    return lhs == product + 1
