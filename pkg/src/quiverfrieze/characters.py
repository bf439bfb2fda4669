"""Unified character API: arbitrary objects, Euler characteristics, reports,
and transport of characters to reoriented quivers."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    GraphMismatch,
    InternalMismatch,
    NotAModule,
    SectionSearchExhausted,
)
from .laurent import LaurentPoly, substitute_as_fraction
from .quivers import CanonicalModel, Quiver
from .transjective import (
    PostProjective,
    PreInjective,
    ShiftedProjective,
    ZQPoint,
    frieze_value,
    label_to_point,
    symbolic_init,
    unit_init,
)
from .tubes import CharacterCache, RegularIndex, regular_char


@dataclass(frozen=True)
class Transjective:
    label: object


@dataclass(frozen=True)
class Regular:
    index: RegularIndex


@dataclass(frozen=True)
class DirectSum:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


def regular(tag: str, k: int, length: int) -> Regular:
    return Regular(RegularIndex(tag, k, length))


def _walk_indecomposables(obj):
    if isinstance(obj, DirectSum):
        for part in obj.parts:
            yield from _walk_indecomposables(part)
    else:
        yield obj


def cluster_character(model: CanonicalModel, obj,
                      cache: CharacterCache = None) -> LaurentPoly:
    """Laurent expansion of the character of ``obj`` in the initial cluster.

    Transjective summands evaluate through the mesh frieze, regular ones
    through the tube machinery; direct sums multiply and the empty sum is 1.
    """
    ws = cache if cache is not None else CharacterCache(model)
    result = LaurentPoly.one(model.quiver.n)
    for part in _walk_indecomposables(obj):
        if isinstance(part, Transjective):
            result = result * ws.label_value(part.label)
        elif isinstance(part, Regular):
            result = result * regular_char(model, part.index, cache=ws)
        else:
            raise TypeError(f"not an object specification: {part!r}")
    return result


def _contains_shifted_projective(obj) -> bool:
    return any(
        isinstance(part, Transjective)
        and isinstance(part.label, ShiftedProjective)
        for part in _walk_indecomposables(obj)
    )


def euler_complete_grassmannian(model: CanonicalModel, obj,
                                cache: CharacterCache = None,
                                integer_cache: CharacterCache = None) -> int:
    """Euler characteristic of the complete grassmannian of ``obj``.

    Computed twice: once as the all-ones evaluation of the symbolic
    character and once in the integer frieze directly.  The two routes must
    agree; a disagreement is an invariant breach, not a soft warning.
    """
    if _contains_shifted_projective(obj):
        raise NotAModule(
            "shifted projectives are not modules; no grassmannian to measure"
        )
    symbolic = cache if cache is not None else CharacterCache(model)
    integer = (
        integer_cache
        if integer_cache is not None
        else CharacterCache(model, unit_init(model), budget=None)
    )
    via_ones = cluster_character(model, obj, cache=symbolic).eval_ones()
    direct = cluster_character(model, obj, cache=integer)
    if direct.monomial_count > 1 or direct.denominator_vector() != (0,) * model.quiver.n:
        raise InternalMismatch("integer frieze produced a non-constant value")
    direct_value = direct.eval_ones()
    if via_ones != direct_value:
        raise InternalMismatch(
            f"character route gives {via_ones}, integer frieze {direct_value}"
        )
    return direct_value


@dataclass(frozen=True)
class CharacterReport:
    polynomial: LaurentPoly
    monomial_count: int
    denominator_vector: tuple
    nonneg: bool


def character_report(model: CanonicalModel, obj,
                     cache: CharacterCache = None) -> CharacterReport:
    poly = cluster_character(model, obj, cache=cache)
    return CharacterReport(
        polynomial=poly,
        monomial_count=poly.monomial_count,
        denominator_vector=poly.denominator_vector(),
        nonneg=poly.is_nonneg(),
    )


# ----------------------------------------------------------------------
# orientation transport


def _check_same_graph(model: CanonicalModel, q_prime: Quiver, vertex_map):
    canonical = model.quiver
    if set(vertex_map) != set(canonical.vertices):
        raise GraphMismatch("vertex map must cover every canonical vertex")
    images = list(vertex_map.values())
    if len(set(images)) != len(images) or set(images) != set(q_prime.vertices):
        raise GraphMismatch("vertex map must be a bijection onto the target")
    mapped = sorted(
        tuple(sorted((vertex_map[s], vertex_map[t]))) for s, t in canonical.arrows
    )
    if tuple(mapped) != q_prime.underlying_edges():
        raise GraphMismatch("underlying graphs differ under the vertex map")


def _section_offsets(model: CanonicalModel, q_prime: Quiver, vertex_map):
    """Slice offsets placing the canonical initial section inside the target
    repetition quiver.

    Edges kept in the canonical direction force equal offsets; reversed
    edges force a unit step.  An inconsistent cycle (only possible on the
    non-tree types) means no such section exists.
    """
    canonical = model.quiver
    prime_pairs = {}
    for s, t in q_prime.arrows:
        prime_pairs[(s, t)] = prime_pairs.get((s, t), 0) + 1
    constraints = []
    for s, t in set(canonical.arrows):
        count = canonical.arrows.count((s, t))
        ms, mt = vertex_map[s], vertex_map[t]
        if prime_pairs.get((ms, mt), 0) == count:
            constraints.append((s, t, 0))
        elif prime_pairs.get((mt, ms), 0) == count:
            constraints.append((s, t, 1))
        else:
            raise GraphMismatch(
                f"arrows between {s} and {t} are split across directions"
            )
    adjacency = {v: [] for v in canonical.vertices}
    for s, t, step in constraints:
        # canonical arrow s -> t: offset(s) = offset(t) + step
        adjacency[s].append((t, step))
        adjacency[t].append((s, -step))
    offsets = {canonical.vertices[0]: 0}
    frontier = [canonical.vertices[0]]
    while frontier:
        v = frontier.pop()
        for w, step in adjacency[v]:
            value = offsets[v] - step
            if w in offsets:
                if offsets[w] != value:
                    raise SectionSearchExhausted(
                        "orientation change is inconsistent around a cycle"
                    )
            else:
                offsets[w] = value
                frontier.append(w)
    if len(offsets) != canonical.n:
        raise GraphMismatch("underlying graph is not connected")
    floor = min(offsets.values())
    return {v: o - floor for v, o in offsets.items()}


def reorient_character(model: CanonicalModel, q_prime: Quiver, vertex_map,
                       obj, cache: CharacterCache = None) -> LaurentPoly:
    """Character of ``obj`` written in the cluster of the reoriented quiver.

    Builds the frieze over the target quiver from its own initial cluster,
    locates the section realising the canonical orientation, reads off the
    expansion of each canonical variable there, and substitutes.
    """
    _check_same_graph(model, q_prime, vertex_map)
    offsets = _section_offsets(model, q_prime, vertex_map)
    prime_init = tuple(
        LaurentPoly.variable(q_prime.n, i) for i in range(q_prime.n)
    )
    prime_cache = {}
    images = []
    for v in model.quiver.vertices:
        point = ZQPoint(offsets[v], vertex_map[v])
        images.append(
            frieze_value(q_prime, point, prime_init, prime_cache)
        )
    base = cluster_character(model, obj, cache=cache)
    return substitute_as_fraction(base, images)
