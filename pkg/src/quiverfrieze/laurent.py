"""Sparse multivariate Laurent polynomials with exact integer coefficients.

Terms are kept as a pair of parallel arrays: an ``(n_terms, n_vars)`` integer
exponent matrix (negative exponents allowed) and a coefficient vector.  Rows
are always stored in graded-lexicographic *descending* order, which makes
rendering, hashing-free equality and exact division deterministic.

Coefficients are ``int64`` while provably safe and fall back to Python
integers (object dtype) otherwise, so no operation can silently overflow.
"""

from __future__ import annotations

import heapq
import json
import math
import re

import numpy as np

from .errors import InexactDivision

# Pair products and grouped sums stay below 2**62 under this bound.
_SAFE_BITS = 62

# Above this many exponent-pair operations, multiplication switches from the
# plain dict loop to the vectorised path.
_VECTOR_THRESHOLD = 4096

_CHUNK_ROWS = 4_000_000

# Products whose exponent box is small relative to the pair count run on a
# dense grid instead; heavy coefficient pile-up makes this regime common for
# deep frieze slices.
_DENSE_MAX_CELLS = 40_000_000
_DENSE_TRIGGER_PAIRS = 20_000_000


def _as_coeff_array(values):
    arr = np.array(values, dtype=object)
    if arr.size == 0:
        return arr.astype(np.int64)
    top = max(abs(int(v)) for v in values)
    if top < (1 << _SAFE_BITS):
        return np.array([int(v) for v in values], dtype=np.int64)
    return arr


def _canonical_order(exps: np.ndarray) -> np.ndarray:
    """Indices sorting rows graded-lex descending (total degree, then vars)."""
    keys = [exps[:, j] for j in range(exps.shape[1] - 1, -1, -1)]
    keys.append(exps.sum(axis=1))
    return np.lexsort(keys)[::-1]


def _group(exps: np.ndarray, coeffs: np.ndarray):
    """Combine duplicate exponent rows and drop zero coefficients."""
    if len(coeffs) == 0:
        return exps.reshape(0, exps.shape[1]), coeffs
    order = _canonical_order(exps)
    exps = exps[order]
    coeffs = coeffs[order]
    if len(coeffs) > 1:
        fresh = np.empty(len(coeffs), dtype=bool)
        fresh[0] = True
        np.any(exps[1:] != exps[:-1], axis=1, out=fresh[1:])
        starts = np.flatnonzero(fresh)
        if len(starts) != len(coeffs):
            if coeffs.dtype == np.int64:
                top = int(np.abs(coeffs).max()) if len(coeffs) else 0
                if top and math.log2(top) + math.log2(len(coeffs)) > _SAFE_BITS:
                    coeffs = coeffs.astype(object)
            coeffs = np.add.reduceat(coeffs, starts)
            exps = exps[starts]
    keep = coeffs != 0
    if not keep.all():
        exps = exps[keep]
        coeffs = coeffs[keep]
    if coeffs.dtype == object and len(coeffs):
        coeffs = _as_coeff_array(list(coeffs))
    return exps, coeffs


class LaurentPoly:
    """Immutable sparse Laurent polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "_exps", "_coeffs")

    def __init__(self, nvars: int, terms=None, _internal=None):
        self.nvars = int(nvars)
        if _internal is not None:
            exps, coeffs = _internal
            self._exps = exps
            self._coeffs = coeffs
            return
        items = []
        if terms:
            items = list(terms.items() if isinstance(terms, dict) else terms)
        if not items:
            self._exps = np.zeros((0, self.nvars), dtype=np.int64)
            self._coeffs = np.zeros(0, dtype=np.int64)
            return
        exps = np.array([list(e) for e, _ in items], dtype=np.int64)
        if exps.shape[1] != self.nvars:
            raise ValueError("exponent arity mismatch")
        coeffs = _as_coeff_array([c for _, c in items])
        self._exps, self._coeffs = _group(exps, coeffs)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: int) -> "LaurentPoly":
        if value == 0:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: int(value)})

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int, power: int = 1) -> "LaurentPoly":
        exp = [0] * nvars
        exp[index] = power
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def monomial(cls, nvars: int, exponents, coeff: int = 1) -> "LaurentPoly":
        return cls(nvars, {tuple(int(e) for e in exponents): int(coeff)})

    @classmethod
    def _raw(cls, nvars: int, exps: np.ndarray, coeffs: np.ndarray) -> "LaurentPoly":
        return cls(nvars, _internal=(exps, coeffs))

    # ------------------------------------------------------------------
    # basic queries

    @property
    def monomial_count(self) -> int:
        return len(self._coeffs)

    @property
    def is_zero(self) -> bool:
        return len(self._coeffs) == 0

    def terms(self) -> dict:
        """Terms as ``{exponent tuple: coefficient}`` (a fresh dict)."""
        return {
            tuple(int(x) for x in e): int(c)
            for e, c in zip(self._exps, self._coeffs)
        }

    def leading_term(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return tuple(int(x) for x in self._exps[0]), int(self._coeffs[0])

    def eval_ones(self) -> int:
        """Sum of coefficients (the image under every variable -> 1)."""
        return sum(int(c) for c in self._coeffs)

    def denominator_vector(self):
        """Per-variable ``max(0, -min exponent)`` over all terms."""
        if self.is_zero:
            return tuple([0] * self.nvars)
        mins = self._exps.min(axis=0)
        return tuple(int(max(0, -m)) for m in mins)

    def is_nonneg(self) -> bool:
        return all(int(c) >= 0 for c in self._coeffs)

    def min_exponents(self):
        if self.is_zero:
            return tuple([0] * self.nvars)
        return tuple(int(m) for m in self._exps.min(axis=0))

    def coefficient(self, exponents) -> int:
        target = np.array(exponents, dtype=np.int64)
        hits = np.flatnonzero(np.all(self._exps == target, axis=1))
        return int(self._coeffs[hits[0]]) if len(hits) else 0

    # ------------------------------------------------------------------
    # ring operations

    def _check_arity(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable arity mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.nvars, other)
        self._check_arity(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        exps = np.concatenate([self._exps, other._exps])
        a, b = self._coeffs, other._coeffs
        if a.dtype != b.dtype:
            a = a.astype(object)
            b = b.astype(object)
        coeffs = np.concatenate([a, b])
        return LaurentPoly._raw(self.nvars, *_group(exps, coeffs))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, self._exps, -self._coeffs)

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly.zero(self.nvars)
            coeffs = self._coeffs * other
            if coeffs.dtype == np.int64:
                top = int(np.abs(self._coeffs).max()) if len(coeffs) else 0
                if top and math.log2(top) + math.log2(abs(other) + 1) > _SAFE_BITS:
                    coeffs = self._coeffs.astype(object) * other
            return LaurentPoly._raw(self.nvars, self._exps, coeffs)
        self._check_arity(other)
        if self.is_zero or other.is_zero:
            return LaurentPoly.zero(self.nvars)
        na, nb = self.monomial_count, other.monomial_count
        if na * nb <= _VECTOR_THRESHOLD:
            return self._mul_small(other)
        if na * nb >= _DENSE_TRIGGER_PAIRS:
            dense = self._mul_dense(other)
            if dense is not None:
                return dense
        return self._mul_vector(other)

    __rmul__ = __mul__

    def _mul_small(self, other):
        out = {}
        for ea, ca in zip(self._exps.tolist(), self._coeffs.tolist()):
            for eb, cb in zip(other._exps.tolist(), other._coeffs.tolist()):
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ca * cb
        return LaurentPoly(self.nvars, out)

    def _mul_vector(self, other):
        a, b = self, other
        if a.monomial_count > b.monomial_count:
            a, b = b, a
        ea, ca = a._exps, a._coeffs
        eb, cb = b._exps, b._coeffs
        top_a = int(max(abs(int(c)) for c in ca))
        top_b = int(max(abs(int(c)) for c in cb))
        bits = math.log2(top_a + 1) + math.log2(top_b + 1) + math.log2(len(ca))
        use_object = ca.dtype == object or cb.dtype == object or bits > _SAFE_BITS
        if use_object:
            ca = ca.astype(object)
            cb = cb.astype(object)
        nb = len(cb)
        chunk = max(1, _CHUNK_ROWS // nb)
        blocks_e, blocks_c = [], []
        for start in range(0, len(ca), chunk):
            ae = ea[start:start + chunk]
            ac = ca[start:start + chunk]
            pe = (ae[:, None, :] + eb[None, :, :]).reshape(-1, self.nvars)
            pc = (ac[:, None] * cb[None, :]).reshape(-1)
            pe, pc = _group(pe, pc)
            blocks_e.append(pe)
            blocks_c.append(pc)
        if len(blocks_e) == 1:
            exps, coeffs = blocks_e[0], blocks_c[0]
        else:
            if any(c.dtype == object for c in blocks_c):
                blocks_c = [c.astype(object) for c in blocks_c]
            exps, coeffs = _group(
                np.concatenate(blocks_e), np.concatenate(blocks_c)
            )
        return LaurentPoly._raw(self.nvars, exps, coeffs)

    def _mul_dense(self, other):
        """Grid-accumulation product; returns None when the regime is wrong.

        The factor with more terms is laid out densely on its exponent box
        and shifted copies are accumulated, one per term of the other
        factor.  Only safe with int64 coefficient bounds.
        """
        a, b = self, other
        if a.monomial_count < b.monomial_count:
            a, b = b, a
        if a._coeffs.dtype == object or b._coeffs.dtype == object:
            return None
        top_a = int(np.abs(a._coeffs).max())
        top_b = int(np.abs(b._coeffs).max())
        bits = (
            math.log2(top_a + 1)
            + math.log2(top_b + 1)
            + math.log2(min(a.monomial_count, b.monomial_count) + 1)
        )
        if bits > _SAFE_BITS:
            return None
        lo_a = a._exps.min(axis=0)
        lo_b = b._exps.min(axis=0)
        span_a = a._exps.max(axis=0) - lo_a + 1
        span_b = b._exps.max(axis=0) - lo_b + 1
        out_span = span_a + span_b - 1
        cells = 1
        for s in out_span:
            cells *= int(s)
            if cells > _DENSE_MAX_CELLS:
                return None
        if cells > 2 * a.monomial_count * b.monomial_count:
            return None
        grid_a = np.zeros(tuple(int(s) for s in span_a), dtype=np.int64)
        grid_a[tuple((a._exps - lo_a).T)] = a._coeffs
        out = np.zeros(tuple(int(s) for s in out_span), dtype=np.int64)
        window = tuple(int(s) for s in span_a)
        for row, coeff in zip((b._exps - lo_b).tolist(), b._coeffs.tolist()):
            region = tuple(
                slice(o, o + w) for o, w in zip(row, window)
            )
            if coeff == 1:
                out[region] += grid_a
            else:
                out[region] += coeff * grid_a
        flat = np.flatnonzero(out.reshape(-1))
        coeffs = out.reshape(-1)[flat]
        exps = np.stack(np.unravel_index(flat, out.shape), axis=1).astype(np.int64)
        exps += lo_a + lo_b
        order = _canonical_order(exps)
        return LaurentPoly._raw(self.nvars, exps[order], coeffs[order])

    def __pow__(self, power: int):
        if power < 0:
            raise ValueError("negative powers require division; use exact_div")
        result = LaurentPoly.one(self.nvars)
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def shift(self, exponents) -> "LaurentPoly":
        """Multiply by the monomial with the given exponent vector."""
        if self.is_zero:
            return self
        delta = np.array(exponents, dtype=np.int64)
        return LaurentPoly._raw(self.nvars, self._exps + delta, self._coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self._exps.shape == other._exps.shape
            and np.array_equal(self._exps, other._exps)
            and [int(c) for c in self._coeffs] == [int(c) for c in other._coeffs]
        )

    def __hash__(self):
        return hash(
            (
                self.nvars,
                self._exps.tobytes(),
                tuple(int(c) for c in self._coeffs),
            )
        )

    def __repr__(self):
        if self.monomial_count > 8:
            return f"<LaurentPoly {self.monomial_count} terms, {self.nvars} vars>"
        return f"<LaurentPoly {self.render()}>"

    # ------------------------------------------------------------------
    # rendering and parsing

    def render(self, names=None) -> str:
        """Canonical text form, terms in graded-lex descending order."""
        if names is None:
            names = [f"u{i}" for i in range(self.nvars)]
        if self.is_zero:
            return "0"
        pieces = []
        for row, coeff in zip(self._exps.tolist(), self._coeffs.tolist()):
            factors = [
                f"{names[i]}" if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(row)
                if e != 0
            ]
            mono = "*".join(factors)
            c = int(coeff)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(("+ " if c > 0 else "- ") + body)
        return " ".join(pieces)

    @classmethod
    def parse(cls, text: str, names) -> "LaurentPoly":
        """Inverse of :meth:`render` for the given variable names."""
        index = {name: i for i, name in enumerate(names)}
        nvars = len(names)
        stripped = text.strip()
        if stripped == "0":
            return cls.zero(nvars)
        chunks = re.split(r"\s+([+-])\s+", stripped)
        terms = []
        sign = 1
        first = chunks[0]
        if first.startswith("-"):
            sign = -1
            first = first[1:].strip()
        queue = [(sign, first)]
        for op, body in zip(chunks[1::2], chunks[2::2]):
            queue.append((1 if op == "+" else -1, body))
        for sgn, body in queue:
            coeff = sgn
            exps = [0] * nvars
            for factor in body.split("*"):
                factor = factor.strip()
                if not factor:
                    raise ValueError(f"empty factor in term {body!r}")
                if re.fullmatch(r"\d+", factor):
                    coeff *= int(factor)
                    continue
                m = re.fullmatch(r"([^\^]+)(?:\^(-?\d+))?", factor)
                if not m or m.group(1) not in index:
                    raise ValueError(f"unknown factor {factor!r}")
                exps[index[m.group(1)]] += int(m.group(2) or 1)
            terms.append((tuple(exps), coeff))
        out = {}
        for e, c in terms:
            out[e] = out.get(e, 0) + c
        return cls(nvars, out)

    def to_json(self, names) -> dict:
        return {
            "vars": list(names),
            "terms": [
                {"c": str(int(c)), "e": [int(x) for x in e]}
                for e, c in zip(self._exps, self._coeffs)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        nvars = len(data["vars"])
        return cls(
            nvars,
            [(tuple(t["e"]), int(t["c"])) for t in data["terms"]],
        )

    # ------------------------------------------------------------------
    # division and substitution

    def exact_div(self, den: "LaurentPoly") -> "LaurentPoly":
        return exact_div(self, den)

    def substitute_as_fraction(self, images) -> "LaurentPoly":
        return substitute_as_fraction(self, images)


def _degree_buckets(exps, coeffs):
    """Split term arrays into a {degree: [(exps, coeffs), ...]} map."""
    degrees = exps.sum(axis=1)
    buckets = {}
    for d in np.unique(degrees):
        mask = degrees == d
        buckets.setdefault(int(d), []).append((exps[mask], coeffs[mask]))
    return buckets


def _hom_div(n_exps, n_coeffs, d_top, nvars):
    """Divide one homogeneous slice by the divisor's top-degree slice.

    Both inputs are homogeneous, so graded-lex maxima reduce to plain
    lexicographic maxima on exponent tuples.  Raises InexactDivision if any
    cancellation step fails; exactness of the enclosing division guarantees
    it never does for consistent data.
    """
    lead_e, lead_c = d_top[0]
    rest = d_top[1:]
    work = {}
    heap = []
    for e, c in zip(n_exps.tolist(), n_coeffs.tolist()):
        key = tuple(e)
        work[key] = work.get(key, 0) + int(c)
        heapq.heappush(heap, tuple(-x for x in key))
    q = {}
    while heap:
        neg = heapq.heappop(heap)
        key = tuple(-x for x in neg)
        c = work.pop(key, 0)
        if c == 0:
            continue
        q_e = tuple(a - b for a, b in zip(key, lead_e))
        if any(x < 0 for x in q_e):
            raise InexactDivision("leading exponent not divisible")
        q_c, rem = divmod(c, lead_c)
        if rem:
            raise InexactDivision("leading coefficient not divisible")
        q[q_e] = q.get(q_e, 0) + q_c
        for de, dc in rest:
            kk = tuple(a + b for a, b in zip(q_e, de))
            if kk not in work:
                heapq.heappush(heap, tuple(-x for x in kk))
                work[kk] = -q_c * dc
            else:
                work[kk] -= q_c * dc
    return q


# Tally of exact divisions attempted/failed, for invariant reporting.
division_stats = {"attempted": 0, "failed": 0}


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``num / den`` in the Laurent ring.

    Both operands are normalised to ordinary polynomials by factoring out
    their minimal monomials; the polynomial division then proceeds one
    graded slice at a time (top total degree first), so only the divisor's
    top-degree slice is handled term-by-term while the bulk subtraction
    stays vectorised.  Any failed cancellation raises InexactDivision.
    """
    if den.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    division_stats["attempted"] += 1
    nvars = num.nvars
    if num.is_zero:
        return LaurentPoly.zero(nvars)
    if num.nvars != den.nvars:
        raise ValueError("variable arity mismatch")

    try:
        return _exact_div_inner(num, den)
    except InexactDivision:
        division_stats["failed"] += 1
        raise


def _exact_div_inner(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    nvars = num.nvars
    num_shift = np.array(num.min_exponents(), dtype=np.int64)
    den_shift = np.array(den.min_exponents(), dtype=np.int64)
    back_shift = num_shift - den_shift

    n_exps = num._exps - num_shift
    n_coeffs = num._coeffs
    d_exps = den._exps - den_shift
    d_coeffs = den._coeffs

    # Monomial divisor: a plain shift.
    if len(d_coeffs) == 1:
        lc = int(d_coeffs[0])
        out = []
        for c in n_coeffs:
            q, r = divmod(int(c), lc)
            if r:
                raise InexactDivision("coefficient not divisible by monomial")
            out.append(q)
        exps = n_exps - d_exps[0] + back_shift
        return LaurentPoly._raw(nvars, exps, _as_coeff_array(out))

    d_degrees = d_exps.sum(axis=1)
    d_max = int(d_degrees.max())
    top_mask = d_degrees == d_max
    d_top_exps = d_exps[top_mask]
    d_top_coeffs = d_coeffs[top_mask]
    top_order = _canonical_order(d_top_exps)
    d_top = [
        (tuple(int(x) for x in d_top_exps[i]), int(d_top_coeffs[i]))
        for i in top_order
    ]
    rest_mask = ~top_mask
    d_rest = LaurentPoly._raw(nvars, d_exps[rest_mask], d_coeffs[rest_mask])

    buckets = _degree_buckets(n_exps, n_coeffs)
    q_blocks = []
    while buckets:
        deg = max(buckets)
        blocks = buckets.pop(deg)
        if len(blocks) == 1:
            exps, coeffs = blocks[0]
        else:
            cs = [c for _, c in blocks]
            if any(c.dtype == object for c in cs):
                cs = [c.astype(object) for c in cs]
            exps, coeffs = _group(
                np.concatenate([e for e, _ in blocks]), np.concatenate(cs)
            )
        if len(coeffs) == 0:
            continue
        if deg < d_max:
            raise InexactDivision("remainder of lower degree than divisor")
        q_slice = _hom_div(exps, coeffs, d_top, nvars)
        if not q_slice:
            continue
        q_blocks.append(q_slice)
        if not d_rest.is_zero:
            piece = LaurentPoly(nvars, q_slice) * d_rest
            if not piece.is_zero:
                for d, sub in _degree_buckets(piece._exps, -piece._coeffs).items():
                    buckets.setdefault(d, []).extend(sub)

    combined = {}
    for block in q_blocks:
        for e, c in block.items():
            combined[e] = combined.get(e, 0) + c
    quotient = LaurentPoly(nvars, combined)
    return quotient.shift(back_shift)


def poly_prod(factors, nvars: int) -> LaurentPoly:
    """Product of several polynomials, smallest term counts multiplied first."""
    pending = [f for f in factors]
    if not pending:
        return LaurentPoly.one(nvars)
    pending.sort(key=lambda p: p.monomial_count)
    result = pending[0]
    for f in pending[1:]:
        result = result * f
    return result


def poly_sum(terms, nvars: int) -> LaurentPoly:
    acc = LaurentPoly.zero(nvars)
    for t in terms:
        acc = acc + t
    return acc


def substitute_as_fraction(p: LaurentPoly, images) -> LaurentPoly:
    """Evaluate ``p`` at the given (nonzero) Laurent-polynomial images.

    Writes ``p = N(u) / prod_i u_i^{d_i}`` with ``N`` an ordinary polynomial
    and ``d`` the denominator vector, then returns the exact quotient
    ``N(images) / prod_i images_i^{d_i}``.  A failed division propagates as
    InexactDivision.
    """
    images = list(images)
    if len(images) != p.nvars:
        raise ValueError("one image required per variable")
    for img in images:
        if img.is_zero:
            raise ValueError("images must be nonzero")
    target_arity = images[0].nvars
    if any(img.nvars != target_arity for img in images):
        raise ValueError("images must share one arity")
    if p.is_zero:
        return LaurentPoly.zero(target_arity)

    d = p.denominator_vector()
    power_cache = {}

    def img_power(i, k):
        key = (i, k)
        if key not in power_cache:
            power_cache[key] = images[i] ** k
        return power_cache[key]

    numerator_terms = []
    for row, coeff in zip(p._exps.tolist(), p._coeffs.tolist()):
        factors = [
            img_power(i, e + d[i])
            for i, e in enumerate(row)
            if e + d[i] > 0
        ]
        term = poly_prod(factors, target_arity)
        numerator_terms.append(term * int(coeff))
    numerator = poly_sum(numerator_terms, target_arity)
    denominator = poly_prod(
        [img_power(i, d[i]) for i in range(p.nvars) if d[i] > 0], target_arity
    )
    return exact_div(numerator, denominator)
