"""Convolution *-algebras of finite topological groupoids, with twists.

Elements are finitely supported functions on arrows with exact Gaussian-
rational coefficients. The admissible function space is cut out by linear
constraints coming from the arrow topology: wherever an arrow sits inside
the minimal neighborhood of several arrows of one source (or range) fiber,
the function values are tied together (a sum rule for genuine multi-limit
clusters, an equality for a lone isotropy limit of a non-isotropy sheet).
On groupoids whose arrow space is fiberwise separated and discrete these
constraints are vacuous and the space is the full function space.

Convolution, involution, and regular representations follow the standard
fiberwise formulas, optionally twisted by a 2-cocycle; everything except
operator norms and eigenvalue clustering is computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    GroupoidMismatch,
    InvalidCocycle,
    NotClosed,
    UnknownPoint,
)
from .groupoid import Groupoid, HaarSystem, orbits
from .qlin import ONE, QC, ZERO, Echelon, nullspace, qc, to_complex_matrix

__all__ = [
    "AlgebraElement",
    "CcSpace",
    "Cocycle",
    "ConcreteAlgebra",
    "make_element",
    "delta",
    "zero_element",
    "element_vector",
    "vector_element",
    "cc_space",
    "make_cocycle",
    "trivial_cocycle",
    "convolve",
    "star",
    "regular_rep",
    "reduced_norm",
    "concrete_algebra",
    "block_structure",
    "block_decomposition",
]


@dataclass(eq=False)
class AlgebraElement:
    """Finitely supported arrow function with exact coefficients."""

    groupoid: Groupoid
    coeffs: Mapping[str, QC]

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(sorted(self.coeffs))

    def value(self, arrow: str) -> QC:
        return self.coeffs.get(arrow, ZERO)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.groupoid is other.groupoid
            and dict(self.coeffs) == dict(other.coeffs)
        )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same_groupoid(self, other)
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = out.get(a, ZERO) + v
        return AlgebraElement(self.groupoid, _prune(out))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def scale(self, factor) -> "AlgebraElement":
        f = qc(factor)
        return AlgebraElement(
            self.groupoid, _prune({a: f * v for a, v in self.coeffs.items()})
        )


def _prune(coeffs: Mapping[str, QC]) -> dict[str, QC]:
    return {a: v for a, v in coeffs.items() if v}


def _same_groupoid(*objs) -> Groupoid:
    g = objs[0].groupoid
    for o in objs[1:]:
        if o is not None and o.groupoid is not g:
            raise GroupoidMismatch("objects live over different groupoids")
    return g


def make_element(g: Groupoid, coeffs: Mapping[str, QC | int | Fraction]) -> AlgebraElement:
    aset = set(g.arrows)
    out: dict[str, QC] = {}
    for a, v in coeffs.items():
        if a not in aset:
            raise UnknownPoint(f"{a!r} is not an arrow of {g.name or 'the groupoid'}")
        out[a] = qc(v)
    return AlgebraElement(g, _prune(out))


def delta(g: Groupoid, arrow: str, value=1) -> AlgebraElement:
    return make_element(g, {arrow: value})


def zero_element(g: Groupoid) -> AlgebraElement:
    return AlgebraElement(g, {})


def element_vector(f: AlgebraElement) -> list[QC]:
    return [f.value(a) for a in f.groupoid.arrows]


def vector_element(g: Groupoid, vec: Sequence[QC]) -> AlgebraElement:
    return AlgebraElement(g, _prune({a: vec[i] for i, a in enumerate(g.arrows)}))


@dataclass(eq=False)
class CcSpace:
    """The admissible function subspace, as an explicit basis."""

    groupoid: Groupoid
    basis: tuple[AlgebraElement, ...]
    _span: Echelon = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, f: AlgebraElement) -> bool:
        if f.groupoid is not self.groupoid:
            raise GroupoidMismatch("element over a different groupoid")
        return self._span.contains(element_vector(f))


def _topology_constraints(g: Groupoid) -> list[list[QC]]:
    """Linear constraint rows over the arrow coordinates (sorted arrow order)."""
    idx = {a: i for i, a in enumerate(g.arrows)}
    n = len(g.arrows)
    rows: list[list[QC]] = []
    seen: set[tuple] = set()

    def emit(eta: str, cluster: list[str], summed: bool) -> None:
        row = [ZERO] * n
        row[idx[eta]] = ONE
        for gamma in cluster:
            row[idx[gamma]] = row[idx[gamma]] - ONE
        key = tuple((i, (x.re, x.im)) for i, x in enumerate(row) if x)
        if key not in seen:
            seen.add(key)
            rows.append(row)

    for eta in g.arrows:
        for vmap in (g.s, g.r):
            clusters: dict[str, list[str]] = {}
            for gamma in g.arrows:
                if gamma != eta and eta in g.topo.min_nbhd[gamma]:
                    clusters.setdefault(vmap[gamma], []).append(gamma)
            for cluster in clusters.values():
                if len(cluster) >= 2:
                    emit(eta, cluster, summed=True)
                elif len(cluster) == 1:
                    gamma = cluster[0]
                    if g.r[gamma] == g.s[gamma] and g.r[eta] != g.s[eta]:
                        emit(eta, cluster, summed=False)
    return rows


def cc_space(g: Groupoid) -> CcSpace:
    rows = _topology_constraints(g)
    vectors = nullspace(rows, ncols=len(g.arrows))
    basis = tuple(vector_element(g, v) for v in vectors)
    span = Echelon()
    for v in vectors:
        span.add(v)
    return CcSpace(groupoid=g, basis=basis, _span=span)


@dataclass(eq=False)
class Cocycle:
    """Unit-modulus 2-cocycle on composable pairs, normalized at units."""

    groupoid: Groupoid
    sigma: Mapping[tuple[str, str], QC]
    validated: bool

    def value(self, a: str, b: str) -> QC:
        return self.sigma[(a, b)]


def make_cocycle(g: Groupoid, sigma: Mapping[tuple[str, str], QC | int | Fraction], check: bool = True) -> Cocycle:
    table = {k: qc(v) for k, v in sigma.items()}
    if set(table) != set(g.comp):
        raise InvalidCocycle("sigma is not total on the composable pairs")
    for k, v in table.items():
        if v.abs2() != 1:
            raise InvalidCocycle(f"sigma{k!r} does not have modulus one")
    if check:
        units = g.unit_arrow_set
        for (a, b), v in table.items():
            if (a in units or b in units) and v != ONE:
                raise InvalidCocycle(f"sigma{(a, b)!r} not normalized at a unit")
        for (a, b), ab in g.comp.items():
            for c in g.r_fiber.get(g.s[b], ()):
                bc = g.comp[(b, c)]
                lhs = table[(a, b)] * table[(ab, c)]
                rhs = table[(b, c)] * table[(a, bc)]
                if lhs != rhs:
                    raise InvalidCocycle(f"cocycle identity fails at ({a!r},{b!r},{c!r})")
    return Cocycle(groupoid=g, sigma=table, validated=check)


def trivial_cocycle(g: Groupoid) -> Cocycle:
    return Cocycle(g, {k: ONE for k in g.comp}, validated=True)


def convolve(
    f: AlgebraElement,
    g: AlgebraElement,
    haar: HaarSystem | None = None,
    sigma: Cocycle | None = None,
) -> AlgebraElement:
    """Fiberwise convolution; each composable pair of support arrows contributes
    weight(inv(second)) * f(first) * g(second) * sigma(first, second) to the
    composite arrow."""
    gpd = _same_groupoid(f, g, haar, sigma)
    w = haar.weight if haar is not None else None
    out: dict[str, QC] = {}
    for alpha, fa in f.coeffs.items():
        for beta, gb in g.coeffs.items():
            if gpd.s[alpha] != gpd.r[beta]:
                continue
            term = fa * gb
            if w is not None:
                term = term * qc(w[gpd.inv[beta]])
            if sigma is not None:
                term = term * sigma.value(alpha, beta)
            gamma = gpd.comp[(alpha, beta)]
            out[gamma] = out.get(gamma, ZERO) + term
    return AlgebraElement(gpd, _prune(out))


def star(f: AlgebraElement, sigma: Cocycle | None = None) -> AlgebraElement:
    gpd = _same_groupoid(f, sigma)
    out: dict[str, QC] = {}
    for eta, v in f.coeffs.items():
        gamma = gpd.inv[eta]
        val = v.conj()
        if sigma is not None:
            val = val * sigma.value(gamma, eta).conj()
        out[gamma] = val
    return AlgebraElement(gpd, _prune(out))


def regular_rep(
    g: Groupoid,
    x: str,
    f: AlgebraElement,
    haar: HaarSystem | None = None,
    sigma: Cocycle | None = None,
) -> tuple[tuple[str, ...], list[list[QC]]]:
    """Matrix of left convolution by f on the source fiber at x.

    Entry [gamma, eta] is weight(inv(eta)) * f(gamma inv(eta)) * sigma(...)
    over the sorted fiber basis; returns (fiber, rows).
    """
    if x not in g.units.min_nbhd:
        raise UnknownPoint(f"{x!r} is not a unit point")
    _same_groupoid(f, haar, sigma)
    fiber = g.s_fiber.get(x, ())
    w = haar.weight if haar is not None else None
    rows: list[list[QC]] = []
    for gamma in fiber:
        row = []
        for eta in fiber:
            mid = g.comp[(gamma, g.inv[eta])]
            val = f.value(mid)
            if val:
                if w is not None:
                    val = val * qc(w[g.inv[eta]])
                if sigma is not None:
                    val = val * sigma.value(mid, eta)
            row.append(val)
        rows.append(row)
    return fiber, rows


def _fiber_weights(g: Groupoid, fiber: Sequence[str], haar: HaarSystem | None):
    if haar is None:
        return [Fraction(1)] * len(fiber)
    return [haar.weight[g.inv[eta]] for eta in fiber]


def reduced_norm(
    f: AlgebraElement,
    haar: HaarSystem | None = None,
    sigma: Cocycle | None = None,
) -> float:
    """Largest operator norm of the regular representations over all units.

    The fiber inner product weights each basis arrow by the Haar mass of its
    inverse, so the matrix is conjugated by the square-root weight diagonal
    before taking the largest singular value.
    """
    import numpy as np

    g = f.groupoid
    best = 0.0
    for x in g.units.points:
        fiber, rows = regular_rep(g, x, f, haar, sigma)
        if not fiber:
            continue
        m = to_complex_matrix(rows)
        weights = _fiber_weights(g, fiber, haar)
        if any(w != 1 for w in weights):
            d = np.sqrt(np.array([float(w) for w in weights]))
            m = (d[:, None] * m) / d[None, :]
        best = max(best, float(np.linalg.norm(m, 2)))
    return best


def _mat_mul(a: list[list[QC]], b: list[list[QC]]) -> list[list[QC]]:
    n = len(a)
    k = len(b)
    cols = len(b[0]) if b else 0
    out = [[ZERO] * cols for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            f = ai[t]
            if not f:
                continue
            bt = b[t]
            row = out[i]
            for j in range(cols):
                if bt[j]:
                    row[j] = row[j] + f * bt[j]
    return out


def _blocks_mul(a: Sequence[list[list[QC]]], b: Sequence[list[list[QC]]]):
    return tuple(_mat_mul(x, y) for x, y in zip(a, b))


def _blocks_flatten(blocks: Sequence[list[list[QC]]]) -> list[QC]:
    return [x for blk in blocks for row in blk for x in row]


def _blocks_weighted_adjoint(blocks, weight_diags):
    """Adjoint for the weighted fiber inner products: D^-1 M^H D per block."""
    out = []
    for blk, dw in zip(blocks, weight_diags):
        n = len(blk)
        adj = [
            [blk[j][i].conj() * qc(Fraction(dw[j]) / Fraction(dw[i])) for j in range(n)]
            for i in range(n)
        ]
        out.append(adj)
    return tuple(out)


@dataclass(eq=False)
class ConcreteAlgebra:
    """Block-matrix realization of the admissible function space.

    One regular representation per orbit is kept; `basis_blocks` are the
    images of the cc basis (a faithful copy of the span), `closed_blocks`
    additionally close that span under products — the finite-dimensional
    stand-in for completion.
    """

    groupoid: Groupoid
    haar: HaarSystem
    sigma: Cocycle | None
    cc: CcSpace
    orbit_reps: tuple[str, ...]
    fibers: Mapping[str, tuple[str, ...]]
    basis_blocks: list
    closed_blocks: list

    @property
    def block_shapes(self) -> tuple[int, ...]:
        return tuple(len(self.fibers[x]) for x in self.orbit_reps)

    @property
    def span_dim(self) -> int:
        return len(self.basis_blocks)

    @property
    def dim(self) -> int:
        return len(self.closed_blocks)

    @property
    def is_closed_span(self) -> bool:
        return self.span_dim == self.dim

    def represent(self, f: AlgebraElement):
        return tuple(
            regular_rep(self.groupoid, x, f, self.haar, self.sigma)[1]
            for x in self.orbit_reps
        )

    def weight_diags(self) -> list[list[Fraction]]:
        return [
            _fiber_weights(self.groupoid, self.fibers[x], self.haar)
            for x in self.orbit_reps
        ]


def concrete_algebra(
    g: Groupoid,
    sigma: Cocycle | None = None,
    haar: HaarSystem | None = None,
) -> ConcreteAlgebra:
    haar = haar if haar is not None else HaarSystem.counting(g)
    cc = cc_space(g)
    reps = tuple(orb[0] for orb in orbits(g))
    fibers = {x: g.s_fiber.get(x, ()) for x in reps}
    basis_blocks = []
    span = Echelon()
    for f in cc.basis:
        blocks = tuple(regular_rep(g, x, f, haar, sigma)[1] for x in reps)
        added = span.add(_blocks_flatten(blocks))
        assert added, "representation must be faithful on the admissible space"
        basis_blocks.append(blocks)

    closed = list(basis_blocks)
    closure = Echelon()
    for blocks in closed:
        closure.add(_blocks_flatten(blocks))
    while True:
        grew = False
        current = list(closed)
        for a in current:
            for b in current:
                p = _blocks_mul(a, b)
                if closure.add(_blocks_flatten(p)):
                    closed.append(p)
                    grew = True
        if not grew:
            break
    return ConcreteAlgebra(
        groupoid=g,
        haar=haar,
        sigma=sigma,
        cc=cc,
        orbit_reps=reps,
        fibers=fibers,
        basis_blocks=basis_blocks,
        closed_blocks=closed,
    )


def _split_by_hermitian(subspaces, h, tol):
    import numpy as np

    out = []
    for q in subspaces:
        if q.shape[1] == 1:
            out.append(q)
            continue
        s = q.conj().T @ h @ q
        s = (s + s.conj().T) / 2
        vals, vecs = np.linalg.eigh(s)
        start = 0
        for i in range(1, len(vals) + 1):
            if i == len(vals) or vals[i] - vals[i - 1] > tol:
                out.append(q @ vecs[:, start:i])
                start = i
    return out


def block_structure(algebra: ConcreteAlgebra, basis_blocks=None, tol: float = 1e-9) -> dict:
    """Simple-block analysis of a product-closed matrix algebra.

    Validates closure under products and the (weighted) adjoint, computes the
    center exactly, splits the representation space into joint eigenspaces of
    the conjugated central elements, and sizes each simple block by the rank
    of the restricted algebra. Returns sizes plus the per-block subspaces.
    """
    import numpy as np

    basis = basis_blocks if basis_blocks is not None else algebra.closed_blocks
    if not basis:
        return {"sizes": (), "subspaces": [], "conjugated": []}
    weight_diags = algebra.weight_diags()

    span = Echelon()
    for blocks in basis:
        span.add(_blocks_flatten(blocks))
    for a in basis:
        if not span.contains(_blocks_flatten(_blocks_weighted_adjoint(a, weight_diags))):
            raise NotClosed("subspace is not closed under the involution")
        for b in basis:
            if not span.contains(_blocks_flatten(_blocks_mul(a, b))):
                raise NotClosed("subspace is not closed under multiplication")

    k = len(basis)
    flat_len = len(_blocks_flatten(basis[0]))
    commut_rows = []
    for j in range(k):
        diffs = [
            _blocks_flatten(
                tuple(
                    [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(p, q)]
                    for p, q in zip(_blocks_mul(basis[i], basis[j]), _blocks_mul(basis[j], basis[i]))
                )
            )
            for i in range(k)
        ]
        for coord in range(flat_len):
            row = [diffs[i][coord] for i in range(k)]
            if any(row):
                commut_rows.append(row)
    center_coeffs = nullspace(commut_rows, ncols=k)

    sqrt_w = [np.sqrt(np.array([float(w) for w in dw])) for dw in weight_diags]

    def conjugated(blocks):
        mats = []
        for blk, d in zip(blocks, sqrt_w):
            m = to_complex_matrix(blk)
            mats.append((d[:, None] * m) / d[None, :])
        return _np_block_diag(mats)

    conj_basis = [conjugated(b) for b in basis]
    total = conj_basis[0].shape[0]
    subspaces = [np.eye(total, dtype=complex)]
    for coeffs in center_coeffs:
        c = sum(
            (complex(v.to_complex()) * m for v, m in zip(coeffs, conj_basis)),
            start=np.zeros((total, total), dtype=complex),
        )
        for h in ((c + c.conj().T) / 2, (c - c.conj().T) / 2j):
            subspaces = _split_by_hermitian(subspaces, h, tol)

    sizes = []
    kept = []
    for q in subspaces:
        rows = np.array([(q.conj().T @ m @ q).ravel() for m in conj_basis])
        svals = np.linalg.svd(rows, compute_uv=False)
        cut = tol * max(1.0, float(svals[0])) if len(svals) else 0.0
        r = int((svals > cut).sum())
        n = math.isqrt(r)
        assert n * n == r, "restricted block is not a full matrix algebra"
        if n:
            sizes.append(n)
            kept.append(q)
    assert sum(n * n for n in sizes) == k, "block sizes must account for the dimension"
    return {"sizes": tuple(sizes), "subspaces": kept, "conjugated": conj_basis}


def _np_block_diag(mats):
    import numpy as np

    total = sum(m.shape[0] for m in mats)
    out = np.zeros((total, total), dtype=complex)
    at = 0
    for m in mats:
        n = m.shape[0]
        out[at : at + n, at : at + n] = m
        at += n
    return out


def block_decomposition(algebra: ConcreteAlgebra, basis_blocks=None) -> tuple[int, ...]:
    """Multiset of simple-block sizes, largest first."""
    sizes = block_structure(algebra, basis_blocks)["sizes"]
    return tuple(sorted(sizes, reverse=True))
