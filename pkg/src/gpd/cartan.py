"""Diagonal-pair diagnostics for groupoid convolution algebras.

The pair under study is (A, B): A the represented convolution algebra of a
finite topological groupoid (optionally twisted, optionally weighted) and B
its unit subalgebra — the admissible functions supported on unit arrows.
The four classical conditions are tested in their exact finite forms:

1. B contains a two-sided identity for the admissible span.
2. B is maximal abelian: its commutant inside the span is B itself.
3. B is regular: elements supported on single bisections normalize B and
   span the admissible space ("verified" / "not verified" — the test is a
   sufficient spanning family, not a quantification over all normalizers).
4. Restriction to unit arrows is a faithful positive idempotent expectation.

On top of that: pure-state extension counting over the spectrum of B, and
the reconstruction of the orbit relation from the pair alone.

All structural answers (membership, commutants, solvability, positivity)
are exact; floating point enters only through the block-refinement ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    AlgebraElement,
    CcSpace,
    Cocycle,
    ConcreteAlgebra,
    _blocks_flatten,
    _blocks_mul,
    _topology_constraints,
    block_structure,
    cc_space,
    concrete_algebra,
    convolve,
    delta,
    element_vector,
    make_element,
    star,
    vector_element,
    zero_element,
)
from .errors import GroupoidMismatch, NotMasa, WrongShape
from .germs import ActionSystem, compose, germ_arrow
from .groupoid import Groupoid, HaarSystem, orbits, relation_groupoid
from .finitetop import make_space
from .qlin import (
    ONE,
    QC,
    ZERO,
    Echelon,
    hermitian_is_pd,
    hermitian_is_psd,
    nullspace,
    qc,
    solve,
    to_complex_matrix,
)

__all__ = [
    "UnitSubalgebra",
    "CartanReport",
    "unit_subalgebra",
    "minimal_idempotents",
    "cartan_report",
    "skandalis_element",
    "uep_report",
    "weyl_relation",
    "orbit_class_sizes",
    "diagonal_report",
]


@dataclass(eq=False)
class UnitSubalgebra:
    """Admissible functions supported on unit arrows."""

    groupoid: Groupoid
    basis: tuple[AlgebraElement, ...]
    _span: Echelon

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, f: AlgebraElement) -> bool:
        if f.groupoid is not self.groupoid:
            raise GroupoidMismatch("element over a different groupoid")
        return self._span.contains(element_vector(f))


def unit_subalgebra(g: Groupoid, cc: CcSpace | None = None) -> UnitSubalgebra:
    rows = _topology_constraints(g)
    units = g.unit_arrow_set
    n = len(g.arrows)
    for i, a in enumerate(g.arrows):
        if a not in units:
            row = [ZERO] * n
            row[i] = ONE
            rows.append(row)
    vectors = nullspace(rows, ncols=n)
    span = Echelon()
    for v in vectors:
        span.add(v)
    return UnitSubalgebra(
        groupoid=g,
        basis=tuple(vector_element(g, v) for v in vectors),
        _span=span,
    )


def _unit_weight(g: Groupoid, haar: HaarSystem, x: str) -> Fraction:
    return haar.weight[g.unit_arrow[x]]


def minimal_idempotents(
    b: UnitSubalgebra, haar: HaarSystem | None = None
) -> list[tuple[tuple[str, ...], AlgebraElement]]:
    """Spectrum of the commutative algebra B as (point class, idempotent) pairs.

    The multiplicative functionals of B are indexed by unit points with the
    weight-normalized evaluation; points indistinguishable on B merge into
    one class, points on which B vanishes identically drop out. Each class
    must contribute its indicator idempotent to B, otherwise B is not
    spanned by projections and the spectrum picture breaks down (NotMasa).
    """
    g = b.groupoid
    haar = haar if haar is not None else HaarSystem.counting(g)
    for p in b.basis:
        for q in b.basis:
            if not b.contains(convolve(p, q, haar)):
                raise NotMasa("unit subalgebra is not closed under products")
    evals: dict[str, tuple] = {}
    for x in g.units.points:
        w = _unit_weight(g, haar, x)
        vals = tuple(
            tuple((qc(w) * p.value(g.unit_arrow[x])).as_quad()) for p in b.basis
        )
        evals[x] = vals
    classes: dict[tuple, list[str]] = {}
    for x, vals in evals.items():
        if any(any(v) for v in vals):
            classes.setdefault(vals, []).append(x)
    out = []
    for vals, pts in sorted(classes.items(), key=lambda kv: sorted(kv[1])):
        e = make_element(
            g,
            {
                g.unit_arrow[x]: qc(Fraction(1) / _unit_weight(g, haar, x))
                for x in pts
            },
        )
        if not b.contains(e):
            raise NotMasa(
                "unit subalgebra does not contain its class indicator "
                f"at points {sorted(pts)}"
            )
        out.append((tuple(sorted(pts)), e))
    return out


@dataclass(eq=False)
class CartanReport:
    contains_unit: bool
    unit_element: AlgebraElement | None
    masa: bool
    commutant_dim: int
    masa_witness: AlgebraElement | None
    regular: str
    regular_family: tuple[AlgebraElement, ...]
    expectation: dict
    overall: bool


def _commutant_of_units(
    g: Groupoid,
    cc: CcSpace,
    b: UnitSubalgebra,
    haar: HaarSystem,
    sigma: Cocycle | None,
) -> list[list[QC]]:
    """Coefficient vectors (over the cc basis) of the commutant of B."""
    arrows = g.arrows
    rows: list[list[QC]] = []
    for bj in b.basis:
        diffs = [
            element_vector(convolve(mi, bj, haar, sigma) - convolve(bj, mi, haar, sigma))
            for mi in cc.basis
        ]
        for coord in range(len(arrows)):
            row = [d[coord] for d in diffs]
            if any(row):
                rows.append(row)
    return nullspace(rows, ncols=cc.dim)


def _support_in_open_bisection(g: Groupoid, f: AlgebraElement) -> bool:
    """Is the support a bisection (ranges and sources both injective)?

    The open hull of the support is also recorded implicitly: supports of
    admissible candidates are always unions of constraint clusters, so the
    injectivity of r and s on the support itself is the binding condition
    at finite scale (an open superset never restores injectivity).
    """
    supp = f.support
    rs = [g.r[a] for a in supp]
    ss = [g.s[a] for a in supp]
    return len(set(rs)) == len(rs) and len(set(ss)) == len(ss)


def _normalizes(
    a: AlgebraElement,
    b: UnitSubalgebra,
    haar: HaarSystem,
    sigma: Cocycle | None,
) -> bool:
    a_star = star(a, sigma)
    for bj in b.basis:
        left = convolve(convolve(a, bj, haar, sigma), a_star, haar, sigma)
        right = convolve(convolve(a_star, bj, haar, sigma), a, haar, sigma)
        if not (b.contains(left) and b.contains(right)):
            return False
    return True


def _bisection_candidates(
    g: Groupoid, cc: CcSpace, sigma: Cocycle | None
) -> list[AlgebraElement]:
    cands: list[AlgebraElement] = list(cc.basis)
    for arrow in g.arrows:
        one = delta(g, arrow)
        if cc.contains(one):
            cands.append(one)
        hull = make_element(g, {a: 1 for a in g.topo.min_nbhd[arrow]})
        if cc.contains(hull):
            cands.append(hull)
    system = g.germ_source
    if isinstance(system, ActionSystem):
        for e in system.elements:
            coeffs: dict[str, int] = {}
            for x in e.dom:
                coeffs[germ_arrow(system, e, x)] = 1
            sheet = make_element(g, coeffs)
            if cc.contains(sheet):
                cands.append(sheet)
    return cands


def _expectation_flags(
    g: Groupoid,
    cc: CcSpace,
    b: UnitSubalgebra,
    haar: HaarSystem,
    sigma: Cocycle | None,
) -> dict:
    units = g.unit_arrow_set

    def restrict(f: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(
            g, {a: v for a, v in f.coeffs.items() if a in units}
        )

    well_defined = all(b.contains(restrict(m)) for m in cc.basis)
    if not well_defined:
        return {
            "well_defined": False,
            "idempotent": None,
            "positive": None,
            "faithful": None,
        }
    idempotent = all(
        restrict(restrict(m)) == restrict(m) for m in cc.basis
    ) and all(restrict(bj) == bj for bj in b.basis)

    k = cc.dim
    total = [[ZERO] * k for _ in range(k)]
    positive = True
    star_basis = [star(m, sigma) for m in cc.basis]
    products = [
        [convolve(star_basis[j], cc.basis[i], haar, sigma) for i in range(k)]
        for j in range(k)
    ]
    for x in g.units.points:
        u = g.unit_arrow[x]
        h = [[products[j][i].value(u) for i in range(k)] for j in range(k)]
        if positive and not hermitian_is_psd(h):
            positive = False
        wx = qc(_unit_weight(g, haar, x))
        for j in range(k):
            for i in range(k):
                if h[j][i]:
                    total[j][i] = total[j][i] + wx * h[j][i]
    faithful = positive and hermitian_is_pd(total)
    return {
        "well_defined": True,
        "idempotent": idempotent,
        "positive": positive,
        "faithful": faithful,
    }


def cartan_report(
    g: Groupoid,
    sigma: Cocycle | None = None,
    haar: HaarSystem | None = None,
    cc: CcSpace | None = None,
) -> CartanReport:
    haar = haar if haar is not None else HaarSystem.counting(g)
    cc = cc if cc is not None else cc_space(g)
    b = unit_subalgebra(g, cc)

    # Condition 1: an element of B acting as a two-sided identity on the span.
    cols = len(b.basis)
    rows: list[list[QC]] = []
    rhs: list[QC] = []
    for m in cc.basis:
        mv = element_vector(m)
        left = [element_vector(convolve(bj, m, haar, sigma)) for bj in b.basis]
        right = [element_vector(convolve(m, bj, haar, sigma)) for bj in b.basis]
        for coord in range(len(g.arrows)):
            for side in (left, right):
                row = [side[j][coord] for j in range(cols)]
                if any(row) or mv[coord]:
                    rows.append(row)
                    rhs.append(mv[coord])
    coeffs = solve(rows, rhs) if cols else None
    unit_element = None
    if coeffs is not None:
        unit_element = zero_element(g)
        for c, bj in zip(coeffs, b.basis):
            unit_element = unit_element + bj.scale(c)
    contains_unit = coeffs is not None

    # Condition 2: commutant of B inside the admissible span.
    commutant = _commutant_of_units(g, cc, b, haar, sigma)
    masa = True
    masa_witness = None
    for coeff_vec in commutant:
        f = zero_element(g)
        for c, m in zip(coeff_vec, cc.basis):
            f = f + m.scale(c)
        if not b.contains(f):
            masa = False
            masa_witness = f
            break

    # Condition 3: bisection-supported normalizers spanning the admissible space.
    family: list[AlgebraElement] = []
    reached = Echelon()
    for cand in _bisection_candidates(g, cc, sigma):
        if not cand.coeffs or not _support_in_open_bisection(g, cand):
            continue
        if not _normalizes(cand, b, haar, sigma):
            continue
        if reached.add(element_vector(cand)):
            family.append(cand)
    regular = "verified" if reached.rank == cc.dim else "not verified"

    # Condition 4: restriction to units as a conditional expectation.
    expectation = _expectation_flags(g, cc, b, haar, sigma)

    overall = (
        contains_unit
        and masa
        and regular == "verified"
        and bool(expectation["well_defined"])
        and bool(expectation["idempotent"])
        and bool(expectation["positive"])
        and bool(expectation["faithful"])
    )
    return CartanReport(
        contains_unit=contains_unit,
        unit_element=unit_element,
        masa=masa,
        commutant_dim=len(commutant),
        masa_witness=masa_witness,
        regular=regular,
        regular_family=tuple(family),
        expectation=expectation,
        overall=overall,
    )


def skandalis_element(g: Groupoid) -> AlgebraElement:
    """Alternating sum of the four full-sheet indicators of a two-involution
    germ groupoid: + id-sheet − first-swap − second-swap + double-swap.

    Requires the germ source to be generated by two commuting involutions
    of the whole space whose moved sets are disjoint (WrongShape otherwise);
    under those hypotheses the sum cancels everywhere except on the isotropy
    germs sitting over the common fixed points, where it takes values ±1.
    """
    system = g.germ_source
    if not isinstance(system, ActionSystem):
        raise WrongShape("groupoid does not come from a partial-homeomorphism system")
    if len(system.generator_names) != 2:
        raise WrongShape("need exactly two generating homeomorphisms")
    g1 = system.by_name(system.generator_names[0])
    g2 = system.by_name(system.generator_names[1])
    full = frozenset(system.space.points)
    for gen in (g1, g2):
        if gen.dom != full:
            raise WrongShape(f"generator {gen.name!r} is not defined everywhere")
        if any(gen.mapping[gen.mapping[x]] != x for x in gen.dom):
            raise WrongShape(f"generator {gen.name!r} is not an involution")
    if any(g1.mapping[g2.mapping[x]] != g2.mapping[g1.mapping[x]] for x in full):
        raise WrongShape("the two generators do not commute")
    moved1 = {x for x in full if g1.mapping[x] != x}
    moved2 = {x for x in full if g2.mapping[x] != x}
    if moved1 & moved2:
        raise WrongShape("the generators move overlapping sets of points")

    sheets = [
        (1, system.identity),
        (-1, g1),
        (-1, g2),
        (1, compose(g1, g2)),
    ]
    coeffs: dict[str, QC] = {}
    for sign, e in sheets:
        for x in e.dom:
            a = germ_arrow(system, e, x)
            coeffs[a] = coeffs.get(a, ZERO) + qc(sign)
    return AlgebraElement(g, {a: v for a, v in coeffs.items() if v})


def _per_block_ranks(
    algebra: ConcreteAlgebra,
    structure: dict,
    f: AlgebraElement,
    tol: float = 1e-9,
) -> list[int]:
    import numpy as np

    blocks = algebra.represent(f)
    sqrt_w = [
        np.sqrt(np.array([float(w) for w in dw])) for dw in algebra.weight_diags()
    ]
    mats = []
    for blk, d in zip(blocks, sqrt_w):
        m = to_complex_matrix(blk)
        mats.append((d[:, None] * m) / d[None, :])
    total = sum(m.shape[0] for m in mats)
    big = np.zeros((total, total), dtype=complex)
    at = 0
    for m in mats:
        n = m.shape[0]
        big[at : at + n, at : at + n] = m
        at += n
    ranks = []
    for q in structure["subspaces"]:
        sub = q.conj().T @ big @ q
        svals = np.linalg.svd(sub, compute_uv=False)
        cut = tol * max(1.0, float(svals[0])) if len(svals) else 0.0
        ranks.append(int((svals > cut).sum()))
    return ranks


def uep_report(
    g: Groupoid,
    sigma: Cocycle | None = None,
    haar: HaarSystem | None = None,
    algebra: ConcreteAlgebra | None = None,
    report: CartanReport | None = None,
) -> dict:
    """Pure-state extension counts over the spectrum of the unit subalgebra.

    Count = number of simple blocks meeting the image of the spectrum point's
    idempotent when every block rank is 0/1; a rank vector is reported
    instead when some block rank exceeds 1. Requires B maximal abelian.
    """
    haar = haar if haar is not None else HaarSystem.counting(g)
    algebra = (
        algebra
        if algebra is not None
        else concrete_algebra(g, sigma=sigma, haar=haar)
    )
    report = report if report is not None else cartan_report(g, sigma, haar, algebra.cc)
    if not report.masa:
        raise NotMasa("extension counting needs a maximal abelian unit subalgebra")
    b = unit_subalgebra(g, algebra.cc)
    structure = block_structure(algebra)
    counts: dict[str, object] = {}
    for pts, idem in minimal_idempotents(b, haar):
        ranks = _per_block_ranks(algebra, structure, idem)
        if max(ranks) <= 1:
            value: object = int(sum(ranks))
        else:
            value = tuple(ranks)
        for x in pts:
            counts[x] = value
    all_unique = bool(counts) and all(v == 1 for v in counts.values())
    return {
        "counts": counts,
        "diagonal": report.overall and all_unique,
        "all_unique": all_unique,
        "block_sizes": tuple(sorted(structure["sizes"], reverse=True)),
    }


def weyl_relation(
    algebra: ConcreteAlgebra,
    b: UnitSubalgebra | None = None,
) -> tuple[Groupoid, HaarSystem]:
    """Rebuild the orbit relation from the algebra pair alone.

    Spectrum points of B become the unit space; two points are related when
    some element of the closed algebra connects their idempotents
    (p_i * m * p_j != 0 exactly). Returns a discrete relation groupoid.
    """
    g = algebra.groupoid
    if b is None:
        b = unit_subalgebra(g, algebra.cc)
    rep = cartan_report(g, algebra.sigma, algebra.haar, algebra.cc)
    if not rep.masa:
        raise NotMasa("reconstruction needs a maximal abelian unit subalgebra")
    spectrum = minimal_idempotents(b, algebra.haar)
    labels = [min(pts) for pts, _ in spectrum]
    images = [algebra.represent(idem) for _, idem in spectrum]
    pairs = []
    for i, pi in enumerate(images):
        for j, pj in enumerate(images):
            connected = False
            for m in algebra.closed_blocks:
                prod = _blocks_mul(_blocks_mul(pi, m), pj)
                if any(_blocks_flatten(prod)):
                    connected = True
                    break
            if connected:
                pairs.append((labels[i], labels[j]))
    space = make_space(labels, {x: {x} for x in labels})
    return relation_groupoid(space, pairs, "product", name="weyl relation")


def orbit_class_sizes(g: Groupoid) -> tuple[int, ...]:
    """Orbit sizes, largest first — the isomorphy invariant of a finite
    equivalence relation."""
    return tuple(sorted((len(o) for o in orbits(g)), reverse=True))


def diagonal_report(
    g: Groupoid,
    sigma: Cocycle | None = None,
    haar: HaarSystem | None = None,
) -> dict:
    """Assemble the report for a groupoid: pair conditions + extension counts."""
    haar = haar if haar is not None else HaarSystem.counting(g)
    algebra = concrete_algebra(g, sigma=sigma, haar=haar)
    rep = cartan_report(g, sigma, haar, algebra.cc)
    try:
        uep = uep_report(g, sigma, haar, algebra, rep)
        uep_counts: object = uep["counts"]
        diagonal = uep["diagonal"]
    except NotMasa as exc:
        uep_counts = str(exc)
        diagonal = False
    return {
        "cartan": rep,
        "uep": uep_counts,
        "diagonal": diagonal,
        "algebra": algebra,
    }
