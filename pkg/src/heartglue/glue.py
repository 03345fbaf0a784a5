"""Gluing t-structures across a semiorthogonal decomposition.

An exceptional object spans a piece of the derived category that splits
off; a full exceptional sequence chains such pieces into a filtration of
the whole category.  This module verifies exceptionality, projects objects
onto the pieces, and glues a t-structure given on each piece into one on
the total category: membership tests for the glued aisle, truncation
triangles with computed certificates, and the homological dimension
bookkeeping for the glued heart.

Aisles are described intensionally.  ``StandardAisle`` cuts cohomology at
a fixed degree, ``AddGeneratedAisle`` takes nonnegative shifts of finitely
many orthogonal exceptional generators, and ``GluedAisle`` combines an
aisle on the left piece with one on the right.  Positions into a sequence
are 1-based, matching the vertex convention.
"""

from dataclasses import dataclass

from .linalg import RatMatrix, hstack, vstack
from .reps import RepMap, simple
from .complexes import (Cx, CxMap, Cone, Triangle, cohomology_dims,
                        compose as ccompose, cone, cx_direct_sum,
                        identity_chain_map, is_acyclic, shift, truncate_std,
                        zero_cx)
from .derived import as_cx, derived_hom, dhom_space, resolve, solve_lift


class GlueError(ValueError):
    pass


class ExcError(GlueError):
    """An exceptionality check failed; carries the first violation found.

    position is None for a single-object check, the 1-based index when a
    sequence member fails on its own, and an (i, j) pair for a cross term.
    shift and dim locate the offending Hom group.
    """

    def __init__(self, msg: str, *, position=None, shift=None, dim=None):
        super().__init__(msg)
        self.position = position
        self.shift = shift
        self.dim = dim


def default_window(algebra, count: int = 1) -> int:
    """Shift radius the reports quote for a check involving count objects."""
    return algebra.vertex_count + count + 2


def _scan_range(e: Cx, x: Cx, window: int | None = None) -> range:
    """Every shift n where Hom(e, x[n]) can be nonzero.

    Projective resolutions over an admissible quotient of an acyclic
    quiver have length below the vertex count, so chain maps out of the
    resolution of e vanish once the degree supports no longer overlap.
    A requested window only ever widens the scan.
    """
    if e.is_zero_object() or x.is_zero_object():
        return range(0)
    pad = e.algebra.vertex_count + 2
    lo = x.min_deg() - e.max_deg()
    hi = x.max_deg() - e.min_deg() + pad
    if window is not None:
        lo, hi = min(lo, -window), max(hi, window)
    return range(lo, hi + 1)


@dataclass(frozen=True, eq=False)
class ExcObject:
    """An object verified exceptional over the recorded shift window."""

    object: Cx
    window: int
    endo_dim: int = 1


def check_exceptional(obj, window: int | None = None) -> ExcObject:
    """Verify scalar endomorphisms and vanishing self-extensions.

    Raises ExcError carrying the first violating (shift, dim) pair.
    """
    cx = as_cx(obj)
    if cx.is_zero_object():
        raise ExcError("the zero object is not exceptional", shift=0, dim=0)
    w = window if window is not None else default_window(cx.algebra)
    for n in _scan_range(cx, cx, w):
        d = derived_hom(cx, cx, n)
        want = 1 if n == 0 else 0
        if d != want:
            raise ExcError(
                f"Hom(E, E[{n}]) has dimension {d}, expected {want}",
                shift=n, dim=d)
    return ExcObject(cx, w)


@dataclass(frozen=True, eq=False)
class ExcSequence:
    """A verified exceptional sequence with its full Hom table.

    hom_table maps (i, j, n) to dim Hom(E_i, E_j[n]); missing keys mean
    zero.  strong records whether every nonzero cross term sits at shift
    0, regardless of what the check was asked to enforce.
    """

    objects: tuple[ExcObject, ...]
    strong: bool
    window: int
    hom_table: dict[tuple[int, int, int], int]

    def __len__(self) -> int:
        return len(self.objects)

    def object(self, i: int) -> Cx:
        return self.objects[i - 1].object

    def hom_dim(self, i: int, j: int, n: int) -> int:
        return self.hom_table.get((i, j, n), 0)


def check_sequence(objs, strong: bool = False,
                   window: int | None = None) -> ExcSequence:
    """Verify an exceptional sequence, optionally requiring strongness.

    Raises ExcError localizing the first violation: a non-exceptional
    member, a backward Hom from a later object to an earlier one, or a
    nonzero shifted Hom when strong is requested.
    """
    items = [as_cx(o) for o in objs]
    if not items:
        raise GlueError("a sequence needs at least one object")
    alg = items[0].algebra
    w = window if window is not None else default_window(alg, len(items))
    verified = []
    for i, o in enumerate(items, 1):
        try:
            verified.append(check_exceptional(o, w))
        except ExcError as err:
            raise ExcError(f"position {i}: {err}", position=i,
                           shift=err.shift, dim=err.dim) from None
    table: dict[tuple[int, int, int], int] = {}
    is_strong = True
    for i, a in enumerate(verified, 1):
        for j, b in enumerate(verified, 1):
            if i == j:
                table[(i, j, 0)] = 1
                continue
            for n in _scan_range(a.object, b.object, w):
                d = derived_hom(a.object, b.object, n)
                if not d:
                    continue
                table[(i, j, n)] = d
                if i > j:
                    raise ExcError(
                        f"Hom(E_{i}, E_{j}[{n}]) has dimension {d}; later "
                        "objects must not map to earlier ones",
                        position=(i, j), shift=n, dim=d)
                if n != 0:
                    is_strong = False
                    if strong:
                        raise ExcError(
                            f"Hom(E_{i}, E_{j}[{n}]) has dimension {d}; a "
                            "strong sequence allows shift 0 only",
                            position=(i, j), shift=n, dim=d)
    return ExcSequence(tuple(verified), is_strong, w, table)


def _deshift(u: CxMap, p: Cx, x: Cx, n: int) -> CxMap:
    # u: R -> x[n]; the same blocks read as a map p = R[-n] -> x.  Source
    # and target shift together, so no signs appear.  Blocks are rebuilt
    # positionally, which also survives components anchored to a
    # complex's padding zero terms.
    comps = {}
    for k, c in u.components.items():
        comps[k + n] = RepMap(p.term(k + n), x.term(k + n), c.blocks)
    return CxMap(p, x, comps)


def _hom_parts(e: Cx, x: Cx, shifts) -> list[tuple[Cx, CxMap, int]]:
    """One shifted copy of the resolution of e per basis class of
    Hom(e, x[n]), each with its evaluation map into x."""
    parts = []
    for n in shifts:
        sp = dhom_space(e, x, n)
        for cls in sp.basis():
            u = sp.representative(cls)
            p = shift(sp.res.cx, -n)
            parts.append((p, _deshift(u, p, x, n), n))
    return parts


def _assemble(x: Cx, parts) -> tuple[Cx, CxMap]:
    """Direct sum of the part complexes with the summed evaluation map."""
    if not parts:
        v = zero_cx(x.algebra)
        return v, CxMap(v, x, {})
    s = cx_direct_sum([p for p, _, _ in parts])
    ev = None
    for (_, f, _), pr in zip(parts, s.projections):
        term = ccompose(f, pr)
        ev = term if ev is None else ev + term
    return s.cx, ev


class AisleSpec:
    """Intensional description of the nonpositive part of a t-structure.

    member tests containment in the aisle; truncate returns (A, B, tri)
    with A in the aisle, B in the complementary co-aisle shifted down,
    and tri the triangle A -> X -> B carrying a comparison certificate.
    """

    algebra = None
    window = 0

    def member(self, x: Cx) -> bool:
        raise NotImplementedError

    def truncate(self, x: Cx) -> tuple[Cx, Cx, Triangle]:
        raise NotImplementedError

    def heart_gens(self) -> tuple[Cx, ...]:
        raise NotImplementedError

    def aisle_gens(self) -> tuple[Cx, ...]:
        raise NotImplementedError

    def sod_gens(self) -> tuple[Cx, ...]:
        raise GlueError(f"{type(self).__name__} does not sit inside a "
                        "semiorthogonal decomposition")

    def describe(self) -> str:
        raise NotImplementedError


class StandardAisle(AisleSpec):
    """Complexes whose cohomology vanishes strictly above the cut."""

    def __init__(self, algebra, cut: int = 0):
        self.algebra = algebra
        self.cut = cut
        self.window = default_window(algebra)
        self._hearts = tuple(
            shift(as_cx(simple(algebra, i)), -cut)
            for i in range(1, algebra.vertex_count + 1))

    def member(self, x: Cx) -> bool:
        return all(i <= self.cut for i in cohomology_dims(x))

    def truncate(self, x: Cx) -> tuple[Cx, Cx, Triangle]:
        tri = truncate_std(x, self.cut)
        return tri.left, tri.right, tri

    def heart_gens(self) -> tuple[Cx, ...]:
        return self._hearts

    def aisle_gens(self) -> tuple[Cx, ...]:
        return self._hearts

    def describe(self) -> str:
        return f"standard(cut={self.cut})"


class AddGeneratedAisle(AisleSpec):
    """Nonnegative shifts of finitely many orthogonal exceptional objects.

    The aisle holds sums of G[l] with l >= 0 over the generators G.  With
    more than one generator the splitting used by member and truncate
    needs the generators Hom-orthogonal in both directions at every
    shift; the constructor enforces that.
    """

    def __init__(self, gens, window: int | None = None, check: bool = True):
        objs = tuple(as_cx(g) for g in gens)
        if not objs:
            raise GlueError("an aisle needs at least one generator")
        self.algebra = objs[0].algebra
        self.window = (window if window is not None
                       else default_window(self.algebra, len(objs)))
        if check:
            for g in objs:
                check_exceptional(g, self.window)
            for a in objs:
                for b in objs:
                    if a is b:
                        continue
                    for n in _scan_range(a, b, self.window):
                        d = derived_hom(a, b, n)
                        if d:
                            raise GlueError(
                                "aisle generators must be orthogonal: found "
                                f"Hom of dimension {d} at shift {n}")
        self._gens = objs

    def _parts(self, x: Cx) -> list[tuple[Cx, CxMap, int]]:
        parts = []
        for g in self._gens:
            parts += _hom_parts(g, x, _scan_range(g, x))
        return parts

    def member(self, x: Cx) -> bool:
        every = self._parts(x)
        if any(n >= 1 for _, _, n in every):
            return False
        _, ev = _assemble(x, every)
        return is_acyclic(cone(ev).cx)

    def truncate(self, x: Cx) -> tuple[Cx, Cx, Triangle]:
        every = self._parts(x)
        _, full_ev = _assemble(x, every)
        if not is_acyclic(cone(full_ev).cx):
            raise GlueError("object is not generated by the aisle objects")
        a, f = _assemble(x, [t for t in every if t[2] <= 0])
        c = cone(f)
        tri = Triangle(a, x, c.cx, f, c.incl,
                       comparison=identity_chain_map(c.cx), cone_of_f=c)
        return a, c.cx, tri

    def heart_gens(self) -> tuple[Cx, ...]:
        return self._gens

    def aisle_gens(self) -> tuple[Cx, ...]:
        return self._gens

    def sod_gens(self) -> tuple[Cx, ...]:
        return self._gens

    def describe(self) -> str:
        return f"add({len(self._gens)})"


def _cone_functorial(ca: Cone, cb: Cone, m: CxMap, x: Cx) -> CxMap:
    """cone(f) -> cone(g) induced by m: src(f) -> src(g) over the
    identity of the shared target x, for strictly commuting squares."""
    alg = x.algebra
    comps = {}
    for k, t in ca.cx.terms.items():
        mk = m.comp(k + 1)
        blocks = []
        for v in range(1, alg.vertex_count + 1):
            a1 = m.source.term(k + 1).dim_at(v)
            b1 = m.target.term(k + 1).dim_at(v)
            xk = x.term(k).dim_at(v)
            top = hstack([mk.block(v), RatMatrix.zeros(b1, xk)])
            bot = hstack([RatMatrix.zeros(xk, a1), RatMatrix.identity(xk)])
            blocks.append(vstack([top, bot]))
        comps[k] = RepMap(t, cb.cx.term(k), tuple(blocks))
    return CxMap(ca.cx, cb.cx, comps)


def _rotation_comparison(cq: Cone, q: CxMap, b: Cx) -> tuple[Cx, CxMap, CxMap]:
    """Rotate the cone triangle of q: X -> B back one step.

    Returns (A, f, phi) with A = cone(q)[-1], f: A -> X the negated
    shifted projection, and phi: cone(f) -> B the comparison sending
    (x', b, x) to b + q(x).
    """
    x = q.source
    a = shift(cq.cx, -1)
    f = -_deshift(cq.proj, a, x, 1)
    cf = cone(f)
    alg = x.algebra
    comps = {}
    for k, t in cf.cx.terms.items():
        qk = q.comp(k)
        blocks = []
        for v in range(1, alg.vertex_count + 1):
            bk = b.term(k).dim_at(v)
            blocks.append(hstack([
                RatMatrix.zeros(bk, x.term(k + 1).dim_at(v)),
                RatMatrix.identity(bk),
                qk.block(v),
            ]))
        comps[k] = RepMap(t, b.term(k), tuple(blocks))
    return a, f, CxMap(cf.cx, b, comps)


class GluedAisle(AisleSpec):
    """The aisle glued from one on the left piece and one on the right.

    Objects of the glued aisle are extensions of a shifted-left-aisle
    object by a right-aisle one.  Both constituents must expose sod_gens,
    the exceptional generators of their pieces, with every generator of
    the right piece Hom-orthogonal to the left piece in one direction.
    """

    def __init__(self, left: AisleSpec, right: AisleSpec):
        if left.algebra is not right.algebra:
            raise GlueError("the aisles live over different algebras")
        self.left = left
        self.right = right
        self.algebra = left.algebra
        self._sod = left.sod_gens() + right.sod_gens()
        self.window = default_window(self.algebra, len(self._sod))
        self._aisle = right.aisle_gens() + tuple(
            shift(g, 1) for g in left.aisle_gens())
        self._hearts = right.heart_gens() + tuple(
            shift(g, 1) for g in left.heart_gens())

    def _project(self, x: Cx) -> tuple[Cx, CxMap, Cone]:
        # component of x along the right piece, with its evaluation map;
        # the cone is the left remainder
        parts = []
        for g in self.right.sod_gens():
            parts += _hom_parts(g, x, _scan_range(g, x))
        v2, ev2 = _assemble(x, parts)
        return v2, ev2, cone(ev2)

    def member(self, x: Cx) -> bool:
        v2, _, c = self._project(x)
        if not self.right.member(v2):
            return False
        return self.left.member(shift(c.cx, -1))

    def truncate(self, x: Cx) -> tuple[Cx, Cx, Triangle]:
        v2, ev2, cproj = self._project(x)
        x1 = cproj.cx
        a2, _, tri2 = self.right.truncate(v2)
        f2 = ccompose(ev2, tri2.f)
        ca2 = cone(f2)
        # cone(A2 -> X) -> cone(V2 -> X), functorial over the inclusion
        r = _cone_functorial(ca2, cproj, tri2.f, x)
        down = shift(x1, -1)
        a1, _, tri1 = self.left.truncate(down)
        u_src = shift(a1, 1)
        j = _deshift(tri1.f, u_src, x1, -1)
        # lift the shifted left part through r; a tagged stand-in makes
        # the lifting problem solvable by generator data
        rsu = resolve(u_src)
        lifted, _ = solve_lift(rsu.cx, ccompose(j, rsu.eps), r)
        cu = cone(lifted)
        q = ccompose(cu.incl, ca2.incl)
        cq = cone(q)
        a, f, phi = _rotation_comparison(cq, q, cu.cx)
        tri = Triangle(a, x, cu.cx, f, q, comparison=phi, cone_of_f=cone(f))
        return a, cu.cx, tri

    def heart_gens(self) -> tuple[Cx, ...]:
        return self._hearts

    def aisle_gens(self) -> tuple[Cx, ...]:
        return self._aisle

    def sod_gens(self) -> tuple[Cx, ...]:
        return self._sod

    def describe(self) -> str:
        return f"glue({self.left.describe()}, {self.right.describe()})"


def truncate_glued(x: Cx, aisle: AisleSpec) -> tuple[Cx, Cx, Triangle]:
    """Truncation triangle of x with respect to the given aisle."""
    return aisle.truncate(x)


def sod_project(x: Cx, es: ExcSequence, k: int) -> Cx:
    """Component of x along the k-th piece of the decomposition (1-based).

    Pieces are stripped from the last object backwards: the component
    along E_j collects one shifted resolution copy per basis class of
    Hom(E_j, cur[n]), and the cone carries the remainder to the next
    step.
    """
    m = len(es)
    if not 1 <= k <= m:
        raise GlueError(f"component index {k} outside 1..{m}")
    cur = x
    for j in range(m, 0, -1):
        e = es.object(j)
        parts = _hom_parts(e, cur, _scan_range(e, cur))
        v, ev = _assemble(cur, parts)
        if j == k:
            return v
        cur = cone(ev).cx
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class CompatReport:
    """Outcome of a pairwise compatibility check.

    Violations are (kind, left_gen, right_gen, shift, dim) with 1-based
    generator positions into the respective aisle generator lists.  Kind
    "backward" means the right piece maps to the left one, so the two do
    not form a semiorthogonal decomposition at all; kind "negative"
    means the left aisle maps to a positive co-aisle shift on the right.
    """

    ok: bool
    window: int
    violations: tuple[tuple[str, int, int, int, int], ...]

    def __bool__(self) -> bool:
        return self.ok


def compatible(a1: AisleSpec, a2: AisleSpec,
               window: int | None = None) -> CompatReport:
    """Check that gluing a1 (left piece) with a2 (right piece) is sound.

    Two things can fail.  The pieces only decompose the category when
    the right one admits no maps back to the left one at any shift.  On
    top of that the glued truncation exists precisely when nonnegative
    shifts of the left aisle admit no maps to positive co-aisle shifts
    on the right, which at the generator level means Hom(G1, G2[n]) = 0
    for every n <= -1.
    """
    g1s, g2s = a1.aisle_gens(), a2.aisle_gens()
    w = (window if window is not None
         else default_window(a1.algebra, len(g1s) + len(g2s)))
    viol = []
    for i1, g1 in enumerate(g1s, 1):
        for i2, g2 in enumerate(g2s, 1):
            for n in _scan_range(g2, g1, w):
                d = derived_hom(g2, g1, n)
                if d:
                    viol.append(("backward", i1, i2, n, d))
            for n in _scan_range(g1, g2, w):
                if n >= 0:
                    continue
                d = derived_hom(g1, g2, n)
                if d:
                    viol.append(("negative", i1, i2, n, d))
    return CompatReport(not viol, w, tuple(viol))


@dataclass(frozen=True, eq=False)
class HeartDesc:
    """Additive generators of a heart, with provenance and shift window.

    Construction verifies the axiom that generators admit no maps into
    negative shifts of each other.
    """

    generators: tuple[Cx, ...]
    provenance: str
    window: int

    def __post_init__(self):
        for a in self.generators:
            for b in self.generators:
                for n in _scan_range(a, b):
                    if n >= 0:
                        continue
                    d = derived_hom(a, b, n)
                    if d:
                        raise GlueError(
                            "not a heart: generators map into a negative "
                            f"shift (dimension {d} at {n})")


def glue(a1: AisleSpec, a2: AisleSpec,
         window: int | None = None) -> tuple[GluedAisle, HeartDesc]:
    """Glue compatible aisles across the decomposition ordering a1 before
    a2, returning the glued aisle and its heart.

    The heart is generated by the right heart together with the left
    heart shifted up one step.  Raises GlueError when the compatibility
    check fails.
    """
    rep = compatible(a1, a2, window)
    if not rep.ok:
        raise GlueError("aisles are not compatible; first violations: "
                        f"{rep.violations[:3]}")
    aisle = GluedAisle(a1, a2)
    heart = HeartDesc(aisle.heart_gens(),
                      provenance=f"heart of {aisle.describe()}",
                      window=aisle.window)
    return aisle, heart


def glue_sequence(es: ExcSequence,
                  window: int | None = None) -> tuple[AisleSpec, HeartDesc]:
    """Iterate pairwise gluing left to right over a full sequence.

    Each object carries its own one-generator aisle; the result glues
    them all, so the heart generators come out as E_m, E_{m-1}[1], ...,
    E_1[m-1].
    """
    w = window if window is not None else es.window
    aisle: AisleSpec = AddGeneratedAisle((es.object(1),), window=w)
    heart = HeartDesc(aisle.heart_gens(),
                      provenance=f"heart of {aisle.describe()}", window=w)
    for i in range(2, len(es) + 1):
        nxt = AddGeneratedAisle((es.object(i),), window=w)
        aisle, heart = glue(aisle, nxt, window=w)
    return aisle, heart


@dataclass(frozen=True)
class NfoldReport:
    """Direct check that an ordered family of aisles glues in one go.

    For pieces i < k nothing may map backward from piece k to piece i,
    and forward maps must miss the deep negative shifts: the condition
    is Hom(G_i, G_k[n]) = 0 whenever n <= i - k, one shift deeper per
    intermediate piece.  Violations are (kind, i, k, shift, dim) with
    the same kinds as CompatReport.
    """

    ok: bool
    window: int
    violations: tuple[tuple[str, int, int, int, int], ...]

    def __bool__(self) -> bool:
        return self.ok


def nfold_compatible(aisles, window: int | None = None) -> NfoldReport:
    """Check all components of an ordered family at once.

    This is the direct form of n-fold compatibility; glue_sequence
    reaches the same configurations one pairwise step at a time, and the
    two are cross-checked in the test suite.
    """
    aisles = list(aisles)
    if not aisles:
        raise GlueError("nothing to check")
    total = sum(len(a.aisle_gens()) for a in aisles)
    w = (window if window is not None
         else default_window(aisles[0].algebra, total))
    viol = []
    for i in range(1, len(aisles) + 1):
        for k in range(i + 1, len(aisles) + 1):
            for g1 in aisles[i - 1].aisle_gens():
                for g2 in aisles[k - 1].aisle_gens():
                    for n in _scan_range(g2, g1, w):
                        d = derived_hom(g2, g1, n)
                        if d:
                            viol.append(("backward", i, k, n, d))
                    for n in _scan_range(g1, g2, w):
                        if n > i - k:
                            continue
                        d = derived_hom(g1, g2, n)
                        if d:
                            viol.append(("negative", i, k, n, d))
    return NfoldReport(not viol, w, tuple(viol))


def _sup_shift(g1: Cx, g2: Cx, window: int | None = None) -> int | None:
    best = None
    for n in _scan_range(g1, g2, window):
        if derived_hom(g1, g2, n):
            best = n
    return best


def heart_dim(h: HeartDesc, window: int | None = None) -> int | None:
    """Largest shift with a nonzero Hom between heart generators.

    None for a heart with no generators; 0 or more otherwise, since
    identities live at shift 0.
    """
    best = None
    for a in h.generators:
        for b in h.generators:
            s = _sup_shift(a, b, window)
            if s is not None and (best is None or s > best):
                best = s
    return best


def rdim(h1: HeartDesc, h2: HeartDesc, window: int | None = None) -> int:
    """Largest shift with a nonzero Hom from h1 generators to h2 ones,
    or -1 when every such Hom vanishes."""
    best = None
    for a in h1.generators:
        for b in h2.generators:
            s = _sup_shift(a, b, window)
            if s is not None and (best is None or s > best):
                best = s
    return -1 if best is None else best


@dataclass(frozen=True)
class DimFormulaReport:
    """Both sides of the dimension formula for a glued heart.

    lhs is the dimension of the glued heart; rhs the maximum of the two
    piece dimensions and the relative dimension plus one.  witness names
    the generator pair and shift attaining lhs (1-based positions into
    the glued heart's generators).
    """

    lhs: int
    dim_left: int
    dim_right: int
    rel: int
    rhs: int
    ok: bool
    window: int
    witness: tuple[int, int, int] | None

    def __bool__(self) -> bool:
        return self.ok


def check_dim_formula(h1: HeartDesc, h2: HeartDesc, glued: HeartDesc,
                      window: int | None = None) -> DimFormulaReport:
    """Compare the glued heart dimension against the piecewise formula."""
    d1 = heart_dim(h1, window)
    d2 = heart_dim(h2, window)
    if d1 is None and d2 is None:
        raise GlueError("both hearts are zero")
    r = rdim(h1, h2, window)
    rhs = max(v for v in (d1, d2, r + 1) if v is not None)
    best = None
    wit = None
    for i, a in enumerate(glued.generators, 1):
        for j, b in enumerate(glued.generators, 1):
            s = _sup_shift(a, b, window)
            if s is not None and (best is None or s > best):
                best = s
                wit = (i, j, s)
    if best is None:
        raise GlueError("the glued heart is zero")
    w = window if window is not None else glued.window
    return DimFormulaReport(best, d1 if d1 is not None else -1,
                            d2 if d2 is not None else -1, r, rhs,
                            best == rhs, w, wit)
