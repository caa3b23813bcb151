"""Quivers with relations and their finite-dimensional path-algebra quotients.

Paths compose left to right: the word ``ab`` means "a, then b", so it is a
path whenever target(a) = source(b).  All relation ideals are required to be
admissible (contained in the square of the arrow ideal) and generated by
length-homogeneous elements; the basis is then computed length by length
until every path of some length falls into the ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Field, Matrix, QQ, SubspaceReducer


class NotAdmissible(Exception):
    pass


class NotFinite(Exception):
    pass


class PresentationNotStabilized(Exception):
    """Relation extraction ran past its length cap without closing."""


class AboveBound:
    """Sentinel returned by global_dimension when no resolution ends in time."""

    def __repr__(self):
        return "AboveBound"

    def __eq__(self, o):
        return isinstance(o, AboveBound)


ABOVE_BOUND = AboveBound()


@dataclass(frozen=True)
class Arrow:
    name: str
    source: object
    target: object
    degree: int = 0


class Quiver:
    def __init__(self, vertices: Sequence, arrows: Sequence[Arrow]):
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.arrows = list(arrows)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise ValueError(f"arrow {a.name} has undeclared endpoint")
            if a.degree < 0:
                raise ValueError(f"arrow {a.name} has negative degree")
        self.arrow = {a.name: a for a in self.arrows}
        self.arrows_from: Dict[object, List[Arrow]] = {v: [] for v in self.vertices}
        self.arrows_into: Dict[object, List[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            self.arrows_from[a.source].append(a)
            self.arrows_into[a.target].append(a)

    def opposite(self) -> "Quiver":
        return Quiver(
            self.vertices,
            [Arrow(a.name, a.target, a.source, a.degree) for a in self.arrows],
        )

    def is_graded(self) -> bool:
        return any(a.degree != 0 for a in self.arrows)

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


@dataclass(frozen=True)
class Path:
    source: object
    target: object
    word: Tuple[str, ...]  # arrow names, applied left to right

    @property
    def length(self) -> int:
        return len(self.word)

    def degree(self, quiver: Quiver) -> int:
        return sum(quiver.arrow[a].degree for a in self.word)


class Relation:
    """A linear combination of parallel paths, homogeneous in length and degree."""

    def __init__(self, quiver: Quiver, terms: Sequence[Tuple[object, Tuple[str, ...]]]):
        if not terms:
            raise ValueError("empty relation")
        self.terms: List[Tuple[object, Tuple[str, ...]]] = []
        src = tgt = None
        for c, word in terms:
            word = tuple(word)
            if not word:
                raise NotAdmissible("relation contains a stationary path")
            s, t = _word_endpoints(quiver, word)
            if src is None:
                src, tgt = s, t
            elif (s, t) != (src, tgt):
                raise ValueError("relation terms are not parallel")
            self.terms.append((c, word))
        self.source, self.target = src, tgt
        lengths = {len(w) for _, w in self.terms}
        if len(lengths) != 1:
            raise NotAdmissible("relation is not homogeneous in path length")
        self.length = lengths.pop()
        if self.length < 2:
            raise NotAdmissible("relation involves paths of length < 2")
        degs = {sum(quiver.arrow[a].degree for a in w) for _, w in self.terms}
        if len(degs) != 1:
            raise ValueError("relation is not homogeneous in degree")
        self.degree = degs.pop()

    def __repr__(self):
        return " + ".join(f"{c}*{'*'.join(w)}" for c, w in self.terms)


def _word_endpoints(quiver: Quiver, word: Tuple[str, ...]):
    arrows = [quiver.arrow[a] for a in word]
    for x, y in zip(arrows, arrows[1:]):
        if x.target != y.source:
            raise ValueError(f"word {'*'.join(word)} is not composable")
    return arrows[0].source, arrows[-1].target


class _PathList:
    __slots__ = ("items", "index_of")

    def __init__(self, items):
        self.items = items  # list of (source, word)
        self.index_of = {p: i for i, p in enumerate(items)}


class PresentedAlgebra:
    """kQ/I with a computed basis of path normal forms and structure constants.

    Built by :func:`build_algebra`; immutable afterwards.
    """

    def __init__(self, quiver, relations, field, basis, reducers, stab_len,
                 degree_bound=None, truncated=False):
        self.quiver = quiver
        self.relations = relations
        self.field = field
        self.basis: List[Path] = basis
        self._reducers = reducers
        self._paths_by_len = None
        self.stab_len = stab_len
        self.degree_bound = degree_bound
        self.truncated = truncated
        self.dim = len(basis)
        self.vertex_index = {v: i for i, v in enumerate(quiver.vertices)}
        self.basis_index = {(p.source, p.word): i for i, p in enumerate(self.basis)}
        self.stationary = {v: self.basis_index[(v, ())] for v in quiver.vertices}
        self.by_pair: Dict[Tuple[object, object], List[int]] = {}
        self.from_vertex: Dict[object, List[int]] = {v: [] for v in quiver.vertices}
        for i, p in enumerate(self.basis):
            self.by_pair.setdefault((p.source, p.target), []).append(i)
            self.from_vertex[p.source].append(i)
        self.grading = [p.degree(quiver) for p in self.basis]
        self._mult_cache: Dict[Tuple[int, int], Dict[int, object]] = {}
        self._op: Optional[PresentedAlgebra] = None
        self._caches: Dict = {}

    # -- normal forms ------------------------------------------------------

    def nf_word(self, source, word: Tuple[str, ...]) -> Dict[int, object]:
        """Normal form of a path as {basis index: coefficient}."""
        word = tuple(word)
        if word:
            s, _t = _word_endpoints(self.quiver, word)
            if s != source:
                raise ValueError("source mismatch")
        ell = len(word)
        if ell >= self.stab_len:
            return {}
        if self.degree_bound is not None:
            deg = sum(self.quiver.arrow[a].degree for a in word)
            if deg > self.degree_bound:
                return {}
        paths = self._paths_by_len[ell]
        j = paths.index_of.get((source, word))
        if j is None:
            return {}  # discarded by the degree cutoff
        zero = self.field.zero
        vec = [zero] * len(paths.items)
        vec[j] = self.field.one
        red = self._reducers.get(ell)
        if red is not None:
            vec = red.reduce(vec)
        out = {}
        for k, c in enumerate(vec):
            if c != zero:
                out[self.basis_index[paths.items[k]]] = c
        return out

    def mult(self, i: int, j: int) -> Dict[int, object]:
        """Structure constants: basis[i] * basis[j] over the basis."""
        key = (i, j)
        hit = self._mult_cache.get(key)
        if hit is not None:
            return hit
        p, q = self.basis[i], self.basis[j]
        if p.target != q.source:
            out: Dict[int, object] = {}
        else:
            out = self.nf_word(p.source, p.word + q.word)
        self._mult_cache[key] = out
        return out

    def el_mult(self, x: Dict[int, object], y: Dict[int, object]) -> Dict[int, object]:
        zero = self.field.zero
        out: Dict[int, object] = {}
        for i, a in x.items():
            for j, b in y.items():
                ab = a * b
                if ab == zero:
                    continue
                for k, c in self.mult(i, j).items():
                    out[k] = out.get(k, zero) + ab * c
        return {k: v for k, v in out.items() if v != zero}

    def el_unit(self) -> Dict[int, object]:
        one = self.field.one
        return {self.stationary[v]: one for v in self.quiver.vertices}

    def reverse_element(self, x: Dict[int, object]) -> Dict[int, object]:
        """The same element seen inside the opposite algebra (words reversed)."""
        op = self.opposite()
        out = {}
        for i, c in x.items():
            p = self.basis[i]
            out[op.basis_index[(p.target, tuple(reversed(p.word)))]] = c
        return out

    # -- derived data --------------------------------------------------------

    def radical_indices(self) -> List[int]:
        return [i for i, p in enumerate(self.basis) if p.length >= 1]

    def loewy_length(self) -> int:
        return 1 + max((p.length for p in self.basis), default=0)

    def max_degree(self) -> int:
        return max(self.grading, default=0)

    def is_graded(self) -> bool:
        return self.quiver.is_graded()

    def dim_pair(self, u, v) -> int:
        return len(self.by_pair.get((u, v), ()))

    def opposite(self) -> "PresentedAlgebra":
        if self._op is None:
            rels = [
                Relation(self.quiver.opposite(), [(c, tuple(reversed(w))) for c, w in r.terms])
                for r in self.relations
            ]
            op = build_algebra(
                self.quiver.opposite(), rels, max_len=self.stab_len + 1,
                field=self.field, degree_bound=self.degree_bound,
            )
            op._op = self
            self._op = op
        return self._op

    def __repr__(self):
        t = ", truncated" if self.truncated else ""
        return f"PresentedAlgebra(dim {self.dim}, {len(self.quiver.vertices)} vertices{t})"


def build_algebra(
    quiver: Quiver,
    relations: Sequence[Relation],
    max_len: int = 30,
    field: Field = QQ,
    degree_bound: Optional[int] = None,
) -> PresentedAlgebra:
    """Compute a basis of kQ/I length by length.

    Stops at the first length L whose paths all lie in the ideal span (after
    restricting to degree <= degree_bound when a bound is given).  Raises
    NotAdmissible when no such L <= max_len exists.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    relations = list(relations)
    degree_of = {a.name: a.degree for a in quiver.arrows}

    def path_degree(word):
        return sum(degree_of[a] for a in word)

    truncated = False
    paths_by_len: List[_PathList] = [_PathList([(v, ()) for v in quiver.vertices])]
    reducers: Dict[int, SubspaceReducer] = {}
    rels_by_len: Dict[int, List[Relation]] = {}
    for r in relations:
        rels_by_len.setdefault(r.length, []).append(r)

    stab = None
    ell = 0
    while ell < max_len:
        ell += 1
        prev = paths_by_len[ell - 1]
        items = []
        for (s, word) in prev.items:
            last_target = quiver.arrow[word[-1]].target if word else s
            for a in quiver.arrows_from[last_target]:
                w = word + (a.name,)
                if degree_bound is not None and path_degree(w) > degree_bound:
                    truncated = True
                    continue
                items.append((s, w))
        cur = _PathList(items)
        paths_by_len.append(cur)
        n = len(items)
        if n == 0:
            stab = ell
            break
        red = SubspaceReducer(field, n)
        reducers[ell] = red

        def add_combo(terms):
            vec = [field.zero] * n
            hit = False
            for c, key in terms:
                j = cur.index_of.get(key)
                if j is not None:
                    vec[j] = vec[j] + field(c)
                    hit = True
            if hit:
                red.add(vec)

        # ideal slice recursion: arrows*I + I*arrows + relations of this length
        prev_red = reducers.get(ell - 1)
        if prev_red is not None:
            prev_items = prev.items
            for row in list(prev_red.rows):
                supp = [(j, c) for j, c in enumerate(row) if c != field.zero]
                for a in quiver.arrows:
                    add_combo(
                        [(c, (a.source, (a.name,) + prev_items[j][1]))
                         for j, c in supp
                         if prev_items[j][0] == a.target]
                    )
                    right = []
                    for j, c in supp:
                        s, w = prev_items[j]
                        t = quiver.arrow[w[-1]].target if w else s
                        if t == a.source:
                            right.append((c, (s, w + (a.name,))))
                    add_combo(right)
        for r in rels_by_len.get(ell, ()):
            add_combo([(c, (r.source, w)) for c, w in r.terms])
        if red.rank == n:
            stab = ell
            break

    if stab is None:
        raise NotAdmissible(
            f"ideal span did not stabilize by length {max_len}; "
            "the relation ideal may not be admissible"
        )

    basis: List[Path] = []
    for ell in range(stab):
        plist = paths_by_len[ell]
        red = reducers.get(ell)
        pivot = set(red.pivots) if red is not None else set()
        for j, (s, w) in enumerate(plist.items):
            if j not in pivot:
                t = quiver.arrow[w[-1]].target if w else s
                basis.append(Path(s, t, w))

    alg = PresentedAlgebra(
        quiver, relations, field, basis, reducers, stab,
        degree_bound=degree_bound, truncated=truncated,
    )
    alg._paths_by_len = paths_by_len
    return alg


# ---------------------------------------------------------------------------
# Presenting an abstract finite-dimensional (graded) algebra by a quiver.
# ---------------------------------------------------------------------------


class AlgebraData:
    """An abstract algebra given by structure data, to be re-presented.

    mul(i, j) must return the product of basis elements as a dense list over
    the basis; for degree-truncated input it must return zero past the bound.
    Basis elements must be degree-homogeneous and the idempotents orthogonal,
    primitive, of degree 0, summing to the unit.
    """

    def __init__(self, field, dim, mul, idempotents, degrees, truncated_above=None):
        self.field = field
        self.dim = dim
        self.mul = mul
        self.idempotents = idempotents  # list of (vertex label, vector)
        self.degrees = list(degrees)
        self.truncated_above = truncated_above

    def el_mul(self, x: Sequence, y: Sequence) -> List:
        zero = self.field.zero
        out = [zero] * self.dim
        for i, a in enumerate(x):
            if a == zero:
                continue
            for j, b in enumerate(y):
                if b == zero:
                    continue
                ab = a * b
                row = self.mul(i, j)
                for k, c in enumerate(row):
                    if c != zero:
                        out[k] = out[k] + ab * c
        return out


def present_algebra(data: AlgebraData, degree_bound: Optional[int] = None,
                    length_cap: int = 30, arrow_prefix: str = "a") -> PresentedAlgebra:
    """Present an abstract algebra by a quiver with relations.

    Vertices are the given idempotents; arrows lift a basis of J/J^2 for the
    graded radical J; relations are minimal generators of the kernel of the
    induced map from the path algebra, found length by length in each
    (source, target, degree) slice.  Terminates at the first length all of
    whose paths (within the degree bound) already lie in the relation ideal.
    """
    from . import structure

    field = data.field
    n = data.dim
    zero, one = field.zero, field.one
    if degree_bound is None:
        degree_bound = data.truncated_above if data.truncated_above is not None \
            else max(data.degrees, default=0)

    deg0 = [i for i in range(n) if data.degrees[i] == 0]

    def mul0(a, b):
        full = data.mul(deg0[a], deg0[b])
        return [full[g] for g in deg0]

    rad0 = structure.radical_from_mul(field, len(deg0), mul0)
    rad_vecs: List[List] = []
    for r in rad0:
        v = [zero] * n
        for k, g in enumerate(deg0):
            v[g] = r[k]
        rad_vecs.append(v)
    for i in range(n):
        if 0 < data.degrees[i] <= degree_bound:
            v = [zero] * n
            v[i] = one
            rad_vecs.append(v)

    rad2 = SubspaceReducer(field, n)
    for x in rad_vecs:
        for y in rad_vecs:
            p = data.el_mul(x, y)
            if any(c != zero for c in p):
                rad2.add(p)

    verts = [lbl for lbl, _ in data.idempotents]
    evec = {lbl: vec for lbl, vec in data.idempotents}
    arrows: List[Arrow] = []
    arrow_img: Dict[str, List] = {}
    counter = 0
    for d in range(degree_bound + 1):
        for u in verts:
            for v in verts:
                seen = SubspaceReducer(field, n)
                for row in rad2.rows:
                    seen.add(row)
                for rvec in rad_vecs:
                    w = data.el_mul(evec[u], data.el_mul(rvec, evec[v]))
                    w = [w[i] if data.degrees[i] == d else zero for i in range(n)]
                    if any(c != zero for c in w) and seen.add(w):
                        counter += 1
                        name = f"{arrow_prefix}{counter}"
                        arrows.append(Arrow(name, u, v, d))
                        arrow_img[name] = w

    quiver = Quiver(verts, arrows)

    class _P:
        __slots__ = ("src", "tgt", "word", "deg", "img")

        def __init__(self, src, tgt, word, deg, img):
            self.src, self.tgt, self.word, self.deg, self.img = src, tgt, word, deg, img

    generators: List[Relation] = []
    # ideal elements at the previous length, as (src, tgt, deg, {word: coeff})
    ideal_prev: List[Tuple[object, object, int, Dict[Tuple, object]]] = []
    prev_level: List[_P] = [_P(v, v, (), 0, list(evec[v])) for v in verts]

    length = 0
    while length < length_cap:
        length += 1
        level: List[_P] = []
        for p in prev_level:
            for a in quiver.arrows_from[p.tgt]:
                d = p.deg + a.degree
                if d > degree_bound:
                    continue
                level.append(
                    _P(p.src, a.target, p.word + (a.name,),
                       d, data.el_mul(p.img, arrow_img[a.name]))
                )
        if not level:
            return _finish_presentation(data, quiver, generators, field, degree_bound, length)
        if length == 1:
            prev_level = level
            continue

        slices: Dict[Tuple[object, object, int], List[_P]] = {}
        for p in level:
            slices.setdefault((p.src, p.tgt, p.deg), []).append(p)
        word_index = {
            key: {p.word: j for j, p in enumerate(plist)}
            for key, plist in slices.items()
        }
        spans = {key: SubspaceReducer(field, len(plist)) for key, plist in slices.items()}

        def add_ideal_elem(src, tgt, deg, terms) -> bool:
            key = (src, tgt, deg)
            idx = word_index.get(key)
            if idx is None:
                return False
            vec = [zero] * len(slices[key])
            hit = False
            for w, c in terms.items():
                j = idx.get(w)
                if j is not None:
                    vec[j] = vec[j] + c
                    hit = True
            if not hit:
                return False
            return spans[key].add(vec)

        # propagate the ideal one length up: arrows * I  and  I * arrows
        for (src, tgt, deg, terms) in ideal_prev:
            for a in quiver.arrows:
                if a.target == src and deg + a.degree <= degree_bound:
                    add_ideal_elem(
                        a.source, tgt, deg + a.degree,
                        {(a.name,) + w: c for w, c in terms.items()},
                    )
                if a.source == tgt and deg + a.degree <= degree_bound:
                    add_ideal_elem(
                        src, a.target, deg + a.degree,
                        {w + (a.name,): c for w, c in terms.items()},
                    )

        # kernel of the evaluation map, slice by slice; new minimal generators
        all_covered = True
        ideal_now: List[Tuple[object, object, int, Dict[Tuple, object]]] = []
        for key in sorted(slices, key=str):
            u, v, d = key
            plist = slices[key]
            imgmat = Matrix(field, [p.img for p in plist])
            ker = imgmat.transpose().kernel_basis()
            for jcol in range(ker.cols):
                vec = ker.col(jcol)
                if not spans[key].contains(vec):
                    spans[key].add(vec)
                    terms = {plist[j].word: c for j, c in enumerate(vec) if c != zero}
                    generators.append(Relation(quiver, [(c, w) for w, c in terms.items()]))
            if spans[key].rank < len(plist):
                all_covered = False
            idx_items = plist
            for row in spans[key].rows:
                ideal_now.append(
                    (u, v, d,
                     {idx_items[j].word: c for j, c in enumerate(row) if c != zero})
                )
        if all_covered:
            return _finish_presentation(data, quiver, generators, field, degree_bound, length)
        ideal_prev = ideal_now
        prev_level = level

    raise PresentationNotStabilized(
        f"presentation extraction did not stabilize within length {length_cap}"
    )


def _finish_presentation(data, quiver, generators, field, degree_bound, stab_hint):
    bound = degree_bound if data.truncated_above is not None else None
    alg = build_algebra(
        quiver, generators, max_len=max(30, stab_hint + 2), field=field,
        degree_bound=bound,
    )
    want: Dict[int, int] = {}
    for i in range(data.dim):
        d = data.degrees[i]
        if d <= degree_bound:
            want[d] = want.get(d, 0) + 1
    got: Dict[int, int] = {}
    for d in alg.grading:
        got[d] = got.get(d, 0) + 1
    if want != got:
        raise AssertionError(
            f"presented algebra has graded dimensions {got}, expected {want}"
        )
    return alg


# ---------------------------------------------------------------------------
# Veronese subalgebras and global dimension.
# ---------------------------------------------------------------------------


def veronese(alg: PresentedAlgebra, l: int) -> PresentedAlgebra:
    """The subalgebra of elements of degree divisible by l, re-presented;
    the new grading divides all degrees by l."""
    if l < 1:
        raise ValueError("l must be >= 1")
    field = alg.field
    if alg.truncated and alg.degree_bound is not None and alg.max_degree() >= alg.degree_bound:
        raise NotFinite("algebra is degree-truncated; Veronese span may be incomplete")
    sel = [i for i in range(alg.dim) if alg.grading[i] % l == 0]
    pos = {g: k for k, g in enumerate(sel)}

    def mul(a, b):
        full = alg.mult(sel[a], sel[b])
        out = [field.zero] * len(sel)
        for k, c in full.items():
            out[pos[k]] = c  # products of selected elements stay selected
        return out

    idems = []
    for v in alg.quiver.vertices:
        vec = [field.zero] * len(sel)
        vec[pos[alg.stationary[v]]] = field.one
        idems.append((v, vec))
    degrees = [alg.grading[i] // l for i in sel]
    data = AlgebraData(field, len(sel), mul, idems, degrees)
    return present_algebra(data)


def global_dimension(alg: PresentedAlgebra, bound: int = 12):
    """Max projective dimension of the simple modules, or ABOVE_BOUND."""
    from . import modules

    best = 0
    for v in alg.quiver.vertices:
        S = modules.simple_module(alg, v)
        pd = modules.projective_dimension(S, bound)
        if pd is None:
            return ABOVE_BOUND
        best = max(best, pd)
    return best


# ---------------------------------------------------------------------------
# Isomorphism of presented algebras.
# ---------------------------------------------------------------------------


class IsoTestUnsupported(Exception):
    pass


def algebras_isomorphic(A: PresentedAlgebra, B: PresentedAlgebra) -> bool:
    """Decide isomorphism of two presented algebras.

    Vertices are matched through Hom-dimension profiles, arrows slot by slot
    (each slot must be at most 1-dimensional, which covers every comparison
    this toolkit performs), and arrow scalings are solved from two-term
    relations with a greedy gauge.  Dimension equality plus surjectivity on
    arrows then forces bijectivity.
    """
    if A.dim != B.dim or len(A.quiver.vertices) != len(B.quiver.vertices):
        return False
    if sorted(A.grading) != sorted(B.grading):
        return False

    def slot_dims(alg):
        out: Dict[tuple, int] = {}
        for a in alg.quiver.arrows:
            key = (a.source, a.target, a.degree)
            out[key] = out.get(key, 0) + 1
        return out

    slots_A, slots_B = slot_dims(A), slot_dims(B)
    if any(m > 1 for m in slots_A.values()) or any(m > 1 for m in slots_B.values()):
        raise IsoTestUnsupported("arrow multiplicity > 1 between a vertex pair")

    va, vb = A.quiver.vertices, B.quiver.vertices

    def profile(alg, v):
        row = tuple(sorted(alg.dim_pair(v, w) for w in alg.quiver.vertices))
        col = tuple(sorted(alg.dim_pair(w, v) for w in alg.quiver.vertices))
        return (alg.dim_pair(v, v), row, col)

    prof_a = {v: profile(A, v) for v in va}
    prof_b = {v: profile(B, v) for v in vb}
    candidates = {u: [v for v in vb if prof_b[v] == prof_a[u]] for u in va}
    if any(not c for c in candidates.values()):
        return False

    def extend(i, used, sigma):
        if i == len(va):
            yield dict(sigma)
            return
        u = va[i]
        for v in candidates[u]:
            if v in used:
                continue
            sigma[u] = v
            yield from extend(i + 1, used | {v}, sigma)
            del sigma[u]

    for sigma in extend(0, set(), {}):
        if _try_vertex_map(A, B, sigma, slots_A, slots_B):
            return True
    return False


def _try_vertex_map(A, B, sigma, slots_A, slots_B) -> bool:
    mapped = {(sigma[s], sigma[t], d): m for (s, t, d), m in slots_A.items()}
    if mapped != slots_B:
        return False
    barrow = {(a.source, a.target, a.degree): a.name for a in B.quiver.arrows}
    arrow_map = {
        a.name: barrow[(sigma[a.source], sigma[a.target], a.degree)]
        for a in A.quiver.arrows
    }

    def word_nfvec(word):
        src = sigma[A.quiver.arrow[word[0]].source]
        return B.nf_word(src, tuple(arrow_map[x] for x in word))

    ratio_constraints = []
    for r in A.relations:
        terms = [(c, w, word_nfvec(w)) for c, w in r.terms]
        nonzero = [(c, w, nf) for c, w, nf in terms if nf]
        if not nonzero:
            continue  # all terms already vanish in B
        if len(nonzero) == 1:
            return False
        if len(nonzero) > 2:
            raise IsoTestUnsupported("relation with more than two surviving terms")
        (c1, w1, nf1), (c2, w2, nf2) = nonzero
        keys = sorted(set(nf1) | set(nf2))
        lam = None
        for k in keys:
            x, y = nf1.get(k, A.field.zero), nf2.get(k, A.field.zero)
            if y == A.field.zero:
                if x != A.field.zero:
                    lam = False
                    break
                continue
            q = x / y
            if lam is None:
                lam = q
            elif lam != q:
                lam = False
                break
        if lam is False or lam is None:
            return False
        # c1*t(w1)*nf1 + c2*t(w2)*nf2 = 0 and nf1 = lam*nf2
        ratio_constraints.append((w1, w2, -c2 / (c1 * lam)))

    scale: Dict[str, Optional[Fraction]] = {a.name: None for a in A.quiver.arrows}

    def resolve():
        changed = True
        while changed:
            changed = False
            for w1, w2, rho in ratio_constraints:
                cnt: Dict[str, int] = {}
                for x in w1:
                    cnt[x] = cnt.get(x, 0) + 1
                for x in w2:
                    cnt[x] = cnt.get(x, 0) - 1
                cnt = {k: e for k, e in cnt.items() if e != 0}
                unknown = [k for k in cnt if scale[k] is None]
                if len(unknown) != 1:
                    continue
                k = unknown[0]
                e = cnt[k]
                rest = Fraction(1)
                for kk, ee in cnt.items():
                    if kk != k:
                        rest *= Fraction(scale[kk]) ** ee
                val = Fraction(rho) / rest
                if abs(e) == 1:
                    scale[k] = val if e == 1 else 1 / val
                elif abs(e) == 2:
                    v = val if e > 0 else 1 / val
                    rn = _isqrt_exact(v.numerator)
                    rd = _isqrt_exact(v.denominator)
                    if rn is None or rd is None:
                        return False
                    scale[k] = Fraction(rn, rd)
                else:
                    raise IsoTestUnsupported("arrow exponent > 2 in relation ratio")
                changed = True
        return True

    while True:
        if resolve() is False:
            return False
        free = [k for k in scale if scale[k] is None]
        if not free:
            break
        scale[free[0]] = Fraction(1)  # gauge choice

    for w1, w2, rho in ratio_constraints:
        lhs = Fraction(1)
        for x in w1:
            lhs *= scale[x]
        rhs = Fraction(rho)
        for x in w2:
            rhs *= scale[x]
        if lhs != rhs:
            return False
    return True


def _isqrt_exact(m: int):
    if m < 0:
        return None
    r = int(m ** 0.5)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c == m:
            return c
    return None
