"""Bounded complexes, homotopy-minimal forms, the derived Nakayama functor
and fractional Calabi-Yau verification.

Complexes are cohomological: d^i maps degree i to degree i+1 and [n] shifts a
degree-0 stalk into degree -n.  The Nakayama functor acts termwise on
complexes of projectives (P(v) -> I(v)); the result is re-resolved by
projectives through iterated mapping cones and minimalized by cancelling
differential entries with an invertible vertex component.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Tuple

from .linalg import Matrix
from .presented import ABOVE_BOUND, PresentedAlgebra, global_dimension
from . import modules as md
from .modules import Module, ModuleMap, ProjMap, compose


class InfiniteGlobalDimension(Exception):
    pass


def coxeter_number(dynkin_type: str, n: int) -> int:
    """Coxeter numbers of the simply laced Dynkin types."""
    if dynkin_type == "A":
        return n + 1
    if dynkin_type == "D":
        return 2 * n - 2
    if dynkin_type == "E" and n in (6, 7, 8):
        return {6: 12, 7: 18, 8: 30}[n]
    raise ValueError(f"unknown Dynkin type {dynkin_type}{n}")


class BoundedComplex:
    """Terms indexed by integers with d^i: term i -> term i+1 and d.d = 0."""

    def __init__(self, alg: PresentedAlgebra, terms: Dict[int, Module],
                 diff: Dict[int, ModuleMap]):
        self.alg = alg
        self.terms = {i: t for i, t in terms.items() if not t.is_zero()}
        self.diff = {}
        for i, d in diff.items():
            if i in self.terms and (i + 1) in self.terms:
                self.diff[i] = d

    def degrees(self) -> List[int]:
        return sorted(self.terms)

    def term(self, i: int) -> Module:
        t = self.terms.get(i)
        return t if t is not None else md.zero_module(self.alg)

    def d(self, i: int) -> Optional[ModuleMap]:
        return self.diff.get(i)

    def validate(self):
        for i, d in self.diff.items():
            assert d.source is self.terms[i] and d.target is self.terms[i + 1]
            assert d.verify(), f"differential at {i} is not a module map"
            d2 = self.diff.get(i + 1)
            if d2 is not None:
                assert compose(d, d2).is_zero(), f"d.d != 0 at degree {i}"

    def shift(self, n: int) -> "BoundedComplex":
        terms = {i - n: t for i, t in self.terms.items()}
        diff = {}
        for i, d in self.diff.items():
            diff[i - n] = d if n % 2 == 0 else d.scale(-1)
        return BoundedComplex(self.alg, terms, diff)

    def cohomology_dims(self) -> Dict[int, int]:
        out = {}
        for i in self.terms:
            t = self.terms[i]
            din, dout = self.diff.get(i - 1), self.diff.get(i)
            rk_in = sum(din.blocks[v].rank() for v in t.dims) if din else 0
            rk_out = sum(dout.blocks[v].rank() for v in t.dims) if dout else 0
            h = t.total_dim() - rk_in - rk_out
            if h:
                out[i] = h
        return out

    def total_dim(self) -> int:
        return sum(t.total_dim() for t in self.terms.values())

    def __repr__(self):
        return "Complex(" + ", ".join(
            f"{i}:{self.terms[i].total_dim()}" for i in self.degrees()) + ")"


def stalk_complex(M: Module, degree: int = 0) -> BoundedComplex:
    return BoundedComplex(M.alg, {degree: M}, {})


def dual_complex(c: BoundedComplex) -> BoundedComplex:
    """D c over the opposite algebra: term i is D(c^{-i})."""
    op = c.alg.opposite()
    terms = {-i: md.dual_module(t) for i, t in c.terms.items()}
    diff = {}
    for i, d in c.diff.items():
        diff[-(i + 1)] = d.dual()
    return BoundedComplex(op, terms, diff)


# -- complexes of explicit projectives -----------------------------------------


class ProjectiveComplex:
    """Terms are vertex lists (sums of indecomposable projectives); the
    differentials are matrices of algebra elements."""

    def __init__(self, alg: PresentedAlgebra, terms: Dict[int, List],
                 diff: Dict[int, ProjMap]):
        self.alg = alg
        self.terms = {i: list(vs) for i, vs in terms.items() if vs}
        self.diff = {i: d for i, d in diff.items()
                     if i in self.terms and i + 1 in self.terms}

    def degrees(self) -> List[int]:
        return sorted(self.terms)

    def term_module(self, i: int) -> Module:
        return md.projective_sum(self.alg, self.terms.get(i, []))

    def to_bounded_complex(self) -> BoundedComplex:
        mods = {i: self.term_module(i) for i in self.terms}
        diff = {}
        for i, d in self.diff.items():
            diff[i] = d.to_module_map(mods[i], mods[i + 1])
        return BoundedComplex(self.alg, mods, diff)

    def shift(self, n: int) -> "ProjectiveComplex":
        terms = {i - n: vs for i, vs in self.terms.items()}
        diff = {}
        for i, d in self.diff.items():
            entries = d.entries
            if n % 2:
                entries = [[{b: -c for b, c in x.items()} for x in row]
                           for row in entries]
            diff[i - n] = ProjMap(self.alg, d.src, d.tgt, entries)
        return ProjectiveComplex(self.alg, terms, diff)

    def has_radical_differentials(self) -> bool:
        return all(d.is_radical() for d in self.diff.values())

    def __repr__(self):
        return "ProjComplex(" + ", ".join(
            f"{i}:{len(self.terms[i])}" for i in self.degrees()) + ")"


def from_bounded_complex(c: BoundedComplex) -> ProjectiveComplex:
    """Requires every term to be an explicit projective sum."""
    terms = {}
    for i, t in c.terms.items():
        assert t.proj_layout is not None, "term is not an explicit projective sum"
        terms[i] = list(t.proj_summands)
    diff = {i: ProjMap.from_module_map(d) for i, d in c.diff.items()}
    return ProjectiveComplex(c.alg, terms, diff)


def _local_inverse(alg: PresentedAlgebra, v, x: Dict[int, object]):
    """Inverse of x in the local algebra e_v A e_v, or None."""
    idxs = alg.by_pair.get((v, v), [])
    pos = {b: k for k, b in enumerate(idxs)}
    n = len(idxs)
    cols = []
    for b in idxs:
        col = [alg.field.zero] * n
        for k, c in alg.el_mult(x, {b: alg.field.one}).items():
            col[pos[k]] = c
        cols.append(col)
    rhs = [alg.field.zero] * n
    rhs[pos[alg.stationary[v]]] = alg.field.one
    sol = Matrix.from_cols(alg.field, cols).solve(rhs)
    if sol is None:
        return None
    return {b: c for b, c in zip(idxs, sol) if c != alg.field.zero}


def minimal_form(pc: ProjectiveComplex) -> ProjectiveComplex:
    """Split off contractible summands by Gaussian elimination on invertible
    differential entries; the result has radical differentials."""
    alg = pc.alg
    field = alg.field
    terms = {i: list(vs) for i, vs in pc.terms.items()}
    diff: Dict[int, List[List[Dict]]] = {
        i: [list(row) for row in d.entries] for i, d in pc.diff.items()
    }

    changed = True
    while changed:
        changed = False
        for i in sorted(diff):
            rows = diff[i]
            nr, nc = len(terms.get(i + 1, [])), len(terms.get(i, []))
            found = None
            for r in range(nr):
                for c in range(nc):
                    if terms[i][c] != terms[i + 1][r]:
                        continue
                    x = rows[r][c]
                    stat = alg.stationary[terms[i][c]]
                    if x.get(stat, field.zero) == field.zero:
                        continue
                    inv = _local_inverse(alg, terms[i][c], x)
                    if inv is not None:
                        found = (r, c, inv)
                        break
                if found:
                    break
            if not found:
                continue
            r, c, inv = found
            for rr in range(nr):
                if rr == r or not rows[rr][c]:
                    continue
                gamma = rows[rr][c]
                for cc in range(nc):
                    if cc == c or not rows[r][cc]:
                        continue
                    beta = rows[r][cc]
                    corr = alg.el_mult(alg.el_mult(beta, inv), gamma)
                    cur = dict(rows[rr][cc])
                    for b, co in corr.items():
                        cur[b] = cur.get(b, field.zero) - co
                    rows[rr][cc] = {b: co for b, co in cur.items()
                                    if co != field.zero}
            terms[i].pop(c)
            terms[i + 1].pop(r)
            diff[i] = [[row[cc] for cc in range(nc) if cc != c]
                       for rr, row in enumerate(rows) if rr != r]
            if i - 1 in diff:
                diff[i - 1] = [row for rr, row in enumerate(diff[i - 1])
                               if rr != c]
            if i + 1 in diff:
                diff[i + 1] = [[row[cc] for cc in range(len(row)) if cc != r]
                               for row in diff[i + 1]]
            changed = True
            break

    out_terms = {i: vs for i, vs in terms.items() if vs}
    out_diff = {}
    for i, rows in diff.items():
        if i in out_terms and i + 1 in out_terms:
            out_diff[i] = ProjMap(alg, out_terms[i], out_terms[i + 1], rows)
    return ProjectiveComplex(alg, out_terms, out_diff)


# -- resolving complexes by projectives -----------------------------------------


def _module_resolution_complex(M: Module, at_degree: int, depth: Optional[int]
                               ) -> Tuple[BoundedComplex, Dict[int, ModuleMap]]:
    """Minimal resolution of a module as a complex ending at at_degree, with
    its augmentation (the cover map in that degree)."""
    alg = M.alg
    if M.is_zero():
        return BoundedComplex(alg, {}, {}), {}
    terms = {}
    diff = {}
    k = 0
    while True:
        res = md.minimal_resolution(M, k)
        terms[at_degree - k] = res.projs[k]
        if k > 0:
            diff[at_degree - k] = compose(res.covers[k], res.inclusions[k - 1])
        if res.syzygies[k + 1].is_zero():
            break
        if depth is not None and k >= depth:
            break
        k += 1
    eps = {at_degree: md.minimal_resolution(M, 0).covers[0]}
    return BoundedComplex(alg, terms, diff), eps


def lift_chain_map_with_homotopy(X: BoundedComplex, P: BoundedComplex,
                                 eps: Dict[int, ModuleMap], Y: BoundedComplex,
                                 g: Dict[int, ModuleMap]):
    """f: X -> P (chain map) and h with eps.f = g + d_Y h + h d_X, by a single
    linear solve; X must have projective terms and eps: P -> Y a quasi-iso."""
    alg = X.alg
    field = alg.field
    zero = field.zero
    degs = sorted(set(X.terms) | set(P.terms) | set(Y.terms) | set(g))
    if not degs:
        return {}, {}
    lo, hi = min(degs) - 1, max(degs) + 1
    f_basis = {q: (md.hom_basis(X.term(q), P.term(q))
                   if X.term(q).total_dim() and P.term(q).total_dim() else [])
               for q in range(lo, hi + 2)}
    h_basis = {q: (md.hom_basis(X.term(q), Y.term(q - 1))
                   if X.term(q).total_dim() and Y.term(q - 1).total_dim() else [])
               for q in range(lo, hi + 2)}
    f_off, h_off, pos = {}, {}, 0
    for q in range(lo, hi + 2):
        f_off[q] = pos
        pos += len(f_basis[q])
        h_off[q] = pos
        pos += len(h_basis[q])
    total = pos
    if total == 0:
        ok = all(m.is_zero() for m in g.values())
        assert ok, "chain lift infeasible with no unknowns"
        return {}, {}

    rows: List[List] = []
    rhs: List = []

    def emit(veclen, contribs, rhs_vec):
        # contribs: list of (var_index, vec)
        block = [[zero] * total for _ in range(veclen)]
        for t, vec in contribs:
            for k, val in enumerate(vec):
                if val != zero:
                    block[k][t] = block[k][t] + val
        rows.extend(block)
        rhs.extend(rhs_vec)

    for q in range(lo, hi + 1):
        Xq = X.term(q)
        if not Xq.total_dim():
            continue
        # chain condition on f: f^q d_P - d_X f^{q+1} = 0
        tgt = P.term(q + 1)
        if tgt.total_dim():
            veclen = md._homvec_len(Xq, tgt)
            contribs = []
            dP = P.d(q)
            if dP is not None:
                for t, b in enumerate(f_basis[q]):
                    contribs.append((f_off[q] + t, compose(b, dP).vectorize()))
            dX = X.d(q)
            if dX is not None:
                for t, b in enumerate(f_basis[q + 1]):
                    vec = compose(dX, b).vectorize()
                    contribs.append((f_off[q + 1] + t, [-v for v in vec]))
            emit(veclen, contribs, [zero] * veclen)
        # homotopy condition: eps f^q - d_Y h^q - h^{q+1} d_X = g^q
        Yq = Y.term(q)
        veclen = md._homvec_len(Xq, Yq)
        if veclen:
            contribs = []
            e = eps.get(q)
            if e is not None:
                for t, b in enumerate(f_basis[q]):
                    contribs.append((f_off[q] + t, compose(b, e).vectorize()))
            dY = Y.d(q - 1)
            if dY is not None:
                for t, b in enumerate(h_basis[q]):
                    vec = compose(b, dY).vectorize()
                    contribs.append((h_off[q] + t, [-v for v in vec]))
            dX = X.d(q)
            if dX is not None:
                for t, b in enumerate(h_basis[q + 1]):
                    vec = compose(dX, b).vectorize()
                    contribs.append((h_off[q + 1] + t, [-v for v in vec]))
            gq = g.get(q)
            emit(veclen, contribs, gq.vectorize() if gq is not None
                 else [zero] * veclen)

    sol = Matrix(field, rows).solve(rhs) if rows else [zero] * total
    assert sol is not None, "chain lift through quasi-iso failed (bug)"
    f_out, h_out = {}, {}
    for q in range(lo, hi + 2):
        if f_basis[q]:
            m = md.zero_map(X.term(q), P.term(q))
            for t, b in enumerate(f_basis[q]):
                c = sol[f_off[q] + t]
                if c != zero:
                    m = m + b.scale(c)
            f_out[q] = m
        if h_basis[q]:
            m = md.zero_map(X.term(q), Y.term(q - 1))
            for t, b in enumerate(h_basis[q]):
                c = sol[h_off[q] + t]
                if c != zero:
                    m = m + b.scale(c)
            h_out[q] = m
    return f_out, h_out


def cone(f: Dict[int, ModuleMap], X: BoundedComplex, Y: BoundedComplex
         ) -> Tuple[BoundedComplex, Dict]:
    """Mapping cone: term q is X^{q+1} + Y^q, differential [[-d_X, 0], [f, d_Y]].

    Returns the cone and the per-degree split data (X-part, Y-part, incls,
    projs)."""
    alg = X.alg
    terms, diff, parts = {}, {}, {}
    degs = sorted(set(d - 1 for d in X.terms) | set(Y.terms))
    for q in degs:
        a, b = X.term(q + 1), Y.term(q)
        if not a.total_dim() and not b.total_dim():
            continue
        S, incls, projs = md.direct_sum([a, b])
        terms[q] = S
        parts[q] = (a, b, incls, projs)
    for q in terms:
        if q + 1 not in terms:
            continue
        _a, _b, incls, projs = parts[q]
        _a2, _b2, incls2, projs2 = parts[q + 1]
        total = md.zero_map(terms[q], terms[q + 1])
        dX = X.d(q + 1)
        if dX is not None:
            total = total + compose(projs[0], dX.scale(-1), incls2[0])
        fq = f.get(q + 1)
        if fq is not None:
            total = total + compose(projs[0], fq, incls2[1])
        dY = Y.d(q)
        if dY is not None:
            total = total + compose(projs[1], dY, incls2[1])
        diff[q] = total
    return BoundedComplex(alg, terms, diff), parts


def projective_resolution_of_complex(C: BoundedComplex, depth: Optional[int] = None
                                     ) -> Tuple[BoundedComplex, Dict[int, ModuleMap]]:
    """A complex of explicit projective sums quasi-isomorphic to C, with an
    augmentation chain map, built by iterated cones over the stupid
    filtration.  depth=None requires every module resolution to terminate."""
    degs = sorted(C.terms)
    if not degs:
        return BoundedComplex(C.alg, {}, {}), {}
    M = degs[-1]
    top, eps_top = _module_resolution_complex(C.terms[M], M, depth)
    if len(degs) == 1:
        return top, eps_top
    lower = BoundedComplex(C.alg, {i: C.terms[i] for i in degs[:-1]},
                           {i: d for i, d in C.diff.items() if i + 1 < M})
    P_low, eps_low = projective_resolution_of_complex(lower, depth)
    # X := P_low[-1]; the glue map w: lower[-1] -> stalk(C^M) has the single
    # component d^{M-1}, so g := eps_low[-1] then w
    X = P_low.shift(-1)
    eps_X = {q: eps_low[q - 1] for q in [qq + 1 for qq in eps_low]}
    T = stalk_complex(C.terms[M], M)
    g = {}
    dglue = C.diff.get(M - 1)
    if dglue is not None and M in eps_X:
        g[M] = compose(eps_X[M], dglue)
    f, h = lift_chain_map_with_homotopy(X, top, eps_top, T, g)
    resolution, parts = cone(f, X, top)
    # augmentation: [eps_X^{q+1} with homotopy correction into C^M, eps_top]
    eps = {}
    for q, (a, b, incls, projs) in parts.items():
        if q not in C.terms:
            continue
        m = md.zero_map(resolution.terms[q], C.terms[q])
        if q < M and a.total_dim() and q + 1 in eps_X:
            m = m + compose(projs[0], eps_X[q + 1])
        if q == M:
            if b.total_dim() and q in eps_top:
                m = m + compose(projs[1], eps_top[q])
            hq = h.get(q + 1)
            if hq is not None and a.total_dim():
                m = m + compose(projs[0], hq)
        eps[q] = m
    _check_augmentation(resolution, C, eps, full=depth is None)
    return resolution, eps


def _check_augmentation(P: BoundedComplex, C: BoundedComplex,
                        eps: Dict[int, ModuleMap], full: bool):
    # chain map condition, trying the opposite homotopy sign on failure
    for q in sorted(P.terms):
        dP, dC = P.d(q), C.d(q)
        lhs = compose(dP, eps[q + 1]) if dP is not None and q + 1 in eps else None
        rhs = compose(eps[q], dC) if dC is not None and q in eps else None
        if lhs is None and rhs is None:
            continue
        a = lhs if lhs is not None else md.zero_map(P.terms[q], C.term(q + 1))
        b = rhs if rhs is not None else md.zero_map(P.terms[q], C.term(q + 1))
        assert (a - b).is_zero(), "augmentation is not a chain map (sign bug)"
    if full:
        assert P.cohomology_dims() == C.cohomology_dims(), \
            "resolution is not a quasi-isomorphism (bug)"


def injective_resolution_of_complex(C: BoundedComplex, depth: Optional[int] = None
                                    ) -> BoundedComplex:
    """A complex of explicit injective sums quasi-isomorphic to C (terms are
    duals of opposite projective sums).  A depth bound truncates on the right:
    the result is then only exact up to the truncation line."""
    P, _ = projective_resolution_of_complex(dual_complex(C), depth)
    return dual_complex(P)


# -- the derived Nakayama functor ------------------------------------------------


def nakayama_injective_image(pc: ProjectiveComplex) -> BoundedComplex:
    """nu termwise: P(v) -> I(v), entries transported through the duality."""
    alg = pc.alg
    terms = {i: md.injective_sum(alg, vs) for i, vs in pc.terms.items()}
    diff = {}
    for i, d in pc.diff.items():
        opmap = d.dual().to_module_map()  # P^op(tgt) -> P^op(src)
        diff[i] = ModuleMap(terms[i], terms[i + 1],
                            {v: opmap.blocks[v].transpose()
                             for v in alg.quiver.vertices})
    return BoundedComplex(alg, terms, diff)


def derived_nakayama(pc: ProjectiveComplex) -> ProjectiveComplex:
    """nu = D Hom(-, A) derived: termwise injectives, re-resolved by
    projectives and minimalized.  Requires finite global dimension."""
    gd = global_dimension(pc.alg, bound=24)
    if gd == ABOVE_BOUND:
        raise InfiniteGlobalDimension(
            "derived Nakayama functor needs finite global dimension")
    J = nakayama_injective_image(pc)
    P, _eps = projective_resolution_of_complex(J, depth=None)
    return minimal_form(from_bounded_complex(P))


# -- isomorphism of complexes and CY checks ---------------------------------------


class AlgebraMismatch(Exception):
    pass


def complex_iso(c1: ProjectiveComplex, c2: ProjectiveComplex) -> bool:
    """Isomorphism in the homotopy category, tested on minimal forms."""
    if c1.alg is not c2.alg:
        raise AlgebraMismatch("complexes over different algebras")
    m1, m2 = minimal_form(c1), minimal_form(c2)
    t1 = {i: sorted(map(str, vs)) for i, vs in m1.terms.items()}
    t2 = {i: sorted(map(str, vs)) for i, vs in m2.terms.items()}
    if t1 != t2:
        return False
    if not m1.diff and not m2.diff:
        return True  # split complexes with matching terms
    b1, b2 = m1.to_bounded_complex(), m2.to_bounded_complex()
    # chain maps both ways; look for a pair composing to an iso
    maps12 = _chain_maps(b1, b2)
    maps21 = _chain_maps(b2, b1)
    if not maps12 or not maps21:
        return False

    def invertible(u, w):
        for q in b1.terms:
            comp = compose(u[q], w[q])
            for v in comp.blocks:
                if not comp.blocks[v].is_invertible():
                    return False
        return True

    for u in maps12:
        for w in maps21:
            if invertible(u, w):
                return True
    rng = random.Random(987654)
    field = c1.alg.field
    for _ in range(200):
        u = _combine(maps12, [field(rng.randint(-3, 3)) for _ in maps12], b1, b2)
        w = _combine(maps21, [field(rng.randint(-3, 3)) for _ in maps21], b2, b1)
        if invertible(u, w):
            return True
    return False


def _chain_maps(b1: BoundedComplex, b2: BoundedComplex) -> List[Dict[int, ModuleMap]]:
    field = b1.alg.field
    zero = field.zero
    degs = sorted(set(b1.terms) | set(b2.terms))
    bases = {q: md.hom_basis(b1.term(q), b2.term(q))
             if b1.term(q).total_dim() and b2.term(q).total_dim() else []
             for q in degs}
    offs, pos = {}, 0
    for q in degs:
        offs[q] = pos
        pos += len(bases[q])
    if pos == 0:
        return []
    rows = []
    for q in degs:
        tgt = b2.term(q + 1)
        if not (b1.term(q).total_dim() and tgt.total_dim()):
            continue
        veclen = md._homvec_len(b1.term(q), tgt)
        block = [[zero] * pos for _ in range(veclen)]
        d2 = b2.d(q)
        if d2 is not None:
            for t, b in enumerate(bases[q]):
                for k, val in enumerate(compose(b, d2).vectorize()):
                    block[k][offs[q] + t] = block[k][offs[q] + t] + val
        d1 = b1.d(q)
        if d1 is not None:
            for t, b in enumerate(bases.get(q + 1, [])):
                for k, val in enumerate(compose(d1, b).vectorize()):
                    block[k][offs[q + 1] + t] = block[k][offs[q + 1] + t] - val
        rows.extend(block)
    if rows:
        ker = Matrix(field, rows).kernel_basis()
        vecs = [ker.col(j) for j in range(ker.cols)]
    else:
        vecs = [[field.one if t == s else zero for t in range(pos)]
                for s in range(pos)]
    out = []
    for vec in vecs:
        m = {}
        for q in degs:
            mm = md.zero_map(b1.term(q), b2.term(q))
            for t, b in enumerate(bases[q]):
                c = vec[offs[q] + t]
                if c != zero:
                    mm = mm + b.scale(c)
            m[q] = mm
        out.append(m)
    return out


def _combine(maps, coeffs, b1, b2):
    out = {}
    for q in set(b1.terms) | set(b2.terms):
        mm = md.zero_map(b1.term(q), b2.term(q))
        for c, u in zip(coeffs, maps):
            if c != b1.alg.field.zero and q in u:
                mm = mm + u[q].scale(c)
        out[q] = mm
    return out


def derived_hom_dim(c1: ProjectiveComplex, c2: ProjectiveComplex) -> int:
    """dim Hom in the homotopy category between complexes of projectives:
    chain maps modulo null-homotopic ones."""
    b1, b2 = c1.to_bounded_complex(), c2.to_bounded_complex()
    maps = _chain_maps(b1, b2)
    if not maps:
        return 0
    from .linalg import SubspaceReducer

    field = c1.alg.field
    degs = sorted(set(b1.terms) | set(b2.terms))

    def vec_of(u):
        out = []
        for q in degs:
            if q in u:
                out.extend(u[q].vectorize())
            else:
                out.extend([field.zero] * md._homvec_len(b1.term(q), b2.term(q)))
        return out

    veclen = sum(md._homvec_len(b1.term(q), b2.term(q)) for q in degs)
    nullred = SubspaceReducer(field, veclen)
    for q in degs:
        for h in md.hom_basis(b1.term(q), b2.term(q - 1)):
            comp = {}
            dB = b2.d(q - 1)
            if dB is not None:
                comp[q] = compose(h, dB)
            dA = b1.d(q - 1)
            if dA is not None:
                prev = comp.get(q - 1, md.zero_map(b1.term(q - 1), b2.term(q - 1)))
                comp[q - 1] = prev + compose(dA, h)
            nullred.add(vec_of(comp))
    dim = 0
    probe = SubspaceReducer(field, veclen)
    for r in nullred.rows:
        probe.add(r)
    for u in maps:
        if probe.add(vec_of(u)):
            dim += 1
    return dim


def regular_stalk(alg: PresentedAlgebra) -> ProjectiveComplex:
    return ProjectiveComplex(alg, {0: list(alg.quiver.vertices)}, {})


def nakayama_power(alg: PresentedAlgebra, b: int,
                   start: Optional[ProjectiveComplex] = None
                   ) -> Tuple[ProjectiveComplex, List[Dict[int, List]]]:
    """nu^b of the regular stalk, recording minimal-form terms at each step."""
    c = start if start is not None else regular_stalk(alg)
    sizes = []
    for _ in range(b):
        c = derived_nakayama(c)
        sizes.append({i: list(vs) for i, vs in sorted(c.terms.items())})
    return c, sizes


def cy_check(alg: PresentedAlgebra, a: int, b: int) -> dict:
    """Is nu^b of the regular object the a-fold shift of itself?

    Object-level verification on the regular module only; the functorial
    statement is deliberately not claimed.
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    gd = global_dimension(alg, bound=24)
    if gd == ABOVE_BOUND:
        raise InfiniteGlobalDimension("fractional CY check needs finite global dimension")
    power, sizes = nakayama_power(alg, b)
    target = regular_stalk(alg).shift(a)
    verdict = complex_iso(power, target)
    return {
        "verdict": verdict,
        "a": a,
        "b": b,
        "iterations": len(sizes),
        "minimal_form_sizes": [
            {str(i): len(vs) for i, vs in step.items()} for step in sizes
        ],
    }
