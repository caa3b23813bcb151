"""Auslander-Reiten theory: almost split sequences, knitting, stable
Auslander algebras and rigidity loci.

Knitting closes the indecomposable projectives under AR-quiver neighbours:
middle terms and ends of almost split sequences, radicals of projectives and
socle quotients of injectives.  For a representation-finite connected algebra
this reaches every indecomposable.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .linalg import Matrix, SubspaceReducer
from .presented import AlgebraData, PresentedAlgebra, present_algebra
from . import modules as md
from .modules import Module, ModuleMap, compose


class BoundExceeded(Exception):
    def __init__(self, kind, limit):
        super().__init__(f"knitting exceeded {kind} bound {limit}; "
                         "the algebra may be representation-infinite")
        self.kind, self.limit = kind, limit


class ProjectiveInput(Exception):
    pass


class NotIndecomposable(Exception):
    pass


class ShortExactSeq:
    """0 -> left -> middle -> right -> 0 with verified exactness."""

    def __init__(self, left_map: ModuleMap, right_map: ModuleMap):
        self.left_map = left_map
        self.right_map = right_map
        self.left = left_map.source
        self.middle = left_map.target
        self.right = right_map.target
        self.verify()

    def verify(self):
        a, b = self.left_map, self.right_map
        assert a.target is b.source
        assert compose(a, b).is_zero()
        for v in a.source.alg.quiver.vertices:
            ra = a.blocks[v].rank()
            assert ra == a.source.dims[v], "left map not injective"
            rb = b.blocks[v].rank()
            assert rb == b.target.dims[v], "right map not surjective"
            assert ra + rb == self.middle.dims[v], "not exact in the middle"


def factor_through_surjection(surj: ModuleMap, f: ModuleMap) -> ModuleMap:
    """g with surj.then(g) == f, given that f kills ker(surj)."""
    blocks = {}
    for v in surj.source.alg.quiver.vertices:
        st = surj.blocks[v].transpose()
        gt = st.solve_matrix(f.blocks[v].transpose())
        assert gt is not None, "map does not factor (bug)"
        blocks[v] = gt.transpose()
    return ModuleMap(surj.target, f.target, blocks)


def almost_split_sequence(X: Module) -> ShortExactSeq:
    """The almost split sequence 0 -> tau X -> E -> X -> 0.

    The extension class is a socle element of Ext^1(X, tau X) under the right
    End(X)-action; ties are broken by the first basis element.
    """
    if not md.is_indecomposable(X):
        raise NotIndecomposable("input module is not indecomposable")
    if md.is_projective(X):
        raise ProjectiveInput("projective modules admit no almost split sequence")
    tX = md.tau(X)
    e1 = md.ext_space(X, tX, 1)
    assert e1.dim >= 1, "Ext^1(X, tau X) = 0 for non-projective X (bug)"
    field = X.field
    rad_end = md.end_data(X).radical()
    rad_maps = []
    for r in rad_end:
        m = md.zero_map(X, X)
        for c, h in zip(r, md.end_data(X).basis):
            m = m + h.scale(c)
        rad_maps.append(m)
    # socle: classes killed by precomposition with Omega(rho), rho radical
    rows = []
    for rho in rad_maps:
        orho = md.omega_map(rho, 1)
        for b in e1.basis:
            rows.append(e1.class_coords(compose(orho, b)))
    if rows:
        # soc = kernel of the pairing matrix grouped per basis class
        k = e1.dim
        mat_rows = []
        for j in range(len(rad_maps)):
            block = rows[j * k:(j + 1) * k]
            # action matrix: column i = coords of (basis_i . rho_j)
            for out in range(k):
                mat_rows.append([block[i][out] for i in range(k)])
        ker = Matrix(field, mat_rows).kernel_basis()
        assert ker.cols >= 1, "socle of Ext^1(X, tau X) vanished (bug)"
        coeffs = ker.col(0)
    else:
        coeffs = [field.one] + [field.zero] * (e1.dim - 1)
    eta = md.zero_map(e1.basis[0].source, tX)
    for c, b in zip(coeffs, e1.basis):
        eta = eta + b.scale(c)

    res = md.minimal_resolution(X, 0)
    P0, cover, incl = res.projs[0], res.covers[0], res.inclusions[0]
    OX = res.syzygies[1]
    # pushout of 0 -> OX -> P0 -> X -> 0 along eta
    TE, incls, _ = md.direct_sum([tX, P0])
    u = compose(eta, incls[0]) - compose(incl, incls[1])
    E, proj = u.cokernel()
    left = compose(incls[0], proj)
    onto_x = factor_through_surjection(
        proj, ModuleMap(TE, X, {v: cover.blocks[v] *
                                _second_projection(TE, tX, P0, v)
                                for v in X.alg.quiver.vertices})
    )
    seq = ShortExactSeq(left, onto_x)
    return seq


def _second_projection(TE: Module, A: Module, B: Module, v) -> Matrix:
    field = TE.field
    m = Matrix.zeros(field, B.dims[v], TE.dims[v])
    for j in range(B.dims[v]):
        m.data[j][A.dims[v] + j] = field.one
    return m


def verify_almost_split(seq: ShortExactSeq, test_modules: Sequence[Module]) -> bool:
    """Every non-retraction M' -> right lifts through the middle term."""
    X = seq.right
    for Mp in test_modules:
        iso = md._indec_iso(Mp, X)
        if iso is not None:
            # non-retractions from M' = X are exactly the radical endos
            e = md.end_data(X)
            cand = []
            for r in e.radical():
                m = md.zero_map(X, X)
                for c, h in zip(r, e.basis):
                    m = m + h.scale(c)
                cand.append(compose(iso, m))
        else:
            cand = md.hom_basis(Mp, X)
        for f in cand:
            if _lift_through(f, seq.right_map) is None:
                return False
    return True


def _lift_through(f: ModuleMap, g: ModuleMap) -> Optional[ModuleMap]:
    """h with h.then(g) == f."""
    basis = md.hom_basis(f.source, g.source)
    cols = [h.then(g).vectorize() for h in basis]
    rhs = f.vectorize()
    if not cols:
        return None if any(x != f.source.field.zero for x in rhs) else md.zero_map(f.source, g.source)
    sol = Matrix.from_cols(f.source.field, cols).solve(rhs)
    if sol is None:
        return None
    out = md.zero_map(f.source, g.source)
    for c, h in zip(sol, basis):
        out = out + h.scale(c)
    return out


class KnitState:
    def __init__(self, alg: PresentedAlgebra):
        self.alg = alg
        self.found: List[Module] = []
        self.by_dimvec: Dict[Tuple[int, ...], List[int]] = {}
        self.is_proj: List[bool] = []
        self.is_inj: List[bool] = []
        self.tau_of: Dict[int, int] = {}

    def find(self, M: Module) -> Optional[int]:
        for i in self.by_dimvec.get(M.dim_vector(), ()):
            if md._indec_iso(M, self.found[i]) is not None:
                return i
        return None

    def add(self, M: Module) -> Tuple[int, bool]:
        i = self.find(M)
        if i is not None:
            return i, False
        i = len(self.found)
        self.found.append(M)
        self.by_dimvec.setdefault(M.dim_vector(), []).append(i)
        self.is_proj.append(md.is_projective(M))
        self.is_inj.append(md.is_injective(M))
        return i, True


def _cached_ar_sequence(X: Module) -> ShortExactSeq:
    seq = X._cache.get("ar_seq")
    if seq is None:
        seq = almost_split_sequence(X)
        X._cache["ar_seq"] = seq
    return seq


def knit(alg: PresentedAlgebra, max_count: int = 2000, max_dim: int = 200) -> KnitState:
    key = ("knit", max_count, max_dim)
    state = alg._caches.get(key)
    if state is not None:
        return state
    if max_count < 1 or max_dim < 1:
        raise ValueError("bounds must be positive")
    state = KnitState(alg)
    queue: List[int] = []
    for v in alg.quiver.vertices:
        P = md.projective_module(alg, v)
        if P.is_zero():
            continue
        i, new = state.add(P)
        if new:
            queue.append(i)

    def admit(M: Module) -> List[int]:
        fresh = []
        for piece, _m in md.decompose(M):
            if piece.total_dim() > max_dim:
                raise BoundExceeded("max_dim", max_dim)
            i, new = state.add(piece)
            if new:
                fresh.append(i)
            if len(state.found) > max_count:
                raise BoundExceeded("max_count", max_count)
        return fresh

    k = 0
    while k < len(queue):
        i = queue[k]
        k += 1
        X = state.found[i]
        neighbours: List[Module] = []
        if not state.is_proj[i]:
            seq = _cached_ar_sequence(X)
            ti, newt = state.add(seq.left)
            state.tau_of[i] = ti
            if newt:
                queue.append(ti)
            if not seq.middle.is_zero():
                neighbours.append(seq.middle)
        else:
            radX = md.radical_inclusion(X).source
            if not radX.is_zero():
                neighbours.append(radX)
        if not state.is_inj[i]:
            Y = md.tau_inverse(X)
            yi, newy = state.add(Y)
            if newy:
                queue.append(yi)
            seq = _cached_ar_sequence(state.found[yi])
            if not seq.middle.is_zero():
                neighbours.append(seq.middle)
        else:
            soc = md.socle_inclusion(X)
            Q, _ = soc.cokernel()
            if not Q.is_zero():
                neighbours.append(Q)
        for N in neighbours:
            for j in admit(N):
                queue.append(j)
    alg._caches[key] = state
    return state


def enumerate_indecomposables(alg: PresentedAlgebra, max_count: int = 2000,
                              max_dim: int = 200) -> List[Module]:
    return list(knit(alg, max_count, max_dim).found)


class ARQuiver:
    def __init__(self, alg, vertices, arrows, translation, is_proj, is_inj):
        self.alg = alg
        self.vertices = vertices          # list of Modules
        self.arrows = arrows              # list of (src idx, tgt idx, multiplicity)
        self.translation = translation    # dict idx -> idx (non-projectives)
        self.is_proj = is_proj
        self.is_inj = is_inj

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"id": i, "dim_vector": list(m.dim_vector()),
                 "projective": self.is_proj[i], "injective": self.is_inj[i]}
                for i, m in enumerate(self.vertices)
            ],
            "arrows": [
                {"source": s, "target": t, "multiplicity": m}
                for s, t, m in self.arrows
            ],
            "translation": {str(i): j for i, j in sorted(self.translation.items())},
        }

    def to_dot(self) -> str:
        lines = ["digraph ar_quiver {", "  rankdir=LR;"]
        for i, m in enumerate(self.vertices):
            label = "".join(str(d) for d in m.dim_vector())
            shape = "box" if self.is_proj[i] else "ellipse"
            lines.append(f'  n{i} [label="{label}", shape={shape}];')
        for s, t, mult in self.arrows:
            for _ in range(mult):
                lines.append(f"  n{s} -> n{t};")
        for i, j in sorted(self.translation.items()):
            lines.append(f"  n{i} -> n{j} [style=dashed, dir=back, constraint=false];")
        lines.append("}")
        return "\n".join(lines)


def rad_hom_basis(state: KnitState, i: int, j: int) -> List[ModuleMap]:
    X, Y = state.found[i], state.found[j]
    if i != j:
        return md.hom_basis(X, Y)
    out = []
    e = md.end_data(X)
    for r in e.radical():
        m = md.zero_map(X, X)
        for c, h in zip(r, e.basis):
            m = m + h.scale(c)
        out.append(m)
    return out


def ar_quiver(alg: PresentedAlgebra, max_count: int = 2000, max_dim: int = 200) -> ARQuiver:
    state = knit(alg, max_count, max_dim)
    n = len(state.found)
    rad: Dict[Tuple[int, int], List[ModuleMap]] = {}
    for i in range(n):
        for j in range(n):
            rad[(i, j)] = rad_hom_basis(state, i, j)
    arrows = []
    for i in range(n):
        for j in range(n):
            base = rad[(i, j)]
            if not base:
                continue
            veclen = md._homvec_len(state.found[i], state.found[j])
            red = SubspaceReducer(alg.field, veclen)
            for k in range(n):
                for f in rad[(i, k)]:
                    for g in rad[(k, j)]:
                        red.add(compose(f, g).vectorize())
            full = SubspaceReducer(alg.field, veclen)
            for r in red.rows:
                full.add(r)
            mult = 0
            for f in base:
                if full.add(f.vectorize()):
                    mult += 1
            if mult:
                arrows.append((i, j, mult))
    return ARQuiver(alg, state.found, arrows, dict(state.tau_of),
                    list(state.is_proj), list(state.is_inj))


# -- stable Auslander algebras -------------------------------------------------


def stable_auslander_algebra(alg: PresentedAlgebra, flavor: str = "modulo-injectives",
                             max_count: int = 2000, max_dim: int = 200) -> PresentedAlgebra:
    """End of an additive generator modulo maps factoring through injectives
    (or projectives), re-presented by quiver and relations."""
    if flavor not in ("modulo-injectives", "modulo-projectives"):
        raise ValueError("flavor must be modulo-injectives or modulo-projectives")
    state = knit(alg, max_count, max_dim)
    drop = state.is_inj if flavor == "modulo-injectives" else state.is_proj
    keep = [i for i in range(len(state.found)) if not drop[i]]
    through = [i for i in range(len(state.found)) if drop[i]]
    field = alg.field

    homs: Dict[Tuple[int, int], List[ModuleMap]] = {}
    ideal: Dict[Tuple[int, int], SubspaceReducer] = {}
    basis_labels: List[Tuple[int, int, int]] = []  # (i, j, index into quotient basis)
    block_basis: Dict[Tuple[int, int], List[ModuleMap]] = {}
    for i in keep:
        for j in keep:
            X, Y = state.found[i], state.found[j]
            hb = md.hom_basis(X, Y)
            homs[(i, j)] = hb
            veclen = md._homvec_len(X, Y)
            red = SubspaceReducer(field, veclen)
            for t in through:
                T = state.found[t]
                for f in md.hom_basis(X, T):
                    for g in md.hom_basis(T, Y):
                        red.add(compose(f, g).vectorize())
            ideal[(i, j)] = red
            chosen = []
            probe = SubspaceReducer(field, veclen)
            for r in red.rows:
                probe.add(r)
            for h in hb:
                if probe.add(h.vectorize()):
                    chosen.append(h)
            block_basis[(i, j)] = chosen
            for k in range(len(chosen)):
                basis_labels.append((i, j, k))

    index_of = {lab: n for n, lab in enumerate(basis_labels)}
    dim = len(basis_labels)
    coords: Dict[Tuple[int, int], object] = {}
    from . import structure

    for (i, j), chosen in block_basis.items():
        red = ideal[(i, j)]
        vecs = [red.reduce(h.vectorize()) for h in chosen]
        coords[(i, j)] = structure.CoordSolver(field, vecs)

    def mul(a: int, b: int) -> List:
        ia, ja, ka = basis_labels[a]
        ib, jb, kb = basis_labels[b]
        out = [field.zero] * dim
        if ja != ib:
            return out
        f = block_basis[(ia, ja)][ka]
        g = block_basis[(ib, jb)][kb]
        comp = compose(f, g)
        red = ideal[(ia, jb)]
        c = coords[(ia, jb)].coords(red.reduce(comp.vectorize()))
        assert c is not None
        for k, val in enumerate(c):
            out[index_of[(ia, jb, k)]] = val
        return out

    idems = []
    for i in keep:
        vec = [field.zero] * dim
        red = ideal[(i, i)]
        idm = md.identity_map(state.found[i])
        c = coords[(i, i)].coords(red.reduce(idm.vectorize()))
        assert c is not None
        for k, val in enumerate(c):
            vec[index_of[(i, i, k)]] = val
        idems.append((f"m{i}", vec))
    data = AlgebraData(field, dim, mul, idems, [0] * dim)
    return present_algebra(data)


# -- rigidity loci --------------------------------------------------------------


def rigid_locus(alg: PresentedAlgebra, t: Module, degrees: Set[int],
                two_sided: bool, max_count: int = 2000,
                max_dim: int = 200) -> List[Module]:
    """Non-projective indecomposables X with Ext^i(t, X) = 0 for i in degrees
    (and Ext^i(X, t) = 0 too when two_sided)."""
    state = knit(alg, max_count, max_dim)
    out = []
    for i, X in enumerate(state.found):
        if state.is_proj[i]:
            continue
        ok = True
        for d in sorted(degrees):
            if md.ext_dim(t, X, d) != 0:
                ok = False
                break
            if two_sided and md.ext_dim(X, t, d) != 0:
                ok = False
                break
        if ok:
            out.append(X)
    return out


def degree_zero_part_module(alg: PresentedAlgebra) -> Module:
    """The degree-0 part of a graded algebra as a left module over it
    (the regular module modulo the span of positive-degree basis paths)."""
    field = alg.field
    layout: Dict[object, List[Tuple[int, int]]] = {w: [] for w in alg.quiver.vertices}
    for i, v in enumerate(alg.quiver.vertices):
        for w in alg.quiver.vertices:
            for b in alg.by_pair.get((v, w), ()):
                if alg.grading[b] == 0:
                    layout[w].append((i, b))
    pos = {w: {lab: k for k, lab in enumerate(layout[w])} for w in layout}
    dims = {w: len(layout[w]) for w in layout}
    act = {}
    for a in alg.quiver.arrows:
        m = Matrix.zeros(field, dims[a.target], dims[a.source])
        if a.degree == 0:
            arr_idx = alg.basis_index[(a.source, (a.name,))]
            for col, (i, b) in enumerate(layout[a.source]):
                for k, c in alg.mult(b, arr_idx).items():
                    if alg.grading[k] == 0:
                        m.data[pos[a.target][(i, k)]][col] = c
        act[a.name] = m
    return Module(alg, dims, act)
