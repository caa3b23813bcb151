"""Finite-dimensional modules over a presented algebra.

A module assigns a space to each vertex and a matrix to each arrow mapping
the source fiber to the target fiber; a path acts by composing its arrow
matrices in order.  Projectives at v have basis the algebra basis paths
starting at v, injectives are duals of opposite projectives, and the
Auslander-Reiten translate is D Tr of a minimal projective presentation.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Matrix, SubspaceReducer
from .presented import PresentedAlgebra, Path
from . import structure


class AlgebraMismatch(Exception):
    pass


class NonSplitEndo(structure.NonSplitEndo):
    pass


class Module:
    def __init__(self, alg: PresentedAlgebra, dims: Dict[object, int],
                 act: Dict[str, Matrix]):
        self.alg = alg
        self.dims = {v: int(dims.get(v, 0)) for v in alg.quiver.vertices}
        self.act = act = dict(act)
        for a in alg.quiver.arrows:
            m = act.get(a.name)
            if m is None:
                act[a.name] = Matrix.zeros(alg.field, self.dims[a.target], self.dims[a.source])
            else:
                assert m.rows == self.dims[a.target] and m.cols == self.dims[a.source]
        self.proj_layout = None  # set for explicit projective sums
        self.proj_summands = None
        self._cache: Dict = {}

    @property
    def field(self):
        return self.alg.field

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.alg.quiver.vertices)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def act_word(self, source, word: Sequence[str]) -> Matrix:
        m = Matrix.identity(self.field, self.dims[source])
        at = source
        for a in word:
            arr = self.alg.quiver.arrow[a]
            assert arr.source == at
            m = self.act[a] * m
            at = arr.target
        return m

    def act_element(self, source, target, el: Dict[int, object]) -> Matrix:
        """Action of an algebra element supported on paths source -> target."""
        out = Matrix.zeros(self.field, self.dims[target], self.dims[source])
        for idx, c in el.items():
            p = self.alg.basis[idx]
            if p.source != source or p.target != target:
                continue
            out = out + self.act_word(source, p.word).scale(c)
        return out

    def validate(self) -> None:
        for r in self.alg.relations:
            src, tgt = r.source, r.target
            acc = Matrix.zeros(self.field, self.dims[tgt], self.dims[src])
            for c, w in r.terms:
                acc = acc + self.act_word(src, w).scale(c)
            if not acc.is_zero():
                raise ValueError(f"relation {r} does not vanish")

    def __repr__(self):
        return f"Module{self.dim_vector()}"


class ModuleMap:
    def __init__(self, source: Module, target: Module, blocks: Dict[object, Matrix]):
        self.source = source
        self.target = target
        self.blocks = {}
        for v in source.alg.quiver.vertices:
            b = blocks.get(v)
            if b is None:
                b = Matrix.zeros(source.field, target.dims[v], source.dims[v])
            assert b.rows == target.dims[v] and b.cols == source.dims[v]
            self.blocks[v] = b

    def then(self, g: "ModuleMap") -> "ModuleMap":
        assert self.target is g.source or self.target.dims == g.source.dims
        return ModuleMap(
            self.source, g.target,
            {v: g.blocks[v] * self.blocks[v] for v in self.blocks},
        )

    def __add__(self, o: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         {v: self.blocks[v] + o.blocks[v] for v in self.blocks})

    def __sub__(self, o: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         {v: self.blocks[v] - o.blocks[v] for v in self.blocks})

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         {v: self.blocks[v].scale(c) for v in self.blocks})

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def verify(self) -> bool:
        for a in self.source.alg.quiver.arrows:
            lhs = self.blocks[a.target] * self.source.act[a.name]
            rhs = self.target.act[a.name] * self.blocks[a.source]
            if lhs != rhs:
                return False
        return True

    def vectorize(self) -> List:
        out = []
        for v in self.source.alg.quiver.vertices:
            for row in self.blocks[v].data:
                out.extend(row)
        return out

    def kernel(self) -> Tuple[Module, "ModuleMap"]:
        alg = self.source.alg
        incl = {}
        dims = {}
        for v in alg.quiver.vertices:
            k = self.blocks[v].kernel_basis()
            incl[v] = k
            dims[v] = k.cols
        act = {}
        for a in alg.quiver.arrows:
            if dims[a.source] == 0 or dims[a.target] == 0:
                act[a.name] = Matrix.zeros(alg.field, dims[a.target], dims[a.source])
                continue
            rhs = self.source.act[a.name] * incl[a.source]
            sol = incl[a.target].solve_matrix(rhs)
            assert sol is not None, "kernel is not arrow-stable (bug)"
            act[a.name] = sol
        K = Module(alg, dims, act)
        return K, ModuleMap(K, self.source, incl)

    def image(self) -> Tuple[Module, "ModuleMap", "ModuleMap"]:
        """(I, incl: I -> target, corestriction: source -> I)."""
        alg = self.source.alg
        incl = {}
        dims = {}
        for v in alg.quiver.vertices:
            im = self.blocks[v].column_space_rref()
            incl[v] = im
            dims[v] = im.cols
        act = {}
        for a in alg.quiver.arrows:
            if dims[a.source] == 0 or dims[a.target] == 0:
                act[a.name] = Matrix.zeros(alg.field, dims[a.target], dims[a.source])
                continue
            rhs = self.target.act[a.name] * incl[a.source]
            sol = incl[a.target].solve_matrix(rhs)
            assert sol is not None
            act[a.name] = sol
        I = Module(alg, dims, act)
        core = {}
        for v in alg.quiver.vertices:
            if dims[v] == 0:
                core[v] = Matrix.zeros(alg.field, 0, self.source.dims[v])
            else:
                sol = incl[v].solve_matrix(self.blocks[v])
                assert sol is not None
                core[v] = sol
        return I, ModuleMap(I, self.target, incl), ModuleMap(self.source, I, core)

    def cokernel(self) -> Tuple[Module, "ModuleMap"]:
        alg = self.source.alg
        field = self.source.field
        proj = {}
        dims = {}
        reducers = {}
        frees = {}
        for v in alg.quiver.vertices:
            n = self.target.dims[v]
            red = SubspaceReducer(field, n)
            for j in range(self.blocks[v].cols):
                red.add(self.blocks[v].col(j))
            reducers[v] = red
            free = [j for j in range(n) if j not in red.pivots]
            frees[v] = free
            dims[v] = len(free)
            pm = Matrix.zeros(field, len(free), n)
            for i in range(n):
                e = [field.zero] * n
                e[i] = field.one
                r = red.reduce(e)
                for k, j in enumerate(free):
                    pm.data[k][i] = r[j]
            proj[v] = pm
        act = {}
        for a in alg.quiver.arrows:
            if dims[a.source] == 0 or dims[a.target] == 0:
                act[a.name] = Matrix.zeros(field, dims[a.target], dims[a.source])
                continue
            # induced action: lift basis vector j of coker at source (coordinate
            # free[j]), apply, project
            cols = []
            for j in frees[a.source]:
                e = [field.zero] * self.target.dims[a.source]
                e[j] = field.one
                cols.append(proj[a.target].apply(self.target.act[a.name].apply(e)))
            act[a.name] = Matrix.from_cols(field, cols)
        C = Module(alg, dims, act)
        return C, ModuleMap(self.target, C, proj)

    def dual(self) -> "ModuleMap":
        DS, DT = dual_module(self.source), dual_module(self.target)
        return ModuleMap(DT, DS, {v: self.blocks[v].transpose() for v in self.blocks})

    def __repr__(self):
        return f"ModuleMap({self.source!r} -> {self.target!r})"


def compose(*maps: ModuleMap) -> ModuleMap:
    """Left-to-right composition: compose(f, g) is 'f then g'."""
    out = maps[0]
    for m in maps[1:]:
        out = out.then(m)
    return out


def zero_map(M: Module, N: Module) -> ModuleMap:
    return ModuleMap(M, N, {})


def identity_map(M: Module) -> ModuleMap:
    return ModuleMap(M, M, {v: Matrix.identity(M.field, M.dims[v]) for v in M.dims})


# -- constructors -------------------------------------------------------------


def zero_module(alg: PresentedAlgebra) -> Module:
    return projective_sum(alg, [])


def simple_module(alg: PresentedAlgebra, v) -> Module:
    return Module(alg, {v: 1}, {})


def projective_sum(alg: PresentedAlgebra, vertices: Sequence) -> Module:
    """Direct sum of indecomposable projectives at the given vertices, with a
    labeled path basis (summand index, algebra basis index)."""
    layout: Dict[object, List[Tuple[int, int]]] = {w: [] for w in alg.quiver.vertices}
    for i, v in enumerate(vertices):
        for w in alg.quiver.vertices:
            for b in alg.by_pair.get((v, w), ()):
                layout[w].append((i, b))
    pos = {w: {lab: k for k, lab in enumerate(layout[w])} for w in layout}
    dims = {w: len(layout[w]) for w in layout}
    act = {}
    for a in alg.quiver.arrows:
        arr_idx = alg.basis_index[(a.source, (a.name,))]
        m = Matrix.zeros(alg.field, dims[a.target], dims[a.source])
        for col, (i, b) in enumerate(layout[a.source]):
            for k, c in alg.mult(b, arr_idx).items():
                m.data[pos[a.target][(i, k)]][col] = c
        act[a.name] = m
    P = Module(alg, dims, act)
    P.proj_layout = layout
    P.proj_summands = list(vertices)
    return P


def projective_module(alg: PresentedAlgebra, v) -> Module:
    return projective_sum(alg, [v])


def regular_module(alg: PresentedAlgebra) -> Module:
    return projective_sum(alg, list(alg.quiver.vertices))


def dual_module(M: Module) -> Module:
    """D M as a module over the opposite algebra."""
    op = M.alg.opposite()
    act = {}
    for a in op.quiver.arrows:
        act[a.name] = M.act[a.name].transpose()
    D = Module(op, dict(M.dims), act)
    return D


def injective_sum(alg: PresentedAlgebra, vertices: Sequence) -> Module:
    return dual_module(projective_sum(alg.opposite(), vertices))


def injective_module(alg: PresentedAlgebra, v) -> Module:
    return injective_sum(alg, [v])


def direct_sum(mods: Sequence[Module]):
    """(sum, inclusions, projections)."""
    assert mods
    alg = mods[0].alg
    field = alg.field
    dims = {v: sum(m.dims[v] for m in mods) for v in alg.quiver.vertices}
    act = {}
    for a in alg.quiver.arrows:
        m = Matrix.zeros(field, dims[a.target], dims[a.source])
        ro = co = 0
        for mod in mods:
            b = mod.act[a.name]
            for i in range(b.rows):
                for j in range(b.cols):
                    m.data[ro + i][co + j] = b.data[i][j]
            ro += mod.dims[a.target]
            co += mod.dims[a.source]
        act[a.name] = m
    S = Module(alg, dims, act)
    if all(m.proj_layout is not None for m in mods):
        layout = {w: [] for w in alg.quiver.vertices}
        summands = []
        off = 0
        for m in mods:
            for w in alg.quiver.vertices:
                layout[w].extend((off + i, b) for (i, b) in m.proj_layout[w])
            summands.extend(m.proj_summands)
            off += len(m.proj_summands)
        S.proj_layout = layout
        S.proj_summands = summands
    incls, projs = [], []
    off = {v: 0 for v in alg.quiver.vertices}
    for m in mods:
        ib, pb = {}, {}
        for v in alg.quiver.vertices:
            inc = Matrix.zeros(field, dims[v], m.dims[v])
            prj = Matrix.zeros(field, m.dims[v], dims[v])
            for j in range(m.dims[v]):
                inc.data[off[v] + j][j] = field.one
                prj.data[j][off[v] + j] = field.one
            ib[v], pb[v] = inc, prj
            off[v] += m.dims[v]
        incls.append(ModuleMap(m, S, ib))
        projs.append(ModuleMap(S, m, pb))
    return S, incls, projs


# -- hom spaces ---------------------------------------------------------------


def hom_basis(M: Module, N: Module) -> List[ModuleMap]:
    if M.alg is not N.alg:
        raise AlgebraMismatch("modules over different algebras")
    field = M.field
    verts = M.alg.quiver.vertices
    offs = {}
    total = 0
    for v in verts:
        offs[v] = total
        total += N.dims[v] * M.dims[v]
    if total == 0:
        return []
    rows = []
    for a in M.alg.quiver.arrows:
        u, w = a.source, a.target
        nu, mu = N.dims[u], M.dims[u]
        nw, mw = N.dims[w], M.dims[w]
        if nw * mu == 0:
            continue
        Ma, Na = M.act[a.name], N.act[a.name]
        # constraint: N_a h_u - h_w M_a = 0, entries (i in nw, j in mu)
        for i in range(nw):
            for j in range(mu):
                row = [field.zero] * total
                for k in range(nu):
                    c = Na.data[i][k]
                    if c != field.zero:
                        row[offs[u] + k * mu + j] = row[offs[u] + k * mu + j] + c
                for k in range(mw):
                    c = Ma.data[k][j]
                    if c != field.zero:
                        row[offs[w] + i * mw + k] = row[offs[w] + i * mw + k] - c
                if any(x != field.zero for x in row):
                    rows.append(row)
    if rows:
        ker = Matrix(field, rows).kernel_basis()
        vecs = [ker.col(j) for j in range(ker.cols)]
    else:
        vecs = []
        for t in range(total):
            e = [field.zero] * total
            e[t] = field.one
            vecs.append(e)
    out = []
    for vec in vecs:
        blocks = {}
        for v in verts:
            b = Matrix.zeros(field, N.dims[v], M.dims[v])
            for i in range(N.dims[v]):
                for j in range(M.dims[v]):
                    b.data[i][j] = vec[offs[v] + i * M.dims[v] + j]
            blocks[v] = b
        out.append(ModuleMap(M, N, blocks))
    return out


def hom_with_composites(M: Module, N: Module,
                        constraints: Sequence[Tuple[ModuleMap, ModuleMap]]
                        ) -> Optional[ModuleMap]:
    """Some h: M -> N with u.then(h) == w for every (u: U->M, w: U->N)."""
    basis = hom_basis(M, N)
    if not basis:
        ok = all(w.is_zero() for _u, w in constraints)
        return zero_map(M, N) if ok else None
    cols = [[] for _ in basis]
    rhs = []
    for u, w in constraints:
        for k, h in enumerate(basis):
            cols[k].extend(u.then(h).vectorize())
        rhs.extend(w.vectorize())
    sol = Matrix.from_cols(M.field, cols).solve(rhs)
    if sol is None:
        return None
    out = zero_map(M, N)
    for c, h in zip(sol, basis):
        out = out + h.scale(c)
    return out


def hom_dim(M: Module, N: Module) -> int:
    return len(hom_basis(M, N))


# -- radical, top, socle -----------------------------------------------------


def radical_inclusion(M: Module) -> ModuleMap:
    """rad M = sum of arrow images, as a submodule inclusion."""
    alg = M.alg
    field = M.field
    incl = {}
    for v in alg.quiver.vertices:
        red = SubspaceReducer(field, M.dims[v])
        for a in alg.quiver.arrows_into[v]:
            m = M.act[a.name]
            for j in range(m.cols):
                red.add(m.col(j))
        incl[v] = Matrix.from_cols(field, [list(r) for r in red.rows]) \
            if red.rows else Matrix.zeros(field, M.dims[v], 0)
    dims = {v: incl[v].cols for v in incl}
    act = {}
    for a in alg.quiver.arrows:
        if dims[a.source] == 0 or dims[a.target] == 0:
            act[a.name] = Matrix.zeros(field, dims[a.target], dims[a.source])
        else:
            sol = incl[a.target].solve_matrix(M.act[a.name] * incl[a.source])
            assert sol is not None
            act[a.name] = sol
    R = Module(alg, dims, act)
    return ModuleMap(R, M, incl)


def top_generators(M: Module) -> Dict[object, List[List]]:
    """Vertexwise lifts of a basis of M / rad M."""
    alg = M.alg
    field = M.field
    out = {}
    for v in alg.quiver.vertices:
        red = SubspaceReducer(field, M.dims[v])
        for a in alg.quiver.arrows_into[v]:
            m = M.act[a.name]
            for j in range(m.cols):
                red.add(m.col(j))
        gens = []
        for j in range(M.dims[v]):
            e = [field.zero] * M.dims[v]
            e[j] = field.one
            if red.add(e):
                gens.append(e)
        out[v] = gens
    return out


def socle_inclusion(M: Module) -> ModuleMap:
    """The largest semisimple submodule: vertexwise intersection of outgoing kernels."""
    alg = M.alg
    field = M.field
    incl = {}
    for v in alg.quiver.vertices:
        rows = []
        for a in alg.quiver.arrows_from[v]:
            rows.extend(M.act[a.name].data)
        if rows:
            incl[v] = Matrix(field, rows).kernel_basis()
        else:
            incl[v] = Matrix.identity(field, M.dims[v])
    dims = {v: incl[v].cols for v in incl}
    S = Module(alg, dims, {})
    return ModuleMap(S, M, incl)


# -- projective covers and resolutions ---------------------------------------


def projective_cover(M: Module) -> ModuleMap:
    """The minimal cover P -> M (P an explicit projective sum)."""
    alg = M.alg
    field = M.field
    gens = top_generators(M)
    verts = []
    lifts = []
    for v in alg.quiver.vertices:
        for g in gens[v]:
            verts.append(v)
            lifts.append((v, g))
    P = projective_sum(alg, verts)
    blocks = {}
    for w in alg.quiver.vertices:
        m = Matrix.zeros(field, M.dims[w], P.dims[w])
        for col, (i, b) in enumerate(P.proj_layout[w]):
            v, g = lifts[i]
            p = alg.basis[b]
            vec = M.act_word(v, p.word).apply(g)
            for r in range(M.dims[w]):
                m.data[r][col] = vec[r]
        blocks[w] = m
    return ModuleMap(P, M, blocks)


def syzygy(M: Module) -> Module:
    return minimal_resolution(M, 1).syzygies[1]


class ProjMap:
    """A map between explicit projective sums, as a matrix of algebra elements.

    entries[i][j] lies in e_{tgt[i]} A e_{src[j]} (paths tgt[i] -> src[j]); the
    module map sends the generator of src[j] to that element of P(tgt[i]).
    """

    def __init__(self, alg: PresentedAlgebra, src: List, tgt: List,
                 entries: List[List[Dict[int, object]]]):
        self.alg = alg
        self.src = src
        self.tgt = tgt
        self.entries = entries

    @classmethod
    def from_module_map(cls, f: ModuleMap) -> "ProjMap":
        P, Q = f.source, f.target
        assert P.proj_layout is not None and Q.proj_layout is not None
        alg = P.alg
        entries = [[{} for _ in P.proj_summands] for _ in Q.proj_summands]
        for j, v in enumerate(P.proj_summands):
            col = P.proj_layout[v].index((j, alg.stationary[v]))
            vec = f.blocks[v].col(col)
            for r, (i, b) in enumerate(Q.proj_layout[v]):
                c = vec[r]
                if c != alg.field.zero:
                    entries[i][j][b] = entries[i][j].get(b, alg.field.zero) + c
        return cls(alg, list(P.proj_summands), list(Q.proj_summands), entries)

    def to_module_map(self, P: Optional[Module] = None, Q: Optional[Module] = None) -> ModuleMap:
        alg = self.alg
        field = alg.field
        if P is None:
            P = projective_sum(alg, self.src)
        if Q is None:
            Q = projective_sum(alg, self.tgt)
        blocks = {}
        for w in alg.quiver.vertices:
            m = Matrix.zeros(field, Q.dims[w], P.dims[w])
            qpos = {lab: k for k, lab in enumerate(Q.proj_layout[w])}
            for col, (j, b) in enumerate(P.proj_layout[w]):
                for i in range(len(self.tgt)):
                    x = self.entries[i][j]
                    for bi, c in x.items():
                        for k, c2 in alg.mult(bi, b).items():
                            r = qpos[(i, k)]
                            m.data[r][col] = m.data[r][col] + c * c2
            blocks[w] = m
        return ModuleMap(P, Q, blocks)

    def dual(self) -> "ProjMap":
        """The transposed map between opposite projectives."""
        op = self.alg.opposite()
        entries = [
            [self.alg.reverse_element(self.entries[i][j]) for i in range(len(self.tgt))]
            for j in range(len(self.src))
        ]
        return ProjMap(op, list(self.tgt), list(self.src), entries)

    def is_radical(self) -> bool:
        stat = set(self.alg.stationary.values())
        for row in self.entries:
            for x in row:
                if any(b in stat and c != self.alg.field.zero for b, c in x.items()):
                    return False
        return True


class Resolution:
    """Minimal projective resolution, extended lazily."""

    def __init__(self, M: Module):
        self.module = M
        self.syzygies: List[Module] = [M]
        self.covers: List[ModuleMap] = []       # P_k -> syzygy_k
        self.inclusions: List[ModuleMap] = []   # syzygy_{k+1} -> P_k
        self.projs: List[Module] = []
        self.diff: List[Optional[ProjMap]] = []  # d_k : P_k -> P_{k-1}

    def ensure(self, n: int) -> "Resolution":
        while len(self.projs) <= n:
            k = len(self.projs)
            cover = projective_cover(self.syzygies[k])
            K, incl = cover.kernel()
            self.covers.append(cover)
            self.projs.append(cover.source)
            self.inclusions.append(incl)
            self.syzygies.append(K)
            if k == 0:
                self.diff.append(None)
            else:
                d = compose(self.covers[k], self.inclusions[k - 1])
                self.diff.append(ProjMap.from_module_map(d))
        return self


def minimal_resolution(M: Module, n: int) -> Resolution:
    res = M._cache.get("resolution")
    if res is None:
        res = Resolution(M)
        M._cache["resolution"] = res
    return res.ensure(n)


def minimal_projective_resolution(M: Module, n: int):
    """(projectives P_0..P_n, differentials d_k: P_k -> P_{k-1} as maps)."""
    res = minimal_resolution(M, n)
    ps = res.projs[: n + 1]
    ds = []
    for k in range(1, n + 1):
        ds.append(compose(res.covers[k], res.inclusions[k - 1]))
    return ps, ds


def projective_dimension(M: Module, bound: int) -> Optional[int]:
    if M.is_zero():
        return 0
    res = Resolution(M)
    k = 0
    while k <= bound:
        res.ensure(k)
        if res.syzygies[k + 1].is_zero():
            return k
        k += 1
    return None


def is_projective(M: Module) -> bool:
    if M.is_zero():
        return True
    return minimal_resolution(M, 0).syzygies[1].is_zero()


def is_injective(M: Module) -> bool:
    return is_projective(dual_module(M))


# -- Ext and the graded product ----------------------------------------------


class ExtSpace:
    """Ext^i(M, N) presented by maps out of the i-th syzygy.

    For i >= 1 a map f: Omega^i M -> N is trivial in Ext exactly when it
    extends along the inclusion Omega^i M -> P_{i-1}; classes are coordinates
    modulo that subspace.
    """

    def __init__(self, M: Module, N: Module, i: int):
        self.source, self.target, self.degree = M, N, i
        field = M.field
        if i == 0:
            self.hom = hom_basis(M, N)
            self.trivial = SubspaceReducer(field, _homvec_len(M, N))
        else:
            res = minimal_resolution(M, i - 1)
            omega = res.syzygies[i]
            incl = res.inclusions[i - 1]
            self.hom = hom_basis(omega, N)
            self.trivial = SubspaceReducer(field, _homvec_len(omega, N))
            for h in hom_basis(res.projs[i - 1], N):
                self.trivial.add(incl.then(h).vectorize())
        self.basis: List[ModuleMap] = []
        reduced = []
        probe = SubspaceReducer(field, self.trivial.dim)
        for r in self.trivial.rows:
            probe.add(r)
        for h in self.hom:
            v = h.vectorize()
            if probe.add(v):
                self.basis.append(h)
                reduced.append(self.trivial.reduce(v))
        self._coords = structure.CoordSolver(field, reduced)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def class_coords(self, f: ModuleMap) -> List:
        r = self.trivial.reduce(f.vectorize())
        c = self._coords.coords(r)
        assert c is not None, "map is not in the Ext space"
        return c

    def is_trivial(self, f: ModuleMap) -> bool:
        return all(x == self.source.field.zero for x in self.class_coords(f))


def _homvec_len(M: Module, N: Module) -> int:
    return sum(N.dims[v] * M.dims[v] for v in M.alg.quiver.vertices)


def ext_space(M: Module, N: Module, i: int) -> ExtSpace:
    key = ("ext", id(N), i)
    hit = M._cache.get(key)
    if hit is None:
        hit = ExtSpace(M, N, i)
        M._cache[key] = hit
    return hit


def ext_dim(M: Module, N: Module, i: int) -> int:
    return ext_space(M, N, i).dim


class ExtClass:
    """An element of Ext^i(M, N): a map Omega^i M -> N up to trivial ones."""

    def __init__(self, M: Module, N: Module, i: int, rep: ModuleMap):
        self.source, self.target, self.degree, self.rep = M, N, i, rep

    def coords(self) -> List:
        return ext_space(self.source, self.target, self.degree).class_coords(self.rep)

    def is_zero(self) -> bool:
        return ext_space(self.source, self.target, self.degree).is_trivial(self.rep)


def lift_through_cover(f: ModuleMap, cover_src: ModuleMap, cover_tgt: ModuleMap) -> ModuleMap:
    """u with cover_src.then(f) == u.then(cover_tgt), by projectivity."""
    target_map = compose(cover_src, f)
    basis = hom_basis(cover_src.source, cover_tgt.source)
    cols = [h.then(cover_tgt).vectorize() for h in basis]
    rhs = target_map.vectorize()
    if not cols:
        assert all(x == f.source.field.zero for x in rhs)
        return zero_map(cover_src.source, cover_tgt.source)
    sol = Matrix.from_cols(f.source.field, cols).solve(rhs)
    assert sol is not None, "projective lifting failed (bug)"
    out = zero_map(cover_src.source, cover_tgt.source)
    for c, h in zip(sol, basis):
        out = out + h.scale(c)
    return out


def omega_map(f: ModuleMap, steps: int) -> ModuleMap:
    """Omega^steps f: Omega^steps(source) -> Omega^steps(target) along the
    cached minimal resolutions."""
    cur = f
    for _ in range(steps):
        res_s = minimal_resolution(cur.source, 0)
        res_t = minimal_resolution(cur.target, 0)
        u = lift_through_cover(cur, res_s.covers[0], res_t.covers[0])
        # restrict u to the syzygies
        incl_s, incl_t = res_s.inclusions[0], res_t.inclusions[0]
        rhs = compose(incl_s, u)
        blocks = {}
        for v in f.source.alg.quiver.vertices:
            if incl_t.blocks[v].cols == 0:
                blocks[v] = Matrix.zeros(f.source.field, 0, rhs.blocks[v].cols)
            else:
                sol = incl_t.blocks[v].solve_matrix(rhs.blocks[v])
                assert sol is not None, "lift does not preserve syzygies (bug)"
                blocks[v] = sol
        cur = ModuleMap(res_s.syzygies[1], res_t.syzygies[1], blocks)
    return cur


def yoneda_product(f: ExtClass, g: ExtClass) -> ExtClass:
    """Splice f in Ext^i(B, C) with g in Ext^j(A, B) to f*g in Ext^{i+j}(A, C)."""
    if f.source is not g.target:
        raise AlgebraMismatch("degree/endpoint mismatch in Yoneda product")
    i, j = f.degree, g.degree
    if i == 0:
        return ExtClass(g.source, f.target, j, compose(g.rep, f.rep))
    # Omega^i of (Omega^j A -> B) has source the (i+j)-th syzygy of A
    gi = omega_map(g.rep, i)
    return ExtClass(g.source, f.target, i + j, compose(gi, f.rep))


# -- duality, transpose, AR translation --------------------------------------


def minimal_presentation(M: Module) -> ProjMap:
    return minimal_resolution(M, 1).diff[1]


def transpose(M: Module) -> Module:
    """Tr M over the opposite algebra, from a minimal presentation."""
    d = minimal_presentation(M)
    dd = d.dual()
    if not dd.src and not dd.tgt:
        return zero_module(M.alg.opposite())
    f = dd.to_module_map()
    C, _ = f.cokernel()
    return C


def tau(M: Module) -> Module:
    """AR translate D Tr M; zero on projectives."""
    return dual_module(transpose(M))


def tau_inverse(M: Module) -> Module:
    """Tr D M; zero on injectives."""
    return transpose(dual_module(M))


# -- endomorphism structure, isomorphism, decomposition -----------------------


class EndData:
    def __init__(self, M: Module):
        self.module = M
        self.basis = hom_basis(M, M)
        field = M.field
        vecs = [h.vectorize() for h in self.basis]
        self.coords = structure.CoordSolver(field, vecs)
        n = len(self.basis)
        self._mul_cache: Dict[Tuple[int, int], List] = {}
        self.n = n

    def mul(self, i: int, j: int) -> List:
        key = (i, j)
        hit = self._mul_cache.get(key)
        if hit is None:
            # product convention: i then j
            hit = self.coords.coords(self.basis[i].then(self.basis[j]).vectorize())
            assert hit is not None
            self._mul_cache[key] = hit
        return hit

    def unit_coords(self) -> List:
        c = self.coords.coords(identity_map(self.module).vectorize())
        assert c is not None
        return c

    def radical(self) -> List[List]:
        return structure.radical_from_mul(self.module.field, self.n, self.mul)


def end_data(M: Module) -> EndData:
    e = M._cache.get("end")
    if e is None:
        e = EndData(M)
        M._cache["end"] = e
    return e


def is_indecomposable(M: Module) -> bool:
    if M.is_zero():
        return False
    e = end_data(M)
    return e.n - len(e.radical()) == 1


def _indec_iso(M: Module, N: Module) -> Optional[ModuleMap]:
    """Isomorphism test for indecomposables with split endomorphism rings."""
    if M.dim_vector() != N.dim_vector():
        return None
    fwd = hom_basis(M, N)
    if not fwd:
        return None
    bwd = hom_basis(N, M)
    if not bwd:
        return None
    e = end_data(M)
    field = M.field
    rad = SubspaceReducer(field, _homvec_len(M, M))
    for r in e.radical():
        vec = [field.zero] * rad.dim
        for c, h in zip(r, e.basis):
            if c != field.zero:
                hv = h.vectorize()
                vec = [a + c * b for a, b in zip(vec, hv)]
        rad.add(vec)
    for f in fwd:
        for g in bwd:
            comp = f.then(g)
            if not rad.contains(comp.vectorize()):
                assert all(f.blocks[v].is_invertible() for v in f.blocks)
                return f
    return None


def split_indecomposables(M: Module) -> List[Tuple[Module, ModuleMap, ModuleMap]]:
    """Indecomposable summands with (inclusion, projection) witnesses."""
    if M.is_zero():
        return []
    e = end_data(M)
    field = M.field
    rad = e.radical()
    if e.n - len(rad) == 1:
        return [(M, identity_map(M), identity_map(M))]

    # semisimple quotient structure constants over a complement basis
    radred = SubspaceReducer(field, e.n)
    for r in rad:
        radred.add(r)
    comp_idx = []
    probe = SubspaceReducer(field, e.n)
    for r in rad:
        probe.add(r)
    for i in range(e.n):
        v = [field.zero] * e.n
        v[i] = field.one
        if probe.add(v):
            comp_idx.append(i)
    comp_vecs = []
    for i in comp_idx:
        v = [field.zero] * e.n
        v[i] = field.one
        comp_vecs.append(radred.reduce(v))
    qcoords = structure.CoordSolver(field, comp_vecs)

    def qmul(a, b):
        prod = e.mul(comp_idx[a], comp_idx[b])
        c = qcoords.coords(radred.reduce(prod))
        assert c is not None
        return c

    qunit = qcoords.coords(radred.reduce(e.unit_coords()))
    assert qunit is not None
    ebar = structure.find_nontrivial_idempotent(field, len(comp_idx), qmul, qunit)
    if ebar is None:
        raise NonSplitEndo("endomorphism ring not split over the base field")
    lift0 = [field.zero] * e.n
    for c, i in zip(ebar, comp_idx):
        lift0[i] = c
    idem = structure.lift_idempotent(field, e.n, e.mul, lift0)
    emap = zero_map(M, M)
    for c, h in zip(idem, e.basis):
        emap = emap + h.scale(c)
    one_minus = identity_map(M) - emap
    out = []
    for part in (emap, one_minus):
        img, incl, core = part.image()
        # retraction M -> img: core restricted... core is already M -> img
        for piece, inc2, pr2 in split_indecomposables(img):
            out.append((piece, compose(inc2, incl), compose(core, pr2)))
    return out


def decompose(M: Module) -> List[Tuple[Module, int]]:
    parts = split_indecomposables(M)
    reps: List[Tuple[Module, int]] = []
    for piece, _i, _p in parts:
        for k, (r, m) in enumerate(reps):
            if _indec_iso(piece, r) is not None:
                reps[k] = (r, m + 1)
                break
        else:
            reps.append((piece, 1))
    return reps


def is_isomorphic(M: Module, N: Module) -> Optional[ModuleMap]:
    """A witness isomorphism, or None."""
    if M.alg is not N.alg:
        raise AlgebraMismatch("modules over different algebras")
    if M.dim_vector() != N.dim_vector():
        return None
    if M.is_zero():
        return zero_map(M, N)
    pm = split_indecomposables(M)
    pn = list(split_indecomposables(N))
    if len(pm) != len(pn):
        return None
    witness = zero_map(M, N)
    used = [False] * len(pn)
    for piece, _incl, proj in pm:
        found = False
        for k, (qiece, qincl, _qproj) in enumerate(pn):
            if used[k]:
                continue
            iso = _indec_iso(piece, qiece)
            if iso is not None:
                used[k] = True
                witness = witness + compose(proj, iso, qincl)
                found = True
                break
        if not found:
            return None
    assert all(witness.blocks[v].is_invertible() for v in witness.blocks)
    return witness


# -- injective side ------------------------------------------------------------


def injective_envelope(M: Module) -> ModuleMap:
    """A minimal embedding M -> I with I an explicit injective sum.

    Any extension of a socle isomorphism is automatically injective, since a
    nonzero kernel would meet the socle.
    """
    alg = M.alg
    field = alg.field
    soc = socle_inclusion(M)
    verts = []
    for v in alg.quiver.vertices:
        verts.extend([v] * soc.source.dims[v])
    if not verts:
        Z = zero_module(alg)
        return ModuleMap(M, Z, {})
    summands = [injective_module(alg, v) for v in verts]
    I, incls, _projs = direct_sum(summands)
    # socle generator of each indecomposable injective (simple, 1-dim)
    blocks = {v: Matrix.zeros(field, I.dims[v], soc.source.dims[v])
              for v in alg.quiver.vertices}
    counter = {v: 0 for v in alg.quiver.vertices}
    for j, v in enumerate(verts):
        sj = socle_inclusion(summands[j])
        assert sj.source.dims[v] == 1 and sj.source.total_dim() == 1
        col = compose(sj, incls[j]).blocks[v].col(0)
        k = counter[v]
        counter[v] += 1
        for r in range(I.dims[v]):
            blocks[v].data[r][k] = col[r]
    phi0 = ModuleMap(soc.source, I, blocks)
    h = hom_with_composites(M, I, [(soc, phi0)])
    assert h is not None, "injective extension failed (bug)"
    for v in alg.quiver.vertices:
        assert h.blocks[v].rank() == M.dims[v], "envelope not injective (bug)"
    return h


def cosyzygy(M: Module) -> Module:
    env = injective_envelope(M)
    C, _ = env.cokernel()
    return C

