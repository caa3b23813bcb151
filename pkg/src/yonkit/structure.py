"""Structure theory of finite-dimensional algebras given by multiplication data.

Radicals come from the trace bilinear form of the regular representation
(valid in characteristic 0; over a prime field the trace kernel is accepted
only after an explicit nilpotency check).  Idempotents are found without
polynomial factorization: central splitting uses elements of the split
center, whose minimal polynomials have distinct rational roots, and single
matrix blocks are split through proper left ideals.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .linalg import Field, Matrix, SubspaceReducer


class NonSplitEndo(Exception):
    """The semisimple quotient has a factor that is not a matrix algebra over
    the base field; enlarging the field would be required."""


Mul = Callable[[int, int], Sequence]


def _left_mult_matrix(field: Field, n: int, mul: Mul, i: int) -> Matrix:
    cols = [list(mul(i, j)) for j in range(n)]
    return Matrix.from_cols(field, cols) if cols else Matrix.zeros(field, 0, 0)


def _el_mul(field: Field, n: int, mul: Mul, x: Sequence, y: Sequence) -> List:
    zero = field.zero
    out = [zero] * n
    for i, a in enumerate(x):
        if a == zero:
            continue
        for j, b in enumerate(y):
            if b == zero:
                continue
            ab = a * b
            row = mul(i, j)
            for k, c in enumerate(row):
                if c != zero:
                    out[k] = out[k] + ab * c
    return out


def radical_from_mul(field: Field, n: int, mul: Mul) -> List[List]:
    """Basis vectors of the Jacobson radical."""
    if n == 0:
        return []
    zero = field.zero
    tr = []
    for i in range(n):
        L = _left_mult_matrix(field, n, mul, i)
        tr.append(L.trace())
    gram = Matrix.zeros(field, n, n)
    for i in range(n):
        for j in range(n):
            s = zero
            for k, c in enumerate(mul(i, j)):
                if c != zero:
                    s = s + c * tr[k]
            gram.data[i][j] = s
    ker = gram.kernel_basis()
    rad = [ker.col(j) for j in range(ker.cols)]
    if field.char != 0:
        _require_nilpotent(field, n, mul, rad)
    return rad


def _require_nilpotent(field: Field, n: int, mul: Mul, vecs: List[List]) -> None:
    zero = field.zero
    current = [v for v in vecs]
    for _ in range(n + 1):
        if not current:
            return
        red = SubspaceReducer(field, n)
        nxt = []
        for x in current:
            for y in vecs:
                p = _el_mul(field, n, mul, x, y)
                if any(c != zero for c in p) and red.add(p):
                    nxt.append(red.rows[-1][:])
        if len(nxt) >= len(current) and _same_span(field, n, current, nxt):
            raise NonSplitEndo(
                "trace-form kernel is not nilpotent over this prime field; "
                "radical computation needs characteristic 0 or a larger prime"
            )
        current = nxt
    if current:
        raise NonSplitEndo("radical nilpotency check did not terminate")


def _same_span(field, n, a, b):
    ra = SubspaceReducer(field, n)
    for v in a:
        ra.add(v)
    rb = SubspaceReducer(field, n)
    for v in b:
        rb.add(v)
    return ra.rank == rb.rank and all(ra.contains(v) for v in b)


def minimal_polynomial(field: Field, n: int, mul: Mul, vec: Sequence, unit: Sequence) -> List:
    """Coefficients c_0..c_d (monic, c_d = 1) of the minimal polynomial."""
    red = SubspaceReducer(field, n)
    powers = [list(unit)]
    red.add(powers[0])
    cur = list(unit)
    while True:
        cur = _el_mul(field, n, mul, cur, vec)
        if not red.add(cur):
            break
        powers.append(list(cur))
    cols = Matrix.from_cols(field, powers)
    sol = cols.solve(cur)
    assert sol is not None
    return [-c for c in sol] + [field.one]


def rational_roots(field: Field, coeffs: List) -> List:
    """All roots in the field of a polynomial that splits there.

    Over Q uses the rational root theorem (desk-scale coefficients); over F_p
    just tries every residue.
    """
    if field.char != 0:
        roots = []
        x = field.zero
        for v in range(field.char):
            x = field(v)
            val = field.zero
            for c in reversed(coeffs):
                val = val * x + c
            if val == field.zero:
                roots.append(x)
        return roots

    poly = [Fraction(c) for c in coeffs]
    while poly and poly[-1] == 0:
        poly.pop()
    if not poly:
        return []
    roots = []
    # strip zero roots
    while poly[0] == 0:
        roots.append(Fraction(0))
        poly = poly[1:]
        if len(poly) == 1:
            return roots
    den = 1
    for c in poly:
        den = den * c.denominator // _gcd(den, c.denominator)
    ipoly = [int(c * den) for c in poly]
    a0, an = abs(ipoly[0]), abs(ipoly[-1])

    def divisors(m):
        out = []
        d = 1
        while d * d <= m:
            if m % d == 0:
                out.append(d)
                out.append(m // d)
            d += 1
        return sorted(set(out))

    found = set()
    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in found:
                    continue
                val = Fraction(0)
                for c in reversed(poly):
                    val = val * cand + c
                if val == 0:
                    found.add(cand)
    return roots + sorted(found)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def find_nontrivial_idempotent(field: Field, n: int, mul: Mul, unit: Sequence) -> Optional[List]:
    """A nontrivial idempotent of a split semisimple algebra, or None if the
    algebra is k itself.  Raises NonSplitEndo when splitness fails."""
    if n <= 1:
        return None
    zero, one = field.zero, field.one

    # center
    rows = []
    for j in range(n):
        Lj = _left_mult_matrix(field, n, mul, j)
        Rj = Matrix.from_cols(field, [list(mul(i, j)) for i in range(n)])
        D = Lj - Rj
        rows.extend(D.data)
    Z = Matrix(field, rows).kernel_basis() if rows else Matrix.identity(field, n)
    zdim = Z.cols

    def spectral_idempotent(vec):
        mp = minimal_polynomial(field, n, mul, vec, unit)
        if len(mp) <= 2:
            return None
        roots = rational_roots(field, mp)
        if len(set(roots)) < 2:
            return None
        if len(roots) != len(mp) - 1 or len(set(roots)) != len(roots):
            return None  # repeated or missing roots: not semisimple over k
        lam = roots[0]
        e = list(unit)
        for mu in roots[1:]:
            shifted = [a - mu * b for a, b in zip(vec, unit)]
            e = _el_mul(field, n, mul, e, shifted)
            scale = one / (lam - mu)
            e = [scale * c for c in e]
        return e

    if zdim >= 2:
        for j in range(zdim):
            e = spectral_idempotent(Z.col(j))
            if e is not None:
                return e
        for i in range(zdim):
            for j in range(i + 1, zdim):
                v = [a + b for a, b in zip(Z.col(i), Z.col(j))]
                e = spectral_idempotent(v)
                if e is not None:
                    return e
        raise NonSplitEndo("center of the semisimple quotient is not split")

    # single matrix block: find a proper left ideal and its idempotent generator
    basis_vecs = [[one if k == i else zero for k in range(n)] for i in range(n)]
    candidates = list(basis_vecs)
    for i in range(n):
        for j in range(i + 1, n):
            candidates.append([a + b for a, b in zip(basis_vecs[i], basis_vecs[j])])
            candidates.append([a - b for a, b in zip(basis_vecs[i], basis_vecs[j])])
    import random

    rng = random.Random(20240401)
    for _ in range(64):
        candidates.append([field(rng.randint(-3, 3)) for _ in range(n)])

    unit_coords = Matrix.from_cols(field, [list(unit)])
    for s in candidates:
        # skip scalars
        aug = unit_coords.hstack(Matrix.from_cols(field, [list(s)]))
        if aug.rank() < 2:
            continue
        e = spectral_idempotent(s)
        if e is not None:
            return e
        mp = minimal_polynomial(field, n, mul, s, unit)
        roots = rational_roots(field, mp)
        if not roots:
            continue
        u = [a - roots[0] * b for a, b in zip(s, unit)]
        if all(c == zero for c in u):
            continue
        e = _idempotent_generator_of_left_ideal(field, n, mul, u)
        if e is not None:
            return e
    raise NonSplitEndo("could not split the semisimple quotient over the base field")


def _idempotent_generator_of_left_ideal(field: Field, n: int, mul: Mul, u: Sequence):
    """For a nonzero non-invertible u in a semisimple algebra, solve for e in
    S*u with e*x = x for all x in S*u; then S*u = S*e and e is idempotent."""
    zero = field.zero
    L_basis = []
    red = SubspaceReducer(field, n)
    for i in range(n):
        x = [zero] * n
        x[i] = field.one
        p = _el_mul(field, n, mul, x, u)
        if any(c != zero for c in p) and red.add(p):
            L_basis.append(p)
    if not L_basis or len(L_basis) == n:
        return None  # zero or not proper
    # unknowns: coefficients of e over L_basis; equations: e*x = x for x in L_basis
    cols = []
    for b in L_basis:
        col = []
        for x in L_basis:
            col.extend(_el_mul(field, n, mul, b, x))
        cols.append(col)
    rhs = []
    for x in L_basis:
        rhs.extend(x)
    sol = Matrix.from_cols(field, cols).solve(rhs)
    if sol is None:
        return None
    e = [zero] * n
    for c, b in zip(sol, L_basis):
        for k in range(n):
            e[k] = e[k] + c * b[k]
    return e


def lift_idempotent(field: Field, n: int, mul: Mul, e: List, max_iter: int = 64) -> List:
    """Lift an idempotent modulo the nilradical to an exact one (e <- 3e^2-2e^3)."""
    zero = field.zero
    for _ in range(max_iter):
        e2 = _el_mul(field, n, mul, e, e)
        if all(a == b for a, b in zip(e2, e)):
            return e
        e3 = _el_mul(field, n, mul, e2, e)
        e = [3 * a - 2 * b for a, b in zip(e2, e3)]
    raise AssertionError("idempotent lifting did not converge")


class CoordSolver:
    """Express vectors in a fixed independent spanning set, exactly."""

    def __init__(self, field: Field, vectors: List[List]):
        self.field = field
        self.vectors = vectors
        self.mat = Matrix.from_cols(field, vectors) if vectors else None

    def coords(self, vec: Sequence) -> Optional[List]:
        if self.mat is None:
            return None if any(x != self.field.zero for x in vec) else []
        return self.mat.solve(list(vec))
