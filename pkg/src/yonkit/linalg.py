"""Exact dense linear algebra over Q or a prime field F_p.

Everything here is deterministic: pivots are chosen as the first nonzero
entry in column order, never by magnitude, so bases are reproducible
across runs and platforms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple


class FpElem:
    """Residue mod p.  Immutable; arithmetic stays exact."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def __add__(self, o):
        return FpElem(self.v + o.v, self.p)

    def __sub__(self, o):
        return FpElem(self.v - o.v, self.p)

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def __mul__(self, o):
        return FpElem(self.v * o.v, self.p)

    def __truediv__(self, o):
        return self * o.inverse()

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElem(pow(self.v, self.p - 2, self.p), self.p)

    def __eq__(self, o):
        if isinstance(o, FpElem):
            return self.v == o.v and self.p == o.p
        if isinstance(o, int):
            return self.v == o % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}~{self.p}"


class Field:
    """A field tag: the rationals or F_p."""

    def __init__(self, char: int = 0):
        if char < 0 or (char > 0 and not _is_prime(char)):
            raise ValueError(f"characteristic must be 0 or prime, got {char}")
        self.char = char

    def __call__(self, x) -> "Scalar":
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, FpElem):
            return x
        if isinstance(x, Fraction):
            return FpElem(x.numerator, self.char) / FpElem(x.denominator, self.char)
        return FpElem(int(x), self.char)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __eq__(self, o):
        return isinstance(o, Field) and self.char == o.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


QQ = Field(0)

Scalar = object  # Fraction or FpElem


class Matrix:
    """Dense matrix with exact entries, row-major list of lists."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Sequence[Sequence]):
        self.field = field
        self.data = [[field(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    # ---- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.field = field
        z = field.zero
        m.data = [[z] * cols for _ in range(rows)]
        m.rows, m.cols = rows, cols
        return m

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n)
        one = field.one
        for i in range(n):
            m.data[i][i] = one
        return m

    @classmethod
    def from_cols(cls, field: Field, cols: Sequence[Sequence]) -> "Matrix":
        if not cols:
            return cls.zeros(field, 0, 0)
        n = len(cols[0])
        out = cls.zeros(field, n, len(cols))
        for j, col in enumerate(cols):
            for i in range(n):
                out.data[i][j] = field(col[i])
        return out

    def copy(self) -> "Matrix":
        m = Matrix.__new__(Matrix)
        m.field, m.rows, m.cols = self.field, self.rows, self.cols
        m.data = [row[:] for row in self.data]
        return m

    # ---- basic ops ----------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, o):
        return (
            isinstance(o, Matrix)
            and self.rows == o.rows
            and self.cols == o.cols
            and self.data == o.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __add__(self, o: "Matrix") -> "Matrix":
        assert self.rows == o.rows and self.cols == o.cols
        out = self.copy()
        out.data = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, o.data)]
        return out

    def __sub__(self, o: "Matrix") -> "Matrix":
        assert self.rows == o.rows and self.cols == o.cols
        out = self.copy()
        out.data = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, o.data)]
        return out

    def __neg__(self) -> "Matrix":
        out = self.copy()
        out.data = [[-a for a in r] for r in self.data]
        return out

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        out = self.copy()
        out.data = [[c * a for a in r] for r in self.data]
        return out

    def __mul__(self, o: "Matrix") -> "Matrix":
        """Matrix product self @ o."""
        if self.cols != o.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {o.rows}x{o.cols}")
        zero = self.field.zero
        out = Matrix.zeros(self.field, self.rows, o.cols)
        for i in range(self.rows):
            srow = self.data[i]
            orow = out.data[i]
            for k in range(self.cols):
                a = srow[k]
                if a == zero:
                    continue
                brow = o.data[k]
                for j in range(o.cols):
                    b = brow[j]
                    if b != zero:
                        orow[j] = orow[j] + a * b
        return out

    def apply(self, vec: Sequence) -> List:
        """self @ vec for a column vector given as a flat list."""
        assert len(vec) == self.cols
        zero = self.field.zero
        out = []
        for i in range(self.rows):
            s = zero
            row = self.data[i]
            for j, x in enumerate(vec):
                if x != zero and row[j] != zero:
                    s = s + row[j] * x
            out.append(s)
        return out

    def transpose(self) -> "Matrix":
        out = Matrix.zeros(self.field, self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.data[j][i] = self.data[i][j]
        return out

    def hstack(self, o: "Matrix") -> "Matrix":
        assert self.rows == o.rows
        out = Matrix.zeros(self.field, self.rows, self.cols + o.cols)
        out.data = [r1 + r2 for r1, r2 in zip(self.data, o.data)]
        return out

    def vstack(self, o: "Matrix") -> "Matrix":
        assert self.cols == o.cols
        out = Matrix.zeros(self.field, self.rows + o.rows, self.cols)
        out.data = [row[:] for row in self.data] + [row[:] for row in o.data]
        return out

    def col(self, j: int) -> List:
        return [self.data[i][j] for i in range(self.rows)]

    def is_zero(self) -> bool:
        zero = self.field.zero
        return all(x == zero for row in self.data for x in row)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"

    # ---- echelon algebra ----------------------------------------------

    def rref(self) -> Tuple["Matrix", List[int]]:
        """Reduced row echelon form and the (strictly increasing) pivot columns."""
        m = self.copy()
        zero = m.field.zero
        pivots: List[int] = []
        r = 0
        for c in range(m.cols):
            pr = -1
            for i in range(r, m.rows):
                if m.data[i][c] != zero:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                m.data[r], m.data[pr] = m.data[pr], m.data[r]
            pv = m.data[r][c]
            if pv != m.field.one:
                inv = m.field.one / pv
                m.data[r] = [inv * x for x in m.data[r]]
            for i in range(m.rows):
                if i != r:
                    f = m.data[i][c]
                    if f != zero:
                        ri, rr = m.data[i], m.data[r]
                        m.data[i] = [a - f * b for a, b in zip(ri, rr)]
            pivots.append(c)
            r += 1
            if r == m.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Columns form a basis of the null space; cols - rank of them."""
        R, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        zero, one = self.field.zero, self.field.one
        cols = []
        for f in free:
            v = [zero] * self.cols
            v[f] = one
            for r, p in enumerate(pivots):
                v[p] = -R.data[r][f]
            cols.append(v)
        return Matrix.from_cols(self.field, cols) if cols else Matrix.zeros(self.field, self.cols, 0)

    def solve(self, b: Sequence) -> Optional[List]:
        """One exact solution of self @ x = b, or None if inconsistent."""
        if len(b) != self.rows:
            raise ValueError("rhs length mismatch")
        aug = Matrix(self.field, [list(r) + [bb] for r, bb in zip(self.data, b)])
        R, pivots = aug.rref()
        if self.cols in pivots:
            return None
        zero = self.field.zero
        x = [zero] * self.cols
        for r, p in enumerate(pivots):
            x[p] = R.data[r][self.cols]
        return x

    def solve_matrix(self, B: "Matrix") -> Optional["Matrix"]:
        """Solve self @ X = B column by column; None if any column fails."""
        cols = []
        for j in range(B.cols):
            x = self.solve(B.col(j))
            if x is None:
                return None
            cols.append(x)
        if not cols:
            return Matrix.zeros(self.field, self.cols, 0)
        return Matrix.from_cols(self.field, cols)

    def column_space_rref(self) -> "Matrix":
        """Canonical basis of the column space (rref of the transpose, nonzero rows)."""
        R, piv = self.transpose().rref()
        if not piv:
            return Matrix.zeros(self.field, self.rows, 0)
        return Matrix.from_cols(self.field, [R.data[i] for i in range(len(piv))])

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("not square")
        aug = self.hstack(Matrix.identity(self.field, self.rows))
        R, piv = aug.rref()
        if piv != list(range(self.rows)):
            raise ValueError("matrix not invertible")
        return Matrix(self.field, [row[self.rows:] for row in R.data])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def trace(self):
        assert self.rows == self.cols
        t = self.field.zero
        for i in range(self.rows):
            t = t + self.data[i][i]
        return t


def span_rref(field: Field, vectors: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Rref of the matrix whose rows are the given vectors (empty-safe)."""
    if not vectors:
        return Matrix.zeros(field, 0, 0), []
    return Matrix(field, vectors).rref()


class SubspaceReducer:
    """Incremental row-space membership and reduction, in rref form.

    add() returns True when the vector enlarged the span; reduce() returns
    the residue of a vector modulo the current span.
    """

    def __init__(self, field: Field, dim: int):
        self.field = field
        self.dim = dim
        self.rows: List[List] = []  # rref rows
        self.pivots: List[int] = []

    def reduce(self, vec: Sequence) -> List:
        v = [self.field(x) for x in vec]
        zero = self.field.zero
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != zero:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, vec: Sequence) -> bool:
        v = self.reduce(vec)
        zero = self.field.zero
        p = next((j for j, x in enumerate(v) if x != zero), None)
        if p is None:
            return False
        inv = self.field.one / v[p]
        v = [inv * x for x in v]
        # back-substitute into existing rows, keep matrix reduced
        for i, row in enumerate(self.rows):
            c = row[p]
            if c != zero:
                self.rows[i] = [a - c * b for a, b in zip(row, v)]
        k = 0
        while k < len(self.pivots) and self.pivots[k] < p:
            k += 1
        self.rows.insert(k, v)
        self.pivots.insert(k, p)
        return True

    def contains(self, vec: Sequence) -> bool:
        zero = self.field.zero
        return all(x == zero for x in self.reduce(vec))

    @property
    def rank(self) -> int:
        return len(self.rows)
