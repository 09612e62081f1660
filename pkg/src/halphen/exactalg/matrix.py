"""Exact dense matrices with fraction-free elimination."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .scalars import Quad, Scalar, as_scalar, conj, extension_of, format_scalar


class ExactMatrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(v if isinstance(v, (Fraction, Quad)) else as_scalar(v) for v in r) for r in rows)
        if rs and any(len(r) != len(rs[0]) for r in rs):
            raise ValueError("ragged matrix")
        self.rows: tuple[tuple[Scalar, ...], ...] = rs

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "ExactMatrix":
        return cls([[0] * c for _ in range(r)])

    @classmethod
    def diag(cls, values: Sequence) -> "ExactMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "ExactMatrix":
        return cls(list(zip(*cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Scalar, ...]:
        return tuple(r[j] for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def field(self) -> int | None:
        return extension_of(v for r in self.rows for v in r)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix([[c * a for a in r] for r in self.rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc: Scalar = Fraction(0)
                for a, b in zip(r, c):
                    if a != 0 and b != 0:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return ExactMatrix(out)

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def apply(self, v: Sequence) -> tuple[Scalar, ...]:
        out = []
        for r in self.rows:
            acc: Scalar = Fraction(0)
            for a, b in zip(r, v):
                acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.rows)))

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conjugate(self) -> "ExactMatrix":
        return ExactMatrix([[conj(a) for a in r] for r in self.rows])

    def adjoint(self) -> "ExactMatrix":
        """Conjugate transpose."""
        return self.conjugate().transpose()

    def trace(self) -> Scalar:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return reduce(lambda a, b: a + b, (self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    def det(self) -> Scalar:
        if not self.is_square():
            raise ValueError("det of a non-square matrix")
        n = self.nrows
        if n == 0:
            return Fraction(1)
        m = [list(r) for r in self.rows]
        sign = 1
        prev: Scalar = Fraction(1)
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def inverse(self) -> "ExactMatrix":
        n = self.nrows
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [v * inv for v in m[c]]
            for i in range(n):
                if i != c and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return ExactMatrix([r[n:] for r in m])

    def __pow__(self, k: int) -> "ExactMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = ExactMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def rank(self) -> int:
        return self.ncols - len(nullspace(self))

    def is_identity(self) -> bool:
        return self.is_square() and self == ExactMatrix.identity(self.nrows)

    # -- misc -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self.rows]

    def __repr__(self):
        return "ExactMatrix([" + ", ".join("[" + ", ".join(format_scalar(v) for v in r) + "]" for r in self.rows) + "])"


def _integer_rows(rows) -> list[list[int]] | None:
    """Scale each rational row to coprime integers; None if any entry is a Quad."""
    out = []
    for r in rows:
        if any(isinstance(v, Quad) for v in r):
            return None
        den = reduce(math.lcm, (v.denominator for v in r), 1)
        out.append([int(v * den) for v in r])
    return out


def _echelon_fraction_free(m: list[list]) -> list[int]:
    """In-place fraction-free (Bareiss) row echelon form; returns pivot columns.

    Integer input stays integral: every division by the previous pivot is exact.
    """
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    integral = all(isinstance(v, int) for row in m for v in row)
    for c in range(nc):
        if r >= nr:
            break
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nr):
            f = m[i][c]
            for j in range(c + 1, nc):
                v = p * m[i][j] - f * m[r][j]
                if integral:
                    q, rem = divmod(v, prev)
                    if rem:
                        raise ArithmeticError("Bareiss division not exact")
                    m[i][j] = q
                else:
                    m[i][j] = v / prev
            m[i][c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return pivots


def nullspace(M: ExactMatrix) -> list[tuple[Scalar, ...]]:
    """Basis of the right kernel of M, exactly.

    Rational matrices are reduced over the integers with fraction-free
    elimination; quadratic-extension matrices use the same recurrence with
    field division.  Each basis vector has a 1 in its free coordinate.
    """
    nr, nc = M.shape
    if nc == 0:
        return []
    if nr == 0:
        return [tuple(Fraction(int(i == j)) for i in range(nc)) for j in range(nc)]
    ints = _integer_rows(M.rows)
    m = ints if ints is not None else [list(r) for r in M.rows]
    pivots = _echelon_fraction_free(m)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        sol: list[Scalar] = [Fraction(0)] * nc
        sol[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            acc: Scalar = Fraction(0)
            for c in range(pc + 1, nc):
                if m[r][c] != 0 and sol[c] != 0:
                    acc = acc + m[r][c] * sol[c]
            sol[pc] = -acc / (Fraction(m[r][pc]) if isinstance(m[r][pc], int) else m[r][pc])
        basis.append(tuple(sol))
    return basis


def solve(M: ExactMatrix, b: Sequence) -> tuple[Scalar, ...] | None:
    """One solution of M v = b, or None if inconsistent."""
    aug = ExactMatrix([list(r) + [-bi] for r, bi in zip(M.rows, b)])
    for v in nullspace(aug):
        if v[-1] != 0:
            return tuple(x / v[-1] for x in v[:-1])
    return None


def span_basis(vectors: Sequence[Sequence]) -> list[tuple[Scalar, ...]]:
    """A maximal independent subset of the given vectors (in order)."""
    chosen: list[tuple[Scalar, ...]] = []
    for v in vectors:
        trial = chosen + [tuple(as_scalar(x) if not isinstance(x, (Fraction, Quad)) else x for x in v)]
        if ExactMatrix(trial).transpose().rank() == len(trial):
            chosen = trial
    return chosen
