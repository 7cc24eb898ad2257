"""Exact integer matrices: Smith normal form, rank, cokernels, annihilators.

Entries are Python ints, so nothing overflows.  Pivoting always takes the
smallest nonzero absolute value (ties broken by row, then column), which
keeps every output deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], rows: int | None = None, cols: int | None = None):
        grid = tuple(tuple(int(x) for x in row) for row in entries)
        if rows is None:
            rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ValueError("entry grid does not match dimensions")
        self.rows = rows
        self.cols = cols
        self.entries = grid

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntMatrix):
            return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.entries]})"

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.rows, self.cols
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.rows, self.cols
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self.entries], self.rows, self.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries], self.rows, other.cols
        )

    def _same_shape(self, other: "IntMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.columns(), self.cols, self.rows)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix([r + s for r, s in zip(self.entries, other.entries)], self.rows, self.cols + other.cols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.tolist())

    def inverse(self) -> "IntMatrix":
        """Integer inverse; raises ValueError unless the matrix is unimodular."""
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self.entries)]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if p is None:
                raise ValueError("matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            piv = aug[c][c]
            aug[c] = [x / piv for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        inv = [row[n:] for row in aug]
        if any(x.denominator != 1 for row in inv for x in row):
            raise ValueError("matrix is not invertible over the integers")
        return IntMatrix([[int(x) for x in row] for row in inv], n, n)


def stack_columns(blocks: Sequence[IntMatrix], rows: int) -> IntMatrix:
    """Side-by-side concatenation; an empty list gives a rows x 0 matrix."""
    result = IntMatrix([[] for _ in range(rows)], rows, 0)
    for b in blocks:
        result = result.hstack(b)
    return result


def bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class AbelianGroupShape:
    """Z^free_rank plus Z/t for each t in ``torsion`` (each dividing the next)."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = self.torsion
        if any(x < 2 for x in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain of integers >= 2")

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"

    def plus_free(self, k: int) -> "AbelianGroupShape":
        return AbelianGroupShape(self.free_rank + k, self.torsion)


def snf(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (U, D, V) with U*A*V = D, U and V unimodular."""
    r, c = a.rows, a.cols
    d = a.tolist()
    u = IntMatrix.identity(r).tolist()
    v = IntMatrix.identity(c).tolist()

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = d[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = d[t][t]
            dirty = False
            for i in range(t + 1, r):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, c):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                best = None
                for i in range(t, r):
                    if d[i][t] and (best is None or abs(d[i][t]) < best[0]):
                        best = (abs(d[i][t]), i, "r")
                for j in range(t, c):
                    if d[t][j] and (best is None or abs(d[t][j]) < best[0]):
                        best = (abs(d[t][j]), j, "c")
                assert best is not None
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = next(
                ((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix(u, r, r), IntMatrix(d, r, c), IntMatrix(v, c, c)


def diagonal(d: IntMatrix) -> list[int]:
    return [d[i, i] for i in range(min(d.rows, d.cols))]


def rank_q(a: IntMatrix) -> int:
    _, d, _ = snf(a)
    return sum(1 for x in diagonal(d) if x)


def cokernel(a: IntMatrix) -> AbelianGroupShape:
    """Shape of Z^rows modulo the column span of ``a``."""
    _, d, _ = snf(a)
    diag = [x for x in diagonal(d) if x]
    return AbelianGroupShape(a.rows - len(diag), tuple(x for x in diag if x > 1))


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    col = 0
    while m and col < ncols:
        nz = [r for r in m if r[col]]
        if not nz:
            col += 1
            continue
        while len([r for r in m if r[col]]) > 1:
            m.sort(key=lambda r: (r[col] == 0, abs(r[col])))
            p = m[0]
            for r in m[1:]:
                if r[col]:
                    q = r[col] // p[col]
                    for k in range(ncols):
                        r[k] -= q * p[k]
        m.sort(key=lambda r: r[col] == 0)
        p = m.pop(0)
        if p[col] < 0:
            p = [-x for x in p]
        for r in out:
            q = r[col] // p[col]
            for k in range(ncols):
                r[k] -= q * p[k]
        out.append(p)
        m = [r for r in m if any(r)]
        col += 1
    return [tuple(r) for r in out]


def left_annihilator(a: IntMatrix) -> list[tuple[int, ...]]:
    """Z-basis (in Hermite form) of the integer row vectors v with v*A = 0."""
    u, d, _ = snf(a)
    rk = sum(1 for x in diagonal(d) if x)
    kernel_rows = [u.entries[i] for i in range(rk, a.rows)]
    return hermite_rows(kernel_rows)


def primitive(vec: Sequence[int | Fraction]) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    fr = [Fraction(x) for x in vec]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive rescaling")
    return tuple(x // g for x in ints)
