"""Smith normal form over the integers, with both transforms and their inverses.

All arithmetic is on Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


@dataclass
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: Matrix
    U_inv: Matrix
    D: Matrix
    V: Matrix
    V_inv: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_decomposition(M: Matrix, ncols: int | None = None) -> SmithDecomposition:
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    A = [list(map(int, row)) for row in M]
    U, U_inv = identity(m), identity(m)
    V, V_inv = identity(n), identity(n)

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in U_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        V_inv[i], V_inv[j] = V_inv[j], V_inv[i]

    def add_row(dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src
        if c == 0:
            return
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]
        for row in U_inv:
            row[src] -= c * row[dst]

    def add_col(dst: int, src: int, c: int) -> None:
        # col_dst += c * col_src
        if c == 0:
            return
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]
        V_inv[src] = [x - c * y for x, y in zip(V_inv[src], V_inv[dst])]

    def negate_row(i: int) -> None:
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for row in U_inv:
            row[i] = -row[i]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and A[t][t] < 0:
            negate_row(t)
    return SmithDecomposition(U, U_inv, A, V, V_inv)


def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``D`` is diagonal with nonnegative entries forming a divisibility chain
    (zeros last); ``U`` and ``V`` have determinant +-1.
    """
    dec = smith_decomposition(M)
    return dec.U, dec.D, dec.V


def determinant(M: Matrix) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
