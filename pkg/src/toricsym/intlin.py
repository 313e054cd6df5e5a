"""Exact integer linear algebra.

Everything here works over plain Python ints (arbitrary precision); no
floating point is used anywhere.  The central routine is Smith normal form
with unimodular transforms, from which integer kernels and cokernels (as
finitely generated abelian groups with an explicit projection map) are
derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import PreconditionError

Vector = tuple[int, ...]


def _as_int(x: object) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"exact integer required, got {x!r}")
    return x


def gcd_vector(v: Sequence[int]) -> int:
    """gcd of the entries, 0 for the zero vector."""
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g


def primitive_vector(v: Sequence[int]) -> Vector:
    """v divided by the gcd of its entries (zero vector is rejected)."""
    g = gcd_vector(v)
    if g == 0:
        raise PreconditionError("zero-vector", "zero vector has no primitive form")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable exact integer matrix."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_as_int(x) for x in row) for row in self.entries)
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]]) -> "IntMatrix":
        cols = [tuple(c) for c in cols]
        if not cols:
            return cls(())
        return cls(tuple(zip(*cols)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries))) if self.entries else IntMatrix(())

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ot = other.transpose().entries
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in ot)
                for row in self.entries
            )
        )

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if self.cols != len(v):
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-x for x in row) for row in self.entries))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def rank(self) -> int:
        """Rank over the rationals (fraction-free elimination)."""
        m = [list(row) for row in self.entries]
        rows, cols = self.rows, self.cols
        r = 0
        for j in range(cols):
            pivot = next((i for i in range(r, rows) if m[i][j] != 0), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            for i in range(r + 1, rows):
                if m[i][j] != 0:
                    a, b = m[r][j], m[i][j]
                    m[i] = [a * x - b * y for x, y in zip(m[i], m[r])]
            r += 1
            if r == rows:
                break
        return r

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def adjugate(self) -> "IntMatrix":
        """Adjugate matrix: self @ adj = det * identity, exactly."""
        n = self.rows
        if n != self.cols:
            raise ValueError("adjugate of a non-square matrix")
        if n == 0:
            return IntMatrix(())
        if n == 1:
            return IntMatrix(((1,),))
        cof = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = IntMatrix(
                    tuple(
                        tuple(self.entries[r][c] for c in range(n) if c != j)
                        for r in range(n)
                        if r != i
                    )
                )
                cof[j][i] = (-1) ** (i + j) * minor.det()
        return IntMatrix(tuple(tuple(row) for row in cof))


@dataclass(frozen=True)
class SNFResult:
    """Smith decomposition A = U @ S @ V with unimodular U, V.

    ``u_inv`` and ``v_inv`` are the exact inverses, tracked during the
    elimination so that kernels and cokernels come for free.
    """

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    @property
    def diagonal(self) -> Vector:
        n = min(self.s.rows, self.s.cols)
        return tuple(self.s.entries[i][i] for i in range(n))

    @property
    def invariant_factors(self) -> Vector:
        return tuple(d for d in self.diagonal if d != 0)


def smith_normal_form(a: IntMatrix) -> SNFResult:
    """Smith normal form with transforms.

    Returns U, S, V with A = U S V exactly, S diagonal with non-negative
    entries satisfying the divisibility chain d_i | d_{i+1}.  Pivots are
    chosen by minimal absolute value, ties broken by smallest (row, col),
    which makes the output deterministic.
    """
    rows, cols = a.rows, a.cols
    s = [list(row) for row in a.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    uinv = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]
    vinv = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    # Row op S <- E S is mirrored by U <- U E^{-1} (and U^{-1} <- E U^{-1});
    # column op S <- S F by V <- F^{-1} V (and V^{-1} <- V^{-1} F).
    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        for r in u:
            r[i], r[j] = r[j], r[i]
        uinv[i], uinv[j] = uinv[j], uinv[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        v[i], v[j] = v[j], v[i]
        for r in vinv:
            r[i], r[j] = r[j], r[i]

    def add_row(i, j, k):
        # row i += k * row j
        s[i] = [x + k * y for x, y in zip(s[i], s[j])]
        for r in u:
            r[j] -= k * r[i]
        uinv[i] = [x + k * y for x, y in zip(uinv[i], uinv[j])]

    def add_col(j, i, k):
        # col j += k * col i
        for r in s:
            r[j] += k * r[i]
        v[i] = [x - k * y for x, y in zip(v[i], v[j])]
        for r in vinv:
            r[j] += k * r[i]

    def negate_row(i):
        s[i] = [-x for x in s[i]]
        for r in u:
            r[i] = -r[i]
        uinv[i] = [-x for x in uinv[i]]

    def find_pivot(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = s[i][j]
                if x != 0 and (best is None or (abs(x), i, j) < best):
                    best = (abs(x), i, j)
        return None if best is None else (best[1], best[2])

    for t in range(min(rows, cols)):
        while True:
            pos = find_pivot(t)
            if pos is None:
                break
            i, j = pos
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    q = s[i][t] // p
                    add_row(i, t, -q)
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    q = s[t][j] // p
                    add_col(j, t, -q)
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue
            # Cross is clear; force the pivot to divide the rest of the block.
            offender = next(
                (
                    i
                    for i in range(t + 1, rows)
                    if any(x % p for x in s[i][t + 1 :])
                ),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)
        if pos is None:
            break

    for t in range(min(rows, cols)):
        if s[t][t] < 0:
            negate_row(t)

    return SNFResult(
        u=IntMatrix.from_rows(u),
        s=IntMatrix.from_rows(s),
        v=IntMatrix.from_rows(v),
        u_inv=IntMatrix.from_rows(uinv),
        v_inv=IntMatrix.from_rows(vinv),
    )


def kernel_basis(a: IntMatrix) -> tuple[Vector, ...]:
    """Basis of the saturated integer kernel {x : A x = 0}.

    The basis vectors are primitive, with first non-zero entry positive,
    and the list is canonically reduced so equal kernels compare equal.
    """
    snf = smith_normal_form(a)
    diag = snf.diagonal
    free = [j for j in range(a.cols) if j >= len(diag) or diag[j] == 0]
    vectors = [snf.v_inv.column(j) for j in free]
    return _reduce_rows(vectors)


def _reduce_rows(vectors: Sequence[Vector]) -> tuple[Vector, ...]:
    """Canonical (Hermite-style) row reduction of a lattice basis."""
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return ()
    cols = len(rows[0])
    basis: list[list[int]] = []
    r = 0
    for j in range(cols):
        pool = [i for i in range(r, len(rows)) if rows[i][j] != 0]
        if not pool:
            continue
        # Euclid on the column entries below the pivot row.
        while len(pool) > 1:
            pool.sort(key=lambda i: abs(rows[i][j]))
            i0 = pool[0]
            for i in pool[1:]:
                q = rows[i][j] // rows[i0][j]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[i0])]
            pool = [i for i in pool if rows[i][j] != 0]
        i0 = pool[0]
        rows[r], rows[i0] = rows[i0], rows[r]
        if rows[r][j] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][j] // rows[r][j]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        basis.append(rows[r])
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in basis)


@dataclass(frozen=True)
class FGAbelianGroup:
    """Finitely generated abelian group in canonical form.

    ``torsion`` lists the invariant factors > 1, each dividing the next.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for i, d in enumerate(self.torsion):
            if d <= 1:
                raise ValueError("torsion factors must be > 1")
            if i and d % self.torsion[i - 1]:
                raise ValueError("torsion factors must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


ClassCoords = tuple[Vector, Vector]  # (free coordinates, torsion residues)


@dataclass(frozen=True)
class CokernelProjection:
    """Projection Z^rows -> coker(A) in SNF-canonical coordinates.

    Calling it on an integer vector yields ``(free, torsion)`` coordinates;
    two vectors have equal images exactly when their classes agree.
    """

    group: FGAbelianGroup
    _u_inv: IntMatrix = field(repr=False)
    _free_positions: tuple[int, ...] = field(repr=False)
    _torsion_positions: tuple[int, ...] = field(repr=False)
    _torsion_factors: tuple[int, ...] = field(repr=False)

    def __call__(self, z: Sequence[int]) -> ClassCoords:
        w = self._u_inv.apply(tuple(z))
        free = tuple(w[i] for i in self._free_positions)
        torsion = tuple(w[i] % d for i, d in zip(self._torsion_positions, self._torsion_factors))
        return free, torsion


def cokernel_group(a: IntMatrix) -> tuple[FGAbelianGroup, CokernelProjection]:
    """Cokernel Z^rows / im(A) with an explicit projection map."""
    snf = smith_normal_form(a)
    diag = snf.diagonal
    free_positions = tuple(i for i in range(a.rows) if i >= len(diag) or diag[i] == 0)
    torsion_positions = tuple(i for i, d in enumerate(diag) if d > 1)
    torsion_factors = tuple(diag[i] for i in torsion_positions)
    group = FGAbelianGroup(free_rank=len(free_positions), torsion=torsion_factors)
    proj = CokernelProjection(
        group=group,
        _u_inv=snf.u_inv,
        _free_positions=free_positions,
        _torsion_positions=torsion_positions,
        _torsion_factors=torsion_factors,
    )
    return group, proj


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Vector | None:
    """One integer solution of A x = b, or None if none exists."""
    status, x = solve_integer_status(a, b)
    return x if status == "ok" else None


def solve_integer_status(a: IntMatrix, b: Sequence[int]) -> tuple[str, Vector | None]:
    """Solve A x = b over Z.

    Returns ``("ok", x)``, ``("not-integral", None)`` when a rational but
    no integral solution exists, or ``("no-solution", None)``.
    """
    if a.rows != len(b):
        raise ValueError("right-hand side length mismatch")
    snf = smith_normal_form(a)
    w = snf.u_inv.apply(tuple(b))
    diag = snf.diagonal
    z = [0] * a.cols
    rational_only = False
    for i in range(a.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if w[i] != 0:
                return "no-solution", None
        else:
            if w[i] % d:
                rational_only = True
            else:
                z[i] = w[i] // d
    if rational_only:
        return "not-integral", None
    return "ok", snf.v_inv.apply(tuple(z))
