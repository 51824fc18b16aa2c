"""Exact sparse linear algebra over the rationals.

Everything here is built on `fractions.Fraction`, so ranks, solutions and
infeasibility witnesses are exact; no tolerances appear anywhere.  Matrices
are sparse (zero entries are never stored) and eliminations pick pivots with
a cheap minimal-fill heuristic.  All tie-breaks are by index, so every result
is deterministic for a fixed input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

ZERO = Fraction(0)
ONE = Fraction(1)

# Matrices at or below this many cells use plain dense elimination; above it
# the sparse row-dict code path is used.
DENSE_CELL_LIMIT = 4096


class SparseMatrix:
    """Immutable sparse matrix over Q: entries maps (row, col) -> Fraction."""

    __slots__ = ("n_rows", "n_cols", "entries")

    def __init__(self, n_rows: int, n_cols: int,
                 entries: Dict[Tuple[int, int], Fraction]):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        clean: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), v in entries.items():
            if not (0 <= i < n_rows and 0 <= j < n_cols):
                raise ValueError(f"entry ({i},{j}) out of bounds")
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.entries = clean

    @classmethod
    def from_columns(cls, columns: Sequence[Dict[int, Fraction]],
                     n_rows: int) -> "SparseMatrix":
        entries: Dict[Tuple[int, int], Fraction] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    entries[(i, j)] = Fraction(v)
        return cls(n_rows, len(columns), entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction]]) -> "SparseMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = Fraction(v)
        return cls(n_rows, n_cols, entries)

    def row_dicts(self) -> List[Dict[int, Fraction]]:
        rows: List[Dict[int, Fraction]] = [dict() for _ in range(self.n_rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def column(self, j: int) -> Dict[int, Fraction]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.n_cols, self.n_rows,
                            {(j, i): v for (i, j), v in self.entries.items()})

    def mul_vector(self, x: Sequence[Fraction]) -> List[Fraction]:
        if len(x) != self.n_cols:
            raise ValueError("vector length mismatch")
        out = [ZERO] * self.n_rows
        for (i, j), v in self.entries.items():
            if x[j]:
                out[i] += v * x[j]
        return out

    def left_mul_vector(self, y: Sequence[Fraction]) -> List[Fraction]:
        """Row vector times matrix: returns y^T M as a list over columns."""
        if len(y) != self.n_rows:
            raise ValueError("vector length mismatch")
        out = [ZERO] * self.n_cols
        for (i, j), v in self.entries.items():
            if y[i]:
                out[j] += y[i] * v
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseMatrix)
                and self.n_rows == other.n_rows
                and self.n_cols == other.n_cols
                and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={len(self.entries)})"


def _eliminate(rows: List[Dict[int, Fraction]], pivot_cols: Iterable[int],
               track: bool = False):
    """Sparse Gaussian elimination in place.

    rows           list of column->value dicts (consumed).
    pivot_cols     columns eligible as pivots (augmented columns excluded).
    track          when True, also maintain each row as a combination of the
                   original rows (used to extract infeasibility witnesses).

    Returns (pivots, rows, combos) where pivots is a list of (row_index, col)
    in elimination order.  After return, for every non-pivot row only
    non-pivot columns survive; pivot rows are not normalized.
    """
    eligible = set(pivot_cols)
    combos: Optional[List[Dict[int, Fraction]]]
    combos = [{i: ONE} for i in range(len(rows))] if track else None

    # column -> set of active rows containing it (eligible columns only)
    col_rows: Dict[int, set] = {}
    active = set()
    for i, row in enumerate(rows):
        if row:
            active.add(i)
            for c in row:
                if c in eligible:
                    col_rows.setdefault(c, set()).add(i)

    pivots: List[Tuple[int, int]] = []
    while True:
        # minimal-fill-ish pivot: the eligible column with fewest active rows,
        # then the shortest row within it; ties broken by index.
        best = None
        for c, members in col_rows.items():
            if not members:
                continue
            key = (len(members), c)
            if best is None or key < best[0]:
                best = (key, c)
        if best is None:
            break
        col = best[1]
        members = col_rows[col]
        prow = min(members, key=lambda i: (len(rows[i]), i))
        pivot_val = rows[prow][col]
        pivots.append((prow, col))
        active.discard(prow)
        for c in rows[prow]:
            if c in eligible:
                col_rows[c].discard(prow)
        col_rows.pop(col, None)

        targets = [i for i in sorted(members) if i != prow]
        prow_items = list(rows[prow].items())
        for i in targets:
            factor = rows[i][col] / pivot_val
            row = rows[i]
            for c, v in prow_items:
                new = row.get(c, ZERO) - factor * v
                had = c in row
                if new:
                    row[c] = new
                    if c in eligible and not had:
                        col_rows.setdefault(c, set()).add(i)
                else:
                    if had:
                        del row[c]
                        s = col_rows.get(c)
                        if s is not None:
                            s.discard(i)
            if combos is not None:
                ci = combos[i]
                for k, v in combos[prow].items():
                    new = ci.get(k, ZERO) - factor * v
                    if new:
                        ci[k] = new
                    else:
                        ci.pop(k, None)
            if not row:
                active.discard(i)
    return pivots, rows, combos


def _dense_eliminate(rows: List[List[Fraction]], n_pivot_cols: int):
    """Plain dense elimination for small matrices; same contract as above."""
    n = len(rows)
    pivots: List[Tuple[int, int]] = []
    used = [False] * n
    for col in range(n_pivot_cols):
        prow = -1
        for i in range(n):
            if not used[i] and rows[i][col]:
                prow = i
                break
        if prow < 0:
            continue
        used[prow] = True
        pivots.append((prow, col))
        pv = rows[prow][col]
        for i in range(n):
            if i != prow and rows[i][col]:
                f = rows[i][col] / pv
                ri, rp = rows[i], rows[prow]
                for j in range(col, len(ri)):
                    if rp[j]:
                        ri[j] -= f * rp[j]
    return pivots, rows


def rank(m: SparseMatrix) -> int:
    if m.n_rows * m.n_cols <= DENSE_CELL_LIMIT:
        dense = [[ZERO] * m.n_cols for _ in range(m.n_rows)]
        for (i, j), v in m.entries.items():
            dense[i][j] = v
        pivots, _ = _dense_eliminate(dense, m.n_cols)
        return len(pivots)
    pivots, _, _ = _eliminate(m.row_dicts(), range(m.n_cols))
    return len(pivots)


def solve(m: SparseMatrix, b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One exact solution of M x = b, or None if the system is inconsistent.

    Free variables are set to zero, so with a fixed column order the returned
    solution has deterministic minimal support among echelon solutions.
    """
    if len(b) != m.n_rows:
        raise ValueError("right-hand side length mismatch")
    aug = m.n_cols
    rows = m.row_dicts()
    for i, v in enumerate(b):
        if v:
            rows[i][aug] = Fraction(v)
    pivots, rows, _ = _eliminate(rows, range(m.n_cols))
    pivot_rows = {i for i, _ in pivots}
    for i, row in enumerate(rows):
        if i not in pivot_rows and row:
            if set(row) == {aug}:
                return None
    x = [ZERO] * m.n_cols
    # back-substitute in reverse elimination order
    for prow, col in reversed(pivots):
        row = rows[prow]
        acc = row.get(aug, ZERO)
        for c, v in row.items():
            if c != col and c != aug:
                if x[c]:
                    acc -= v * x[c]
        x[col] = acc / row[col]
    return x


def kernel_basis(m: SparseMatrix) -> List[List[Fraction]]:
    """Basis of the right kernel, one vector per free column, in column order."""
    rows = m.row_dicts()
    pivots, rows, _ = _eliminate(rows, range(m.n_cols))
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(m.n_cols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        x = [ZERO] * m.n_cols
        x[f] = ONE
        for prow, col in reversed(pivots):
            row = rows[prow]
            acc = ZERO
            for c, v in row.items():
                if c != col and x[c]:
                    acc -= v * x[c]
            x[col] = acc / row[col]
        basis.append(x)
    return basis


def infeasibility_witness(m: SparseMatrix,
                          b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Farkas certificate for an inconsistent system M x = b.

    Returns y with y^T M = 0 and y^T b = 1, or None when the system is
    consistent.  The witness is verified before being returned.
    """
    if len(b) != m.n_rows:
        raise ValueError("right-hand side length mismatch")
    aug = m.n_cols
    rows = m.row_dicts()
    for i, v in enumerate(b):
        if v:
            rows[i][aug] = Fraction(v)
    pivots, rows, combos = _eliminate(rows, range(m.n_cols), track=True)
    pivot_rows = {i for i, _ in pivots}
    for i, row in enumerate(rows):
        if i not in pivot_rows and set(row) == {aug}:
            scale = row[aug]
            y = [ZERO] * m.n_rows
            for k, v in combos[i].items():
                y[k] = v / scale
            residual = m.left_mul_vector(y)
            if any(residual) or sum(y[i] * Fraction(b[i]) for i in range(m.n_rows)) != 1:
                raise ArithmeticError("internal error: invalid Farkas witness")
            return y
    return None


class IncrementalSpan:
    """Growing row-space over arbitrary hashable coordinates.

    Vectors are dicts coordinate -> Fraction.  add() performs one step of
    Gaussian elimination against the rows kept so far and reports whether the
    rank grew; contains() answers exact membership in the current span.
    """

    __slots__ = ("_rows", "_members")

    def __init__(self):
        self._rows: Dict[object, Dict[object, Fraction]] = {}  # pivot -> row
        self._members: List[Dict[object, Fraction]] = []

    @property
    def dimension(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: Dict[object, Fraction]) -> Dict[object, Fraction]:
        v = {k: Fraction(x) for k, x in vec.items() if x}
        for pivot, row in self._rows.items():
            coeff = v.get(pivot)
            if coeff:
                for k, x in row.items():
                    new = v.get(k, ZERO) - coeff * x
                    if new:
                        v[k] = new
                    else:
                        v.pop(k, None)
        return v

    def add(self, vec: Dict[object, Fraction]) -> bool:
        v = self._reduce(vec)
        if not v:
            return False
        pivot = min(v, key=_coord_key)
        lead = v[pivot]
        row = {k: x / lead for k, x in v.items()}
        # keep existing rows reduced against the new pivot
        for p, r in self._rows.items():
            c = r.get(pivot)
            if c:
                for k, x in row.items():
                    new = r.get(k, ZERO) - c * x
                    if new:
                        r[k] = new
                    else:
                        r.pop(k, None)
        self._rows[pivot] = row
        return True

    def contains(self, vec: Dict[object, Fraction]) -> bool:
        return not self._reduce(vec)


def _coord_key(k):
    # deterministic pivot order over heterogeneous hashable coordinates
    return (repr(type(k)), repr(k))


# ---------------------------------------------------------------------------
# modular pre-pass


def rank_mod(m: SparseMatrix, p: int) -> int:
    """Rank of the reduction mod p (a lower bound for the rational rank)."""
    rows: List[Dict[int, int]] = [dict() for _ in range(m.n_rows)]
    for (i, j), v in m.entries.items():
        num = v.numerator % p
        den = v.denominator % p
        if den == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        if num:
            rows[i][j] = num * pow(den, -1, p) % p
    return len(_eliminate_mod(rows, m.n_cols, p))


def feasible_mod(m: SparseMatrix, b: Sequence[Fraction], p: int) -> bool:
    """Whether M x = b is solvable mod p.  False certifies rational
    infeasibility up to the (checked) assumption that no denominator is
    divisible by p; True is only probabilistic evidence of feasibility."""
    rows: List[Dict[int, int]] = [dict() for _ in range(m.n_rows)]
    aug = m.n_cols
    for (i, j), v in m.entries.items():
        num = v.numerator % p
        if v.denominator % p == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        if num:
            rows[i][j] = num * pow(v.denominator % p, -1, p) % p
    for i, v in enumerate(b):
        v = Fraction(v)
        if v.denominator % p == 0:
            raise ZeroDivisionError(f"denominator divisible by {p}")
        num = v.numerator % p
        if num:
            rows[i][aug] = num * pow(v.denominator % p, -1, p) % p
    _eliminate_mod(rows, m.n_cols, p)
    for row in rows:
        if set(row) == {aug}:
            return False
    return True


def _eliminate_mod(rows: List[Dict[int, int]], n_pivot_cols: int, p: int):
    col_rows: Dict[int, set] = {}
    for i, row in enumerate(rows):
        for c in row:
            if c < n_pivot_cols:
                col_rows.setdefault(c, set()).add(i)
    pivots = []
    while True:
        best = None
        for c, members in col_rows.items():
            if members:
                key = (len(members), c)
                if best is None or key < best[0]:
                    best = (key, c)
        if best is None:
            break
        col = best[1]
        members = col_rows[col]
        prow = min(members, key=lambda i: (len(rows[i]), i))
        inv = pow(rows[prow][col], -1, p)
        pivots.append((prow, col))
        for c in rows[prow]:
            if c < n_pivot_cols:
                col_rows[c].discard(prow)
        col_rows.pop(col, None)
        prow_items = list(rows[prow].items())
        for i in sorted(members):
            if i == prow:
                continue
            factor = rows[i][col] * inv % p
            row = rows[i]
            for c, v in prow_items:
                new = (row.get(c, 0) - factor * v) % p
                had = c in row
                if new:
                    row[c] = new
                    if c < n_pivot_cols and not had:
                        col_rows.setdefault(c, set()).add(i)
                else:
                    if had:
                        del row[c]
                        s = col_rows.get(c)
                        if s is not None:
                            s.discard(i)
    return pivots
