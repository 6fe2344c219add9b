"""Exact sparse Gauss-Jordan elimination over a field.

Vectors are dicts ``column -> scalar`` with zeros dropped.  Pivots are chosen
by column order and then by row order, never by magnitude, so every result is
reproducible.
"""

from __future__ import annotations

from typing import Iterable, Sequence

SparseVec = dict


def _axpy(target: dict, c, source: dict) -> None:
    """target += c * source, in place, dropping zeros."""
    for k, v in source.items():
        new = target.get(k, 0) + c * v
        if new == 0:
            target.pop(k, None)
        else:
            target[k] = new


class Echelon:
    """Reduced row echelon form of a set of sparse vectors.

    Keeps, for every reduced row, its expression in terms of the input rows so
    that membership queries can also return a preimage.
    """

    def __init__(self, rows: Iterable[SparseVec], ncols: int | None = None, track: bool = False):
        self.track = track
        self.rows: list[dict] = []
        self.combos: list[dict] = []
        self.pivots: list[int] = []
        self.ncols = ncols
        rows = list(rows)
        order = sorted(range(len(rows)))
        pending = [({k: v for k, v in rows[i].items() if v != 0}, {i: 1} if track else None) for i in order]
        self.kernel_combos: list[dict] = []
        for vec, combo in pending:
            self._insert(vec, combo)
        self._finish()

    def _insert(self, vec: dict, combo) -> None:
        vec = dict(vec)
        combo = dict(combo) if combo is not None else None
        for row, rc, piv in zip(self.rows, self.combos, self.pivots):
            c = vec.get(piv)
            if c:
                _axpy(vec, -c, row)
                if combo is not None:
                    _axpy(combo, -c, rc)
        if not vec:
            if combo is not None:
                self.kernel_combos.append(combo)
            return
        piv = min(vec)
        inv = 1 / vec[piv]
        vec = {k: v * inv for k, v in vec.items()}
        if combo is not None:
            combo = {k: v * inv for k, v in combo.items()}
        # keep earlier rows reduced against the new pivot
        for idx, row in enumerate(self.rows):
            c = row.get(piv)
            if c:
                _axpy(row, -c, vec)
                if combo is not None:
                    _axpy(self.combos[idx], -c, combo)
        self.rows.append(vec)
        self.combos.append(combo)
        self.pivots.append(piv)

    def _finish(self) -> None:
        order = sorted(range(len(self.pivots)), key=lambda i: self.pivots[i])
        self.rows = [self.rows[i] for i in order]
        self.combos = [self.combos[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]
        self._pivot_index = {p: i for i, p in enumerate(self.pivots)}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: SparseVec) -> tuple[dict, dict]:
        """Return ``(remainder, coefficients)`` with ``vec = Σ c_i row_i + remainder``."""
        rem = {k: v for k, v in vec.items() if v != 0}
        coeffs = {}
        for i, (row, piv) in enumerate(zip(self.rows, self.pivots)):
            c = rem.get(piv)
            if c:
                coeffs[i] = c
                _axpy(rem, -c, row)
        return rem, coeffs

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)[0]

    def preimage(self, vec: SparseVec) -> dict | None:
        """Combination of input rows summing to ``vec`` (needs ``track=True``)."""
        if not self.track:
            raise ValueError("echelon form was built without tracking")
        rem, coeffs = self.reduce(vec)
        if rem:
            return None
        out: dict = {}
        for i, c in coeffs.items():
            _axpy(out, c, self.combos[i])
        return out


def rank(rows: Iterable[SparseVec]) -> int:
    return Echelon(rows).rank


def nullspace(columns: Sequence[SparseVec], field_one=1) -> list[dict]:
    """Basis of ``{x : Σ x_i columns[i] = 0}`` as sparse vectors over column indices.

    The basis is the canonical one attached to the reduced echelon form of the
    matrix whose columns are ``columns``: one vector per free column, with a 1
    in that column and zeros in the other free columns.
    """
    n = len(columns)
    # rows of the matrix: transpose the column dict representation
    rows: dict = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v != 0:
                rows.setdefault(i, {})[j] = v
    ech = Echelon([rows[i] for i in sorted(rows, key=_sort_key)])
    pivot_cols = set(ech.pivots)
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        vec = {free: field_one}
        for row, piv in zip(ech.rows, ech.pivots):
            c = row.get(free)
            if c:
                vec[piv] = -c
        basis.append(vec)
    return basis


def solve(columns: Sequence[SparseVec], rhs: SparseVec):
    """Solve ``Σ x_j columns[j] = rhs``.

    Returns the solution whose free coordinates are all zero, or ``None`` when
    the system is inconsistent.
    """
    rows: dict = {}
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v != 0:
                rows.setdefault(i, {})[j] = v
    keys = sorted(set(rows) | set(k for k, v in rhs.items() if v != 0), key=_sort_key)
    aug_col = len(columns)
    augmented = []
    for i in keys:
        row = dict(rows.get(i, {}))
        if rhs.get(i, 0) != 0:
            row[aug_col] = rhs[i]
        augmented.append(row)
    ech = Echelon(augmented)
    if aug_col in ech.pivots:
        return None
    x = {}
    for row, piv in zip(ech.rows, ech.pivots):
        c = row.get(aug_col)
        if c:
            x[piv] = c
    return x


def _sort_key(k):
    return (type(k).__name__, k) if not isinstance(k, int) else ("", k)
