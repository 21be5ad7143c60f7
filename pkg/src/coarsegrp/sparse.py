"""Sparse integer matrices in dictionary-of-keys form."""

from __future__ import annotations

from .errors import InputError


class SparseMatrix:
    """Exact sparse matrix with Python-int entries.

    ``entries`` maps ``(row, col)`` to a nonzero value.  Instances are
    treated as immutable once built.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = int(rows)
        self.cols = int(cols)
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise InputError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            if v:
                self.entries[(i, j)] = v

    @classmethod
    def from_dense(cls, M, rows=None, cols=None):
        M = [list(r) for r in M]
        rows = len(M) if rows is None else rows
        cols = (len(M[0]) if M else 0) if cols is None else cols
        return cls(rows, cols, {(i, j): v for i, r in enumerate(M) for j, v in enumerate(r) if v})

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self.entries)

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    @property
    def T(self):
        return self.transpose()

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise InputError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + v * w
        return SparseMatrix(self.rows, other.cols, {k: v for k, v in out.items() if v})

    def is_zero(self):
        return not self.entries

    def mod(self, p):
        return SparseMatrix(self.rows, self.cols,
                            {k: v % p for k, v in self.entries.items() if v % p})

    def column(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self):
        out = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def row_counts(self):
        out = [0] * self.rows
        for i, _ in self.entries:
            out[i] += 1
        return out

    def submatrix(self, rows, cols):
        rmap = {r: a for a, r in enumerate(rows)}
        cmap = {c: b for b, c in enumerate(cols)}
        return SparseMatrix(len(rows), len(cols),
                            {(rmap[i], cmap[j]): v for (i, j), v in self.entries.items()
                             if i in rmap and j in cmap})

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def to_text(self, degree=None):
        """Portable text: a header line then ``row col value`` triplets."""
        head = f"{'' if degree is None else degree} {self.rows} {self.cols} {self.nnz}".strip()
        lines = [head]
        for (i, j), v in sorted(self.entries.items()):
            lines.append(f"{i} {j} {v}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) == 4:
            _, r, c, n = map(int, head)
        elif len(head) == 3:
            r, c, n = map(int, head)
        else:
            raise InputError("bad sparse-matrix header")
        entries = {}
        for ln in lines[1:1 + n]:
            i, j, v = map(int, ln.split())
            entries[(i, j)] = v
        return cls(r, c, entries)


def as_sparse(M):
    if isinstance(M, SparseMatrix):
        return M
    return SparseMatrix.from_dense(M)
