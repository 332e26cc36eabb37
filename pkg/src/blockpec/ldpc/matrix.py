"""Sparse binary parity-check matrices and the alist file format."""
from __future__ import annotations

import hashlib
from collections import deque
from functools import cached_property
from pathlib import Path

import numpy as np


class MatrixError(ValueError):
    pass


class ParityCheckMatrix:
    """Binary ``n_checks x n_vars`` matrix stored as per-check variable lists.

    Edges are numbered check-major: edge ``e`` joins check ``edge_check[e]``
    and variable ``edge_var[e]``; ``check_ptr`` delimits each check's edges
    and ``var_edges[var_ptr[v]:var_ptr[v+1]]`` lists variable ``v``'s edges.
    """

    def __init__(self, n_vars: int, rows):
        if n_vars < 1 or len(rows) < 1:
            raise MatrixError("matrix dimensions must be positive")
        self.n_vars = int(n_vars)
        self.n_checks = len(rows)
        rows = [sorted(int(v) for v in r) for r in rows]
        for r in rows:
            if len(set(r)) != len(r):
                raise MatrixError("duplicate edge")
            if r and not 0 <= r[0] <= r[-1] < n_vars:
                raise MatrixError("variable index out of range")
        self.rows = tuple(tuple(r) for r in rows)
        sizes = np.array([len(r) for r in rows], dtype=np.int32)
        self.check_ptr = np.zeros(self.n_checks + 1, dtype=np.int32)
        np.cumsum(sizes, out=self.check_ptr[1:])
        self.edge_var = np.fromiter((v for r in rows for v in r), dtype=np.int32,
                                    count=int(sizes.sum()))
        self.edge_check = np.repeat(np.arange(self.n_checks, dtype=np.int32), sizes)
        order = np.argsort(self.edge_var, kind="stable").astype(np.int32)
        self.var_edges = order
        self.var_ptr = np.zeros(self.n_vars + 1, dtype=np.int32)
        np.cumsum(np.bincount(self.edge_var, minlength=self.n_vars), out=self.var_ptr[1:])
        if (np.diff(self.var_ptr) == 0).any():
            raise MatrixError("every variable node needs at least one edge")

    @classmethod
    def from_dense(cls, H) -> "ParityCheckMatrix":
        H = np.asarray(H) % 2
        return cls(H.shape[1], [np.flatnonzero(row) for row in H])

    @property
    def n_edges(self) -> int:
        return int(self.edge_var.size)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_checks, self.n_vars

    def to_dense(self) -> np.ndarray:
        H = np.zeros(self.shape, dtype=np.uint8)
        H[self.edge_check, self.edge_var] = 1
        return H

    def var_degrees(self) -> np.ndarray:
        return np.diff(self.var_ptr)

    def check_degrees(self) -> np.ndarray:
        return np.diff(self.check_ptr)

    def columns(self) -> list[list[int]]:
        cols = [[] for _ in range(self.n_vars)]
        for c, r in enumerate(self.rows):
            for v in r:
                cols[v].append(c)
        return cols

    def syndrome(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.uint8)
        if y.shape != (self.n_vars,):
            raise MatrixError(f"expected {self.n_vars} bits, got shape {y.shape}")
        acc = np.bincount(self.edge_check, weights=y[self.edge_var], minlength=self.n_checks)
        return (acc.astype(np.int64) & 1).astype(np.uint8)

    def __eq__(self, other):
        return isinstance(other, ParityCheckMatrix) and \
            self.n_vars == other.n_vars and self.rows == other.rows

    def __hash__(self):
        return hash(self.digest)

    def __repr__(self):
        return f"ParityCheckMatrix({self.n_checks}x{self.n_vars}, edges={self.n_edges})"

    # --- alist ----------------------------------------------------------

    def to_alist(self) -> str:
        cols = self.columns()
        max_col = max(len(c) for c in cols)
        max_row = max((len(r) for r in self.rows), default=0)
        lines = [f"{self.n_vars} {self.n_checks}", f"{max_col} {max_row}",
                 " ".join(str(len(c)) for c in cols),
                 " ".join(str(len(r)) for r in self.rows)]
        for c in cols:
            lines.append(" ".join(str(i + 1) for i in c + [-1] * (max_col - len(c))))
        for r in self.rows:
            lines.append(" ".join(str(i + 1) for i in list(r) + [-1] * (max_row - len(r))))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_alist(cls, text: str) -> "ParityCheckMatrix":
        tokens = [int(t) for t in text.split()]
        pos = 0

        def take(k):
            nonlocal pos
            if pos + k > len(tokens):
                raise MatrixError("truncated alist data")
            out = tokens[pos:pos + k]
            pos += k
            return out

        n_vars, n_checks = take(2)
        max_col, max_row = take(2)
        col_w = take(n_vars)
        row_w = take(n_checks)
        padded = len(tokens) == 4 + n_vars + n_checks + n_vars * max_col + n_checks * max_row
        cols = []
        for w in col_w:
            entries = take(max_col if padded else w)
            cols.append([i - 1 for i in entries if i > 0][:w])
        rows = []
        for w in row_w:
            entries = take(max_row if padded else w)
            rows.append([i - 1 for i in entries if i > 0][:w])
        H = cls(n_vars, rows)
        from_cols = sorted((c, v) for v, cs in enumerate(cols) for c in cs)
        if from_cols != sorted(zip(H.edge_check.tolist(), H.edge_var.tolist())):
            raise MatrixError("alist column and row lists disagree")
        return H

    def save_alist(self, path) -> None:
        Path(path).write_text(self.to_alist())

    @classmethod
    def load_alist(cls, path) -> "ParityCheckMatrix":
        return cls.from_alist(Path(path).read_text())

    @cached_property
    def digest(self) -> bytes:
        """SHA-256 of the canonical alist text."""
        return hashlib.sha256(self.to_alist().encode()).digest()

    # --- graph properties ----------------------------------------------

    def girth(self) -> int:
        """Length of the shortest cycle in the Tanner graph (0 if acyclic).

        BFS from every variable node; a non-tree edge closing between depths
        ``d1`` and ``d2`` gives a cycle of length at most ``d1 + d2 + 1``.
        """
        n = self.n_vars
        cols = self.columns()
        adj = [list(map(lambda c: n + c, cs)) for cs in cols] + \
              [list(r) for r in self.rows]
        best = None
        for root in range(n):
            dist = {root: 0}
            parent = {root: -1}
            q = deque([root])
            while q:
                u = q.popleft()
                if best is not None and 2 * dist[u] + 1 >= best:
                    break
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        q.append(w)
                    elif parent[u] != w:
                        cyc = dist[u] + dist[w] + 1
                        if best is None or cyc < best:
                            best = cyc
        return best or 0
