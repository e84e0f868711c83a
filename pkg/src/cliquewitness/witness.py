"""Pseudo-moment witness matrices and SOS feasibility checking.

Three matrices on the subset index space share one entry engine:

* kind "M": entry (A, B) = alpha_{|A u B|} * [A u B induces a clique],
* kind "N": entry (A, B) = alpha_{|A u B|} * prod of cross edges between
  A \\ B and B \\ A (shared vertices contribute no factor),
* kind "H": N restricted to singletons and pairs, minus the rank-one
  correction alpha_{|A|} * alpha_{|B|} (the Schur complement of the empty-set
  entry of N).

M = D N D with D the diagonal of clique indicators, and PSD-ness cascades
H >= 0  =>  N >= 0  =>  M >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Tuple

import numpy as np

from .models import GraphInstance
from .params import WitnessParams, derive_alphas
from .spectral import PsdReport, psd_check
from .subsets import SubsetIndexer

__all__ = [
    "WitnessParams",
    "derive_alphas",
    "MomentMatrix",
    "build_matrix",
    "extract_blocks",
    "FeasibilityReport",
    "check_sos_feasibility",
    "dump_matrix",
    "load_matrix",
]

_ROW_CHUNK = 512


# ----------------------------------------------------------------------
# matrix construction
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class MomentMatrix:
    """Dense symmetric matrix over the subset index space.

    Kinds "M" and "N" live on the full space (dim x dim, index 0 = empty
    set); kind "H" omits the empty-set row/column (size dim - 1).
    """

    indexer: SubsetIndexer
    kind: str
    values: np.ndarray
    params: WitnessParams

    def __post_init__(self) -> None:
        if self.kind not in ("M", "N", "H"):
            raise ValueError(f"kind must be 'M', 'N' or 'H', got {self.kind}")
        expected = self.indexer.dim - (1 if self.kind == "H" else 0)
        if self.values.shape != (expected, expected):
            raise ValueError(
                f"kind {self.kind} needs shape {(expected, expected)}, got {self.values.shape}"
            )

    @property
    def n(self) -> int:
        return self.indexer.n

    def objective(self) -> float:
        """Sum of the singleton diagonal entries."""
        offset = 0 if self.kind == "H" else 1
        idx = np.arange(offset, offset + self.n)
        return float(self.values[idx, idx].sum())


def _row_values(
    alphas: np.ndarray,
    graph: GraphInstance,
    ix: SubsetIndexer,
    kind: str,
    rows: np.ndarray,
) -> np.ndarray:
    """Entries of the M or N matrix for the given full-space row indices.

    Row/column conventions follow the canonical index order.  All case
    distinctions reduce to boolean gathers on the adjacency matrix, so the
    result is bitwise symmetric in (row, column).
    """
    n = ix.n
    adj = graph.adjacency
    adj_diag = adj | np.eye(n, dtype=bool)
    gpair = graph.pair_indicators(ix)
    hi = ix.pair_heads - 1
    ti = ix.pair_tails - 1

    out = np.empty((len(rows), ix.dim))
    for r, row in enumerate(rows):
        row = int(row)
        if row == 0:
            line = np.empty(ix.dim)
            line[0] = alphas[0]
            line[1 : n + 1] = alphas[1]
            line[n + 1 :] = alphas[2] * gpair if kind == "M" else alphas[2]
            out[r] = line
            continue
        if row <= n:
            a = row - 1
            line = np.empty(ix.dim)
            line[0] = alphas[1]
            # cross product {a} x {b} is the single edge indicator, so the
            # singleton block of M and N coincide
            sing = alphas[2] * adj[a].astype(float)
            sing[a] = alphas[1]
            line[1 : n + 1] = sing
            cross = adj[a, hi] & adj[a, ti]
            vals = alphas[3] * cross.astype(float)
            if kind == "M":
                vals *= gpair
            in_b = (hi == a) | (ti == a)
            vals[in_b] = alphas[2] * (gpair[in_b] if kind == "M" else 1.0)
            line[n + 1 :] = vals
            out[r] = line
            continue
        t = row - n - 1
        i, j = int(hi[t]), int(ti[t])
        line = np.empty(ix.dim)
        line[0] = alphas[2] * (gpair[t] if kind == "M" else 1.0)
        sing = alphas[3] * (adj[i] & adj[j]).astype(float)
        sing[i] = alphas[2]
        sing[j] = alphas[2]
        if kind == "M":
            sing *= gpair[t]
        line[1 : n + 1] = sing
        if kind == "M":
            p4 = adj_diag[i, hi] & adj_diag[i, ti] & adj_diag[j, hi] & adj_diag[j, ti]
            shared = (hi == i).astype(np.int8) + (hi == j) + (ti == i) + (ti == j)
            vals = alphas[4 - shared] * (p4 & gpair & gpair[t]).astype(float)
        else:
            vals = alphas[4] * (adj[i, hi] & adj[i, ti] & adj[j, hi] & adj[j, ti]).astype(float)
            share_i = (hi == i) | (ti == i)
            share_j = (hi == j) | (ti == j)
            one = share_i ^ share_j
            if np.any(one):
                # x in A \ B, y in B \ A for overlap exactly one
                x = np.where(share_i[one], j, i)
                y = hi[one] + ti[one] - np.where(share_i[one], i, j)
                vals[one] = alphas[3] * adj[x, y]
            vals[t] = alphas[2]
        line[n + 1 :] = vals
        out[r] = line
    return out


def _full_matrix(alphas: np.ndarray, graph: GraphInstance, ix: SubsetIndexer, kind: str) -> np.ndarray:
    values = np.empty((ix.dim, ix.dim))
    for start in range(0, ix.dim, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, ix.dim))
        values[rows] = _row_values(alphas, graph, ix, kind, rows)
    return values


def build_matrix(graph: GraphInstance, params: WitnessParams, kind: str) -> MomentMatrix:
    """Construct the witness matrix of the requested kind for a graph."""
    if kind not in ("M", "N", "H"):
        raise ValueError(f"kind must be 'M', 'N' or 'H', got {kind}")
    if params.p != graph.p:
        raise ValueError(
            f"edge probability mismatch: params.p={params.p}, graph.p={graph.p}"
        )
    ix = SubsetIndexer(graph.n)
    alphas = params.by_union_size()
    if kind in ("M", "N"):
        values = _full_matrix(alphas, graph, ix, kind)
        return MomentMatrix(indexer=ix, kind=kind, values=values, params=params)
    full = _full_matrix(alphas, graph, ix, "N")
    by_size = np.concatenate([np.full(ix.n, params.alpha1), np.full(ix.num_pairs, params.alpha2)])
    values = full[1:, 1:] - np.outer(by_size, by_size)
    return MomentMatrix(indexer=ix, kind="H", values=values, params=params)


def extract_blocks(mat: MomentMatrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Views (H11, H12, H22) of the singleton, mixed and pair blocks."""
    if mat.kind != "H":
        raise ValueError(f"blocks are defined for kind 'H', got {mat.kind}")
    n = mat.n
    return mat.values[:n, :n], mat.values[:n, n:], mat.values[n:, n:]


# ----------------------------------------------------------------------
# feasibility checking
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of the constraint checks on a candidate pseudo-moment matrix."""

    empty_entry_is_one: bool
    entries_in_range: bool
    vanishes_off_cliques: bool
    union_symmetric: bool
    psd: bool
    objective: float
    psd_report: PsdReport
    tolerance: float

    @property
    def feasible(self) -> bool:
        return (
            self.empty_entry_is_one
            and self.entries_in_range
            and self.vanishes_off_cliques
            and self.union_symmetric
            and self.psd
        )


def _pad_pairs(ix: SubsetIndexer) -> Tuple[np.ndarray, np.ndarray]:
    """(first, second) vertex labels per index, 0-padded from the front."""
    first = np.zeros(ix.dim, dtype=np.int64)
    second = np.zeros(ix.dim, dtype=np.int64)
    second[1 : ix.n + 1] = np.arange(1, ix.n + 1)
    first[ix.n + 1 :] = ix.pair_heads
    second[ix.n + 1 :] = ix.pair_tails
    return first, second


def _union_ranks(
    r1: np.ndarray, r2: np.ndarray, c1: np.ndarray, c2: np.ndarray, tables: np.ndarray
) -> np.ndarray:
    """Injective integer key of the union multiset, per (row, column) position.

    Sorts the four padded labels with a sorting network, zeroes duplicates,
    re-sorts, then shifts position j by j so the padded tuple becomes a
    strictly increasing 4-subset ranked in the colexicographic order.
    """
    w = np.empty((len(r1), len(c1), 4), dtype=np.int64)
    w[..., 0] = r1[:, None]
    w[..., 1] = r2[:, None]
    w[..., 2] = c1[None, :]
    w[..., 3] = c2[None, :]
    for a, b in ((0, 1), (2, 3), (0, 2), (1, 3), (1, 2)):
        lo = np.minimum(w[..., a], w[..., b])
        hi = np.maximum(w[..., a], w[..., b])
        w[..., a] = lo
        w[..., b] = hi
    dup = w[..., 1:] == w[..., :-1]
    w[..., 1:][dup] = 0
    for a, b in ((0, 1), (2, 3), (0, 2), (1, 3), (1, 2)):
        lo = np.minimum(w[..., a], w[..., b])
        hi = np.maximum(w[..., a], w[..., b])
        w[..., a] = lo
        w[..., b] = hi
    rank = tables[1][w[..., 0]]
    rank += tables[2][w[..., 1] + 1]
    rank += tables[3][w[..., 2] + 2]
    rank += tables[4][w[..., 3] + 3]
    return rank


def _binom_tables(n: int) -> np.ndarray:
    z = np.arange(n + 4)
    tables = np.zeros((5, n + 4), dtype=np.int64)
    for k in range(1, 5):
        tables[k] = [comb(int(v), k) for v in z]
    return tables


def check_sos_feasibility(
    mat: MomentMatrix, graph: GraphInstance, tol: float = 1e-8
) -> FeasibilityReport:
    """Verify the degree-4 pseudo-moment constraints on a kind-M matrix.

    Checks, in order: the empty-set diagonal entry equals 1; all entries lie
    in [0, 1]; entries vanish whenever the union of the index subsets is not
    a clique; entries agree exactly whenever the unions agree; the matrix is
    PSD up to tol (relative to the largest diagonal entry).  The first four
    are exact comparisons, not tolerance-based.
    """
    if mat.kind != "M":
        raise ValueError(f"feasibility checks apply to kind 'M', got {mat.kind}")
    if mat.n != graph.n:
        raise ValueError(f"dimension mismatch: matrix n={mat.n}, graph n={graph.n}")
    ix = mat.indexer
    values = mat.values
    ones = np.ones(5)
    first, second = _pad_pairs(ix)
    tables = _binom_tables(ix.n)
    max_rank = int(
        tables[1][ix.n] + tables[2][ix.n + 1] + tables[3][ix.n + 2] + tables[4][ix.n + 3]
    )
    rep = np.zeros(max_rank + 1)
    seen = np.zeros(max_rank + 1, dtype=bool)

    in_range = bool(np.all(values >= 0.0) and np.all(values <= 1.0))
    off_clique_ok = True
    union_ok = True
    for start in range(0, ix.dim, _ROW_CHUNK):
        rows = np.arange(start, min(start + _ROW_CHUNK, ix.dim))
        block = values[rows]
        clique = _row_values(ones, graph, ix, "M", rows).astype(bool)
        if np.any(block[~clique] != 0.0):
            off_clique_ok = False
        ranks = _union_ranks(first[rows], second[rows], first, second, tables).ravel()
        flat = block.ravel()
        uniq, first_idx, inverse = np.unique(ranks, return_index=True, return_inverse=True)
        chunk_rep = flat[first_idx]
        if np.any(flat != chunk_rep[inverse]):
            union_ok = False
        known = seen[uniq]
        if np.any(chunk_rep[known] != rep[uniq[known]]):
            union_ok = False
        rep[uniq[~known]] = chunk_rep[~known]
        seen[uniq[~known]] = True

    psd_report = psd_check(values, tol=tol)
    offset = 1
    idx = np.arange(offset, offset + ix.n)
    return FeasibilityReport(
        empty_entry_is_one=bool(values[0, 0] == 1.0),
        entries_in_range=in_range,
        vanishes_off_cliques=off_clique_ok,
        union_symmetric=union_ok,
        psd=psd_report.psd,
        objective=float(values[idx, idx].sum()),
        psd_report=psd_report,
        tolerance=tol,
    )


# ----------------------------------------------------------------------
# dumps
# ----------------------------------------------------------------------


def dump_matrix(mat: MomentMatrix, path: str, binary: bool = False) -> None:
    """Header "n dim kind", then upper-triangle entries in row-major order.

    Text mode writes one repr'd float per line; binary mode writes raw
    little-endian 64-bit floats after the header line.
    """
    side = mat.values.shape[0]
    iu = np.triu_indices(side)
    tri = mat.values[iu]
    header = f"{mat.n} {side} {mat.kind}\n"
    if binary:
        with open(path, "wb") as fh:
            fh.write(header.encode())
            fh.write(tri.astype("<f8").tobytes())
    else:
        with open(path, "w") as fh:
            fh.write(header)
            fh.writelines(f"{float(v)!r}\n" for v in tri)


def load_matrix(path: str, params: WitnessParams, binary: bool = False) -> MomentMatrix:
    """Inverse of dump_matrix (params are not stored in the dump)."""
    mode = "rb" if binary else "r"
    with open(path, mode) as fh:
        header = fh.readline()
        if binary:
            header = header.decode()
        n_str, side_str, kind = header.split()
        n, side = int(n_str), int(side_str)
        if binary:
            tri = np.frombuffer(fh.read(), dtype="<f8")
        else:
            tri = np.array([float(line) for line in fh])
    values = np.zeros((side, side))
    iu = np.triu_indices(side)
    values[iu] = tri
    values.T[iu] = tri
    return MomentMatrix(indexer=SubsetIndexer(n), kind=kind, values=values, params=params)
