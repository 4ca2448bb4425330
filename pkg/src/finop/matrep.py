"""Exact matrix representation of the finite operator algebra.

For a grid with K = M p^N, every shift-coefficient operator A corresponds to
one K x K complex matrix built from M x M blocks indexed by cell residues
(r, j):  block(r, j) = A_{j-r mod p} evaluated on cell r.  The map is a
*-isomorphism, and it is inverted exactly: block(r, r+j mod p) recovers the
coefficient A_j on cell r.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import FinopError
from .grid import GridSpec, StepFunction, all_cell_coords
from .operators import FiniteOperator


@dataclass(frozen=True)
class RepMatrix:
    """K x K matrix with the block structure of the representation."""

    grid: GridSpec
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        K = self.grid.dim
        ent = np.ascontiguousarray(np.asarray(self.entries, dtype=np.complex128))
        if ent.shape != (K, K):
            raise ValueError(f"matrix shape {ent.shape} != ({K}, {K}) for {self.grid}")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries, ord=2))

    def to_json_dict(self):
        return {
            "grid": self.grid.to_json_dict(),
            "entries": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.entries
            ],
        }

    def to_csv(self) -> str:
        """Interleaved re/im columns, one matrix row per line."""
        lines = []
        for row in self.entries:
            cells = []
            for z in row:
                cells.append(repr(float(z.real)))
                cells.append(repr(float(z.imag)))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset, sorted by (re, im) for comparison."""

    eigenvalues: np.ndarray = field(repr=False)

    def __post_init__(self):
        eig = np.asarray(self.eigenvalues, dtype=np.complex128)
        order = np.lexsort((eig.imag, eig.real))
        eig = np.ascontiguousarray(eig[order])
        eig.setflags(write=False)
        object.__setattr__(self, "eigenvalues", eig)

    def __len__(self):
        return len(self.eigenvalues)

    def max_deviation(self, other: "Spectrum") -> float:
        """Max pairwise distance under the best multiset matching.

        Plain sorted comparison mis-pairs conjugate eigenvalue pairs whose
        real parts tie up to rounding noise, so pair by minimal assignment.
        """
        if len(self) != len(other):
            raise ValueError("spectra have different sizes")
        cost = np.abs(self.eigenvalues[:, None] - other.eigenvalues[None, :])
        rows, cols = scipy.optimize.linear_sum_assignment(cost)
        return float(cost[rows, cols].max())


def _shift_perms(grid: GridSpec):
    """For each shift j (flat order), the permutation r -> (r + j) mod p."""
    p, N = grid.p, grid.N
    coords = all_cell_coords(p, N)
    for j in range(grid.num_cells):
        jc = coords[j]
        shifted = (coords + jc) % p
        perm = np.zeros(grid.num_cells, dtype=np.int64)
        for a in range(N):
            perm = perm * p + shifted[:, a]
        yield tuple(int(c) for c in jc), perm


def to_matrix(A: FiniteOperator) -> RepMatrix:
    """Assemble the block matrix: block(r, j) = A_{j-r}(cell r)."""
    grid = A.grid
    p, N, M = grid.p, grid.N, grid.M
    nc = grid.num_cells
    blocks = np.zeros((nc, nc, M, M), dtype=np.complex128)
    rows = np.arange(nc)
    coords = all_cell_coords(p, N)
    for j, coeff in A.terms.items():
        shifted = (coords + np.asarray(j, dtype=np.int64)) % p
        cols = np.zeros(nc, dtype=np.int64)
        for a in range(N):
            cols = cols * p + shifted[:, a]
        blocks[rows, cols] += coeff.values
    entries = blocks.transpose(0, 2, 1, 3).reshape(grid.dim, grid.dim)
    return RepMatrix(grid, entries)


def from_matrix(B: RepMatrix) -> FiniteOperator:
    """Recover the unique shift-coefficient operator with this matrix."""
    grid = B.grid
    p, N, M = grid.p, grid.N, grid.M
    nc = grid.num_cells
    blocks = B.entries.reshape(nc, M, nc, M).transpose(0, 2, 1, 3)
    rows = np.arange(nc)
    terms = {}
    for j, perm in _shift_perms(grid):
        vals = blocks[rows, perm]
        if np.any(vals != 0):
            terms[j] = StepFunction(grid, vals)
    return FiniteOperator(grid, terms)


def spectrum(B: RepMatrix) -> Spectrum:
    """Eigenvalues of the representation matrix (dense solver)."""
    try:
        eig = np.linalg.eigvals(B.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise FinopError(f"eigensolver failed: {exc}") from exc
    return Spectrum(eig)


def matrix_exp(B: RepMatrix, t: float = 1.0) -> RepMatrix:
    """exp(t B) via scaling-and-squaring with Pade approximant."""
    ent = scipy.linalg.expm(t * B.entries)
    if not np.all(np.isfinite(ent)):
        raise FinopError(f"matrix exponential overflowed at t={t}")
    return RepMatrix(B.grid, ent)
