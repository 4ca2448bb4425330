"""Exact rational grid geometry and matrix-valued step functions on the torus.

The torus T^N is split into p^N half-open cells of side 1/p.  Cell indices
are N-tuples with axis 0 most significant in the flat (lexicographic) order;
this single convention is shared by every module that enumerates cells.
Step functions are matrix valued and constant on each cell; geometry is kept
in exact rationals while matrix entries are complex doubles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GridMismatchError


@dataclass(frozen=True)
class GridSpec:
    """Common frame: torus dimension N, matrix size M, cells per axis p."""

    N: int
    M: int
    p: int

    def __post_init__(self):
        if self.N < 1 or self.M < 1 or self.p < 1:
            raise ValueError(f"GridSpec needs N, M, p >= 1, got {self}")

    @property
    def h(self) -> Fraction:
        return Fraction(1, self.p)

    @property
    def num_cells(self) -> int:
        return self.p**self.N

    @property
    def dim(self) -> int:
        """Total basis dimension K = M * p^N."""
        return self.M * self.p**self.N

    def to_json_dict(self):
        return {"N": self.N, "M": self.M, "p": self.p}

    @staticmethod
    def from_json_dict(d) -> "GridSpec":
        return GridSpec(int(d["N"]), int(d["M"]), int(d["p"]))


def flatten_cell(coords, p: int) -> int:
    """Lexicographic flat index of a cell, axis 0 most significant."""
    flat = 0
    for c in coords:
        if not 0 <= c < p:
            raise ValueError(f"cell coordinate {c} outside 0..{p - 1}")
        flat = flat * p + c
    return flat


def unflatten_cell(flat: int, p: int, N: int):
    """Inverse of flatten_cell."""
    if not 0 <= flat < p**N:
        raise ValueError(f"flat index {flat} outside 0..{p ** N - 1}")
    coords = [0] * N
    for a in range(N - 1, -1, -1):
        coords[a] = flat % p
        flat //= p
    return tuple(coords)


def all_cell_coords(p: int, N: int) -> np.ndarray:
    """(p^N, N) integer array of cell coordinates in flat order."""
    idx = np.arange(p**N)
    coords = np.empty((p**N, N), dtype=np.int64)
    for a in range(N - 1, -1, -1):
        coords[:, a] = idx % p
        idx //= p
    return coords


def cell_of_point(point, p: int):
    """Cell containing a point of T^N with exact rational coordinates."""
    coords = []
    for x in point:
        x = Fraction(x) % 1
        coords.append(int(x * p))  # floor: x in [c/p, (c+1)/p)
    return tuple(coords)


@dataclass(frozen=True)
class StepFunction:
    """Matrix-valued function on T^N constant on each cell of the 1/p grid.

    values has shape (p^N, M, M), cells in flat order.
    """

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        expected = (self.grid.num_cells, self.grid.M, self.grid.M)
        if vals.shape != expected:
            raise ValueError(f"values shape {vals.shape} != {expected}")
        vals = np.ascontiguousarray(vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(grid: GridSpec, matrix) -> "StepFunction":
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.shape == ():
            matrix = matrix * np.eye(grid.M)
        return StepFunction(grid, np.broadcast_to(matrix, (grid.num_cells, grid.M, grid.M)).copy())

    @staticmethod
    def zero(grid: GridSpec) -> "StepFunction":
        return StepFunction(grid, np.zeros((grid.num_cells, grid.M, grid.M)))

    @staticmethod
    def identity(grid: GridSpec) -> "StepFunction":
        return StepFunction.constant(grid, np.eye(grid.M))

    @staticmethod
    def from_cells(grid: GridSpec, cell_values) -> "StepFunction":
        """Build from a sequence of per-cell values (scalars allowed if M=1)."""
        vals = np.asarray(cell_values, dtype=np.complex128)
        if vals.ndim == 1:
            vals = vals[:, None, None]
        return StepFunction(grid, vals)

    # -- pointwise algebra -------------------------------------------------

    def _check_same_grid(self, other: "StepFunction"):
        if self.grid != other.grid:
            raise GridMismatchError(f"step functions on {self.grid} vs {other.grid}")

    def __add__(self, other: "StepFunction") -> "StepFunction":
        self._check_same_grid(other)
        return StepFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        self._check_same_grid(other)
        return StepFunction(self.grid, self.values - other.values)

    def __mul__(self, other):
        """Pointwise matrix product f*g (order preserved) or scalar scaling."""
        if isinstance(other, StepFunction):
            self._check_same_grid(other)
            return StepFunction(self.grid, self.values @ other.values)
        return StepFunction(self.grid, self.values * complex(other))

    def __rmul__(self, scalar):
        return StepFunction(self.grid, complex(scalar) * self.values)

    def adjoint(self) -> "StepFunction":
        """Cellwise conjugate transpose."""
        return StepFunction(self.grid, np.conj(np.swapaxes(self.values, 1, 2)))

    def supnorm(self) -> float:
        """Max over cells of the matrix operator (spectral) norm."""
        if self.grid.M == 1:
            return float(np.max(np.abs(self.values)))
        return float(np.max(np.linalg.norm(self.values, ord=2, axis=(1, 2))))

    # -- representation changes -------------------------------------------

    def refine(self, q: int) -> "StepFunction":
        """Re-express on the q-grid (p must divide q); same function on T^N."""
        p = self.grid.p
        if q % p != 0:
            raise GridMismatchError(f"p={p} does not divide q={q}")
        f = q // p
        if f == 1:
            return self
        fine = GridSpec(self.grid.N, self.grid.M, q)
        coords = all_cell_coords(q, self.grid.N) // f
        parent = np.zeros(fine.num_cells, dtype=np.int64)
        for a in range(self.grid.N):
            parent = parent * p + coords[:, a]
        return StepFunction(fine, self.values[parent])

    def translate(self, shift) -> "StepFunction":
        """S(x + h*j) for an integer cell shift j (tuple of length N)."""
        p = self.grid.p
        coords = (all_cell_coords(p, self.grid.N) + np.asarray(shift, dtype=np.int64)) % p
        perm = np.zeros(self.grid.num_cells, dtype=np.int64)
        for a in range(self.grid.N):
            perm = perm * p + coords[:, a]
        return StepFunction(self.grid, self.values[perm])

    def value_at(self, point) -> np.ndarray:
        """Sample the function at an exact rational point of T^N."""
        cell = cell_of_point(point, self.grid.p)
        return self.values[flatten_cell(cell, self.grid.p)]

    # -- serialization -----------------------------------------------------

    def to_json_dict(self):
        vals = [
            [[[float(z.real), float(z.imag)] for z in row] for row in cell]
            for cell in self.values
        ]
        return {"N": self.grid.N, "M": self.grid.M, "p": self.grid.p, "values": vals}

    @staticmethod
    def from_json_dict(d) -> "StepFunction":
        grid = GridSpec.from_json_dict(d)
        vals = np.array(
            [[[complex(re, im) for re, im in row] for row in cell] for cell in d["values"]],
            dtype=np.complex128,
        )
        return StepFunction(grid, vals)
