"""Conjugating N-dimensional matrix operators into 1D scalar operators.

The level-n cell permutation is the finite truncation of the unitary that
identifies L^2 on the interval with L^2 of vector functions on the N-torus.
Conjugating a representation matrix by it yields a spectrally identical
operator on the (N=1, M=1, p = M (n!)^N) grid, which the exact matrix
bijection converts back to shift-coefficient form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .digitmap import CellPermutation, build_permutation
from .errors import GridMismatchError, RefinementHintError
from .grid import GridSpec
from .matrep import RepMatrix, Spectrum, from_matrix, matrix_exp, spectrum, to_matrix
from .operators import FiniteOperator, GridVector
from .refinement import embed

SPECTRUM_RTOL = 1e-8


@dataclass(frozen=True)
class SpectralReport:
    """Paired sorted spectra and their max pointwise deviation."""

    source: Spectrum
    target: Spectrum
    max_deviation: float
    scale: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= SPECTRUM_RTOL * max(self.scale, 1.0)

    def to_json_dict(self):
        return {
            "max_deviation": self.max_deviation,
            "tolerance": SPECTRUM_RTOL * max(self.scale, 1.0),
            "passed": self.passed,
            "source_spectrum": [[z.real, z.imag] for z in self.source.eigenvalues],
            "target_spectrum": [[z.real, z.imag] for z in self.target.eigenvalues],
        }


@dataclass(frozen=True)
class ConjugationResult:
    ode: FiniteOperator
    level: int
    permutation: CellPermutation
    spectral_report: SpectralReport
    source_matrix: RepMatrix = field(repr=False)

    @property
    def K(self) -> int:
        return self.ode.grid.p

    def to_json_dict(self):
        return {
            "level": self.level,
            "K": self.K,
            "ode": self.ode.to_json_dict(),
            "spectral_report": self.spectral_report.to_json_dict(),
        }


def _level_for(p: int, level: int) -> int:
    pf = math.factorial(level)
    if pf % p != 0:
        n = level
        while math.factorial(n) % p != 0:
            n += 1
        raise RefinementHintError(
            f"grid p={p} does not divide {level}! = {pf}; use level >= {n}",
            required_p=math.factorial(n),
        )
    return pf


def pde_to_ode(A: FiniteOperator, level: int) -> ConjugationResult:
    """Turn an (N, M) operator into a 1D scalar operator with the same spectrum."""
    pf = _level_for(A.grid.p, level)
    N, M = A.grid.N, A.grid.M
    Ae = embed(A, pf)
    B = to_matrix(Ae)
    P = build_permutation(N, M, level)
    Pm = P.matrix()
    ode_grid = GridSpec(1, 1, A.grid.M * pf**N)
    Bode = RepMatrix(ode_grid, Pm.T @ B.entries @ Pm)
    ode = from_matrix(Bode)
    sp_src, sp_tgt = spectrum(B), spectrum(Bode)
    report = SpectralReport(sp_src, sp_tgt, sp_src.max_deviation(sp_tgt), B.norm())
    return ConjugationResult(ode, level, P, report, B)


def ode_to_pde(B_op: FiniteOperator, N: int, M: int, level: int) -> FiniteOperator:
    """Inverse direction: a 1D scalar operator back to the (N, M) frame."""
    pf = math.factorial(level)
    expected = GridSpec(1, 1, M * pf**N)
    if B_op.grid != expected:
        raise GridMismatchError(f"1D operator grid {B_op.grid} != expected {expected}")
    P = build_permutation(N, M, level)
    Pm = P.matrix()
    B = to_matrix(B_op)
    target = GridSpec(N, M, pf)
    return from_matrix(RepMatrix(target, Pm @ B.entries @ Pm.T))


def verify_spectrum(A: FiniteOperator, result: ConjugationResult) -> SpectralReport:
    """Recompute both spectra from scratch and compare as sorted multisets."""
    pf = math.factorial(result.level)
    B = to_matrix(embed(A, pf))
    sp_src = spectrum(B)
    sp_tgt = spectrum(to_matrix(result.ode))
    return SpectralReport(sp_src, sp_tgt, sp_src.max_deviation(sp_tgt), B.norm())


@dataclass(frozen=True)
class EvolutionReport:
    times: tuple
    discrepancies: tuple
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(d <= self.tolerance for d in self.discrepancies)

    def rows(self):
        return list(zip(self.times, self.discrepancies))


def evolve_compare(A: FiniteOperator, u0: GridVector, times, level: int,
                   rtol: float = 1e-8) -> EvolutionReport:
    """Compare evolution downstairs vs. conjugated evolution upstairs.

    Checks || P^-1 exp(t B_A) u0  -  exp(t B_ode) P^-1 u0 || <= rtol * ||u0||
    for each requested time.
    """
    pf = math.factorial(level)
    if u0.grid.p != pf or (u0.grid.N, u0.grid.M) != (A.grid.N, A.grid.M):
        raise GridMismatchError(f"u0 grid {u0.grid} incompatible with level {level}")
    result = pde_to_ode(A, level)
    Pm = result.permutation.matrix()
    B = result.source_matrix
    Bode = to_matrix(result.ode)
    u = u0.values
    discrepancies = []
    for t in times:
        lhs = Pm.T @ (matrix_exp(B, t).entries @ u)
        rhs = matrix_exp(Bode, t).entries @ (Pm.T @ u)
        discrepancies.append(float(np.linalg.norm(lhs - rhs)))
    return EvolutionReport(tuple(times), tuple(discrepancies), rtol * u0.norm())
