"""Step functions, finite derivatives, and their exact matrix form.

Run with:  python3 demos/01_matrix_representation.py
"""

from fractions import Fraction

import numpy as np

from finop import (
    FiniteOperator,
    GridSpec,
    StepFunction,
    from_matrix,
    spectrum,
    to_matrix,
)

np.set_printoptions(precision=3, suppress=True)

# A 1D grid with two cells of width 1/2.
grid = GridSpec(N=1, M=1, p=2)
print("grid:", grid, "-> K =", grid.dim)

# The indicator of [0, 1/2) as a step function, and the finite derivative
# with step h = 1/2.
chi = StepFunction.from_cells(grid, [1, 0])
D = FiniteOperator.derivative(grid, axis=1, h=Fraction(1, 2))
print("derivative terms (shift -> per-cell value):")
for shift, coeff in sorted(D.terms.items()):
    print("  ", shift, "->", coeff.values.ravel().real)

# Every operator on this grid IS a 2x2 matrix, exactly.
B = to_matrix(D)
print("matrix of D:\n", B.entries.real)
print("spectrum of D:", spectrum(B).eigenvalues)

# The identification goes both ways: any matrix is an operator.
R = to_matrix(FiniteOperator.multiplication(chi))
print("matrix of multiplication by chi_[0,1/2):\n", R.entries.real)
back = from_matrix(B)
print("recovered operator equals D:", back.to_json_dict() == D.to_json_dict())

# The map respects the algebra: compose operators, multiply matrices.
DD = D.compose(D)
print("||matrix(D o D) - matrix(D)^2|| =",
      np.linalg.norm(to_matrix(DD).entries - B.entries @ B.entries))
