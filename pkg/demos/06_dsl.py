"""The operator expression language and the .fop file format.

Run with:  python3 demos/06_dsl.py
"""

import numpy as np

from finop import (
    lower_fop,
    parse_expression,
    parse_fop,
    print_expression,
    spectrum,
    to_matrix,
)

# Expressions combine derivatives D(axis, step), coefficient multiplications
# M(name), the identity I, adj(...), scalars, sums, and products.
expr = parse_expression("2 * D(1,1/2) * D(1,1/2) + adj(M(S))")
print("parsed AST:", expr)

# The printer emits a canonical parenthesized form whose reparse is
# structurally identical to the original AST.
text = print_expression(expr)
print("canonical form:", text)
print("parse(print(e)) == e:", parse_expression(text) == expr)

# A full .fop file carries the dimensions, box-list coefficients, and the
# operator expression. Lowering picks the minimal grid (lcm of every step
# and box-endpoint denominator) and rasterizes the coefficients on it.
SOURCE = """
# advection with a piecewise-constant speed
N = 1
M = 1
coeff S {
    box [0,1/2) = [[1]]
    box [1/2,1) = [[-1]]
}
operator { M(S) * D(1,1/2) }
"""

f = parse_fop(SOURCE)
op, grid = lower_fop(f)
print("lowered onto grid:", grid)
B = to_matrix(op)
print("matrix:\n", np.round(B.entries.real, 3))
print("eigenvalues:", np.round(spectrum(B).eigenvalues, 6))

# Parse errors come back with line and column information.
try:
    parse_expression("D(1,1/2) +")
except Exception as exc:
    print("diagnostic:", exc)
