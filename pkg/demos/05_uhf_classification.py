"""Supernatural numbers: which refinement limits give isomorphic algebras.

The limit algebra of a refinement ladder is determined by one invariant,
a supernatural number (formal product of primes with exponents up to
infinity). Two limits are isomorphic exactly when the invariants match.

Run with:  python3 demos/05_uhf_classification.py
"""

from finop import SupernaturalNumber, classify, factorial_sn, is_car

# Supernatural arithmetic: infinity absorbs, divisibility is exponentwise.
a = SupernaturalNumber.parse("2^inf")
b = SupernaturalNumber.parse("2^3 * 3^1")
print("a =", a, "  b =", b)
print("a * b =", a * b)
print("b | a:", b.divides(a), "  a | b:", a.divides(b))
print("n! for n=1..6:", [str(factorial_sn(n)) for n in range(1, 7)])

# An (N, M) algebra built over a base ladder has invariant M * base^N.
# The dimension N and matrix size M wash out whenever they only contribute
# primes the base already has infinitely often.
print()
print(" N  M  base          invariant            CAR?")
for N, M, base in [
    (1, 1, "2^inf"),
    (3, 1, "2^inf"),
    (2, 4, "2^inf"),
    (1, 3, "2^inf"),
    (2, 2, "2^inf * 3^inf"),
    (1, 1, "universal"),
]:
    sn = classify(N, M, SupernaturalNumber.parse(base))
    print(f" {N}  {M}  {base:<12}  {str(sn):<19}  {is_car(N, M, SupernaturalNumber.parse(base))}")

# Consequence: the 1D scalar algebra over 2^inf and the 3D 4x4-matrix
# algebra over 2^inf are the same algebra (both CAR), while mixing in a
# single factor of 3 changes the isomorphism class.
same = classify(1, 1, a) == classify(3, 4, a)
print()
print("classify(1,1,2^inf) == classify(3,4,2^inf):", same)
print("classify(1,3,2^inf) == classify(1,1,2^inf):",
      classify(1, 3, a) == classify(1, 1, a))
