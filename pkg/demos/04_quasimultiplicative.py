"""Quasi-multiplicative functions coincide with their central extensions.

A quasi-multiplicative function is fixed by contractive generator values:
Phi(st) = Phi(s) Phi(t) whenever lengths add.  The radial scalar family
exp(-t|s|) is the classical example.  Extending the restriction to S_1
centrally reproduces the whole function, so these classical positive
definite functions are exactly the maximum-entropy-like objects of the
extension machinery.
"""

import numpy as np

from freepd import (
    GeneratorAssignment,
    GroupContext,
    as_pdfunction,
    ball,
    extend_to_ball,
    haagerup,
    quasi_mult,
    random_contraction,
    verify_pd,
    zero_oracle,
)

ctx = GroupContext(2)

t = np.log(2.0)
phi = haagerup(ctx, k=1, t=t, n=3)
print("the radial function exp(-t|s|) with t = ln 2 on S_3:")
for w in [(), (1,), (1, 2), (1, 2, 1)]:
    print(f"  phi{w} = {phi.value(w)[0, 0].real}")
print("  verify:", verify_pd(phi).ok)

ext, _ = extend_to_ball(phi.restricted_to_ball(1), 4, zero_oracle)
err = max(abs(ext.value(w)[0, 0] - 2.0 ** -len(w)) for w in ball(ctx, 4))
print("\ncentral extension of its S_1 restriction reproduces it on S_4:")
print("  worst error:", f"{err:.2e}")

rng = np.random.default_rng(4)
blocks = tuple(random_contraction((2, 2), rng, norm=0.85) for _ in range(2))
g = GeneratorAssignment(ctx, 2, blocks)
phi2 = as_pdfunction(g, 4)
print("\nthe same holds for non-commuting 2x2 generator blocks:")
print("  verify on S_4:", verify_pd(phi2).ok)
ext2, _ = extend_to_ball(as_pdfunction(g, 1), 4, zero_oracle)
err = max(np.abs(ext2.value(w) - quasi_mult(g, w)).max() for w in ball(ctx, 4))
print("  central extension vs letterwise products, worst error:", f"{err:.2e}")
