"""Wavelet bases for a time-varying threshold.

A threshold path gamma(u) on [0, 1) is written as a short wavelet series:
one father coefficient c00 plus mother coefficients d_jk for levels
j = 0..J-1. This script shows what the shipped bases look like and how
well a coarse series captures an abrupt and a smooth threshold.
"""

import numpy as np

from tvsetar import eval_father, eval_mother, eval_threshold_series, make_basis, project_function

# Haar: closed forms. phi is the unit box, psi is +1 then -1.
haar = make_basis("haar")
t = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
print("Haar phi at", t, "->", eval_father(haar, t))
print("Haar psi at", t, "->", eval_mother(haar, t))

# Daubechies D(2): no closed form. Values at integers come from an
# eigenvector of the refinement matrix, dyadic points from the cascade.
d2 = make_basis("D", 2)
print("\nD(2) phi(1), phi(2) =", eval_father(d2, np.array([1.0, 2.0])))
print("exact (1+sqrt3)/2, (1-sqrt3)/2 =", (1 + np.sqrt(3)) / 2, (1 - np.sqrt(3)) / 2)
x = np.linspace(0, 1, 10_000, endpoint=False)
unity = sum(d2.father(x - k) for k in range(-4, 5))
print("partition of unity, worst error:", np.max(np.abs(unity - 1)))

# An abrupt threshold: 1.5 on [0.25, 0.75), 1 elsewhere.
T = 2048
u = np.arange(T) / T
step = np.where((u >= 0.25) & (u < 0.75), 1.5, 1.0)
c = project_function(haar, 2, step)
print("\nHaar J=2 coefficients of the step:", np.round(c.as_vector(), 6))
print("reconstruction error:", np.max(np.abs(eval_threshold_series(haar, c, u) - step)))

# A smooth bowl needs a smooth basis. Compare the fit quality by level.
bowl = -0.5 + 0.5 * (2 * u - 1) ** 2
la4 = make_basis("LA", 4)
print("\nLA(4) projection of the bowl threshold")
for J in (2, 3, 4, 5):
    approx = eval_threshold_series(la4, project_function(la4, J, bowl), u)
    rmse = np.sqrt(np.mean((approx - bowl) ** 2))
    print(f"  J={J}: {2**J} coefficients, rmse {rmse:.4f}")
