"""Watch psi^2 pull points of Delta^2 towards the faces, and check one smoothness witness."""

import numpy as np

from dhomotopy.smoothmaps import (SmoothingParams, cutoff_lambda, fd_smoothness_check, phi_chart, psi_p,
                                  psi_p_k, segment, star_partition)

params = SmoothingParams()
print(f"eps_0 = {params.eps0}, eps_1 = {params.eps(1):.4g}")

print("\nedge chart t -> psi^1_0:")
for t in (0.05, 0.1, 0.125, 0.15, 0.2, 0.25, 0.3):
    x = phi_chart(1, 0, (1.0,), t)
    print(f"  t = {t:5.3f}  x = {x.coords}  psi = {tuple(round(v, 6) for v in psi_p_k(1, 0, x).coords)}")

print("\npsi^2 on a few points of Delta^2:")
for c in [(0.9, 0.06, 0.04), (0.6, 0.399, 0.001), (0.6, 0.398, 0.002), (0.49, 0.49, 0.02), (1 / 3, 1 / 3, 1 / 3)]:
    print(f"  {c} -> {tuple(round(v, 6) for v in psi_p(2, c).coords)}")

rep = fd_smoothness_check(lambda t: cutoff_lambda(0.5, t), 0.25)
print(f"\nlambda (eps = 0.5) at t = 0.25: one-sided derivative mismatch by order {rep.mismatch}")

a, b = np.array([0.52, 0.46, 0.02]), np.array([0.46, 0.52, 0.02])
seg = segment(a, b)
rep = fd_smoothness_check(lambda t: np.array(psi_p_k(2, 1, seg(t)).coords), 0.5)
print(f"psi^2_1 along a segment through a tie: worst mismatch {rep.worst(3):.2e}")

P = star_partition(2)
vals = P.values((0.5, 0.3, 0.2))
print("\nstar partition at (0.5, 0.3, 0.2):", {k: round(v, 4) for k, v in vals.items() if v})
