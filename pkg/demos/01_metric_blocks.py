"""Walk through the Bures line element at a single three-level state.

The eight coordinates are Euler-like angles (alpha, tau, a, beta, b, theta)
plus two spectral angles (zeta1, zeta2) that parameterize the eigenvalues.
The script prints the metric, points out its exact block structure, and
cross-checks the assembled entries against closed-form expressions.
"""

import numpy as np

from bures.bures_metric import (
    closed_form_entries,
    closed_form_volume,
    metric,
    volume_element,
)
from bures.state_space import COORD_NAMES, ParameterPoint, spectrum_from_spherical

np.set_printoptions(precision=4, suppress=True, linewidth=120)

point = ParameterPoint(alpha=0.7, tau=1.2, a=0.3, beta=0.5, b=0.4,
                       theta=0.6, zeta1=0.5, zeta2=0.3)
lam = spectrum_from_spherical(point.zeta1, point.zeta2)
print("eigenvalues:", (lam.lambda1, lam.lambda2, lam.lambda3))
print("sum:", lam.lambda1 + lam.lambda2 + lam.lambda3)

m = metric(point)
print("\nmetric in coordinate order", COORD_NAMES)
print(m.g)

# The metric splits into a 6x6 angular block and a 2x2 spectral block, and
# five angular entries vanish identically -- not up to rounding, exactly.
print("\nstructural zeros (i, j, value):")
for i, j in [(1, 4), (1, 5), (2, 4), (2, 5), (4, 5)]:
    print(f"  ({i}, {j})  {m.g[i, j]:+.3e}")
print("angular/spectral coupling:", np.abs(m.g[:6, 6:]).max())

print("\ninverse round trip |g g^-1 - I|:",
      np.abs(m.g @ m.g_inv - np.eye(8)).max())
print("inverse structural zeros:",
      [f"{m.g_inv[i, j]:+.2e}" for i, j in [(0, 3), (2, 4), (2, 5)]])

entries = closed_form_entries(point)
print("\nclosed-form spot checks:")
print("  g_theta,theta   assembled", m.g[5, 5], "closed", entries.g_theta_theta)
print("  g^beta,beta     assembled", m.g_inv[3, 3], "closed", entries.ginv_beta_beta)
print("  g^alpha,alpha   assembled", m.g_inv[0, 0], "closed", entries.ginv_alpha_alpha)

vol = volume_element(point)
vol_closed = closed_form_volume(point)
print("\nvolume element sqrt(det g):", vol)
print("closed-form product formula:", vol_closed)
print("relative gap:", abs(vol - vol_closed) / vol)
