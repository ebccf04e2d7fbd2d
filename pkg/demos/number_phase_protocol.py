"""Number/phase teleportation of a coherent state: the three figure datasets.

Alice measures the photon-number difference m and the phase sum; Bob removes
the phase and shifts the number spectrum by m.

Run: python demos/number_phase_protocol.py
"""

# %%
import numpy as np

from svteleport import analytics
from svteleport import numphase as nph

alpha = 6.0
target = nph.TargetCoeffs.coherent(alpha)

# %% Outcome distribution: flat near m = 0, cut off beyond the mean |alpha|^2 = 36
pmf = nph.jz_pmf(target, 0.99)
print(f"lambda = 0.99: {len(pmf.support(1e-8))} outcomes with P > 1e-8, total {pmf.total():.12f}")
for m in (-200, -50, 0, 20, 36, 50):
    print(f"  P({m:4d}) = {pmf[m]:.3e}   closed form {analytics.p_m_coherent(alpha, 0.99, m):.3e}")
neg = sum(p for m, p in pmf.items() if m < 0)
high = sum(p for m, p in pmf.items() if m > 36)
print(f"  P(m < 0) = {neg:.3f}  vs  P(m > 36) = {high:.3f}")

# %% Displaced fidelity: constant for m < 0, high until m approaches the mean
for lam in (0.9, 0.99):
    row = [nph.fidelity_displaced(target, lam, m) for m in (-5, 0, 20, 36, 50)]
    print(f"lambda = {lam}: F(m) at m = -5, 0, 20, 36, 50 ->", np.round(row, 4))
print(f"m < 0 value at lambda = 0.9: {analytics.f_m_coherent(alpha, 0.9, -1):.5f}")

# %% Without the number shift
f = {m: nph.fidelity_undisplaced(target, 0.9, m) for m in range(-20, 21)}
best = max(f, key=f.get)
print(f"\nundisplaced, lambda = 0.9: F(0) = {f[0]:.5f} "
      f"(closed form {analytics.f0_undisplaced(alpha, 0.9):.5f}), best at m = {best} ({f[best]:.4f})")

# %% Number states survive every outcome intact
c = nph.TargetCoeffs.number(3)
fids = [nph.fidelity_displaced(c, 0.5, m) for m in nph.jz_pmf(c, 0.5).support(1e-6)]
print(f"|3> target: min displaced fidelity over likely outcomes = {min(fids):.15f}")
