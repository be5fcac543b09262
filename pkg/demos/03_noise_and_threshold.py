# %% [markdown]
# # Source noise, dephasing and the entanglement threshold
#
# With an imperfect source (singlet weight V) and dephasing calcites
# (parameter delta) small-gamma channels become separable.  The witness must
# then stay non-negative, and it does.

# %%
import numpy as np

from telecert.benchmarks import gamma_entanglement_threshold
from telecert.optics import NoiseParams
from telecert.witness import theta_min_noisy, witness_min_noisy

params = NoiseParams(V=0.925, delta=0.872)
g_ent = gamma_entanglement_threshold(params)
print(f"channel entangled for gamma > {g_ent:.6f}")

# %% Optimised witness across gamma
for g in np.linspace(0, 1, 11):
    w = float(witness_min_noisy(g, params))
    flag = "non-classical" if w < 0 else ""
    print(f"gamma = {g:.1f}  theta_min = {np.degrees(theta_min_noisy(g, params)):6.2f} deg  W_min = {w:+.4f}  {flag}")

# %% Full dephasing (delta = 1/2) hides the sine term and no channel is certified
print("delta = 1/2, gamma = 1:", float(witness_min_noisy(1.0, NoiseParams(0.925, 0.5))))
