# %% [markdown]
# # Finite statistics and noise-parameter recovery
#
# Coincidences are drawn with Poisson totals per setting.  Witness minima
# with bootstrap error bars are then fitted back to the noise model.

# %%
import numpy as np

from telecert.fit import FitInput, fit_noise_params
from telecert.montecarlo import ShotConfig, estimate_witness_min, simulate_counts
from telecert.optics import NoiseParams, noisy_channel_matrix
from telecert.teleport import assemblage
from telecert.witness import witness_min_noisy

truth = NoiseParams(V=0.925, delta=0.872)
gammas = np.linspace(0, 1, 11)

# %% Simulated witness minima
w, s = [], []
for i, g in enumerate(gammas):
    records = simulate_counts(assemblage(noisy_channel_matrix(g, truth)), ShotConfig(10_000, seed=i))
    _, wm, sd = estimate_witness_min(records, replicas=200, seed=100 + i)
    w.append(wm)
    s.append(sd)
    print(f"gamma = {g:.1f}  W_min = {wm:+.4f} +- {sd:.4f}  (model {float(witness_min_noisy(g, truth)):+.4f})")

# %% Fit
res = fit_noise_params(FitInput(gammas, w, s), replicas=200, seed=0)
print(f"V     = {res.V_hat:.4f} +- {res.sigma_V:.4f}   (true {truth.V})")
print(f"delta = {res.delta_hat:.4f} +- {res.sigma_delta:.4f}   (true {truth.delta})")
print(f"amplitude sqrt(V) = {res.v_amplitude_hat:.4f} +- {res.sigma_v_amplitude:.4f}")
