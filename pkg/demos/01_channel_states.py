# %% [markdown]
# # Channel family and the waveplate map
#
# The teleportation channel is a mixture of the singlet and |11>, weighted by
# gamma.  In the interferometer gamma is set by a half-wave plate angle.

# %%
import math

import numpy as np

from telecert import optics
from telecert.benchmarks import ppt_min_eigenvalue
from telecert.states import channel_state_ideal

np.set_printoptions(precision=3, suppress=True)

# %% The two ends of the family
print("gamma = 1 (singlet)\n", channel_state_ideal(1.0).matrix.real)
print("gamma = 0 (|11>)\n", channel_state_ideal(0.0).matrix.real)

# %% Waveplate angle to gamma, and back
for deg in (0, 10, 22.5, 30, 45):
    g = optics.gamma_from_alpha(math.radians(deg))
    back = math.degrees(optics.alpha_from_gamma(g))
    print(f"alpha = {deg:5.1f} deg  ->  gamma = {g:.4f}  ->  alpha = {back:.4f} deg")

# %% The interferometer model reproduces the closed-form channel
alpha = math.radians(22.5)
params = optics.NoiseParams(V=0.925, delta=0.872)
built = optics.constructive_pipeline(alpha, params).matrix
closed = optics.noisy_channel_matrix(optics.gamma_from_alpha(alpha), params)
print("max deviation:", np.max(np.abs(built - closed)))

# %% Every ideal channel with gamma > 0 is entangled
for g in (1e-3, 0.1, 0.5, 1.0):
    print(f"gamma = {g:<6} min PT eigenvalue = {ppt_min_eigenvalue(channel_state_ideal(g)):+.3e}")
