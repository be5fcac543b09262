# %% [markdown]
# # Scanning the witness over the free angle
#
# The witness is evaluated directly on the assemblage Bob receives after a
# partial Bell measurement.  Negative values certify a non-classical channel.

# %%
import math

import numpy as np

from telecert.states import channel_state_ideal
from telecert.teleport import assemblage
from telecert.witness import minimize_witness_numeric, optimal_theta_ideal, witness_value

thetas = np.radians([6, 15, 30, 45, 60, 75, 90])

# %% W(gamma, theta) for a few channels
print("gamma  " + "  ".join(f"{math.degrees(t):6.0f}" for t in thetas))
for g in (0.0, 0.25, 0.5, 0.75, 1.0):
    asm = assemblage(channel_state_ideal(g))
    print(f"{g:5.2f}  " + "  ".join(f"{witness_value(asm, t):+6.3f}" for t in thetas))

# %% The best angle obeys tan(theta) = gamma / (1 - gamma)
for g in (0.1, 0.5, 0.9):
    best = minimize_witness_numeric(assemblage(channel_state_ideal(g)))
    print(f"gamma = {g}: numeric {math.degrees(best.theta):.6f} deg,"
          f" analytic {math.degrees(optimal_theta_ideal(g)):.6f} deg, W_min = {best.value:+.6f}")
