# %% [markdown]
# # Average fidelity against the witness
#
# Fidelity certifies a quantum channel only above the classical bound 2/3,
# reached at gamma = 1/2.  The witness certifies every gamma > 0.

# %%
import numpy as np

from telecert.benchmarks import CLASSICAL_FIDELITY, average_fidelity
from telecert.states import channel_state_ideal
from telecert.teleport import assemblage, partial_bsm
from telecert.witness import minimize_witness_numeric

bsm3 = partial_bsm(three_outcome=True)

# %%
print(" gamma   F_avg   beats 2/3   W_min    witness certifies")
for g in np.linspace(0, 1, 11):
    f = average_fidelity(assemblage(channel_state_ideal(g), measurement=bsm3))
    w = minimize_witness_numeric(assemblage(channel_state_ideal(g))).value
    print(f"{g:5.1f}  {f:6.4f}   {str(f > CLASSICAL_FIDELITY):9}  {w:+.4f}   {w < 0}")
