# %% [markdown]
# Recognition memory as a weight function, and why the TRU test does not
# fit in the same manual as the dichotomies.

# %%
import numpy as np

from opstat.ftt import (
    FTTParams,
    canonical_states,
    combined_memory_manual,
    dichotomy_values,
    interference_excess,
    predict_dichotomies,
    predict_tru,
    tru_sums,
)
from opstat.manual import PROBE_TYPES
from opstat.weights import common_zero_set, is_superposition, sum_violations

states = canonical_states()
print(f"{'cell':6}" + "".join(f"{k:>9}" for k in states))
for z in PROBE_TYPES:
    for y in PROBE_TYPES:
        cell = f"{y}_{z}"
        print(f"{cell:6}" + "".join(f"{w[cell]:9.0f}" for w in states.values()))

# %%
p = FTTParams(iota_t=0.6, sigma_t=0.5, nu_r=0.4, sigma_r=0.5)
pred = predict_dichotomies(p)
print(np.round(pred.table, 4))
print("TRU sums", tru_sums(p))
print("TRU", predict_tru(p))

# %%
# identify the TRU outcomes with the dichotomy outcomes and check the weights again
manual = combined_memory_manual()
for v in sum_violations(manual, dichotomy_values(pred)):
    print(v.op_index, v.outcomes, round(v.sum, 6))
print("excess", interference_excess(p))

# %%
# the excess is the gist term (1 - iota) sigma, so it vanishes with perfect verbatim memory
for it in (0.0, 0.5, 0.9, 1.0):
    q = FTTParams(it, 0.8, it, 0.8)
    print(it, np.round(interference_excess(q), 4), len(sum_violations(manual, dichotomy_values(predict_dichotomies(q)))))

# %%
gens = [states["omega_0"], states["omega_g"]]
nine = states["omega_p"].manual
print(sorted(common_zero_set(nine, gens)))
print(is_superposition(nine, states["omega_p"], gens))
