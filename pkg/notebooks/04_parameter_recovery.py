# %% [markdown]
# Simulated recognition data and maximum-likelihood recovery of the four
# memory parameters. Also what happens when response bias is left out of the fit.

# %%
import numpy as np

from opstat.estimation import fit_mle, goodness_of_fit, moment_estimate, simulate_counts
from opstat.ftt import BiasParams, FTTParams

truth = FTTParams(0.6, 0.5, 0.4, 0.5)
counts = simulate_counts(truth, None, 100_000, seed=1)
print(counts.yes)

# %%
est = moment_estimate(counts.frequencies())
fit = fit_mle(counts)
print("truth ", truth.as_tuple())
print("moment", np.round(est.params.as_tuple(), 4))
print("mle   ", np.round(fit.theta(), 4), fit.iterations, "iterations")

# %%
errors = {}
for n in (100, 1_000, 10_000, 100_000):
    errs = []
    for seed in range(40):
        t = np.random.default_rng(seed).uniform(0.1, 0.9, 4)
        f = fit_mle(simulate_counts(FTTParams(*t), None, n, seed=seed))
        errs.extend(np.abs(f.theta() - t))
    errors[n] = np.median(errs)
for n, e in errors.items():
    print(f"n={n:>7}  median abs error {e:.4f}")

# %%
# data with a guessing bias: "T" on 30% of unrelated distractors
biased = simulate_counts(truth, BiasParams(0.3, 0.1, 0.6), 100_000, seed=2)
four = fit_mle(biased)
print(four.diagnostic)
report = goodness_of_fit(four, biased)
print(np.round(report.residual, 3))

# %%
seven = fit_mle(biased, model=7)
report = goodness_of_fit(seven, biased)
print(np.round(seven.theta(), 3))
print("G2", round(report.g2, 3), "dof", report.dof)
