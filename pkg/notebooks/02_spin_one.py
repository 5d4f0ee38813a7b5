# %% [markdown]
# Spin-one frames, the trace rule, and recovering a density operator from weights.

# %%
import numpy as np

from opstat.spin import (
    coarsen_frame,
    fit_density,
    frame_weights,
    hermitian_eigvals,
    random_density,
    random_frame,
)

rng = np.random.default_rng(7)
rho = random_density(rng)
print(np.round(rho.matrix, 4))
print("eigenvalues", np.round(hermitian_eigvals(rho.matrix), 6))

# %%
# merging two projections of a frame never changes the total weight
frame = random_frame(rng)
fine = frame_weights(rho, frame)
coarse = frame_weights(rho, coarsen_frame(frame, frame[1], frame[2]))
print("fine  ", np.round(fine, 6))
print("coarse", np.round(coarse, 6))
print("merged minus sum", coarse[1] - (fine[1] + fine[2]))

# %%
worst = 0.0
for _ in range(2000):
    r, f = random_density(rng), random_frame(rng)
    a = frame_weights(r, f)
    b = frame_weights(r, coarsen_frame(f, f[1], f[2]))
    worst = max(worst, abs(b[1] - a[1] - a[2]))
print("worst over 2000 draws", worst)

# %%
# six random frames pin down all 8 real parameters of rho
frames = [random_frame(rng) for _ in range(6)]
obs = [frame_weights(rho, f) for f in frames]
fit = fit_density(frames, obs)
print("max entry error", np.max(np.abs(fit.matrix - rho.matrix)))
print("residual", fit.residual, "min eigenvalue", round(fit.min_eigenvalue, 6))
