# %% [markdown]
# # (L, M, J) sweep in the layout of the published table
# Stage 1 is fixed; the stage-2 delay length, misadjustment and trace window
# vary. Diverged runs are reported as inf.

# %%
from fetalsep import format_sweep_table, generate, run_sweep

rec, child, _ = generate()
rows = run_sweep(rec, child, [1, 2, 5, 10], [1e-5, 1e-7], [1, 2, 5, 10], workers=4)
print(format_sweep_table(rows))

# %% Larger trace windows are what make stage 2 work on this data
rows = run_sweep(rec, child, [1, 5], [1e-5], [50, 500, 2000], workers=4)
print(format_sweep_table(rows))
