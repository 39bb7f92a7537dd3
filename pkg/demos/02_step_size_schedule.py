# %% [markdown]
# # Step size from the autocorrelation trace
# The delay matrix stacks the J+1 latest L-sample windows. Its R = D^T D
# trace sets the step size: 1/(3 trace) early on, M/trace after the switch.

# %%
import numpy as np

from fetalsep import LrSchedule, build_delay_matrix, correlation_trace, learning_rate, learning_rate_series

D = build_delay_matrix([1.0, 2.0, 3.0], L=2, J=1)
print(D.rows)
tr = correlation_trace(D)
print("trace:", tr, "= explicit", np.trace(D.rows.T @ D.rows))

sched = LrSchedule(window_size=1, misadjustment=1e-5, switch_threshold=15_000)
print("early rate:", learning_rate(tr, 0, sched))
print("late rate:", learning_rate(tr, 20_000, sched))

# %% Whole-signal rates: note the drop at the switch
x = np.random.default_rng(0).standard_normal(30_000)
lr = learning_rate_series(x, LrSchedule(window_size=100, misadjustment=1e-3, switch_threshold=15_000))
print("mean rate before switch %.2e, after %.2e" % (lr[:15_000].mean(), lr[15_000:].mean()))
