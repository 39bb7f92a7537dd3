# %% [markdown]
# # One LMS noise canceller
# A chest lead carries mostly the maternal beat; an abdomen lead carries the
# maternal beat plus the fetal one. Filtering the chest lead to predict the
# abdomen lead and subtracting leaves the fetal part.

# %%
import numpy as np

from fetalsep import accuracy, generate, run_canceller

rec, child, mother = generate()
chest, abdomen = rec.chest[0], rec.abdomen[0]

# %% Fixed step size 600, one tap
res = run_canceller(chest, abdomen, L=1, lr_source=600.0)
print("diverged:", res.diverged, " weight:", res.weights)
print("abdomen vs true child:", round(accuracy(abdomen, child), 3))
print("canceller vs true child:", round(accuracy(res.child, child), 3))

# %% The same step size on unit-scale data blows up, and the run says so
scale = 1 / np.std(chest.samples)
blown = run_canceller(chest.samples * scale, abdomen.samples * scale, L=1, lr_source=600.0)
print("unit-scale run diverged at sample", blown.diverged_at)

# %% Compare with the offline least-squares weights
x, d = chest.samples, abdomen.samples
w_ls = np.dot(x, d) / np.dot(x, x)
print("least-squares weight:", w_ls)
