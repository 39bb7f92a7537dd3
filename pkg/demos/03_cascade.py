# %% [markdown]
# # Two-stage cascade on a synthetic recording
# Stage 1: chest0 -> abdomen0 and chest1 -> abdomen1 cancellers at a fixed
# step size. Stage 2: predict one stage-1 output from the other with a
# scheduled step size and keep the prediction, the shared fetal component.

# %%
from pathlib import Path

from fetalsep import CascadeConfig, LrSchedule, Signal, accuracy, generate, run_cascade
from fetalsep.plot import plot_signals

rec, child, mother = generate()
res = run_cascade(rec, CascadeConfig())
e_a, e_b = res.stage1_outputs
for name, sig in [("abdomen0", rec.abdomen[0]), ("stage-1 a", e_a), ("stage-1 b", e_b), ("cascade", res.child)]:
    print(f"{name:10s} accuracy {accuracy(sig, child):.4f}")

# %% A short trace window (J=5) makes stage 2 a normalized LMS that decays between beats
short = run_cascade(rec, CascadeConfig(stage2_schedule=LrSchedule(window_size=5)))
print("J=5 cascade accuracy %.4f, weight %.3f" % (accuracy(short.child, child), short.weights[0]))

# %%
out = Path("demo_output")
out.mkdir(exist_ok=True)
window = slice(80_000, 82_500)
plot_signals([Signal(child.samples[window]), Signal(res.child.samples[window])], ["true child", "cascade"],
             out / "cascade.svg", title="cascade output, t = 160-165 s")
print("wrote", out / "cascade.svg")
