"""
Three kernel arms on Friedman and borehole data
===============================================

A reduced version of the accuracy/weights comparison: three iterations,
150 training and 150 test points.  Use ``nngpkrig benchmark`` for full runs.
"""

from nngpkrig.bench import BenchmarkCase
from nngpkrig.studies import BenchmarkConfig, run_benchmark, summary_table

# %%
# Friedman responses get unit Gaussian noise on the training set; borehole
# is noise-free.  Both have a linear trend removed before kriging.
for name, noise in (("friedman", 1.0), ("borehole", 0.0)):
    cfg = BenchmarkConfig(BenchmarkCase(name, 150, 150, noise, seed=1), iterations=3)
    report = run_benchmark(cfg)
    print(f"\n{name}")
    rows = summary_table(report, name)
    cols = [c for c in rows[0] if c not in ("statistic", "data")]
    print(f"{'':10s}" + "".join(f"{c:>22s}" for c in cols))
    for r in rows:
        print(f"{r['statistic']:10s}" + "".join(f"{r[c]:>22s}" for c in cols))

# %%
# The NNGP arm is its own reference, so its *diff rows are exactly zero; the
# fixed Matérn arm holds one parameter set, so its *kw rows are zero too.
