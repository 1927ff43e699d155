"""
Where is the deep ReLU kernel usable?
=====================================

Scan a 20 x 20 grid of weight and bias scales for several network depths
and count the cells whose Gram matrix is either not positive definite or
numerically flat.
"""

from nngpkrig.studies import invalid_counts, scan_validity

# %%
# 50 equally spaced points on (0, 1], mapped to the circle before the
# kernel sees them.  Each row of the result is one (depth, sigma_a, sigma_b).
rows = scan_validity(depths=[2, 5, 10, 20], grid_res=20, sigma_min=0.1, sigma_max=2.0, n=50)
counts = invalid_counts(rows)
for depth, bad in counts.items():
    print(f"depth {depth:2d}: {bad:3d} of 400 cells invalid")

# %%
# Draw the depth-20 map: '.' usable, 'x' not positive definite, 'f' flat.
deep = [r for r in rows if r["depth"] == 20]
sigma_b = sorted({r["sigma_b"] for r in deep})
print("\nrows: sigma_a from 0.1 (top) to 2.0; columns: sigma_b from 0.1 to 2.0")
for a in sorted({r["sigma_a"] for r in deep}):
    line = ""
    for b in sigma_b:
        r = next(r for r in deep if r["sigma_a"] == a and r["sigma_b"] == b)
        line += "x" if not r["is_pd"] else ("f" if r["is_flat"] else ".")
    print(f"{a:4.2f} {line}")

# %%
# With a small weight scale the bias term dominates every layer, so all
# correlations are driven to one: the flat band sits at small sigma_a and
# widens as depth grows.
