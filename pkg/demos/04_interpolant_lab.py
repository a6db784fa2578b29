"""Measure the constants behind the observation operators.

Two empirical studies on random band-limited fields:

  1. The interpolant error bound. Volume averages at spacing h should
     err like c0 h |f|_H1 on the observed square, nodal values like
     c0 h^2 |f|_H2; the tables below show the worst-case ratio over an
     ensemble for each stride, so a flat column means the bound tracks.

  2. The thickness-ratio fit. How strongly a band limit K constrains
     the ratio max|f| / mean|f| on a subdomain depends on the subdomain
     size; the fitted slope of log(max ratio) vs K quantifies it.
"""

import torusda as td

grid = td.Grid(64)
mask = td.mask_at(td.SubdomainSpec(kind="static", side_fraction=0.875), grid)
seed = 20240601

# -- 1. interpolant-error ratios across strides ------------------------
for kind in ("volume", "nodal"):
    rows, c0 = td.verify_approx_inequality(
        kind, [1, 2, 3], mask, seed, band_k=6, ensemble=10
    )
    print(f"{kind} interpolant   (c0_empirical = {c0:.4f})")
    print(f"{'p':>3} {'h':>10} {'max ratio':>10}")
    for row in rows:
        print(f"{row.p:3d} {row.h:10.5f} {row.max_ratio:10.4f}")
    print()

# -- 2. thickness-ratio growth with the band limit ---------------------
fit, table = td.fit_spectral_constant(mask, k_list=range(2, 11), samples_per_k=8, seed=seed)
print("thickness ratio vs band limit")
print(f"{'K':>3} {'max ratio':>10}")
for k, ratio in table:
    print(f"{k:3d} {ratio:10.4f}")
print(
    f"\nfit: slope = {fit.slope:.4f}, r^2 = {fit.r_squared:.4f}, "
    f"{fit.samples} samples"
)
