"""Closed, flat and open dust universes."""

from pathlib import Path

import numpy as np

from grtool import cosmology as cos

OUT = Path(__file__).with_name("out")
OUT.mkdir(exist_ok=True)

for K in (1.0, 0.0, -1.0):
    m = cos.FLRWModel(K, 0.0, 3.0 / (4.0 * np.pi))
    tr = cos.solve_conformal_scale(m, 0.1, None, (0.0, 3 * np.pi))
    print(f"K={K:+.0f}  fate={cos.classify_fate(K, 0.0, m.c_m).value:16s} event={tr.event}  "
          f"max|eqb2|={np.abs(tr.eqb2_residual).max():.1e}")
    (OUT / f"flrw_K{int(K):+d}.csv").write_text(tr.to_csv())

alpha = 1.0
for t in (0.5, np.pi, 5.0):
    print(f"cycloid a({t:.3f}) = {cos.cycloid_scale_factor(alpha, t):.6f}")
