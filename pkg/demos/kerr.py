"""Kerr horizons, ergosphere and Penrose ratio versus spin."""

import numpy as np

from grtool import asymptotics as asy

for a in np.linspace(0.0, 0.99, 6):
    s = asy.kerr_structure(asy.KerrParams(1.0, a))
    print(f"a={a:.3f}  r-={s.r_minus:.4f}  r+={s.r_plus:.4f}  area={s.horizon_area:8.4f}  "
          f"ergo(pi/2)={s.ergosphere(np.pi / 2):.3f}  m/sqrt(A)={s.penrose_ratio:.7f}")
print("naked:", asy.kerr_structure(asy.KerrParams(1.0, 1.2)).regime)
print("ADM mass of isotropic Schwarzschild:", asy.adm_mass(asy.isotropic_schwarzschild(1.0), [10, 20, 40, 80]).extrapolated)
