"""Incompressible stars approaching the Buchdahl limit."""

from pathlib import Path

from grtool import stellar as st

OUT = Path(__file__).with_name("out")
OUT.mkdir(exist_ok=True)

for ratio in (3.0, 2.5, 2.3, 2.26, 2.2501):
    M = 1.0
    eos, pc = st.incompressible_star(ratio * M, M)
    prof = st.integrate_tov(eos, pc)
    print(f"r0/M={ratio:7.4f}  p_c/rho0={pc / eos.rho0:12.4e}  TOV radius={prof.r0:.8f}  mass={prof.M:.8f}")

eos, pc = st.incompressible_star(1.0, 0.25)
(OUT / "tov_profile.csv").write_text(st.integrate_tov(eos, pc).to_csv())
