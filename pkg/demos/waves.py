"""Ring of test particles, interferometer response and binary quadrupole."""

from pathlib import Path

import numpy as np

from grtool import waves as wv

OUT = Path(__file__).with_name("out")
OUT.mkdir(exist_ok=True)

spec = wv.TTWaveSpec(1.0, 0.2, 0.0)
(OUT / "ring.csv").write_text(wv.ring_snapshots_csv(spec, 32, 16))
(OUT / "interferometer.csv").write_text(wv.interferometer_csv(spec, np.linspace(0, 4 * np.pi, 200)))

for N in (32, 64, 128):
    f = wv.fd_wave_solve(np.sin, lambda x: 0.0 * x, 0.0, 2 * np.pi, N, 1.0)
    print(f"N={N:4d}  leapfrog error {np.abs(f.u - np.sin(f.x) * np.cos(1.0)).max():.3e}")

src = wv.binary_source(1.0, 1.0, 1.0)
ts = np.linspace(0, 8 * np.pi, 128, endpoint=False)
qdd = [wv.quadrupole_second_derivative(src, t, 2e-3 * np.pi)[0, 0] for t in ts]
print("binary Q''_11 peak angular frequency:", wv.spectral_peak(ts, qdd))
