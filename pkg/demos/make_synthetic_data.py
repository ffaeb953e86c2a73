"""Generate the synthetic differenced exchange-rate series used by the demos.

The series is simulated from a two-regime model with a D(5) wavelet
threshold at resolution J=3. The regime coefficients and innovation
variance are of the size one meets with daily currency differences; the
eight threshold coefficients are made up. Nothing in the file is real
market data, which is why its value column is called ``synthetic_diff``.

Run from the repository root::

    python demos/make_synthetic_data.py
"""

import csv
from pathlib import Path

import numpy as np

from tvsetar import RegimeCoefficients, SetarModel, WaveletCoefficients, WaveletThreshold, make_basis, simulate

T = 2048
SEED = 20160104

coeffs = RegimeCoefficients(0.0636, -0.0710, 0.5609, 0.0158)
# c00, d00, d10, d11, d20, d21, d22, d23
theta = [0.45, 0.30, -0.20, 0.15, 0.10, -0.10, 0.05, -0.05]
threshold = WaveletThreshold(make_basis("D", 5), WaveletCoefficients.from_vector(theta, 3))
model = SetarModel(coeffs, threshold, 2.0412)

y = simulate(model, T, y0=0.0, seed=SEED, burn_in=200)
dates = np.busday_offset("2016-01-04", np.arange(T), roll="forward")

out = Path(__file__).parent / "data" / "synthetic_fx_diff.csv"
with open(out, "w", newline="") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["date", "synthetic_diff"])
    for d, v in zip(dates, y.values):
        w.writerow([str(d), repr(float(v))])

low = np.mean(y.values[:-1] <= threshold.path(T)[1:])
print(f"wrote {out} ({T} rows, {low:.0%} of steps in the low regime)")
