# Build reliability-diagram data with resampled consistency bands and
# render it to SVG and CSV next to this script.

from pathlib import Path

from fverify import ForecastLaw, diagram_data, export_csv, generate, pav_calibrate, render_svg

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# Sigmoid-shaped miscalibration: slope above one.
series = generate(800, alpha=0.0, beta=1.6,
                  law=ForecastLaw.beta_shape(2, 2), seed=21)
binned = pav_calibrate(series)

data = diagram_data(series, binned, level=0.95, reps=1000, seed=3)
print(f"{data.point_forecasts.size} calibration points, "
      f"{data.band_grid.size} band evaluation points")

svg_path = out_dir / "reliability.svg"
csv_path = out_dir / "reliability.csv"
svg_path.write_text(render_svg(data), encoding="utf-8")
csv_path.write_text(export_csv(data), encoding="utf-8")
print(f"wrote {svg_path}")
print(f"wrote {csv_path}")

# Points escaping the band hint at miscalibration; with beta = 1.6 the
# fitted curve should leave the band at both ends of the forecast range.
outside = 0
for p, v in zip(data.point_forecasts, data.point_frequencies):
    i = int(min(range(data.band_grid.size),
                key=lambda j: abs(data.band_grid[j] - p)))
    outside += not (data.band_lower[i] <= v <= data.band_upper[i])
print(f"{outside} of {data.point_forecasts.size} points fall outside the band")
