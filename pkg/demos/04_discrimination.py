# How well do forecasts separate the events from the non-events?
# Class-conditional means, rank tests, and the concordance index.

from fverify import (
    ForecastLaw,
    discrimination_summary,
    five_number_summary,
    generate,
)

series = generate(1200, alpha=0.0, beta=1.0,
                  law=ForecastLaw.beta_shape(2, 2), seed=13)
d = discrimination_summary(series)

print(f"class sizes: n0 = {d.n0}, n1 = {d.n1}")
print(f"mean forecast | outcome 0: {100 * d.m0:6.2f}%")
print(f"mean forecast | outcome 1: {100 * d.m1:6.2f}%")
print(f"difference (regression coefficient b): {100 * d.diff:.2f} points")
print(f"rank-sum Z = {d.wilcoxon.statistic:.2f}, one-sided p = {d.wilcoxon.p_value:.2e}")
print(f"KS distance D = {d.ks.statistic:.3f}, p = {d.ks.p_value:.2e}")
print(f"concordance index C = {d.c_statistic:.3f}")

# Box-plot style five-number summaries per outcome class.
p0 = series.forecasts[series.outcomes == 0]
p1 = series.forecasts[series.outcomes == 1]
for label, values in (("x = 0", p0), ("x = 1", p1)):
    mn, q1, med, q3, mx = five_number_summary(values)
    print(f"  {label}: min {mn:.3f}  q1 {q1:.3f}  median {med:.3f}  "
          f"q3 {q3:.3f}  max {mx:.3f}")
