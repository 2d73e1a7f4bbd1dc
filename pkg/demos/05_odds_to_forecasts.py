# From bookmaker odds to per-category skill: convert a small odds table to
# implied probabilities, expand one-vs-all, and decompose each category.

from fverify import (
    cr_decompose,
    decompose_multiclass,
    mean_rps,
    one_vs_all,
    parse_odds_csv,
    pav_calibrate,
)

ODDS_CSV = """\
match_id,odds_home,odds_draw,odds_away,outcome
m01,1.85,3.60,4.40,H
m02,2.40,3.30,3.00,A
m03,1.55,4.20,6.00,H
m04,3.10,3.25,2.35,D
m05,2.05,3.40,3.80,H
m06,4.80,3.90,1.75,A
m07,1.95,3.50,4.10,D
m08,2.70,3.20,2.70,A
m09,1.60,4.00,5.60,H
m10,3.50,3.30,2.15,A
m11,2.20,3.30,3.40,H
m12,5.50,4.20,1.62,A
"""

series = parse_odds_csv(ODDS_CSV)
print(f"{series.n} matches; first row implied probabilities:",
      [round(float(v), 4) for v in series.probabilities[0]])
print(f"mean ranked probability score: {mean_rps(series):.4f}")

# Per-category mean Brier scores and the component-summed All record.
out = decompose_multiclass(series, "yates")
for label in ("H", "D", "A", "All"):
    dec = out[label]
    print(f"  {label:3s}: mean score {dec.mean_score:.4f}, "
          f"contributions {({k: round(v, 4) for k, v in dec.contributions().items()})}")

# Skill of the home-win forecasts against the climatological baseline.
home = one_vs_all(series, "H")
cr = cr_decompose(home, pav_calibrate(home))
if cr.skill is not None:
    print(f"home-win skill: {100 * cr.skill:.1f}% of uncertainty explained")
