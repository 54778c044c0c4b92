#!/usr/bin/env python3
"""Performance-space view: which (age, cost) combinations are achievable.

Every swept configuration lands somewhere in the plane spanned by mean age
of information and mean control cost. Demanding a minimum episode success
rate shrinks the set of admissible points; raising the bar never adds one.
"""

import os

from wncs import LoopConfig, emit_svg, feasible_region, run_sweep

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

grid = [0.005, 0.0055, 0.006, 0.007, 0.008, 0.009, 0.010, 0.015, 0.030, 0.045]
records = run_sweep(LoopConfig(horizon=200.0, seed=1), grid, episodes_per_point=6)

levels = (0.0, 0.5, 0.9, 1.0)
series = []
for level in levels:
    points = feasible_region(records, level)
    print(f"reliability >= {level:4.2f}: {len(points):2d} admissible configurations")
    for p in sorted(points, key=lambda p: p.aoi):
        print(f"    t_ctr={p.source_t_ctr * 1e3:6.1f} ms  aoi={p.aoi * 1e3:7.2f} ms  cost={p.error:.5g}")
    if len(points) >= 2:
        ordered = sorted(points, key=lambda p: p.aoi)
        series.append(
            (f"reliability >= {level:g}", [p.aoi * 1e3 for p in ordered], [p.error for p in ordered])
        )

# Nesting check: each stricter region is a subset of every looser one.
sets = [
    {(p.source_t_ctr) for p in feasible_region(records, level)} for level in levels
]
nested = all(b <= a for a, b in zip(sets, sets[1:]))
print("\nregions nest as the reliability floor rises:", nested)

svg_path = os.path.join(OUT, "feasible_regions.svg")
with open(svg_path, "w", encoding="utf-8") as fh:
    fh.write(
        emit_svg(series, "mean age of information (ms)", "mean control cost",
                 "Achievable performance under reliability floors")
    )
print(f"wrote {svg_path}")
