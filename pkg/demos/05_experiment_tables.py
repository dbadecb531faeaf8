"""Average kernel counts per field size for APM and GESC, as a table and a plot.

Small fields keep this quick; the shape of the output (attempt rows, an
AVG row per field size) follows the published experiment tables.
"""

import sys
from pathlib import Path

from zerominor import harness

cfg = harness.parse_config("""
field_degree = 10..14
nprime_multiplier = 1
strategy = apm,gesc
block_size = 2
attempts = 5
master_seed = 5
""")
records = harness.run_experiment(cfg)
for strategy in cfg.strategies:
    print(f"\n{strategy.upper()}: kernels used per attempt")
    print(harness.table_by_attempt(records, "kernels_used", strategy))
print("\nAPM: deviation when solved")
print(harness.table_by_attempt(records, "deviation_at_solve", "apm"))

out = Path(sys.argv[1] if len(sys.argv) > 1 else "experiment.csv")
out.write_text(harness.records_to_csv(records))
harness.plot_comparison(records, out.with_suffix(".svg"))
print(f"\nwrote {out} and {out.with_suffix('.svg')}")
