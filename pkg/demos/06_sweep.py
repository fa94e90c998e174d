"""
A small sweep
=============

One CSV row per pair, in (p, a) order.  The command line equivalent is
``quatdom sweep --p-max 13``.
"""
import sys

from quatdom.cli import valid_pairs
from quatdom.reports import parse_csv, rows_to_csv, sweep_row

rows = [sweep_row(p, a) for p, a in valid_pairs(13)]
text = rows_to_csv(rows)
sys.stdout.write(text)

# The CSV parses back to the same rows.
assert rows_to_csv(parse_csv(text)) == text
print("pairs: %d, certified: %d" % (len(rows), sum(r.certified for r in rows)))
