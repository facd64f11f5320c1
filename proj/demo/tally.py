"""Counts pass/fail/NA for retailer_rules.txt by brute force over the CSV.

Each rule is written out by hand; nothing here parses the rule file.
"""
import csv
import json
import sys
from pathlib import Path

here = Path(__file__).parent
with (here / "retailers.csv").open() as f:
    records = list(csv.DictReader(f))


def num(rec, col):
    v = rec[col]
    return None if v in ("", "NA") else float(v)


def ge0(x):
    return None if x is None else x - 0 >= -1e-8


def implies(p, q):
    # !(p) | q in three-valued logic
    not_p = None if p is None else not p
    if not_p is True or q is True:
        return True
    if not_p is None or q is None:
        return None
    return False


def balance(rec):
    a, b, c = num(rec, "turnover"), num(rec, "other.rev"), num(rec, "total.rev")
    if None in (a, b, c):
        return None
    return abs(a + b - c) < 1e-8


def staff_rule(rec):
    s, sc = num(rec, "staff"), num(rec, "staff.costs")
    p = None if s is None else s > 0
    q = None if sc is None else sc > 0
    return implies(p, q)


rules = {
    "st": [ge0(num(r, "staff")) for r in records],
    "to": [ge0(num(r, "turnover")) for r in records],
    "or": [ge0(num(r, "other.rev")) for r in records],
    "st.cs": [staff_rule(r) for r in records],
    "bl": [balance(r) for r in records],
}
profits = [num(r, "profit") for r in records if num(r, "profit") is not None]
rules["mn"] = [sum(profits) / len(profits) >= 1]

counts = {
    name: {"items": len(v),
           "passes": sum(x is True for x in v),
           "fails": sum(x is False for x in v),
           "nNA": sum(x is None for x in v)}
    for name, v in rules.items()
}
text = json.dumps(counts, indent=2) + "\n"
if "--check" in sys.argv:
    sys.exit(0 if (here / "expected_counts.json").read_text() == text else 1)
(here / "expected_counts.json").write_text(text)
print(text, end="")
