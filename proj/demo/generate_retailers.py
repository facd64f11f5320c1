"""Writes retailers.csv: 60 synthetic supermarket records.

Missing values and inconsistencies are placed by hand so the six rules in
retailer_rules.txt give known counts. tally.py recounts them independently.
"""
import csv
import random
from pathlib import Path

N = 60
rng = random.Random(20180605)

rows = []
for i in range(N):
    staff = rng.randint(1, 120)
    turnover = rng.randint(500, 20000)
    other = rng.randint(0, 400)
    staff_costs = rng.randint(50, 2000)
    total_costs = int(turnover * rng.uniform(0.75, 0.98))
    rows.append({
        "id": f"RET{i + 1:02d}",
        "size": rng.choice(["sc0", "sc1", "sc2", "sc3"]),
        "incl.prob": round(rng.uniform(0.02, 0.9), 2),
        "staff": staff,
        "turnover": turnover,
        "other.rev": other,
        "total.rev": turnover + other,
        "staff.costs": staff_costs,
        "total.costs": total_costs,
        "vat": rng.randint(0, 2000),
    })

# The first three records as printed in the original data.
rows[0].update({"staff": 75, "turnover": None, "other.rev": None,
                "total.rev": 1130, "staff.costs": None, "total.costs": 18915})
rows[1].update({"staff": 9, "turnover": 1607, "other.rev": None,
                "total.rev": 1607, "staff.costs": 131, "total.costs": 1544})
rows[2].update({"staff": None, "turnover": 6886, "other.rev": -33,
                "total.rev": 6919, "staff.costs": 324, "total.costs": 6493})

# other.rev is known for 24 records (1-based): row 3 plus these 23.
known_other = {3, 4, 6, 8, 9, 11, 13, 15, 17, 18, 20, 22, 24, 26, 29, 31, 33,
               36, 38, 41, 44, 47, 50, 53}
for r in range(1, N + 1):
    if r not in known_other:
        rows[r - 1]["other.rev"] = None

# Balance failures beside record 3.
for r, delta in ((9, 15), (24, 1), (41, -250)):
    rows[r - 1]["total.rev"] += delta
# Unknown turnover: record 1, one record with known other.rev, two more.
for r in (1, 13, 27, 58):
    rows[r - 1]["turnover"] = None
# Unknown staff: record 3 and five records without staff costs.
for r in (3, 10, 19, 34, 45, 56):
    rows[r - 1]["staff"] = None
for r in (10, 19, 34, 45, 56):
    rows[r - 1]["staff.costs"] = None
# Staff present but staff costs unknown: record 1 and four more.
for r in (12, 23, 39, 51):
    rows[r - 1]["staff.costs"] = None
# Small shops without staff.
for r in (7, 30):
    rows[r - 1]["staff"] = 0
    rows[r - 1]["staff.costs"] = None
# Some unknown totals elsewhere.
for r in (16, 35, 59):
    rows[r - 1]["total.rev"] = None
for r in (21, 42):
    rows[r - 1]["total.costs"] = None

for row in rows:
    tr, tc = row["total.rev"], row["total.costs"]
    row["profit"] = None if tr is None or tc is None else tr - tc

columns = ["id", "size", "incl.prob", "staff", "turnover", "other.rev",
           "total.rev", "staff.costs", "total.costs", "profit", "vat"]
out = Path(__file__).with_name("retailers.csv")
with out.open("w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["NA" if row[c] is None else row[c] for c in columns])
print(f"wrote {out}")
