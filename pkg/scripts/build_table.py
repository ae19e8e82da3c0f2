"""Regenerate the bundled knot tables from a KnotInfo CSV export.

Usage: python3 scripts/build_table.py path/to/knotinfo_data_complete.csv

The CSV ships in the ``database_knotinfo`` wheel.  Each PD is reflected
(tuples read clockwise) so that ``3_1`` is the left-handed trefoil with
writhe -3; Alexander polynomials are rewritten in the package's canonical
text form.
"""

import csv
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from knottheta.laurent import parse_poly  # noqa: E402
from knottheta.pd import parse_pd, reflect, serialize_pd  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "knottheta" / "data"


def main(path: str) -> None:
    csv.field_size_limit(1 << 30)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh, delimiter="|"))[1:]
    small, large = [], []
    for row in rows:
        try:
            c = int(row["crossing_number"])
        except ValueError:
            continue
        if c < 3 or c > 12:
            continue
        pd = reflect(parse_pd(json.dumps(json.loads(row["pd_notation"]))))
        alex = parse_poly(row["alexander_polynomial"].replace(" ", ""), nvars=1)
        alex = alex.normalize_symmetric()
        line = f"{row['name']}\t{serialize_pd(pd)}\t{alex}\n"
        (small if c <= 10 else large).append(line)
    (DATA / "knots_10.tsv").write_text("".join(small), encoding="utf-8")
    (DATA / "knots_11_12.tsv").write_text("".join(large), encoding="utf-8")
    print(f"wrote {len(small)} + {len(large)} knots")


if __name__ == "__main__":
    main(sys.argv[1])
