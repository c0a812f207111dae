#!/usr/bin/env python3
"""Export the Wisconsin Diagnostic Breast Cancer dataset to testdata/wdbc.csv.

Writes the classic headerless 32-column layout (case id, diagnosis M/B, then
the thirty features: ten means, ten standard errors, ten worst values). The
feature values come from scikit-learn's bundled copy, which matches the UCI
distribution; case ids are sequential placeholders since scikit-learn does
not ship the originals (nothing downstream reads the id column).

Usage: python3 scripts/fetch_wdbc.py [OUT]
"""

import csv
import sys
from pathlib import Path

from sklearn.datasets import load_breast_cancer


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("testdata/wdbc.csv")
    out.parent.mkdir(parents=True, exist_ok=True)

    bunch = load_breast_cancer()
    data = bunch.data  # (569, 30), UCI feature order
    # target: 0 = malignant, 1 = benign
    diagnosis = ["M" if t == 0 else "B" for t in bunch.target]

    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        for i, row in enumerate(data):
            writer.writerow([i + 1, diagnosis[i]] + [repr(float(v)) for v in row])

    print(f"wrote {len(data)} rows to {out}")


if __name__ == "__main__":
    main()
