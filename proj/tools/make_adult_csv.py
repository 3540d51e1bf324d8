#!/usr/bin/env python3
"""Build data/adult.csv from the UCI Adult files (adult.data + adult.test).

Rows with missing values ('?') are dropped, fields are trimmed, and the
trailing '.' on test-file labels is removed. Training rows come first,
followed by test rows, which is the order the biased-split protocol uses.

Usage:
  make_adult_csv.py --data adult.data --test adult.test --out data/adult.csv
  make_adult_csv.py --wheel responsibly-0.1.2-py3-none-any.whl --out data/adult.csv
"""
import argparse
import io
import zipfile

COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num",
    "marital_status", "occupation", "relationship", "race", "sex",
    "capital_gain", "capital_loss", "hours_per_week", "native_country",
    "income",
]


def rows(text):
    for line in io.StringIO(text):
        line = line.strip()
        if not line or line.startswith("|"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != len(COLUMNS) or "?" in fields:
            continue
        fields[-1] = fields[-1].rstrip(".")
        yield fields


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data")
    ap.add_argument("--test")
    ap.add_argument("--wheel")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    if args.wheel:
        with zipfile.ZipFile(args.wheel) as z:
            data = z.read("responsibly/dataset/adult/adult.data").decode()
            test = z.read("responsibly/dataset/adult/adult.test").decode()
    else:
        with open(args.data) as f:
            data = f.read()
        with open(args.test) as f:
            test = f.read()

    n = 0
    with open(args.out, "w") as out:
        out.write(",".join(COLUMNS) + "\n")
        for part in (data, test):
            for r in rows(part):
                out.write(",".join(r) + "\n")
                n += 1
    print(f"wrote {n} rows to {args.out}")


if __name__ == "__main__":
    main()
