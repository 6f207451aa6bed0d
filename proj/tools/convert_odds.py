#!/usr/bin/env python3
"""Convert ODDS .mat benchmark files to the CSV layout the CLI expects.

Each .mat file carries a feature matrix X (n x d) and a label vector y
(1 = outlier). The output is a headerless CSV with the label as the last
column, named after the input stem, e.g. breastw.mat -> breastw.csv.

Usage: python3 tools/convert_odds.py data/raw/*.mat -o data/odds
"""

import argparse
import pathlib
import sys


def load_mat(path):
    try:
        from scipy.io import loadmat

        mat = loadmat(path)
        return mat["X"], mat["y"]
    except NotImplementedError:
        # MATLAB v7.3 files are HDF5 containers
        import h5py
        import numpy as np

        with h5py.File(path, "r") as f:
            return np.array(f["X"]).T, np.array(f["y"]).T


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("inputs", nargs="+", help=".mat files from ODDS")
    parser.add_argument("-o", "--outdir", default="data/odds")
    args = parser.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for input_path in args.inputs:
        x, y = load_mat(input_path)
        y = y.reshape(-1).astype(int)
        if x.shape[0] != y.shape[0]:
            sys.exit(f"{input_path}: X has {x.shape[0]} rows but y has {y.shape[0]}")
        out = outdir / (pathlib.Path(input_path).stem.lower() + ".csv")
        with open(out, "w") as f:
            for row, label in zip(x, y):
                f.write(",".join(repr(float(v)) for v in row) + f",{label}\n")
        print(f"{input_path} -> {out} ({x.shape[0]} rows, {x.shape[1]} features)")


if __name__ == "__main__":
    main()
