#!/usr/bin/env python3
"""Independent cross-validation score for the evaluation-module test.

Reads tests/data/cv_blobs_150.csv plus the frozen fold assignment in
tests/data/cv_blobs_150_folds.txt, runs a depth-10 decision tree on exactly
those folds with scikit-learn, and writes the mean macro-F1 to
tests/data/cv_blobs_150_expected.txt. The library's CV score must land
within +-0.05 of this value on identical folds.
"""

from pathlib import Path

import numpy as np
from sklearn.metrics import f1_score
from sklearn.tree import DecisionTreeClassifier

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def main():
    rows = np.genfromtxt(DATA / "cv_blobs_150.csv", delimiter=",", skip_header=1)
    X, y = rows[:, :-1], rows[:, -1].astype(int)
    folds = np.loadtxt(DATA / "cv_blobs_150_folds.txt", dtype=int)

    scores = []
    for fold in sorted(set(folds)):
        train, test = folds != fold, folds == fold
        model = DecisionTreeClassifier(max_depth=10, random_state=0).fit(X[train], y[train])
        scores.append(f1_score(y[test], model.predict(X[test]), average="macro"))

    mean = float(np.mean(scores))
    out = DATA / "cv_blobs_150_expected.txt"
    out.write_text(f"{mean:.6f}\n")
    print(f"per-fold macro-F1: {[round(s, 4) for s in scores]}")
    print(f"wrote {out}: {mean:.6f}")


if __name__ == "__main__":
    main()
