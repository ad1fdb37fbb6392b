#!/usr/bin/env python3
"""Reference predictions for the min-max + 3-NN pipeline test.

Reads tests/data/twostep_{train,test}.csv, scales with scikit-learn's
MinMaxScaler fitted on the training split, classifies with
KNeighborsClassifier(k=3), and writes the predicted labels to
tests/data/twostep_expected.txt (one label per line). The fixture is
tie-free, so any correct implementation must agree exactly.
"""

from pathlib import Path

import numpy as np
from sklearn.neighbors import KNeighborsClassifier
from sklearn.preprocessing import MinMaxScaler

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def load(path):
    rows = np.genfromtxt(path, delimiter=",", skip_header=1)
    return rows[:, :-1], rows[:, -1].astype(int)


def main():
    X_train, y_train = load(DATA / "twostep_train.csv")
    X_test, _ = load(DATA / "twostep_test.csv")

    scaler = MinMaxScaler().fit(X_train)
    model = KNeighborsClassifier(n_neighbors=3).fit(scaler.transform(X_train), y_train)
    predicted = model.predict(scaler.transform(X_test))

    out = DATA / "twostep_expected.txt"
    out.write_text("".join(f"{p}\n" for p in predicted))
    print(f"wrote {out}: {list(predicted)}")


if __name__ == "__main__":
    main()
