"""Reference benchmark values the `reproduce` command compares against.

These are the published results of the original experiment on the same
public soybean/weed collection (100 segments per class, linear kernel,
averaged over 10 iterations); `reproduce` renders them next to the locally
measured numbers.
"""

CLASS_ORDER = ("broadleaf", "grass", "soil", "soybean")

# Per-class confusion percentages (rows = true class) at 70% training, ovo.
CONFUSION_70_OVO = {
    ("color",): [
        [67.00, 17.67, 0.00, 15.33],
        [14.33, 70.33, 1.00, 14.33],
        [0.00, 0.00, 100.00, 0.00],
        [7.67, 16.33, 0.00, 76.00],
    ],
    ("color", "glcm"): [
        [72.33, 22.00, 0.33, 5.33],
        [15.33, 74.33, 0.67, 9.67],
        [0.00, 1.00, 99.00, 0.00],
        [4.00, 10.33, 0.00, 85.67],
    ],
    ("color", "lbp"): [
        [95.33, 1.00, 0.00, 3.67],
        [2.33, 95.00, 0.00, 2.67],
        [0.00, 0.00, 100.00, 0.00],
        [3.00, 2.67, 0.00, 94.33],
    ],
}

# Total accuracy (%) with color+lbp features per training fraction.
ACCURACY_COLOR_LBP = {
    "ova": {0.3: 89.43, 0.5: 91.05, 0.7: 93.92},
    "ovo": {0.3: 92.89, 0.5: 94.35, 0.7: 96.17},
}

# Training times (seconds) with color+lbp features per training fraction.
# Hardware-dependent; only the ovo < ova ordering is expected to transfer.
TRAIN_TIME_COLOR_LBP = {
    "ova": {0.3: 1.2966, 0.5: 1.5382, 0.7: 1.8442},
    "ovo": {0.3: 0.6242, 0.5: 0.8580, 0.7: 1.2206},
}
