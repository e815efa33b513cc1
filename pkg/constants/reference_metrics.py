"""Reference crater detection results on the Moon, 5-10 km craters.

Precision, recall and F1 are percentages. Model names: "LR" is the detector
trained on the original images, "SRx2" and "SRx4" the detectors trained on
images super-resolved by 2 and 4.
"""

# Boundary margin sweep at tau = 0.5, s = 0.7: (m, precision, recall, f1)
boundary_sweep = [
    (0, 66.90, 57.57, 61.89),
    (1, 69.58, 57.10, 62.72),
    (5, 71.21, 56.51, 63.02),
    (10, 71.41, 56.23, 62.92),
    (15, 71.50, 55.95, 62.78),
]

# Score threshold sweep at m = 5, tau = 0.5: (s, precision, recall, f1)
score_sweep = [
    (0.0, 58.27, 64.68, 61.31),
    (0.6, 64.42, 60.55, 62.43),
    (0.7, 71.21, 56.51, 63.02),
    (0.8, 78.51, 50.91, 61.77),
    (0.9, 87.52, 41.63, 56.42),
]

# NMS threshold sweep at m = 5, s = 0.7: (tau, precision, recall, f1); tau = 1 disables NMS
nms_sweep = [
    (0.1, 71.26, 55.13, 62.17),
    (0.2, 71.27, 56.12, 62.79),
    (0.3, 71.29, 56.36, 62.95),
    (0.4, 71.29, 56.45, 63.01),
    (0.5, 71.21, 56.51, 63.02),
    (0.6, 71.07, 56.55, 62.98),
    (1.0, 19.67, 65.59, 30.26),
]

# Best (m, tau, s) per model
best_postproc = {
    "LR": (0, 0.4, 0.8),
    "SRx4": (5, 0.5, 0.7),
}

# (models, precision, recall, f1)
combinations = [
    (("LR",), 70.83, 51.16, 59.41),
    (("SRx2",), 70.58, 59.68, 64.67),
    (("SRx4",), 74.27, 57.87, 65.06),
    (("LR", "SRx2"), 63.56, 63.24, 63.40),
    (("LR", "SRx4"), 65.40, 62.70, 64.02),
    (("SRx2", "SRx4"), 65.73, 64.63, 65.17),
    (("LR", "SRx2", "SRx4"), 60.64, 66.85, 63.59),
]

# Recall over craters whose rims cross another rim: models -> (recall, matched)
overlap_recall = {
    ("LR",): (47.15, 2542),
    ("SRx2",): (56.13, 3026),
    ("SRx4",): (53.83, 2902),
    ("SRx2", "SRx4"): (58.99, 3180),
}
overlap_total = 5391

# Recall per rim-completeness bin: bin label -> {models: recall}
arc_img_recall = {
    ">=0.95": {("LR",): 87.27, ("SRx2",): 93.41, ("SRx4",): 92.67, ("SRx2", "SRx4"): 94.69},
    "0.75-0.95": {("LR",): 64.91, ("SRx2",): 73.61, ("SRx4",): 71.87, ("SRx2", "SRx4"): 77.76},
    "0.5-0.75": {("LR",): 37.79, ("SRx2",): 47.31, ("SRx4",): 45.30, ("SRx2", "SRx4"): 52.80},
}

# Mosaic resolutions, meters per pixel
source_resolution = 7.4
working_resolution = 50.0
