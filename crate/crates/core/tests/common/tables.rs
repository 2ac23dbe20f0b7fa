//! Published case-study tables used as fixtures.

/// Pipe types: (schedule, nps, material, inspected, repaired).
pub const PIPE_TYPES: [(&str, &str, &str, u64, u64); 35] = [
    ("XS", "2", "A", 7475, 249),
    ("STD", "3", "A", 4495, 173),
    ("STD", "6", "A", 3518, 43),
    ("STD", "4", "A", 3078, 66),
    ("STD", "2", "A", 4722, 400),
    ("XS", "6", "A", 3705, 70),
    ("STD", "8", "A", 2302, 51),
    ("XS", "4", "A", 1774, 28),
    ("160", "2", "A", 2302, 26),
    ("80", "2", "A", 1055, 41),
    ("STD", "10", "A", 1131, 30),
    ("STD", "12", "A", 1069, 34),
    ("XS", "3", "A", 1484, 16),
    ("XS", "8", "A", 1318, 10),
    ("40S", "2", "C", 555, 21),
    ("40", "2", "A", 271, 38),
    ("80", "4", "A", 638, 5),
    ("160", "3", "A", 510, 5),
    ("40", "4", "A", 592, 17),
    ("40", "6", "A", 333, 5),
    ("XS", "10", "A", 529, 14),
    ("XS", "12", "A", 666, 31),
    ("10S", "2", "C", 175, 12),
    ("40", "3", "A", 217, 6),
    ("40", "8", "A", 452, 17),
    ("40S", "3", "C", 364, 6),
    ("40S", "4", "C", 271, 2),
    ("80", "3", "A", 512, 6),
    ("80", "6", "A", 572, 3),
    ("STD", "16", "A", 422, 13),
    ("10S", "3", "C", 149, 9),
    ("40S", "6", "C", 171, 4),
    ("10S", "6", "C", 154, 4),
    ("10S", "8", "C", 204, 13),
    ("80", "16", "A", 634, 9),
];

/// Analytic posterior shapes and 95% limits for [`PIPE_TYPES`]: (a, b, lower, upper).
pub const PIPE_TYPE_LIMITS: [(f64, f64, f64, f64); 35] = [
    (249.5, 7226.5, 0.0294, 0.0376),
    (173.5, 4322.5, 0.0332, 0.0444),
    (43.5, 3475.5, 0.0090, 0.0163),
    (66.5, 3012.5, 0.0168, 0.0270),
    (400.5, 4322.5, 0.0770, 0.0929),
    (70.5, 3635.5, 0.0149, 0.0237),
    (51.5, 2251.5, 0.0167, 0.0288),
    (28.5, 1746.5, 0.0107, 0.0224),
    (26.5, 2276.5, 0.0076, 0.0162),
    (41.5, 1014.5, 0.0284, 0.0518),
    (30.5, 1101.5, 0.0183, 0.0371),
    (34.5, 1035.5, 0.0225, 0.0436),
    (16.5, 1468.5, 0.0064, 0.0170),
    (10.5, 1308.5, 0.0039, 0.0134),
    (21.5, 534.5, 0.0243, 0.0562),
    (38.5, 233.5, 0.1028, 0.1853),
    (5.5, 633.5, 0.0030, 0.0171),
    (5.5, 505.5, 0.0038, 0.0214),
    (17.5, 575.5, 0.0175, 0.0446),
    (5.5, 328.5, 0.0058, 0.0326),
    (14.5, 515.5, 0.0152, 0.0428),
    (31.5, 635.5, 0.0325, 0.0646),
    (12.5, 163.5, 0.0380, 0.1132),
    (6.5, 211.5, 0.0116, 0.0561),
    (17.5, 435.5, 0.0229, 0.0582),
    (6.5, 358.5, 0.0069, 0.0337),
    (2.5, 269.5, 0.0015, 0.0235),
    (6.5, 506.5, 0.0049, 0.0240),
    (3.5, 569.5, 0.0015, 0.0139),
    (13.5, 409.5, 0.0174, 0.0506),
    (9.5, 140.5, 0.0303, 0.1073),
    (4.5, 167.5, 0.0079, 0.0547),
    (4.5, 150.5, 0.0088, 0.0606),
    (13.5, 191.5, 0.0362, 0.1035),
    (9.5, 625.5, 0.0070, 0.0257),
];

/// Operators on one weld type: (inspected, repaired, min, q1, median, q3, max).
pub const OPERATORS: [(u64, u64, f64, f64, f64, f64, f64); 17] = [
    (175, 25, 0.069, 0.128, 0.147, 0.166, 0.243),
    (111, 11, 0.029, 0.085, 0.103, 0.123, 0.225),
    (139, 13, 0.036, 0.080, 0.096, 0.113, 0.193),
    (307, 27, 0.046, 0.078, 0.089, 0.099, 0.157),
    (100, 8, 0.026, 0.065, 0.081, 0.100, 0.223),
    (207, 16, 0.028, 0.068, 0.080, 0.093, 0.159),
    (104, 7, 0.009, 0.055, 0.070, 0.087, 0.196),
    (119, 8, 0.015, 0.054, 0.069, 0.086, 0.182),
    (175, 11, 0.023, 0.053, 0.064, 0.076, 0.138),
    (175, 9, 0.017, 0.040, 0.052, 0.067, 0.133),
    (120, 6, 0.011, 0.038, 0.052, 0.064, 0.155),
    (316, 16, 0.020, 0.043, 0.051, 0.059, 0.097),
    (208, 9, 0.009, 0.035, 0.043, 0.054, 0.110),
    (123, 5, 0.006, 0.033, 0.043, 0.057, 0.119),
    (147, 5, 0.005, 0.025, 0.035, 0.047, 0.097),
    (264, 9, 0.013, 0.029, 0.035, 0.043, 0.080),
    (355, 11, 0.008, 0.027, 0.031, 0.038, 0.072),
];

/// Weld types with business volume: (nps, schedule, material, total, inspected, repaired).
pub const WELD_TYPES: [(&str, &str, &str, u64, u64, u64); 35] = [
    ("2", "XS", "A", 37059, 7475, 249),
    ("3", "STD", "A", 19464, 4495, 173),
    ("6", "STD", "A", 14866, 3518, 43),
    ("4", "STD", "A", 13020, 3078, 66),
    ("2", "STD", "A", 10304, 4722, 400),
    ("6", "XS", "A", 9916, 3705, 70),
    ("8", "STD", "A", 8722, 2302, 51),
    ("4", "XS", "A", 8601, 1774, 28),
    ("2", "160", "A", 6044, 2302, 26),
    ("2", "80", "A", 5854, 1055, 41),
    ("10", "STD", "A", 4822, 1131, 30),
    ("12", "STD", "A", 4728, 1069, 34),
    ("3", "XS", "A", 3733, 1484, 16),
    ("8", "XS", "A", 3193, 1318, 10),
    ("2", "40S", "C", 2431, 555, 21),
    ("2", "40", "A", 2088, 271, 38),
    ("4", "80", "A", 2056, 638, 5),
    ("3", "160", "A", 1676, 510, 5),
    ("4", "40", "A", 1550, 592, 17),
    ("6", "40", "A", 1673, 333, 5),
    ("10", "XS", "A", 1676, 529, 14),
    ("12", "XS", "A", 1652, 666, 31),
    ("2", "10S", "C", 1261, 175, 12),
    ("3", "40", "A", 1358, 217, 6),
    ("8", "40", "A", 1413, 452, 17),
    ("3", "40S", "C", 1441, 364, 6),
    ("4", "40S", "C", 1253, 271, 2),
    ("3", "80", "A", 1436, 512, 6),
    ("6", "80", "A", 1407, 572, 3),
    ("16", "STD", "A", 1406, 422, 13),
    ("3", "10S", "C", 1117, 149, 9),
    ("6", "40S", "C", 1128, 171, 4),
    ("6", "10S", "C", 912, 154, 4),
    ("8", "10S", "C", 912, 204, 13),
    ("16", "80", "A", 961, 634, 9),
];
