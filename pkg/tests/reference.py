"""Published reference values used as test oracles.

Refined coefficients are listed lowest power of tau first.
"""

TOTALS = (1, 2, 6, 24, 184, 1472, 27712, 443392, 20177920, 645693440)

REFINED_DWBC3 = {
    1: (1,),
    2: (1, 1),
    3: (2, 3, 1),
    4: (4, 10, 8, 2),
    5: (20, 60, 66, 32, 6),
    6: (80, 320, 504, 392, 152, 24),
    7: (976, 4384, 8144, 8072, 4552, 1400, 184),
    8: (7808, 42880, 100224, 129728, 100992, 47616, 12672, 1472),
}

REFINED_DWBC2 = {
    1: (1,),
    2: (1, 1),
    3: (1, 3, 2),
    4: (2, 8, 10, 4),
    5: (6, 32, 66, 60, 20),
    6: (24, 152, 392, 504, 320, 80),
    7: (184, 1400, 4552, 8072, 8144, 4384, 976),
    8: (1472, 12672, 47616, 100992, 129728, 100224, 42880, 7808),
}
