"""Published reference values for alpha = 2, used by ``verify`` and the CLI.

Counting sequences are exact integers; table entries are exact fractions.
"""

from fractions import Fraction as F

# irreducible tournaments, k = 1..10 (A054946)
IT = [1, 0, 2, 24, 544, 22320, 1677488, 236522496, 64026088576, 33832910196480]

# tournaments with exactly two irreducible parts, k = 1..10
IT2 = [0, 2, 0, 16, 240, 6608, 315840, 27001984, 4268194560, 1281626527232]

# semi-strong digraphs, k = 0..8 (A054948)
SSD = [1, 1, 2, 22, 1688, 573496, 738218192, 3528260038192, 63547436065854848]

# diagonal a_(k,k) of the connected-graph table at beta = 1, k = 0..7
CG_DIAGONAL = [F(1), F(-2), F(0), F(-64, 3), F(-1024), F(-2228224, 15), F(-65011712), F(-28143578513408, 315)]

# diagonal a_(k,k) of the irreducible-tournament table at beta = 1, k = 0..7
IT_DIAGONAL = [
    F(1), F(-4), F(8), F(-128, 3), F(-4096, 3), F(-3473408, 15), F(-4984930304, 45), F(-50988241125376, 315),
]

# strongly connected digraphs at beta = 2, rows m = 0..6, columns l = 0..6.
# Entry (6, 3) is +45056/3: the sign follows from the closed form
# 2^12 * ssd_3/3! * b_0 = 2^12 * 22/6 and from w_6 below.
SCD_TABLE = [
    [F(1), 0, 0, 0, 0, 0, 0],
    [0, F(-4), 0, 0, 0, 0, 0],
    [0, F(4), F(8), 0, 0, 0, 0],
    [0, 0, F(-32), F(-128, 3), 0, 0, 0],
    [0, 0, F(64), F(128), F(-4096, 3), 0, 0],
    [0, 0, 0, F(-1024), F(-4096, 3), F(-3473408, 15), 0],
    [0, 0, 0, F(45056, 3), F(8192), F(-262144, 3), F(-4984930304, 45)],
]
SCD_TABLE_PRINTED_6_3 = F(-45056, 3)


def _times(*polys):
    out = [F(1)]
    for p in polys:
        nxt = [F(0)] * (len(out) + len(p) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(p):
                nxt[i + j] += a * b
        out = nxt
    return out


def _scaled(c, poly):
    return [F(c) * x for x in poly]


_N = [0, 1]
_N1 = [-1, 1]
_N2 = [-2, 1]

# Wright polynomials w_0..w_6 in the monomial basis (coefficient of n^d at index d)
WRIGHT = [
    [F(1)],
    [F(0), F(-4)],
    _scaled(4, _times(_N, [-1, 2])),
    _scaled(F(-32, 3), _times(_N, _N1, [-5, 4])),
    _scaled(F(-64, 3), _times(_N, _N1, [393, -326, 64])),
    _scaled(F(-1024, 15), _times(_N, _N1, _N2, [40659, -23724, 3392])),
    _scaled(F(-4096, 45), _times(_N, _N1, _N2, [-73009815, 57193318, -14603328, 1217024])),
]
