"""Reference data: factored psi listings and the numeric tables.

The listings are transcriptions (``psiK`` names the already generated
psi_K, ``y`` the curve coordinate, ``=`` separates equivalent forms).
Table-like data is stored as strings: ``"inf"`` for the projective or
valuation infinity, ``"p/q"`` rationals, and ``"sqrt(-3)"`` style surds.
Some of these transcribed values are known to disagree with the mathematics;
the test suite compares against them verbatim and reports the mismatches.
"""
from __future__ import annotations

from fractions import Fraction

# curve presets: (lambda0, lambda1, lambda2)
CURVES = {
    "cubic_quarter": (Fraction(1, 4), Fraction(0), Fraction(0)),   # y^2 = x^3 + 1/4
    "cubic_minus_x": (Fraction(0), Fraction(-1), Fraction(0)),     # y^2 = x^3 - x
    "nodal": (Fraction(0), Fraction(0), Fraction(1, 4)),           # y^2 = x^2 (x + 1/4)
}

CUBIC_QUARTER_LISTING = {
    1: "1",
    2: "- 2*y",
    3: "3*x*(1 + x)*(1 - x + x**2) = 3*x*(1+x**3)",
    4: "psi2*(-1 + 10*x**3 + 2*x**6)",
    5: "-1 - 25*x**3 - 15*x**6 + 95*x**9 + 5*x**12",
    6: (
        "psi2*psi3*(-2 + x**3)*(1 - 3*x + 3*x**2 + x**3) * (1 + 3*x + 6*x**2 + "
        "11*x**3 + 12*x**4 - 3*x**5 + x**6)"
    ),
    7: (
        "(1 - x**3 + 7*x**6) * (1 - 48*x**3 - 741*x**6 - 1924*x**9 - 363*x**12 + "
        "141*x**15 + x**18)"
    ),
    8: (
        "psi4*(-1 - 104*x**3 - 952*x**6 - 4124*x**9 - 3430*x**12 - 1544*x**15- "
        "7336*x**18+ 616*x**21+ 2*x**24)"
    ),
    9: (
        "3*psi3*(1 - 3*x**2 + x**3)*(1 + 3*x**2 + 2*x**3 + 9*x**4 + 3*x**5 + "
        "x**6) *(1 + 9*x**2 + 3*x**3 + 18*x**5 - 24*x**6 + 9*x**8 + x**9) * (1 - "
        "9*x**2 + 6*x**3 + 81*x**4 - 45*x**5 - 39*x**6 + 324*x**7 + 153*x**8 - "
        "142*x**9 + 486*x**10+ 396*x**11+ 582*x**12 + 324*x**13+ 198*x**14- "
        "48*x**15+ 81*x**16- 9*x**17+ x**18)"
    ),
    10: (
        "(1/2)*psi2*psi5*(1 - 177*x**3 - 474*x**6 - 7070*x**9 - 104805*x**12 - "
        "542232*x**15- 862941*x**18- 1404072*x**21- 368055*x**24 + 29380*x**27- "
        "55284*x**30+ 1173*x**33 + x**36)"
    ),
    11: (
        "-1 - 242*x**3 + 605*x**6 + 102729*x**9 + 2270301*x**12 + 17393277*x**15+ "
        "59389374*x**18+ 189881835*x**21 +1106263389*x**24+ 4869514969*x**27+ "
        "10595519759*x**30 + 8054721004*x**33 - 22319781*x**36- 4760052033*x**39 "
        "- 8579472693*x**42- 1596123771*x**45 + 66133914*x**48 - 62045313*x**51 - "
        "1153603*x**54 + 23221*x**57 + 11*x**60"
    ),
    12: (
        "psi3*psi4*(-2 + x**3)*(1 - 3*x + 3*x**2 + x**3) * (1 + 3*x + 6*x**2 + "
        "11*x**3 + 12*x**4 - 3*x**5 + x**6) * (-2 - 32*x**3 - 84*x**6 - 134*x**9 "
        "+ x**12) * (1 + 6*x + 12*x**2 + 4*x**3 + 45*x**4 + 36*x**5 + 60*x**6 + "
        "72*x**7 - 45*x**8 + 58*x**9 - 48*x**10+ 12*x**11+ x**12) * (1 - 6*x + "
        "24*x**2 - 64*x**3 + 75*x**4 + 456*x**5 - 620*x**6 + 252*x**7 + 2070*x**8 "
        "- 1618*x**9 - 3072*x**10+ 3216*x**11 + 4003*x**12- 9696*x**13+ "
        "1416*x**14+ 11396*x**15 + 1548*x**16- 5058*x**17+ 460*x**18+ 1632*x**19 "
        "+ 1653*x**20+ 692*x**21+ 192*x**22- 12*x**23+ x**24)"
    ),
    13: (
        "(1 + 16*x**3 + 96*x**6 + 13*x**9 + 13*x**12) * (1 - 354*x**3 - "
        "17247*x**6 + 92420*x**9 - 6264417*x**12 -91630974*x**15- "
        "414038735*x**18- 631690011*x**21 + 3596512338*x**24+ 43118516972*x**27+ "
        "215967505719*x**30 + 533661527514*x**33 + 582732421153*x**36+ "
        "284118813696*x**39 + 450924775284*x**42 + 1313707269872*x**45 + "
        "1846766455056*x**48 + 403474854555*x**51 - 263110973327*x**54 - "
        "22534762701*x**57 + 685417938*x**60 - 111537892*x**63 - 798438*x**66 + "
        "5748*x**69 + x**72)"
    ),
    14: (
        "psi2*psi7*(1 - 48*x**3 - 741*x**6 - 1924*x**9 - 363*x**12+ 141*x**15+ "
        "x**18) * (1 + 504*x**3 + 2421*x**6 + 5676*x**9 + 166356*x**12 + "
        "3098475*x**15+ 22597638*x**18+ 56826270*x**21 - 73281168*x**24- "
        "582904249*x**27- 862862121*x**30 + 133470252*x**33 + 317907519*x**36- "
        "632536713*x**39 - 77646699*x**42 - 41502855*x**45- 2997252*x**48 + "
        "8847*x**51 + x**54)"
    ),
    15: (
        "psi3*psi5*(-5 + 65*x**3 + 685*x**6 + 3410*x**9 + 11425*x**12 + "
        "5735*x**15+ 3145*x**18- 520*x**21+ x**24) * (1 - 6*x + 6*x**2 + 44*x**3 "
        "+ 21*x**4 - 21*x**5 + 676*x**6 + 9*x**7 - 9*x**8 + 569*x**9 + "
        "2841*x**10- 2841*x**11 - 1694*x**12+ 13119*x**13- 13119*x**14+ "
        "10019*x**15 - 4284*x**16+ 4284*x**17+ 4591*x**18- 1446*x**19+ 1446*x**20 "
        "- 496*x**21- 24*x**22+ 24*x**23+ x**24) * (1 + 6*x + 30*x**2 + 124*x**3 "
        "+ 279*x**4 - 495*x**5 + 3036*x**6 + 2871*x**7 - 2790*x**8 + 60959*x**9 - "
        "13686*x**10- 19695*x**11 + 469946*x**12- 200034*x**13+ 128295*x**14+ "
        "602229*x**15 - 2440926*x**16+ 3056445*x**17- 422129*x**18- 9809094*x**19 "
        "+ 18607485*x**20+ 20165779*x**21+ 8262864*x**22 + 74286585*x**23+ "
        "94839246*x**24+ 71549460*x**25 + 150594579*x**26 + 118349119*x**27- "
        "3156510*x**28 + 30275751*x**29 - 36357239*x**30- 138954870*x**31 - "
        "1389186*x**32 + 73952184*x**33 + 20894985*x**34 - 28859229*x**35 + "
        "22894661*x**36+ 16500675*x**37 - 2444511*x**38 - 2237686*x**39 + "
        "1693800*x**40 + 672156*x**41 + 324606*x**42 + 58950*x**43 + 11034*x**44 "
        "- 416*x**45 + 600*x**46 - 24*x**47 + x**48)"
    ),
}

CUBIC_MINUS_X_LISTING = {
    1: "1",
    2: "-2*y",
    3: "3*(-2 + x)*x**2*(2 + x)",
    4: "-4*y*x**2*(-6 - 15*x**2 + x**4)",
    5: "x**4*(-192 + 1632*x**2 - 496*x**4 - 220*x**6 + 5*x**8)",
    6: (
        "- 6*y*(-2 + x)*x**6*(2 + x) *(-336 + 912*x**2 - 1348*x**4 - 100*x**6 + "
        "x**8)"
    ),
    7: (
        "x**8*( 27648 + 483840*x**2 - 2951424*x**4 + 2595456*x**6 - 1101888*x**8 "
        "+ 447840*x**10 - 31376*x**12 - 1544*x**14 + 7*x**16)"
    ),
    8: (
        "-8*y*x**10*(-6 - 15*x**2 + x**4) * (-18432 + 603648*x**2 - 2432640*x**4 "
        "+ 2577312*x**6 - 702392*x**8 + 47744*x**10 - 23070*x**12 - 412*x**14 + "
        "x**16)"
    ),
    9: (
        "-3*(-2 + x)*x**14*(2 + x) * (16367616 - 154607616*x**2 + 1527054336*x**4 "
        "- 5301780480*x**6 + 4162000896*x**8 + 567207936*x**10 - 1938695936*x**12 "
        "+ 731321472*x**14 - 1489472*x**16 + 5367072*x**18 - 164000*x**20 - "
        "2316*x**22 + 3*x**24)"
    ),
}

NODAL_LISTING = {
    1: "1",
    2: "-2*y",
    3: "x**3*(1 + 3*x)",
    4: "-2*y*x**5*(1 + 2*x)",
    5: "x**10*(1 + 5*x + 5*x**2)",
    6: "-2*y*x**14*(1 + x)*(1 + 3*x)",
    7: "x**21*(1 + 7*x + 14*x**2 + 7*x**3)",
    8: "-2*y*x**27*(1 + 2*x)*(1 + 4*x + 2*x**2)",
    9: "x**36*(1 + 3*x)*(1 + 6*x + 9*x**2 + 3*x**3)",
    10: "-2*y*x**44*(1 + 3*x + x**2)*(1 + 5*x + 5*x**2)",
    11: "x**55*(1 + 11*x + 44*x**2 + 77*x**3 + 55*x**4 + 11*x**5)",
    12: "-2*y*x**65*(1 + x)*(1 + 2*x)*(1 + 3*x)*(1 + 4*x + x**2)",
    13: "x**78*(1 + 13*x + 65*x**2 + 156*x**3 + 182*x**4 + 91*x**5 + 13*x**6)",
    14: "-2*y*x**90*(1 + 5*x + 6*x**2 + x**3)*(1 + 7*x + 14*x**2 + 7*x**3)",
    15: (
        "x**105*(1 + 3*x)*(1 + 5*x + 5*x**2)*(1 + 7*x + 14*x**2 + 8*x**3 + x**4)"
    ),
    16: (
        "- 2*y*x**119*(1 + 2*x)*(1 + 4*x + 2*x**2)*(1 + 8*x + 20*x**2 + 16*x**3 + "
        "2*x**4)"
    ),
}
LISTINGS = {
    "cubic_quarter": CUBIC_QUARTER_LISTING,
    "cubic_minus_x": CUBIC_MINUS_X_LISTING,
    "nodal": NODAL_LISTING,
}

# psi_n at x = -1 on the nodal curve, n = 0..12
PSI_AT_MINUS_ONE = [
    "0", "1", "-sqrt(-3)", "2", "-sqrt(-3)", "1", "0",
    "-1", "sqrt(-3)", "-2", "sqrt(-3)", "-1", "0",
]

# U grids on the same point: rows j = 0..3, columns i = 0..3
U_GRID_3_2 = [
    ["inf", "0", "inf", "0"],
    ["1/3", "3", "1/3", "3"],
    ["1/3", "3", "1/3", "3"],
    ["inf", "0", "inf", "0"],
]
U_GRID_2_3 = [
    ["inf", "0", "0", "inf"],
    ["1/4", "-2", "-2", "1/4"],
    ["inf", "0", "0", "inf"],
    ["1/4", "-2", "-2", "1/4"],
]
GRID_CONSTANTS = {
    (3, 2): {"delta2": "-3/4", "cd": "1/4"},
    (2, 3): {"delta2": "-4/3", "cd": "1/3"},
}

# valuations g_n = val(psi_n), n = 0..12
G_CUBIC_QUARTER_AT_Y0 = ["inf", 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
G_CUBIC_MINUS_X_AT_X0 = ["inf", 0, 1, 4, 5, 8, 13, 16, 21, 28, 33, 40, 49]

# f grids; rows j = 0.., columns i = 1..
F_GRID_3_2 = {
    "curve": "cubic_quarter", "pqn0": (3, 2, 0), "d": -2, "val_cd": 0,
    "i_start": 1,
    "rows": [
        ["inf", -2, 2, -2, 2],
        [2, -2, 2, -2, 2],
        [2, -2, 2, -2, 2],
        [2, -2, 2, -2, 2],
    ],
}
F_GRID_5_2 = {
    "curve": "cubic_minus_x", "pqn0": (5, 2, 0), "d": 14, "val_cd": 0,
    "i_start": 1,
    "rows": [
        ["inf", 18, 14, 18],
        [18, 14, 18, 18],
        [14, 18, 18, 14],
    ],
}
