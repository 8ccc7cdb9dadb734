"""Checked-in reference data: chain polynomials, count sequences, figure posets.

Everything here is a transcription or a frozen derived value; nothing is
computed at import time beyond wrapping tuples in small dataclasses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .polyt import PolyT
from .poset import Poset, transitive_closure


@dataclass(frozen=True)
class Fixture:
    """Named reference value with a provenance tag."""

    name: str
    source: str  # appendix-A | appendix-B | figure | derived
    poly: Optional[PolyT] = None
    table: Optional[Tuple[int, ...]] = None
    poset: Optional[Poset] = None


# class-count polynomials of the full unitriangular groups, coefficients
# ascending in t, n = 1..16
CHAIN_POLY_COEFFS: Dict[int, Tuple[int, ...]] = {
    1: (1,),
    2: (1, 1),
    3: (1, 3, 1),
    4: (1, 6, 7, 2),
    5: (1, 10, 25, 20, 5),
    6: (1, 15, 65, 105, 70, 18, 1),
    7: (1, 21, 140, 385, 490, 301, 84, 8),
    8: (1, 28, 266, 1120, 2345, 2604, 1568, 496, 74, 4),
    9: (1, 36, 462, 2772, 8715, 15372, 15862, 9720, 3489, 701, 72, 3),
    10: (1, 45, 750, 6090, 26985, 69825, 110530, 110280, 70320, 28640, 7362, 1170, 110, 5),
    11: (
        1, 55, 1155, 12210, 72765, 261261, 592207, 877030, 868725, 583550,
        267542, 83909, 18007, 2618, 242, 11,
    ),
    12: (
        1, 66, 1705, 22770, 176055, 841302, 2600983, 5387646, 7680310, 7684820,
        5473050, 2803182, 1042181, 284109, 57256, 8484, 890, 60, 2,
    ),
    13: (
        1, 78, 2431, 40040, 390390, 2403258, 9766471, 27116232, 52873678,
        74012653, 75670881, 57294120, 32515314, 14000495, 4635125, 1195116,
        241436, 37778, 4381, 338, 13,
    ),
    14: (
        1, 91, 3367, 67067, 805805, 6225219, 32296264, 116332645, 298956658,
        560602042, 781499719, 822549728, 662497381, 413509705, 202666910,
        79124292, 24968979, 6441876, 1362732, 233758, 31542, 3159, 210, 7,
    ),
    15: (
        1, 105, 4550, 107835, 1566565, 14864850, 96136040, 437680815,
        1440259535, 3502779995, 6416611201, 8998108665, 9796436195,
        8387410675, 5718426690, 3145744973, 1416179446, 529371274, 166405370,
        44325415, 9997955, 1887955, 291345, 35270, 3130, 180, 5,
    ),
    16: (
        1, 120, 6020, 167440, 2894710, 33137104, 261929668, 1475199440,
        6072906125, 18674026800, 43703418616, 79124540872, 112420822696,
        126975887444, 115398765556, 85415064915, 52146190588, 26615252562,
        11515549082, 4278222573, 1378103758, 386616800, 94259304, 19784488,
        3513854, 514128, 59504, 5104, 288, 8,
    ),
}

# exact class counts at q = 2 and q = 3, n = 1..16
COUNTS_Q2: Tuple[int, ...] = (
    1, 2, 5, 16, 61, 275, 1430, 8506, 57205, 432113, 3641288, 34064872,
    352200229, 4010179157, 50124636035, 685996839568,
)
COUNTS_Q3: Tuple[int, ...] = (
    1, 3, 11, 57, 361, 2891, 27555, 315761, 4246737, 66999699, 1226296635,
    26011112361, 635526804025, 17881012846299, 577907517043923,
    21474199259637473,
)

# zigzag numbers (alternating permutations of n+1 letters) and the signed
# analogue, the comparison columns next to the counts above
EULER_A: Tuple[int, ...] = (
    1, 2, 5, 16, 61, 272, 1385, 7936, 50521, 353792, 2702765, 22368256,
    199360981, 1903757312, 19391512145, 209865342976,
)
SPRINGER_B: Tuple[int, ...] = (
    1, 3, 11, 57, 361, 2763, 24611, 250737, 2873041, 36581523, 512343611,
    7828053417, 129570724921, 2309644635483, 44110959165011,
    898621108880097,
)

# published exceptional-system counts per chain length (for reporting only;
# tie-breaking in the expansion order makes these machine-specific)
EXCEPTIONAL_SYSTEMS: Dict[int, int] = {12: 1, 13: 8, 14: 64, 15: 485, 16: 3550}

# the 13-element diamond: polynomial part plus a parity term
P_DIAMOND_BASE_COEFFS: Tuple[int, ...] = (
    1, 36, 582, 5628, 36601, 170712, 594892, 1593937, 3355488, 5646608,
    7705410, 8631900, 8023776, 6248381, 4111322, 2302222, 1102490, 451836,
    157555, 46042, 10971, 2040, 276, 24, 1,
)


def chain_poly(n: int) -> PolyT:
    """Reference class-count polynomial for the n-chain, 1 <= n <= 16."""
    return PolyT(CHAIN_POLY_COEFFS[n])


def chain_degree_bound(n: int) -> int:
    """Degree of the n-chain polynomial: floor(n(n+6)/12)."""
    return n * (n + 6) // 12


def p_diamond_count(q: int) -> int:
    """Class count of the diamond fixture at a prime q, parity term included."""
    t = q - 1
    base = PolyT(P_DIAMOND_BASE_COEFFS).eval_at_t(t)
    delta = 2 if q % 2 == 1 else 1
    return base + delta * t**12 * (t + 2) ** 6


def figure_poset() -> Poset:
    """Five-element running example: a 4-chain with one extra upper cover."""
    return transitive_closure([(1, 2), (2, 3), (3, 4), (2, 5)], 5)


def all_fixtures() -> Tuple[Fixture, ...]:
    out = [
        Fixture(f"chain-poly-{n}", "appendix-A", poly=chain_poly(n))
        for n in sorted(CHAIN_POLY_COEFFS)
    ]
    out.append(Fixture("counts-q2", "appendix-B", table=COUNTS_Q2))
    out.append(Fixture("counts-q3", "appendix-B", table=COUNTS_Q3))
    out.append(Fixture("zigzag", "appendix-B", table=EULER_A))
    out.append(Fixture("signed-zigzag", "appendix-B", table=SPRINGER_B))
    out.append(Fixture("diamond-base-poly", "figure", poly=PolyT(P_DIAMOND_BASE_COEFFS)))
    out.append(Fixture("figure-poset", "figure", poset=figure_poset()))
    return tuple(out)
