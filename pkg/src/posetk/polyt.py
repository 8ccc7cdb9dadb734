"""Integer polynomials in t = q - 1, plus exact interpolation from samples."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple


def _trim(coeffs: Sequence[int]) -> Tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class PolyT:
    """Polynomial with integer coefficients in the variable t = q - 1.

    Coefficients are ascending; the zero polynomial has no coefficients.
    """

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        for c in self.coeffs:
            if not isinstance(c, int):
                raise TypeError(f"coefficients must be ints, got {type(c).__name__}")

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "PolyT") -> "PolyT":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return PolyT(tuple(out))

    def __sub__(self, other: "PolyT") -> "PolyT":
        return self + PolyT(tuple(-c for c in other.coeffs))

    def __mul__(self, other: "PolyT") -> "PolyT":
        if self.is_zero() or other.is_zero():
            return PolyT()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyT(tuple(out))

    def scale_tk(self, c: int, k: int) -> "PolyT":
        """Multiply by c * t^k."""
        if k < 0:
            raise ValueError("power must be nonnegative")
        if c == 0 or self.is_zero():
            return PolyT()
        return PolyT((0,) * k + tuple(c * a for a in self.coeffs))

    def eval_at_t(self, t: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def eval_at_q(self, q: int) -> int:
        return self.eval_at_t(q - 1)

    def to_q_basis(self) -> Tuple[int, ...]:
        """Coefficients in powers of q (ascending), via t = q - 1."""
        # Horner in the q world: acc = acc * (q - 1) + c
        acc: List[int] = []
        for c in reversed(self.coeffs):
            nxt = [0] * (len(acc) + 1)
            for i, a in enumerate(acc):
                nxt[i + 1] += a
                nxt[i] -= a
            nxt[0] += c
            acc = nxt
        return _trim(acc) if acc else ()

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                term = f"{mag}t" if i == 1 else f"{mag}t^{i}"
                parts.append(term if c > 0 else "-" + term)
        joined = " + ".join(parts).replace("+ -", "- ")
        return joined

    def to_json(self) -> dict:
        return {"basis": "t", "coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(obj: dict) -> "PolyT":
        if obj.get("basis") != "t":
            raise ValueError(f"unsupported basis {obj.get('basis')!r}")
        return PolyT(tuple(int(c) for c in obj["coeffs"]))


ZERO = PolyT()
ONE = PolyT((1,))
T = PolyT((0, 1))


def from_q_basis(coeffs: Sequence[int]) -> PolyT:
    """Inverse of to_q_basis: substitute q = t + 1."""
    acc = PolyT()
    q = PolyT((1, 1))
    for c in reversed(list(coeffs)):
        acc = acc * q + PolyT((c,))
    return acc


class InterpolationError(ValueError):
    """Raised when samples do not fit an integer polynomial of the bound.

    `residuals` lists (q, sample, fitted_value) for the points that
    disagree, or is empty when the failure is non-integrality.
    """

    def __init__(self, message: str, residuals: List[Tuple[int, int, int]]):
        super().__init__(message)
        self.residuals = residuals


def interpolate(points: Iterable[Tuple[int, int]], degree_bound: int) -> PolyT:
    """Fit an integer polynomial in t = q - 1 through exact samples.

    The first degree_bound + 1 points determine the candidate; every
    remaining point is held out for validation and at least one held-out
    point is required.  Arithmetic is exact rational throughout.
    """
    pts = list(points)
    seen = set()
    for q, _ in pts:
        if q in seen:
            raise ValueError(f"duplicate sample point q={q}")
        seen.add(q)
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    if len(pts) < degree_bound + 2:
        raise ValueError(
            f"need at least {degree_bound + 2} samples for degree bound {degree_bound}, got {len(pts)}"
        )
    fit, holdout = pts[: degree_bound + 1], pts[degree_bound + 1:]

    # Newton divided differences over t = q - 1.
    ts = [Fraction(q - 1) for q, _ in fit]
    table = [Fraction(v) for _, v in fit]
    newton = []
    for level in range(len(fit)):
        newton.append(table[0])
        table = [
            (table[i + 1] - table[i]) / (ts[i + 1 + level] - ts[i])
            for i in range(len(table) - 1)
        ]
    coeffs = [Fraction(0)] * len(fit)
    for level in reversed(range(len(fit))):
        # multiply accumulated poly by (t - ts[level]) and add newton coeff
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - ts[level] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += newton[level]

    bad = [c for c in coeffs if c.denominator != 1]
    if bad:
        raise InterpolationError(
            f"fitted coefficients are not integers: {bad[:3]}", residuals=[]
        )
    poly = PolyT(tuple(int(c) for c in coeffs))

    residuals = [
        (q, v, poly.eval_at_q(q)) for q, v in holdout if poly.eval_at_q(q) != v
    ]
    if residuals:
        raise InterpolationError(
            f"{len(residuals)} held-out samples disagree with the fit", residuals
        )
    return poly
