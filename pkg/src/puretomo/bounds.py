"""Element-count arithmetic for rank-1 pure-state-complete measurements.

Notation: ``m0(d)`` is the minimal number of elements of any POVM that
distinguishes all pure states, ``m1(d)`` the same restricted to rank-1 POVMs.
For ``d >= 8``, ``m0(d) = 4d - 3 - c(d) alpha(d)`` with ``c(d)`` only known to
lie in ``[1, 2]``, so it is carried as an interval.

The real-variable argument ``d - 1 - 2 log2(d) > 0`` for ``d >= 8`` is not
reproduced; :func:`feasible_3d_minus_2` checks the integer consequence
directly against the interval.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

M0_TABLE = {2: 4, 3: 8, 4: 10, 5: 16, 6: 18, 7: 23}
M1_KNOWN = {2: (4, 4), 3: (8, 8), 4: (10, 13)}


@dataclass(frozen=True)
class Interval:
    lower: int
    upper: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper

    def as_list(self) -> list[int]:
        return [self.lower, self.upper]


@dataclass(frozen=True)
class BoundsReport:
    d: int
    alpha: int
    m0: Interval
    three_d_minus_2: int
    four_d_minus_3: int
    m1_range: Interval
    feasible_3d_minus_2: bool
    c_alpha: int | None  # c(d) * alpha(d), known only where m0 is tabulated

    def to_dict(self) -> dict:
        out = asdict(self)
        out["m0"] = self.m0.lower if self.m0.exact else self.m0.as_list()
        out["m1_range"] = self.m1_range.as_list()
        return out


def _check(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")


def alpha(d: int) -> int:
    """Number of ones in the binary expansion of ``d - 1``."""
    _check(d)
    return bin(d - 1).count("1")


def m0(d: int) -> Interval:
    _check(d)
    if d in M0_TABLE:
        return Interval(M0_TABLE[d], M0_TABLE[d])
    top = 4 * d - 3
    a = alpha(d)
    return Interval(top - 2 * a, top - a)


def c_alpha(d: int) -> int | None:
    """``c(d) alpha(d) = 4d - 3 - m0(d)`` for tabulated ``d``; ``None`` elsewhere."""
    _check(d)
    return 4 * d - 3 - M0_TABLE[d] if d in M0_TABLE else None


def feasible_3d_minus_2(d: int) -> bool:
    """Whether a rank-1 POVM with ``3d - 2`` elements could distinguish all pure states."""
    return m0(d).lower <= 3 * d - 2


def m1_range(d: int) -> Interval:
    _check(d)
    if d in M1_KNOWN:
        return Interval(*M1_KNOWN[d])
    return Interval(max(m0(d).lower, 3 * d - 2), 4 * d - 3)


def report(d: int) -> BoundsReport:
    return BoundsReport(
        d=d,
        alpha=alpha(d),
        m0=m0(d),
        three_d_minus_2=3 * d - 2,
        four_d_minus_3=4 * d - 3,
        m1_range=m1_range(d),
        feasible_3d_minus_2=feasible_3d_minus_2(d),
        c_alpha=c_alpha(d),
    )
