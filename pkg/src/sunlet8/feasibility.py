"""Which K_m x K_n admit an L8-decomposition, and which construction to use.

The eight classical residue cases are numbered 1..8.  Case 9 covers the
remaining pairs allowed by edge counting: one factor = 4 (mod 8) and the
other = 2 (mod 4).  Without it the case list is strictly weaker than
``16 | mn(m+n-2)`` (e.g. K_4 x K_2 and K_4 x K_6), and those pairs do decompose.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

# case -> (modulus, residue) for m, then for n; modulus 1 means unconstrained
CASES: dict[int, tuple[tuple[int, int], tuple[int, int]]] = {
    1: ((4, 0), (4, 0)),
    2: ((8, 0), (2, 0)),
    3: ((16, 0), (1, 0)),
    4: ((16, 1), (16, 1)),
    5: ((16, 15), (16, 3)),
    6: ((16, 13), (16, 5)),
    7: ((16, 11), (16, 7)),
    8: ((16, 9), (16, 9)),
    9: ((8, 4), (4, 2)),
}


def holds(case: int, m: int, n: int) -> bool:
    """Whether ``case`` holds with its first condition on ``m``."""
    (pm, rm), (pn, rn) = CASES[case]
    return m % pm == rm and n % pn == rn


def case_text(case: int) -> str:
    (pm, rm), (pn, rn) = CASES[case]
    parts = [f"m = {rm} (mod {pm})"]
    if pn > 1:
        parts.append(f"n = {rn} (mod {pn})")
    return ", ".join(parts)


ROUTES = {
    1: "lemma-2.2",
    2: "lemma-2.3",
    3: "lemma-2.4",
    4: "lemma-2.5",
    5: "lemma-2.6",
    6: "lemma-2.7",
    7: "lemma-2.8",
    8: "lemma-2.9",
    9: "supplement-4x2",
}


class FeasibilityVerdict(NamedTuple):
    m: int
    n: int
    feasible: bool
    satisfied_cases: frozenset[int]
    # route tag plus the orientation (rows, cols) the route's conditions bind
    chosen_route: Optional[str]
    oriented: Optional[tuple[int, int]]
    witness: int
    residue: int

    def describe(self) -> str:
        head = f"K{self.m} x K{self.n}: mn(m+n-2) = {self.witness} = {self.residue} (mod 16)"
        if not self.feasible:
            return head + "; infeasible"
        cases = ", ".join(str(c) for c in sorted(self.satisfied_cases))
        return f"{head}; feasible, cases {cases}; route {self.chosen_route} on {self.oriented}"


def satisfied(m: int, n: int) -> set[int]:
    """Case numbers holding for (m, n) in either orientation."""
    out = set()
    for c, ((pm, rm), (pn, rn)) in CASES.items():
        if (m % pm == rm and n % pn == rn) or (n % pm == rm and m % pn == rn):
            out.add(c)
    return out


# every modulus divides 16, so (m % 16, n % 16) decides the cases;
# entry 16a+b: (feasible, cases, route, keep orientation)
_TABLE: list[tuple[bool, frozenset[int], Optional[str], bool]] = []
for _a in range(16):
    for _b in range(16):
        _cs = frozenset(satisfied(_a + 16, _b + 16))
        _first = min(_cs) if _cs else None
        _TABLE.append((
            bool(_cs),
            _cs,
            ROUTES[_first] if _first else None,
            bool(_first) and holds(_first, _a + 16, _b + 16),
        ))
_new = tuple.__new__


def classify(m: int, n: int) -> FeasibilityVerdict:
    if m < 1 or n < 1:
        raise ValueError(f"factors must be >= 1, got ({m}, {n})")
    witness = m * n * (m + n - 2)
    ok, cases, route, keep = _TABLE[(m & 15) << 4 | (n & 15)]
    oriented = None if route is None else ((m, n) if keep else (n, m))
    # bypass the namedtuple constructor; this is called in tight loops
    return _new(FeasibilityVerdict, (m, n, ok, cases, route, oriented, witness, witness & 15))
