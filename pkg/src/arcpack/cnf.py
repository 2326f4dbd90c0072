"""3-CNF formulas and DIMACS I/O."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .digraph import DigraphError


class CnfError(DigraphError):
    pass


@dataclass(frozen=True)
class Literal:
    var: int          # 0-based variable index
    negated: bool = False

    def value(self, assignment: Mapping[int, bool] | Sequence[bool]) -> bool:
        return bool(assignment[self.var]) != self.negated

    def dimacs(self) -> int:
        return -(self.var + 1) if self.negated else self.var + 1

    @classmethod
    def from_dimacs(cls, x: int) -> Literal:
        if x == 0:
            raise CnfError("literal 0 is the clause terminator")
        return cls(abs(x) - 1, x < 0)


@dataclass(frozen=True)
class Cnf:
    """Formula with exactly three distinct literals per clause.

    Every variable must occur somewhere; the reduction has nothing to route
    through a variable that never appears.
    """

    variable_count: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        occurs = set()
        for i, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise CnfError(f"clause {i + 1} has {len(clause)} literals, expected 3")
            if len(set(clause)) != 3:
                raise CnfError(f"clause {i + 1} repeats a literal")
            for lit in clause:
                if not 0 <= lit.var < self.variable_count:
                    raise CnfError(f"clause {i + 1} uses variable {lit.var + 1} "
                                   f"beyond the declared {self.variable_count}")
                occurs.add(lit.var)
        missing = sorted(set(range(self.variable_count)) - occurs)
        if missing:
            raise CnfError(f"variables {[v + 1 for v in missing]} never occur")

    @classmethod
    def from_ints(cls, clauses: Iterable[Iterable[int]], variable_count: int | None = None) -> Cnf:
        cl = tuple(tuple(Literal.from_dimacs(x) for x in c) for c in clauses)
        if variable_count is None:
            variable_count = max((lit.var + 1 for c in cl for lit in c), default=0)
        return cls(variable_count, cl)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Mapping[int, bool] | Sequence[bool]) -> bool:
        return all(any(lit.value(assignment) for lit in c) for c in self.clauses)

    def occurrence_counts(self) -> tuple[list[int], list[int]]:
        pos = [0] * self.variable_count
        neg = [0] * self.variable_count
        for c in self.clauses:
            for lit in c:
                (neg if lit.negated else pos)[lit.var] += 1
        return pos, neg

    def to_ints(self) -> list[list[int]]:
        return [[lit.dimacs() for lit in c] for c in self.clauses]


def parse_dimacs(text: str) -> Cnf:
    header = None
    ints: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: malformed problem line {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        try:
            ints.extend(int(x) for x in line.split())
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer token in {line!r}") from None
    if header is None:
        raise CnfError("missing 'p cnf' problem line")
    clauses, cur = [], []
    for x in ints:
        if x == 0:
            clauses.append(cur)
            cur = []
        else:
            cur.append(x)
    if cur:
        clauses.append(cur)
    n, m = header
    if len(clauses) != m:
        raise CnfError(f"problem line declares {m} clauses, found {len(clauses)}")
    return Cnf.from_ints(clauses, n)


def format_dimacs(F: Cnf) -> str:
    lines = [f"p cnf {F.variable_count} {F.m}"]
    lines.extend(" ".join(str(x) for x in c) + " 0" for c in F.to_ints())
    return "\n".join(lines) + "\n"
