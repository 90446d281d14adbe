"""Small complete SAT engine: DPLL with unit propagation, DIMACS I/O, model enumeration.

Branching is fixed (lowest unassigned variable, false first) so every
result is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Model = dict  # dict[int, bool], total over 1..num_vars


class DimacsError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """Clauses over variables ``1..num_vars``; literal ``-k`` is the negation of ``k``.

    Construction drops tautological clauses and repeated literals. An empty
    clause is kept and makes the formula unsatisfiable.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]] = ()):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        kept = []
        for clause in clauses:
            lits: list[int] = []
            for lit in clause:
                if lit == 0 or abs(lit) > num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{num_vars}")
                if lit not in lits:
                    lits.append(int(lit))
            if any(-lit in lits for lit in lits):
                continue
            kept.append(tuple(lits))
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "clauses", tuple(kept))

    def evaluate(self, model: Model) -> bool:
        return all(any(model[abs(l)] == (l > 0) for l in c) for c in self.clauses)

    def with_clauses(self, extra: Iterable[Sequence[int]]) -> "CnfFormula":
        return CnfFormula(self.num_vars, list(self.clauses) + [list(c) for c in extra])


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped[0] == "c":
            continue
        if stripped[0] == "%":  # SATLIB end marker
            break
        if stripped[0] == "p":
            parts = stripped.split()
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad header {stripped!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: bad header {stripped!r}") from None
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before 'p cnf' header")
        for token in stripped.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad literal {token!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise DimacsError(f"line {lineno}: literal {lit} out of range 1..{header[0]}")
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("unterminated clause at end of input")
    if len(clauses) != header[1]:
        raise DimacsError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], clauses)


def to_dimacs(f: CnfFormula, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines += [" ".join(map(str, c + (0,))) for c in f.clauses]
    return "\n".join(lines) + "\n"


class _Search:
    def __init__(self, f: CnfFormula):
        self.n = f.num_vars
        self.clauses = f.clauses
        self.value = [0] * (self.n + 1)  # 0 unset, 1 true, -1 false
        self.trail: list[int] = []
        # clauses to revisit when a literal becomes false, keyed by that literal
        self.watch: dict[int, list[int]] = {}
        for ci, clause in enumerate(self.clauses):
            for lit in clause:
                self.watch.setdefault(lit, []).append(ci)

    def lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def assign(self, lit: int) -> None:
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)

    def undo(self, size: int) -> None:
        for lit in self.trail[size:]:
            self.value[abs(lit)] = 0
        del self.trail[size:]

    def propagate(self, start: int) -> bool:
        i = start
        while i < len(self.trail):
            falsified = -self.trail[i]
            i += 1
            for ci in self.watch.get(falsified, ()):
                free = 0
                last = 0
                for lit in self.clauses[ci]:
                    val = self.lit_value(lit)
                    if val == 1:
                        break
                    if val == 0:
                        free += 1
                        last = lit
                else:
                    if free == 0:
                        return False
                    if free == 1:
                        self.assign(last)
        return True

    def run(self) -> Model | None:
        for clause in self.clauses:
            if not clause:
                return None
            if len(clause) == 1:
                val = self.lit_value(clause[0])
                if val == -1:
                    return None
                if val == 0:
                    self.assign(clause[0])
        if not self.propagate(0):
            return None
        decisions: list[tuple[int, int, bool]] = []  # (trail size, var, flipped)
        var = 1
        while True:
            while var <= self.n and self.value[var] != 0:
                var += 1
            if var > self.n:
                return {k: self.value[k] == 1 for k in range(1, self.n + 1)}
            decisions.append((len(self.trail), var, False))
            self.assign(-var)
            while not self.propagate(decisions[-1][0]):
                while decisions and decisions[-1][2]:
                    decisions.pop()
                if not decisions:
                    return None
                size, var, _ = decisions.pop()
                self.undo(size)
                decisions.append((size, var, True))
                self.assign(var)
            var = 1


def solve(f: CnfFormula) -> Model | None:
    """Return a satisfying model, or None if ``f`` is unsatisfiable."""
    return _Search(f).run()


def iter_models(f: CnfFormula) -> Iterator[Model]:
    """Yield distinct models, blocking each full model before the next solve."""
    while True:
        model = solve(f)
        if model is None:
            return
        yield model
        if f.num_vars == 0:
            return
        f = f.with_clauses([[-k if model[k] else k for k in range(1, f.num_vars + 1)]])


def enumerate_models(f: CnfFormula, limit: int) -> list[Model]:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out = []
    for model in iter_models(f):
        out.append(model)
        if len(out) >= limit:
            break
    return out
