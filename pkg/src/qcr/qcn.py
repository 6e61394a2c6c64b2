"""Constraint networks over multi-algebras.

A network keeps one multi-relation per unordered pair of variables; the
reverse reading is its converse and a pair without a constraint carries the
universal multi-relation.  Satisfiability answers are certificate answers:
a network is declared satisfiable when an algebraically closed scenario
refining it exists, which is only reported as SAT for multi-algebras whose
closed scenarios are known to be satisfiable.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Protocol, Sequence

from .multialg import MultiAlgebra, MultiRelation
from .relalg import AlgebraFormatError, AlgebraMismatch, iter_bits

DEFAULT_SCENARIO_BOUND = 10**7

METHODS = ("closure", "backtrack", "bruteforce")


class Refused(Exception):
    """The requested answer cannot be given soundly (or within bounds)."""


class NetworkError(ValueError):
    pass


class TractabilityWitness(Protocol):
    def covers(self, network: "Network") -> bool: ...


Bits = tuple[int, ...]


class Network:
    def __init__(
        self,
        ma: MultiAlgebra,
        variables: Sequence[str],
        edges: Mapping[tuple[int, int], Sequence[int]] | None = None,
    ):
        variables = list(variables)
        if len(set(variables)) != len(variables):
            raise NetworkError("duplicate variable names")
        self.ma = ma
        self.variables = variables
        self._index = {v: i for i, v in enumerate(variables)}
        n = len(variables)
        full = ma.full
        self._m = [[full] * n for _ in range(n)]
        if edges:
            for (i, j), bits in edges.items():
                self.constrain(i, j, tuple(bits))

    # basic access ---------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.variables)

    def index(self, v: int | str) -> int:
        if isinstance(v, str):
            try:
                return self._index[v]
            except KeyError:
                raise NetworkError(f"unknown variable {v!r}") from None
        if not 0 <= v < self.n:
            raise NetworkError(f"variable index {v} out of range")
        return v

    def converse_bits(self, bits: Bits) -> Bits:
        return tuple(a.conv_bits(b) for a, b in zip(self.ma.components, bits))

    def get(self, x: int | str, y: int | str) -> Bits:
        i, j = self.index(x), self.index(y)
        if i == j:
            raise NetworkError("no constraint between a variable and itself")
        return self._m[i][j]

    def relation(self, x: int | str, y: int | str) -> MultiRelation:
        return MultiRelation(self.ma, self.get(x, y))

    def set(self, x: int | str, y: int | str, bits: Bits | MultiRelation) -> None:
        i, j = self.index(x), self.index(y)
        if i == j:
            raise NetworkError("no constraint between a variable and itself")
        if isinstance(bits, MultiRelation):
            if bits.ma != self.ma:
                raise AlgebraMismatch(f"relation is not over {self.ma.name}")
            bits = bits.bits
        bits = tuple(bits)
        if len(bits) != self.ma.m:
            raise AlgebraMismatch(f"{self.ma.name} expects {self.ma.m} parts")
        for a, b in zip(self.ma.components, bits):
            if b < 0 or b & ~a.full:
                raise AlgebraMismatch(f"part outside {a.name}")
        self._m[i][j] = bits
        self._m[j][i] = self.converse_bits(bits)

    def constrain(self, x: int | str, y: int | str, bits: Bits | MultiRelation) -> None:
        """Intersect the constraint on (x, y) with ``bits``."""
        if isinstance(bits, MultiRelation):
            bits = bits.bits
        old = self.get(x, y)
        self.set(x, y, tuple(a & b for a, b in zip(old, bits)))

    def pairs(self) -> Iterator[tuple[int, int]]:
        return combinations(range(self.n), 2)

    def edges(self) -> Iterator[tuple[int, int, Bits]]:
        for i, j in self.pairs():
            yield i, j, self._m[i][j]

    def matrix(self) -> list[list[Bits]]:
        return [row[:] for row in self._m]

    def copy(self) -> "Network":
        other = Network.__new__(Network)
        other.ma = self.ma
        other.variables = list(self.variables)
        other._index = dict(self._index)
        other._m = [row[:] for row in self._m]
        return other

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Network)
            and self.ma == other.ma
            and self.variables == other.variables
            and self._m == other._m
        )

    def __repr__(self) -> str:
        return f"Network(over={self.ma.name}, vars={self.variables})"

    # predicates -----------------------------------------------------------
    def is_scenario(self) -> bool:
        return all(b and b & (b - 1) == 0 for _, _, bits in self.edges() for b in bits)

    def format(self, skip_universal: bool = True) -> str:
        lines = [f"network over {self.ma.name}", "vars " + " ".join(self.variables)]
        for i, j, bits in self.edges():
            if skip_universal and bits == self.ma.full:
                continue
            lines.append(f"{self.variables[i]} {self.variables[j]} : {self.ma.format_bits(bits)}")
        return "\n".join(lines) + "\n"

    __str__ = format


def empty_like(N: Network) -> Network:
    out = N.copy()
    zero = (0,) * N.ma.m
    for i in range(N.n):
        for j in range(N.n):
            if i != j:
                out._m[i][j] = zero
    return out


# slices and refinement ---------------------------------------------------------


def slice(N: Network, i: int) -> Network:
    """The i-th slice (0-based) as a network over the i-th component alone."""
    if not 0 <= i < N.ma.m:
        raise NetworkError(f"slice index {i} out of range for {N.ma.m} components")
    out = Network(MultiAlgebra.mono(N.ma.components[i]), N.variables)
    for a, b, bits in N.edges():
        out.set(a, b, (bits[i],))
    return out


def _same_shape(N: Network, M: Network) -> None:
    if N.variables != M.variables:
        raise NetworkError("networks are over different variables")
    if N.ma != M.ma:
        raise AlgebraMismatch("networks are over different multi-algebras")


def refines(N: Network, M: Network) -> bool:
    _same_shape(N, M)
    return all(
        x & ~y == 0
        for (_, _, nb), (_, _, mb) in zip(N.edges(), M.edges())
        for x, y in zip(nb, mb)
    )


def apply_refinement(H, N: Network) -> Network:
    """Replace every constraint R by H(R) simultaneously (pairs read i < j)."""
    if H.ma != N.ma:
        raise AlgebraMismatch("refinement and network use different multi-algebras")
    out = N.copy()
    for i, j, bits in N.edges():
        out.set(i, j, H.apply_bits(bits))
    return out


# closure -----------------------------------------------------------------------


def _compose(comps, r: Bits, s: Bits) -> Bits:
    return tuple(a.comp_bits(x, y) for a, x, y in zip(comps, r, s))


def algebraic_closure(N: Network) -> Network:
    """Fixpoint of projection closure on edges and composition on triangles."""
    out = N.copy()
    _close_in_place(out, None)
    return out


def _close_in_place(N: Network, touched: Iterable[tuple[int, int]] | None) -> bool:
    """Close ``N``; return False (and empty it) when it becomes trivially inconsistent.

    ``touched`` restricts the initial agenda to the given edges; ``None``
    starts from every edge and every triangle.
    """
    ma = N.ma
    comps = ma.components
    M = N._m
    n = N.n
    queue: deque = deque()
    queued: set = set()

    def push(item):
        if item not in queued:
            queued.add(item)
            queue.append(item)

    def changed(i, j):
        push((min(i, j), max(i, j)))
        for k in range(n):
            if k == i or k == j:
                continue
            push((i, j, k))
            push((k, i, j))
            push((j, i, k))
            push((k, j, i))

    if any(0 in M[i][j] for i, j in N.pairs()):
        _empty(N)
        return False
    if touched is None:
        for i, j in N.pairs():
            push((i, j))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if i != j and j != k and i != k:
                        push((i, j, k))
    else:
        for i, j in touched:
            changed(i, j)

    while queue:
        item = queue.popleft()
        queued.discard(item)
        if len(item) == 2:
            i, j = item
            old = M[i][j]
            new = ma.close_bits(old)
        else:
            a, b, c = item
            i, j = a, c
            old = M[a][c]
            via = _compose(comps, M[a][b], M[b][c])
            new = tuple(x & y for x, y in zip(old, via))
        if new != old:
            if 0 in new:
                _empty(N)
                return False
            M[i][j] = new
            M[j][i] = N.converse_bits(new)
            changed(i, j)
    return True


def projection_closure_network(N: Network) -> Network:
    """Close every edge under projection, nothing else."""
    out = N.copy()
    for i, j, bits in N.edges():
        out.set(i, j, N.ma.close_bits(bits))
    return out


def composition_closure(N: Network) -> Network:
    """Close every slice under composition, ignoring projections."""
    out = N.copy()
    comps = N.ma.components
    M = out._m
    n = out.n
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for k in range(n):
                    if k == i or k == j:
                        continue
                    via = _compose(comps, M[i][j], M[j][k])
                    new = tuple(x & y for x, y in zip(M[i][k], via))
                    if new != M[i][k]:
                        out.set(i, k, new)
                        changed = True
    return out


def _empty(N: Network) -> None:
    zero = (0,) * N.ma.m
    for i in range(N.n):
        for j in range(N.n):
            if i != j:
                N._m[i][j] = zero


def is_trivially_inconsistent(N: Network) -> bool:
    return any(0 in bits for _, _, bits in N.edges())


def is_closed_under_projection(N: Network) -> bool:
    return all(N.ma.is_closed_bits(bits) for _, _, bits in N.edges())


def is_closed_under_composition(N: Network) -> bool:
    comps = N.ma.components
    M = N._m
    n = N.n
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for k in range(n):
                if k == i or k == j:
                    continue
                via = _compose(comps, M[i][j], M[j][k])
                if any(x & ~y for x, y in zip(M[i][k], via)):
                    return False
    return True


def is_algebraically_closed(N: Network) -> bool:
    return is_closed_under_projection(N) and is_closed_under_composition(N)


def is_algebraically_consistent(N: Network) -> bool:
    return not is_trivially_inconsistent(N) and is_algebraically_closed(N)


def is_diamond_consistent(N: Network) -> bool:
    """Every slice is closed under composition and has no empty relation."""
    return not is_trivially_inconsistent(N) and is_closed_under_composition(N)


# scenarios ---------------------------------------------------------------------


def closed_basics(ma: MultiAlgebra, bits: Bits) -> list[Bits]:
    """Basic multi-relations inside ``bits`` that are closed under projection."""
    return [b for b in ma.basics_bits(bits) if ma.is_closed_bits(b)]


def scenario_space(N: Network) -> int:
    size = 1
    for _, _, bits in N.edges():
        size *= len(closed_basics(N.ma, bits))
    return size


def enumerate_closed_scenarios(N: Network, bound: int = DEFAULT_SCENARIO_BOUND) -> Iterator[Network]:
    """Yield every algebraically closed scenario refining ``N``.

    Depth-first over the edges in (i, j) order; a triangle is checked as
    soon as its last edge is fixed.  Refuses when the number of candidate
    scenarios exceeds ``bound``.
    """
    ma = N.ma
    comps = ma.components
    pairs = list(N.pairs())
    cands = [closed_basics(ma, N.get(i, j)) for i, j in pairs]
    size = 1
    for c in cands:
        size *= len(c)
    if size > bound:
        raise Refused(f"scenario space of {size} candidates exceeds the bound {bound}")
    if any(not c for c in cands):
        return
    n = N.n
    pos = {p: t for t, p in enumerate(pairs)}
    # triangles (i<j<k) become checkable once edge (j,k), the last of the three, is set
    checks: list[list[tuple[int, int, int]]] = [[] for _ in pairs]
    for i, j, k in combinations(range(n), 3):
        checks[pos[(j, k)]].append((i, j, k))
    S = Network(ma, N.variables)
    M = S._m

    def ok(i, j, k):
        # basic triangle: xy=M[i][j], yz=M[j][k], xz=M[i][k]
        for c, a in enumerate(comps):
            xy, yz, xz = M[i][j][c], M[j][k][c], M[i][k][c]
            if xz & ~a.comp_bits(xy, yz):
                return False
            if xy & ~a.comp_bits(xz, a.conv_bits(yz)):
                return False
            if yz & ~a.comp_bits(a.conv_bits(xy), xz):
                return False
        return True

    def rec(t):
        if t == len(pairs):
            yield S.copy()
            return
        i, j = pairs[t]
        for b in cands[t]:
            S.set(i, j, b)
            if all(ok(*tri) for tri in checks[t]):
                yield from rec(t + 1)
        S.set(i, j, N.get(i, j))

    yield from rec(0)


# decisions ---------------------------------------------------------------------


@dataclass
class Decision:
    method: str
    satisfiable: bool
    witness: Network | None = None
    closed: Network | None = None
    assumption: str | None = None
    explored: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        return "SAT" if self.satisfiable else "UNSAT"


def _lookup_completeness(ma: MultiAlgebra, completeness):
    if completeness == "catalog":
        from .catalog import load_catalog

        return load_catalog().completeness_for(ma)
    return completeness


def _check_assumption(decision: Decision, completeness) -> Decision:
    if decision.satisfiable:
        if completeness is None:
            raise Refused(
                "an algebraically closed scenario exists, but no completeness assumption "
                "is declared for this multi-algebra, so satisfiability cannot be asserted"
            )
        decision.assumption = f"{completeness.statement} ({completeness.citation})"
    return decision


def satisfiable(
    N: Network,
    method: str = "backtrack",
    completeness="catalog",
    certificate: TractabilityWitness | None = None,
    bound: int = DEFAULT_SCENARIO_BOUND,
) -> Decision:
    """Decide satisfiability; UNSAT answers never need an assumption.

    ``completeness`` is a CompletenessAssumption, ``None``, or ``"catalog"``
    to use the one registered for the network's multi-algebra.
    """
    completeness = _lookup_completeness(N.ma, completeness)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    if N.n <= 1:
        if any(b == 0 for b in N.ma.full):
            return Decision(method, False)
        return _check_assumption(Decision(method, True, witness=N.copy(), closed=N.copy()), completeness)
    if method == "closure":
        if certificate is None:
            raise Refused("the closure method needs a tractability certificate for the network's relations")
        if not certificate.covers(N):
            raise Refused("the network has relations outside the certified subclass")
        closed = algebraic_closure(N)
        sat = not is_trivially_inconsistent(closed)
        d = Decision(method, sat, closed=closed)
        if sat:
            d.notes.append("closure is not trivially inconsistent and the subclass is algebraically tractable")
            d.assumption = f"certificate: {getattr(certificate, 'summary', lambda: 'tractability certificate')()}"
        return d
    if method == "backtrack":
        d = _backtrack(N)
        return _check_assumption(d, completeness)
    explored = 0
    for S in enumerate_closed_scenarios(N, bound):
        explored += 1
        return _check_assumption(Decision(method, True, witness=S, explored=explored), completeness)
    return Decision(method, False, explored=explored)


def _backtrack(N: Network) -> Decision:
    ma = N.ma
    start = N.copy()
    explored = 0
    if not _close_in_place(start, None):
        return Decision("backtrack", False, closed=start, explored=1)
    closed_root = start.copy()
    stack = [start]
    while stack:
        cur = stack.pop()
        explored += 1
        best = None
        for i, j, bits in cur.edges():
            if all(b & (b - 1) == 0 for b in bits):
                continue
            opts = closed_basics(ma, bits)
            if best is None or len(opts) < len(best[2]):
                best = (i, j, opts)
                if len(opts) <= 1:
                    break
        if best is None:
            return Decision("backtrack", True, witness=cur, closed=closed_root, explored=explored)
        i, j, opts = best
        # push in reverse so that the first option is explored first
        for b in reversed(opts):
            child = cur.copy()
            child.set(i, j, b)
            if _close_in_place(child, [(i, j)]):
                stack.append(child)
    return Decision("backtrack", False, closed=closed_root, explored=explored)


# text format -------------------------------------------------------------------

_EDGE_RE = re.compile(r"^(\S+)\s+(\S+)\s*:\s*(.+)$")


def parse_network(text: str, resolve, source: str = "<string>") -> Network:
    """Parse a network file; ``resolve`` maps a multi-algebra name to a MultiAlgebra."""
    ma = None
    N = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("network "):
            parts = line.split()
            if len(parts) != 3 or parts[1] != "over":
                raise AlgebraFormatError("expected 'network over <name>'", source, lineno)
            try:
                ma = resolve(parts[2])
            except KeyError as exc:
                raise AlgebraFormatError(str(exc), source, lineno) from None
            continue
        if line.split()[0] == "vars":
            if ma is None:
                raise AlgebraFormatError("'vars' before 'network over'", source, lineno)
            try:
                N = Network(ma, line.split()[1:])
            except NetworkError as exc:
                raise AlgebraFormatError(str(exc), source, lineno) from None
            continue
        mt = _EDGE_RE.match(line)
        if not mt or N is None:
            raise AlgebraFormatError("expected 'x y : relation' after 'vars'", source, lineno)
        x, y, rel = mt.groups()
        try:
            R = ma.parse(rel)
            N.constrain(x, y, R)
        except (KeyError, NetworkError, AlgebraMismatch) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise AlgebraFormatError(str(msg), source, lineno) from None
    if N is None:
        raise AlgebraFormatError("missing 'network over' or 'vars' line", source)
    return N
