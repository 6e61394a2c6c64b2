"""Projections, multi-algebras and multi-relations.

A multi-algebra is an ordered product of ``m`` algebras together with a
projection ``⇀ᵢʲ`` for every ordered pair of distinct components.  Component
indices are 0-based in the Python API; the text formats and the command
line use 1-based indices.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .relalg import Algebra, AlgebraFormatError, AlgebraMismatch, Relation, iter_bits

MAX_ANTITREE_SEARCH = 6


class ProjectionError(ValueError):
    pass


class NotAWeakening(ValueError):
    pass


class AntiTreeError(ValueError):
    pass


class NotPlenary(ValueError):
    pass


class Projection:
    """Atom-level projection table from ``source`` to ``target``."""

    def __init__(self, source: Algebra, target: Algebra, table: Sequence[int], check: bool = True):
        if len(table) != source.n:
            raise ProjectionError("projection table must cover every source atom")
        for bits in table:
            if bits < 0 or bits & ~target.full:
                raise ProjectionError("projection image outside the target algebra")
        self.source = source
        self.target = target
        self.table = tuple(table)
        if check:
            for b in range(source.n):
                cb = source.converse_atoms[b]
                if self.table[cb] != target.conv_bits(self.table[b]):
                    raise ProjectionError(
                        f"projection does not respect converse at {source.atoms[b]}"
                    )
        self._lifted = None
        if source.n <= 12:
            lifted = [0] * (1 << source.n)
            for r in range(1, 1 << source.n):
                low = r & -r
                lifted[r] = lifted[r ^ low] | self.table[low.bit_length() - 1]
            self._lifted = lifted

    @classmethod
    def constant_full(cls, source: Algebra, target: Algebra) -> "Projection":
        """The projection expressing no direct interdependency."""
        return cls(source, target, [target.full] * source.n)

    @classmethod
    def from_names(cls, source: Algebra, target: Algebra, mapping: Mapping[str, Iterable[str] | str]) -> "Projection":
        table = []
        for a in source.atoms:
            img = mapping[a]
            table.append(target.parse_bits(img) if isinstance(img, str) else target.bits_of(img))
        return cls(source, target, table)

    def apply_bits(self, bits: int) -> int:
        if self._lifted is not None:
            return self._lifted[bits]
        out = 0
        for i in iter_bits(bits):
            out |= self.table[i]
        return out

    @property
    def lifted(self) -> list[int] | None:
        return self._lifted

    def __call__(self, r: Relation) -> Relation:
        return project(self, r)

    @property
    def is_constant_full(self) -> bool:
        return all(bits == self.target.full for bits in self.table)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Projection)
            and self.source == other.source
            and self.target == other.target
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.source.key, self.target.key, self.table))

    def describe(self) -> list[str]:
        return [
            f"{self.source.atoms[i]} -> {self.target.format_bits(bits)}"
            for i, bits in enumerate(self.table)
        ]


def project(p: Projection, r: Relation) -> Relation:
    if r.algebra != p.source:
        raise AlgebraMismatch(f"relation is not over {p.source.name}")
    return Relation(p.target, p.apply_bits(r.bits))


def invert_projection(p: Projection) -> Projection:
    """Inverse projection: ``b ⊆ q(b′)`` iff ``b′ ⊆ p(b)``."""
    table = [0] * p.target.n
    for b in range(p.source.n):
        for b2 in iter_bits(p.table[b]):
            table[b2] |= 1 << b
    return Projection(p.target, p.source, table, check=False)


class MultiAlgebra:
    """Product of component algebras with all pairwise projections."""

    def __init__(self, name: str, components: Sequence[Algebra], projections: Mapping[tuple[int, int], Projection]):
        components = tuple(components)
        m = len(components)
        if m == 0:
            raise ValueError("a multi-algebra needs at least one component")
        projs: dict[tuple[int, int], Projection] = {}
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                p = projections.get((i, j))
                if p is None:
                    raise ProjectionError(f"missing projection {i + 1} -> {j + 1}")
                if p.source != components[i] or p.target != components[j]:
                    raise ProjectionError(f"projection {i + 1} -> {j + 1} has the wrong algebras")
                projs[(i, j)] = p
        extra = set(projections) - set(projs)
        if extra:
            raise ProjectionError(f"unexpected projection keys {sorted(extra)}")
        self.name = name
        self.components = components
        self.m = m
        self.projections = projs
        self.full = tuple(a.full for a in components)
        self._inverse: dict[tuple[int, int], Projection] = {}

    @classmethod
    def mono(cls, algebra: Algebra) -> "MultiAlgebra":
        return cls(algebra.name, [algebra], {})

    def proj(self, i: int, j: int) -> Projection:
        return self.projections[(i, j)]

    def inverse(self, i: int, j: int) -> Projection:
        """Cached inverse of ``⇀ᵢʲ`` (a projection from ``j`` to ``i``)."""
        q = self._inverse.get((i, j))
        if q is None:
            q = self._inverse[(i, j)] = invert_projection(self.projections[(i, j)])
        return q

    @property
    def key(self) -> tuple:
        return (
            self.name,
            tuple(a.key for a in self.components),
            tuple(sorted((k, p.table) for k, p in self.projections.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiAlgebra) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"MultiAlgebra({self.name!r}, m={self.m})"

    # relation constructors ------------------------------------------------

    def relation(self, *parts: Relation | str | int) -> "MultiRelation":
        if len(parts) != self.m:
            raise AlgebraMismatch(f"{self.name} expects {self.m} parts, got {len(parts)}")
        bits = []
        for a, p in zip(self.components, parts):
            if isinstance(p, Relation):
                if p.algebra != a:
                    raise AlgebraMismatch(f"part over {p.algebra.name}, expected {a.name}")
                bits.append(p.bits)
            elif isinstance(p, str):
                bits.append(a.parse_bits(p))
            else:
                if p < 0 or p & ~a.full:
                    raise AlgebraMismatch("part bits outside the component algebra")
                bits.append(p)
        return MultiRelation(self, tuple(bits))

    def parse(self, text: str) -> "MultiRelation":
        """Parse ``{TPP} ; {<,=}`` (``*`` is the universal part)."""
        pieces = [p.strip() for p in text.split(";")]
        if len(pieces) == 1 and pieces[0] == "*":
            pieces = ["*"] * self.m
        if len(pieces) != self.m:
            raise AlgebraMismatch(f"{self.name} expects {self.m} ';'-separated parts")
        return MultiRelation(self, tuple(a.parse_bits(p) for a, p in zip(self.components, pieces)))

    @property
    def universal(self) -> "MultiRelation":
        return MultiRelation(self, self.full)

    @property
    def empty(self) -> "MultiRelation":
        return MultiRelation(self, (0,) * self.m)

    def basics_bits(self, bits: Sequence[int]) -> Iterator[tuple[int, ...]]:
        """Basic multi-relations (as bit tuples) contained in ``bits``."""
        choices = [[1 << i for i in iter_bits(b)] for b in bits]
        return itertools.product(*choices)

    def format_bits(self, bits: Sequence[int]) -> str:
        return " ; ".join(a.format_bits(b) for a, b in zip(self.components, bits))

    def bi_slice(self, i: int, j: int) -> "MultiAlgebra":
        """Two-component multi-algebra on components ``i`` and ``j``."""
        a, b = self.components[i], self.components[j]
        return MultiAlgebra(
            f"{self.name}[{i + 1},{j + 1}]",
            [a, b],
            {(0, 1): self.projections[(i, j)], (1, 0): self.projections[(j, i)]},
        )

    # closure kernels on bit tuples -----------------------------------------

    def close_bits(self, bits: Sequence[int]) -> tuple[int, ...]:
        """Projection closure of a bit tuple (greatest closed sub-relation)."""
        m = self.m
        parts = list(bits)
        if m == 1:
            return tuple(parts)
        if 0 in parts:
            return (0,) * m
        projs = self.projections
        pending = [(i, j) for i in range(m) for j in range(m) if i != j]
        queued = set(pending)
        while pending:
            i, j = pending.pop()
            queued.discard((i, j))
            new = parts[j] & projs[(i, j)].apply_bits(parts[i])
            if new != parts[j]:
                if new == 0:
                    return (0,) * m
                parts[j] = new
                for k in range(m):
                    if k != j and (j, k) not in queued:
                        queued.add((j, k))
                        pending.append((j, k))
        return tuple(parts)

    def is_closed_bits(self, bits: Sequence[int]) -> bool:
        projs = self.projections
        for (i, j), p in projs.items():
            if bits[j] & ~p.apply_bits(bits[i]):
                return False
        return True


@dataclass(frozen=True)
class MultiRelation:
    """An m-tuple of relations, one per component of ``ma``."""

    ma: MultiAlgebra = field(compare=False)
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.ma.m:
            raise AlgebraMismatch("arity does not match the multi-algebra")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiRelation) and self.ma == other.ma and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    @property
    def parts(self) -> tuple[Relation, ...]:
        return tuple(Relation(a, b) for a, b in zip(self.ma.components, self.bits))

    def part(self, i: int) -> Relation:
        return Relation(self.ma.components[i], self.bits[i])

    @property
    def is_basic(self) -> bool:
        return all(b and b & (b - 1) == 0 for b in self.bits)

    @property
    def is_trivially_inconsistent(self) -> bool:
        return any(b == 0 for b in self.bits)

    def __le__(self, other: "MultiRelation") -> bool:
        _check_pair(self.ma, self, other)
        return all(a & ~b == 0 for a, b in zip(self.bits, other.bits))

    def basics(self) -> Iterator["MultiRelation"]:
        for bits in self.ma.basics_bits(self.bits):
            yield MultiRelation(self.ma, bits)

    def __str__(self) -> str:
        return self.ma.format_bits(self.bits)

    def __repr__(self) -> str:
        return f"({self.ma.format_bits(self.bits)})"


def _check_pair(ma: MultiAlgebra, *rels: MultiRelation) -> None:
    for r in rels:
        if not isinstance(r, MultiRelation) or len(r.bits) != ma.m or r.ma != ma:
            raise AlgebraMismatch(f"multi-relation is not over {ma.name}")


def mr_compose(ma: MultiAlgebra, r: MultiRelation, s: MultiRelation) -> MultiRelation:
    _check_pair(ma, r, s)
    return MultiRelation(ma, tuple(a.comp_bits(x, y) for a, x, y in zip(ma.components, r.bits, s.bits)))


def mr_intersect(ma: MultiAlgebra, r: MultiRelation, s: MultiRelation) -> MultiRelation:
    _check_pair(ma, r, s)
    return MultiRelation(ma, tuple(x & y for x, y in zip(r.bits, s.bits)))


def mr_union(ma: MultiAlgebra, r: MultiRelation, s: MultiRelation) -> MultiRelation:
    _check_pair(ma, r, s)
    return MultiRelation(ma, tuple(x | y for x, y in zip(r.bits, s.bits)))


def mr_converse(ma: MultiAlgebra, r: MultiRelation) -> MultiRelation:
    _check_pair(ma, r)
    return MultiRelation(ma, tuple(a.conv_bits(x) for a, x in zip(ma.components, r.bits)))


def projection_closure(ma: MultiAlgebra, r: MultiRelation) -> MultiRelation:
    _check_pair(ma, r)
    return MultiRelation(ma, ma.close_bits(r.bits))


def is_conv_consistent(ma: MultiAlgebra, r: MultiRelation) -> bool:
    _check_pair(ma, r)
    return 0 not in r.bits and ma.is_closed_bits(r.bits)


# anti-trees -------------------------------------------------------------------


@dataclass(frozen=True)
class AntiTree:
    """Directed tree on ``0..m-1`` whose edges all point towards the root."""

    m: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        m = self.m
        if m < 1:
            raise AntiTreeError("an anti-tree needs at least one node")
        parent: dict[int, int] = {}
        for i, j in self.edges:
            if not (0 <= i < m and 0 <= j < m) or i == j:
                raise AntiTreeError(f"bad edge {i + 1}->{j + 1}")
            if i in parent:
                raise AntiTreeError(f"node {i + 1} has two outgoing edges")
            parent[i] = j
        roots = [v for v in range(m) if v not in parent]
        if len(roots) != 1:
            raise AntiTreeError(f"expected exactly one root, found {len(roots)}")
        for v in range(m):
            seen = set()
            while v in parent:
                if v in seen:
                    raise AntiTreeError("cycle in anti-tree")
                seen.add(v)
                v = parent[v]
        object.__setattr__(self, "_parent", parent)
        object.__setattr__(self, "root", roots[0])

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[tuple[int, int]]) -> "AntiTree":
        return cls(m, frozenset(edges))

    @classmethod
    def chain(cls, m: int) -> "AntiTree":
        return cls(m, frozenset((i, i + 1) for i in range(m - 1)))

    @property
    def parent(self) -> dict[int, int]:
        return dict(self._parent)

    def ancestors(self, v: int) -> list[int]:
        out = [v]
        while v in self._parent:
            v = self._parent[v]
            out.append(v)
        return out

    def chain_between(self, i: int, j: int) -> tuple[list[int], list[int]]:
        """Shortest chain ``i → … → k ← … ← j``: (upward path, downward path).

        The upward path starts at ``i`` and ends at the meeting node ``k``;
        the downward path starts at ``k`` and ends at ``j``.
        """
        up_i = self.ancestors(i)
        up_j = self.ancestors(j)
        on_j = set(up_j)
        k = next(v for v in up_i if v in on_j)
        up = up_i[: up_i.index(k) + 1]
        down = list(reversed(up_j[: up_j.index(k) + 1]))
        return up, down

    def format(self) -> str:
        return " ".join(f"{i + 1}->{j + 1}" for i, j in sorted(self.edges)) or "(single node)"


@dataclass(frozen=True)
class PlenaryViolation:
    source: int
    target: int
    atom: str
    direct: str
    chained: str


@dataclass(frozen=True)
class PlenaryReport:
    tree: AntiTree
    violations: tuple[PlenaryViolation, ...]
    checked: int

    @property
    def plenary(self) -> bool:
        return not self.violations


def chained_projection_bits(ma: MultiAlgebra, t: AntiTree, i: int, j: int, bits: int) -> int:
    up, down = t.chain_between(i, j)
    cur = bits
    for a, b in zip(up, up[1:]):
        cur = ma.proj(a, b).apply_bits(cur)
    for a, b in zip(down, down[1:]):
        # edge b -> a in the tree; walk it backwards through its inverse
        cur = ma.inverse(b, a).apply_bits(cur)
    return cur


def verify_plenary_antitree(ma: MultiAlgebra, t: AntiTree) -> PlenaryReport:
    if t.m != ma.m:
        raise AntiTreeError(f"anti-tree spans {t.m} nodes, multi-algebra has {ma.m}")
    violations = []
    checked = 0
    for i in range(ma.m):
        for j in range(ma.m):
            if i == j:
                continue
            p = ma.proj(i, j)
            for b in range(ma.components[i].n):
                checked += 1
                chained = chained_projection_bits(ma, t, i, j, 1 << b)
                direct = p.table[b]
                if chained & ~direct:
                    violations.append(
                        PlenaryViolation(
                            i,
                            j,
                            ma.components[i].atoms[b],
                            ma.components[j].format_bits(direct),
                            ma.components[j].format_bits(chained),
                        )
                    )
    return PlenaryReport(t, tuple(violations), checked)


def enumerate_antitrees(m: int) -> Iterator[AntiTree]:
    """All anti-trees on ``m`` labelled nodes (``m**(m-1)`` of them)."""
    if m > MAX_ANTITREE_SEARCH:
        raise AntiTreeError(f"anti-tree search is limited to m <= {MAX_ANTITREE_SEARCH}")
    if m == 1:
        yield AntiTree(1, frozenset())
        return
    for seq in itertools.product(range(m), repeat=max(m - 2, 0)):
        undirected = _pruefer_decode(list(seq), m)
        adj: dict[int, list[int]] = {v: [] for v in range(m)}
        for a, b in undirected:
            adj[a].append(b)
            adj[b].append(a)
        for root in range(m):
            edges = []
            stack = [root]
            seen = {root}
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        edges.append((w, v))
                        stack.append(w)
            yield AntiTree(m, frozenset(edges))


def _pruefer_decode(seq: list[int], m: int) -> list[tuple[int, int]]:
    degree = [1] * m
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(m) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [x for x in range(m) if degree[x] == 1]
    edges.append((u, w))
    return edges


def plenary_antitrees(ma: MultiAlgebra) -> list[AntiTree]:
    """Every plenary anti-tree of ``ma`` (only for ``m <= 6``)."""
    return [t for t in enumerate_antitrees(ma.m) if verify_plenary_antitree(ma, t).plenary]


# weakenings -------------------------------------------------------------------


def weaken(ma: MultiAlgebra, replacements: Mapping[tuple[int, int], Projection], name: str | None = None) -> MultiAlgebra:
    projs = dict(ma.projections)
    for (i, j), q in replacements.items():
        if (i, j) not in projs:
            raise NotAWeakening(f"no projection {i + 1} -> {j + 1} to replace")
        p = projs[(i, j)]
        if q.source != p.source or q.target != p.target:
            raise NotAWeakening(f"replacement {i + 1} -> {j + 1} has the wrong algebras")
        for b, (old, new) in enumerate(zip(p.table, q.table)):
            if old & ~new:
                raise NotAWeakening(
                    f"replacement {i + 1} -> {j + 1} shrinks the image of "
                    f"{p.source.atoms[b]}: {p.target.format_bits(old)} -> {p.target.format_bits(new)}"
                )
        projs[(i, j)] = q
    if not replacements:
        return ma
    return MultiAlgebra(name or f"{ma.name}~weak", ma.components, projs)


def is_weakening(original: MultiAlgebra, weak: MultiAlgebra) -> bool:
    if original.components != weak.components:
        return False
    for key, p in original.projections.items():
        q = weak.projections[key]
        if any(a & ~b for a, b in zip(p.table, q.table)):
            return False
    return True


def is_tree_weakening(original: MultiAlgebra, weak: MultiAlgebra, t: AntiTree) -> bool:
    if not is_weakening(original, weak):
        raise NotAWeakening(f"{weak.name} is not a weakening of {original.name}")
    if not verify_plenary_antitree(original, t).plenary:
        raise NotPlenary(f"anti-tree {t.format()} is not plenary for {original.name}")
    return all(original.proj(i, j).table == weak.proj(i, j).table for i, j in t.edges)


# definition files -------------------------------------------------------------

_PROJ_RE = re.compile(r"^projection\s+(\d+)\s+(\d+)\s*:\s*(\S+)\s*->\s*(.+)$")


def parse_multialgebra(text: str, algebras: Mapping[str, Algebra], source: str = "<string>") -> MultiAlgebra:
    name = None
    comps: list[Algebra] | None = None
    entries: dict[tuple[int, int], dict[str, int]] = {}
    full_pairs: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        pos = raw.find("#")
        line = (raw[:pos] if pos >= 0 else raw).strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "multialgebra":
            name = rest
        elif head == "components":
            comps = []
            for tok in rest.split():
                if tok not in algebras:
                    raise AlgebraFormatError(f"unknown algebra {tok!r}", source, lineno)
                comps.append(algebras[tok])
        elif head == "projection":
            if comps is None:
                raise AlgebraFormatError("'projection' before 'components'", source, lineno)
            mt = _PROJ_RE.match(line)
            if not mt:
                raise AlgebraFormatError("expected 'projection i j: a -> {...}'", source, lineno)
            i, j = int(mt.group(1)) - 1, int(mt.group(2)) - 1
            if not (0 <= i < len(comps) and 0 <= j < len(comps)) or i == j:
                raise AlgebraFormatError(f"bad component pair {i + 1} {j + 1}", source, lineno)
            atom, image = mt.group(3), mt.group(4).strip()
            if atom == "ALL":
                if image != "FULL":
                    raise AlgebraFormatError("'ALL' must map to 'FULL'", source, lineno)
                full_pairs.add((i, j))
                continue
            src, tgt = comps[i], comps[j]
            try:
                src.atom_index(atom)
                bits = tgt.full if image == "FULL" else tgt.parse_bits(image)
            except KeyError as exc:
                raise AlgebraFormatError(str(exc.args[0]), source, lineno) from None
            entries.setdefault((i, j), {})[atom] = bits
        else:
            raise AlgebraFormatError(f"unknown directive {head!r}", source, lineno)
    if name is None or comps is None:
        raise AlgebraFormatError("missing 'multialgebra' or 'components' line", source)
    projs = {}
    for i in range(len(comps)):
        for j in range(len(comps)):
            if i == j:
                continue
            if (i, j) in full_pairs:
                projs[(i, j)] = Projection.constant_full(comps[i], comps[j])
                continue
            table = entries.get((i, j))
            if table is None:
                raise AlgebraFormatError(f"projection {i + 1} {j + 1} undefined", source)
            missing = [a for a in comps[i].atoms if a not in table]
            if missing:
                raise AlgebraFormatError(
                    f"projection {i + 1} {j + 1} misses atoms {', '.join(missing)}", source
                )
            try:
                projs[(i, j)] = Projection(comps[i], comps[j], [table[a] for a in comps[i].atoms])
            except ProjectionError as exc:
                raise AlgebraFormatError(f"projection {i + 1} {j + 1}: {exc}", source) from None
    return MultiAlgebra(name, comps, projs)


def format_multialgebra(ma: MultiAlgebra) -> str:
    lines = [f"multialgebra {ma.name}", "components " + " ".join(a.name for a in ma.components)]
    for (i, j), p in sorted(ma.projections.items()):
        if p.is_constant_full:
            lines.append(f"projection {i + 1} {j + 1}: ALL -> FULL")
            continue
        for b, bits in enumerate(p.table):
            lines.append(f"projection {i + 1} {j + 1}: {p.source.atoms[b]} -> {p.target.format_bits(bits)}")
    return "\n".join(lines) + "\n"
