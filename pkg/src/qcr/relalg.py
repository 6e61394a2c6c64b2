"""Finite non-associative relation algebras over bit-set relations.

A relation is a union of atoms (basic relations) and is stored as an
integer whose bit ``i`` is set when atom ``i`` belongs to it.  The
:class:`Algebra` owns the converse and composition tables; everything
else is derived from them by union over atoms.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

MAX_ATOMS = 64

# Above this many atoms the lifted tables are not materialized.
_LIFT_CONVERSE_LIMIT = 12
_LIFT_COMPOSE_LIMIT = 8


class AlgebraMismatch(ValueError):
    """Operands belong to different algebras (or have the wrong width)."""


class AlgebraFormatError(ValueError):
    """Malformed algebra definition text."""

    def __init__(self, message: str, source: str = "<string>", line: int = 0):
        self.source = source
        self.line = line
        where = f"{source}:{line}: " if line else f"{source}: "
        super().__init__(where + message)


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def popcount(bits: int) -> int:
    return bin(bits).count("1")


class Algebra:
    """A finite non-associative algebra given by its atom-level tables.

    ``converse[i]`` is the index of the converse of atom ``i`` and
    ``composition[i][j]`` the bit set of ``atom_i ⋄ atom_j``.
    Instances are immutable once built.
    """

    def __init__(
        self,
        name: str,
        atoms: Sequence[str],
        identity: int | str,
        converse: Sequence[int],
        composition: Sequence[Sequence[int]],
    ):
        atoms = tuple(atoms)
        n = len(atoms)
        if n == 0:
            raise ValueError("an algebra needs at least one atom")
        if n > MAX_ATOMS:
            raise ValueError(f"{n} atoms exceeds the {MAX_ATOMS}-atom limit")
        if len(set(atoms)) != n:
            raise ValueError("duplicate atom names")
        if isinstance(identity, str):
            identity = atoms.index(identity)
        if not 0 <= identity < n:
            raise ValueError("identity atom out of range")
        if len(converse) != n or any(not 0 <= c < n for c in converse):
            raise ValueError("converse table must map every atom to an atom")
        full = (1 << n) - 1
        if len(composition) != n or any(len(row) != n for row in composition):
            raise ValueError("composition table must be n x n")
        for row in composition:
            for bits in row:
                if bits & ~full:
                    raise ValueError("composition entry outside the atom set")

        self.name = name
        self.atoms = atoms
        self.n = n
        self.full = full
        self.identity = identity
        self.converse_atoms = tuple(converse)
        self.atom_comp = tuple(tuple(row) for row in composition)
        self._index = {a: i for i, a in enumerate(atoms)}
        digest = hashlib.sha1("\x1f".join(atoms).encode()).hexdigest()[:12]
        self.key = (name, digest)

        self._conv_table = None
        if n <= _LIFT_CONVERSE_LIMIT:
            table = [0] * (1 << n)
            for r in range(1, 1 << n):
                low = r & -r
                table[r] = table[r ^ low] | (1 << converse[low.bit_length() - 1])
            self._conv_table = table

        self._comp_table = None
        if n <= _LIFT_COMPOSE_LIMIT:
            self._comp_table = self._lift_composition()
        self._comp_cache: dict[tuple[int, int], int] = {}

    def _lift_composition(self) -> list[int]:
        n = self.n
        size = 1 << n
        # rows[a][s] = atom_a ⋄ s
        rows = []
        for a in range(n):
            row = [0] * size
            ca = self.atom_comp[a]
            for s in range(1, size):
                low = s & -s
                row[s] = row[s ^ low] | ca[low.bit_length() - 1]
            rows.append(row)
        table = [0] * (size * size)
        for r in range(1, size):
            low = r & -r
            prev = (r ^ low) * size
            row = rows[low.bit_length() - 1]
            base = r * size
            for s in range(size):
                table[base + s] = table[prev + s] | row[s]
        return table

    # bit-level operations -------------------------------------------------

    def conv_bits(self, r: int) -> int:
        if self._conv_table is not None:
            return self._conv_table[r]
        out = 0
        for i in iter_bits(r):
            out |= 1 << self.converse_atoms[i]
        return out

    def comp_bits(self, r: int, s: int) -> int:
        if self._comp_table is not None:
            return self._comp_table[(r << self.n) | s]
        key = (r, s)
        hit = self._comp_cache.get(key)
        if hit is not None:
            return hit
        out = 0
        for i in iter_bits(r):
            row = self.atom_comp[i]
            for j in iter_bits(s):
                out |= row[j]
        if len(self._comp_cache) < 1 << 16:
            self._comp_cache[key] = out
        return out

    @property
    def lifted_composition(self) -> list[int] | None:
        """Flat table ``t[(r << n) | s] = r ⋄ s`` when materialized."""
        return self._comp_table

    @property
    def lifted_converse(self) -> list[int] | None:
        return self._conv_table

    # naming ----------------------------------------------------------------

    def atom_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not an atom of {self.name}") from None

    def bits_of(self, names: Iterable[str]) -> int:
        bits = 0
        for a in names:
            bits |= 1 << self.atom_index(a)
        return bits

    def names_of(self, bits: int) -> list[str]:
        return [self.atoms[i] for i in iter_bits(bits)]

    def format_bits(self, bits: int) -> str:
        return "{" + ",".join(self.names_of(bits)) + "}"

    def parse_bits(self, text: str) -> int:
        """Parse ``{a,b}``, ``{}``, ``*`` or a bare atom name."""
        text = text.strip()
        if text == "*":
            return self.full
        if text.startswith("{") and text.endswith("}"):
            body = text[1:-1].strip()
            if not body:
                return 0
            return self.bits_of(p.strip() for p in body.split(","))
        return 1 << self.atom_index(text)

    # Relation helpers ------------------------------------------------------

    def rel(self, *names: str) -> "Relation":
        return Relation(self, self.bits_of(names))

    def relation(self, bits: int) -> "Relation":
        if bits & ~self.full or bits < 0:
            raise AlgebraMismatch(f"bits {bits:#x} wider than {self.name}")
        return Relation(self, bits)

    def parse(self, text: str) -> "Relation":
        return Relation(self, self.parse_bits(text))

    @property
    def universal(self) -> "Relation":
        return Relation(self, self.full)

    @property
    def empty(self) -> "Relation":
        return Relation(self, 0)

    def basics(self) -> list["Relation"]:
        return [Relation(self, 1 << i) for i in range(self.n)]

    def all_relations(self) -> Iterator["Relation"]:
        for bits in range(1 << self.n):
            yield Relation(self, bits)

    # identity --------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Algebra) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Algebra({self.name!r}, {self.n} atoms)"

    def with_entry(self, a: str, b: str, result: Iterable[str]) -> "Algebra":
        """Copy of this algebra with one composition entry replaced."""
        comp = [list(row) for row in self.atom_comp]
        comp[self.atom_index(a)][self.atom_index(b)] = self.bits_of(result)
        return Algebra(self.name, self.atoms, self.identity, self.converse_atoms, comp)


@dataclass(frozen=True)
class Relation:
    """A union of atoms of ``algebra``."""

    algebra: Algebra
    bits: int

    def _check(self, other: "Relation") -> None:
        if not isinstance(other, Relation) or other.algebra != self.algebra:
            raise AlgebraMismatch("relations belong to different algebras")

    def __or__(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.algebra, self.bits | other.bits)

    def __and__(self, other: "Relation") -> "Relation":
        self._check(other)
        return Relation(self.algebra, self.bits & other.bits)

    def __invert__(self) -> "Relation":
        return Relation(self.algebra, self.algebra.full & ~self.bits)

    def __le__(self, other: "Relation") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "Relation") -> bool:
        return self <= other and self.bits != other.bits

    def __iter__(self) -> Iterator["Relation"]:
        for i in iter_bits(self.bits):
            yield Relation(self.algebra, 1 << i)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def is_basic(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    @property
    def names(self) -> list[str]:
        return self.algebra.names_of(self.bits)

    def __str__(self) -> str:
        return self.algebra.format_bits(self.bits)

    def __repr__(self) -> str:
        return f"{self.algebra.name}{self}"


def _same(a: Algebra, *rels: Relation) -> None:
    for r in rels:
        if not isinstance(r, Relation) or r.algebra != a:
            raise AlgebraMismatch(f"relation does not belong to {a.name}")


def union(a: Algebra, r1: Relation, r2: Relation) -> Relation:
    _same(a, r1, r2)
    return Relation(a, r1.bits | r2.bits)


def intersect(a: Algebra, r1: Relation, r2: Relation) -> Relation:
    _same(a, r1, r2)
    return Relation(a, r1.bits & r2.bits)


def complement(a: Algebra, r: Relation) -> Relation:
    _same(a, r)
    return Relation(a, a.full & ~r.bits)


def subseteq(a: Algebra, r1: Relation, r2: Relation) -> bool:
    _same(a, r1, r2)
    return r1.bits & ~r2.bits == 0


def converse(a: Algebra, r: Relation) -> Relation:
    _same(a, r)
    return Relation(a, a.conv_bits(r.bits))


def compose(a: Algebra, r1: Relation, r2: Relation) -> Relation:
    _same(a, r1, r2)
    return Relation(a, a.comp_bits(r1.bits, r2.bits))


# axioms -----------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    holds: bool
    checked: int
    counterexample: tuple[str, ...] | None = None
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    algebra: str
    results: tuple[AxiomResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.holds]

    def format(self) -> str:
        lines = [f"algebra {self.algebra}"]
        for r in self.results:
            status = "holds" if r.holds else "FAILS"
            line = f"  {r.axiom}: {status} ({r.checked} checks)"
            if r.counterexample:
                line += f" witness {' '.join(r.counterexample)}"
                if r.detail:
                    line += f" [{r.detail}]"
            lines.append(line)
        lines.append("all axioms hold" if self.ok else f"{len(self.failures())} axiom(s) fail")
        return "\n".join(lines)


AXIOMS = (
    "involution",
    "identity",
    "converse-of-composition",
    "peircean-law",
    "distributivity-over-union",
)


def check_axioms(a: Algebra) -> AxiomReport:
    """Exhaustively check the defining laws on atoms.

    Laws stated for arbitrary relations reduce to atoms because every
    operator is lifted by union; distributivity itself is checked on the
    lifted operators (one atom operand against every relation).
    """
    n = a.n
    names = a.atoms
    conv = a.converse_atoms
    comp = a.atom_comp
    results = []

    witness = None
    for b in range(n):
        if conv[conv[b]] != b:
            witness = (names[b],)
            break
    results.append(AxiomResult("involution", witness is None, n, witness))

    witness = None
    detail = ""
    e = a.identity
    for b in range(n):
        if comp[e][b] != 1 << b:
            witness, detail = (names[e], names[b]), f"got {a.format_bits(comp[e][b])}"
            break
        if comp[b][e] != 1 << b:
            witness, detail = (names[b], names[e]), f"got {a.format_bits(comp[b][e])}"
            break
    results.append(AxiomResult("identity", witness is None, 2 * n, witness, detail))

    witness = None
    detail = ""
    for x in range(n):
        for y in range(n):
            lhs = a.conv_bits(comp[x][y])
            rhs = comp[conv[y]][conv[x]]
            if lhs != rhs:
                witness = (names[x], names[y])
                detail = f"{a.format_bits(lhs)} != {a.format_bits(rhs)}"
                break
        if witness:
            break
    results.append(AxiomResult("converse-of-composition", witness is None, n * n, witness, detail))

    witness = None
    detail = ""
    for x in range(n):
        for y in range(n):
            xy = comp[x][y]
            for z in range(n):
                left = xy & (1 << conv[z]) == 0
                right = comp[y][z] & (1 << conv[x]) == 0
                if left != right:
                    witness = (names[x], names[y], names[z])
                    detail = "(x⋄y)∩z˘ empty" if left else "(y⋄z)∩x˘ empty"
                    break
            if witness:
                break
        if witness:
            break
    results.append(AxiomResult("peircean-law", witness is None, n ** 3, witness, detail))

    # x ⋄ (y ∪ {z}) = x⋄y ∪ x⋄z for atoms x, z and every relation y, plus
    # the converse counterpart; by induction on |z| this covers all unions.
    witness = None
    detail = ""
    checked = 0
    ys: Iterable[int] = range(1 << n) if n <= 10 else [1 << i for i in range(n)] + [a.full]
    for x in range(n):
        xb = 1 << x
        for y in ys:
            for z in range(n):
                zb = 1 << z
                checked += 1
                if a.comp_bits(xb, y | zb) != a.comp_bits(xb, y) | comp[x][z]:
                    witness, detail = (names[x], a.format_bits(y), names[z]), "composition"
                    break
                if a.comp_bits(y | zb, xb) != a.comp_bits(y, xb) | comp[z][x]:
                    witness, detail = (a.format_bits(y), names[z], names[x]), "composition (left)"
                    break
                if a.conv_bits(y | zb) != a.conv_bits(y) | (1 << conv[z]):
                    witness, detail = (a.format_bits(y), names[z]), "converse"
                    break
            if witness:
                break
        if witness:
            break
    results.append(AxiomResult("distributivity-over-union", witness is None, checked, witness, detail))
    return AxiomReport(a.name, tuple(results))


def is_uniform(a: Algebra) -> bool:
    return all(bits for row in a.atom_comp for bits in row)


# definition files -------------------------------------------------------------

_COMPOSE_RE = re.compile(r"^compose\s+(\S+)\s+(\S+)\s*->\s*(.+)$")


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return (line[:pos] if pos >= 0 else line).strip()


def parse_algebra(text: str, source: str = "<string>") -> Algebra:
    """Parse the ``algebra``/``atoms``/``identity``/``converse``/``compose`` format."""
    name = None
    atoms: list[str] | None = None
    identity = None
    conv: dict[str, str] = {}
    comp: dict[tuple[str, str], tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "algebra":
            if not rest:
                raise AlgebraFormatError("missing algebra name", source, lineno)
            name = rest
        elif head == "atoms":
            atoms = rest.split()
            if not atoms:
                raise AlgebraFormatError("empty atom list", source, lineno)
        elif head == "identity":
            identity = (rest, lineno)
        elif head == "converse":
            for tok in rest.split():
                left, sep, right = tok.partition("->")
                if not sep or not left or not right:
                    raise AlgebraFormatError(f"bad converse entry {tok!r}", source, lineno)
                conv[left] = right
        elif head == "compose":
            m = _COMPOSE_RE.match(line)
            if not m:
                raise AlgebraFormatError("expected 'compose a b -> {...}'", source, lineno)
            comp[(m.group(1), m.group(2))] = (lineno, m.group(3).strip())
        else:
            raise AlgebraFormatError(f"unknown directive {head!r}", source, lineno)
    if name is None:
        raise AlgebraFormatError("missing 'algebra' line", source)
    if atoms is None:
        raise AlgebraFormatError("missing 'atoms' line", source)
    if identity is None:
        raise AlgebraFormatError("missing 'identity' line", source)
    index = {a: i for i, a in enumerate(atoms)}
    if identity[0] not in index:
        raise AlgebraFormatError(f"unknown identity atom {identity[0]!r}", source, identity[1])
    missing = [a for a in atoms if a not in conv]
    if missing:
        raise AlgebraFormatError(f"converse undefined for {', '.join(missing)}", source)
    for a, b in conv.items():
        if a not in index or b not in index:
            raise AlgebraFormatError(f"unknown atom in converse {a}->{b}", source)
    table = [[0] * len(atoms) for _ in atoms]
    seen = set()
    for (x, y), (lineno, body) in comp.items():
        if x not in index or y not in index:
            raise AlgebraFormatError(f"unknown atom in 'compose {x} {y}'", source, lineno)
        bits = 0
        if body == "*":
            bits = (1 << len(atoms)) - 1
        else:
            if not (body.startswith("{") and body.endswith("}")):
                raise AlgebraFormatError("composition result must be {...} or *", source, lineno)
            inner = body[1:-1].strip()
            for tok in filter(None, (t.strip() for t in inner.split(","))):
                if tok not in index:
                    raise AlgebraFormatError(f"unknown atom {tok!r}", source, lineno)
                bits |= 1 << index[tok]
        table[index[x]][index[y]] = bits
        seen.add((x, y))
    absent = [(x, y) for x in atoms for y in atoms if (x, y) not in seen]
    if absent:
        x, y = absent[0]
        raise AlgebraFormatError(
            f"composition table is not total: {len(absent)} entries missing (first: {x} {y})",
            source,
        )
    return Algebra(
        name,
        atoms,
        index[identity[0]],
        [index[conv[a]] for a in atoms],
        table,
    )


def load_algebra(path: str | Path) -> Algebra:
    path = Path(path)
    return parse_algebra(path.read_text(encoding="utf-8"), str(path))


def format_algebra(a: Algebra) -> str:
    lines = [
        f"algebra {a.name}",
        "atoms " + " ".join(a.atoms),
        f"identity {a.atoms[a.identity]}",
        "converse " + " ".join(f"{x}->{a.atoms[a.converse_atoms[i]]}" for i, x in enumerate(a.atoms)),
    ]
    for i, x in enumerate(a.atoms):
        for j, y in enumerate(a.atoms):
            lines.append(f"compose {x} {y} -> {a.format_bits(a.atom_comp[i][j])}")
    return "\n".join(lines) + "\n"
