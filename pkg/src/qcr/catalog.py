"""Registry of the concrete algebras, multi-algebras, subclasses and refinements.

Algebras, the size/topology multi-algebra, the two distributive subclasses
and the point-algebra refinement are read from the bundled ``data``
directory (overridable with ``QCR_CATALOG_DIR``).  Subclasses defined by a
predicate on RCC8 relations and the RCC8 refinements are built here.
"""

from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .multialg import (
    AntiTree,
    MultiAlgebra,
    MultiRelation,
    Projection,
    is_tree_weakening,
    parse_multialgebra,
    plenary_antitrees,
    weaken,
)
from .relalg import Algebra, AlgebraFormatError, Relation, parse_algebra

PACKAGE_DATA = Path(__file__).resolve().parent / "data"

CLOSED_SCENARIOS_SATISFIABLE = "algebraically closed scenarios are satisfiable"


class CatalogError(KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "catalog error"


class RefinementError(ValueError):
    pass


def data_dir() -> Path:
    override = os.environ.get("QCR_CATALOG_DIR")
    return Path(override) if override else PACKAGE_DATA


@dataclass(frozen=True)
class CompletenessAssumption:
    multi_algebra: str
    citation: str
    statement: str = CLOSED_SCENARIOS_SATISFIABLE


# refinements --------------------------------------------------------------------


class Refinement:
    """A relation-shrinking map ``h`` on a set of relations of one algebra."""

    def __init__(self, name: str, algebra: Algebra, mapping: Mapping[int, int]):
        self.name = name
        self.algebra = algebra
        self.mapping = dict(mapping)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.mapping)

    def __call__(self, bits: int) -> int:
        try:
            return self.mapping[bits]
        except KeyError:
            raise RefinementError(
                f"{self.algebra.format_bits(bits)} is outside the domain of {self.name}"
            ) from None

    def apply(self, r: Relation) -> Relation:
        return Relation(self.algebra, self(r.bits))

    def problems(self) -> list[str]:
        """Entries violating ``h(r) ⊆ r`` or ``r ≠ ∅ ⟹ h(r) ≠ ∅``."""
        out = []
        fmt = self.algebra.format_bits
        for r, h in sorted(self.mapping.items()):
            if h & ~r:
                out.append(f"{self.name}({fmt(r)}) = {fmt(h)} is not contained in {fmt(r)}")
            elif r and not h:
                out.append(f"{self.name}({fmt(r)}) is empty")
        return out

    @classmethod
    def identity(cls, algebra: Algebra, domain: Iterable[int] | None = None) -> "Refinement":
        dom = range(1 << algebra.n) if domain is None else domain
        return cls(f"id_{algebra.name}", algebra, {r: r for r in dom})

    def __repr__(self) -> str:
        return f"Refinement({self.name!r}, {self.algebra.name}, |dom|={len(self.mapping)})"


@dataclass(frozen=True)
class MultiRefinement:
    ma: MultiAlgebra
    parts: tuple[Refinement, ...]

    def __post_init__(self):
        if len(self.parts) != self.ma.m:
            raise RefinementError("one refinement per component is required")
        for a, h in zip(self.ma.components, self.parts):
            if h.algebra != a:
                raise RefinementError(f"{h.name} is over {h.algebra.name}, expected {a.name}")

    @property
    def name(self) -> str:
        return "(" + ", ".join(h.name for h in self.parts) + ")"

    def apply_bits(self, bits: Sequence[int]) -> tuple[int, ...]:
        return tuple(h(b) for h, b in zip(self.parts, bits))

    def __call__(self, r: MultiRelation) -> MultiRelation:
        return MultiRelation(self.ma, self.apply_bits(r.bits))


def parse_refinement(text: str, algebras: Mapping[str, Algebra], source: str = "<string>") -> Refinement:
    name = alg = None
    mapping: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "refinement":
            name = rest
        elif head == "algebra":
            if rest not in algebras:
                raise AlgebraFormatError(f"unknown algebra {rest!r}", source, lineno)
            alg = algebras[rest]
        elif head == "map":
            if alg is None:
                raise AlgebraFormatError("'map' before 'algebra'", source, lineno)
            left, arrow, right = rest.partition("->")
            if not arrow:
                raise AlgebraFormatError("expected 'map r -> h(r)'", source, lineno)
            try:
                r = alg.parse_bits(left.strip())
                h = alg.parse_bits(right.strip())
            except KeyError as exc:
                raise AlgebraFormatError(str(exc.args[0]), source, lineno) from None
            if r in mapping:
                raise AlgebraFormatError(f"duplicate entry for {alg.format_bits(r)}", source, lineno)
            mapping[r] = h
        else:
            raise AlgebraFormatError(f"unknown directive {head!r}", source, lineno)
    if name is None or alg is None:
        raise AlgebraFormatError("missing 'refinement' or 'algebra' line", source)
    return Refinement(name, alg, mapping)


# subclasses ---------------------------------------------------------------------


@dataclass
class SubclassDef:
    """A set of multi-relations, either explicit or a product of slice sets."""

    name: str
    ma: MultiAlgebra
    slices: tuple[frozenset[int], ...] | None = None
    relations: frozenset[tuple[int, ...]] | None = None
    facts: dict[str, str] = field(default_factory=dict)
    slice_names: tuple[str, ...] | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if (self.slices is None) == (self.relations is None):
            raise ValueError("give exactly one of slices or relations")
        if self.slices is not None:
            if len(self.slices) != self.ma.m:
                raise ValueError("one slice set per component is required")
            for a, s in zip(self.ma.components, self.slices):
                if not s:
                    raise ValueError(f"empty slice set in {self.name}")
                if any(r & ~a.full for r in s):
                    raise ValueError(f"slice of {self.name} has relations outside {a.name}")
        else:
            for bits in self.relations:
                if len(bits) != self.ma.m or any(b & ~a.full for a, b in zip(self.ma.components, bits)):
                    raise ValueError(f"{self.name} lists a relation outside {self.ma.name}")

    @property
    def is_product(self) -> bool:
        return self.slices is not None

    @property
    def size(self) -> int:
        if self.slices is not None:
            n = 1
            for s in self.slices:
                n *= len(s)
            return n
        return len(self.relations)

    def slice_set(self, i: int) -> frozenset[int]:
        if self.slices is not None:
            return self.slices[i]
        return frozenset(bits[i] for bits in self.relations)

    def slice(self, i: int) -> "SubclassDef":
        """The i-th slice as a subclass of the i-th component algebra."""
        name = self.slice_names[i] if self.slice_names else f"{self.name}[{i + 1}]"
        return SubclassDef(name, MultiAlgebra.mono(self.ma.components[i]), slices=(self.slice_set(i),))

    def members(self) -> Iterator[tuple[int, ...]]:
        if self.slices is not None:
            return product(*[sorted(s) for s in self.slices])
        return iter(sorted(self.relations))

    def contains_bits(self, bits: Sequence[int]) -> bool:
        if self.slices is not None:
            return all(b in s for b, s in zip(bits, self.slices))
        return tuple(bits) in self.relations

    def __contains__(self, r: MultiRelation | Relation) -> bool:
        if isinstance(r, Relation):
            return self.ma.m == 1 and self.contains_bits((r.bits,))
        return r.ma == self.ma and self.contains_bits(r.bits)

    def relations_of(self, i: int = 0) -> list[Relation]:
        a = self.ma.components[i]
        return [Relation(a, b) for b in sorted(self.slice_set(i))]

    def __repr__(self) -> str:
        return f"SubclassDef({self.name!r}, over={self.ma.name}, size={self.size})"


def parse_subclass(text: str, algebras: Mapping[str, Algebra], source: str = "<string>") -> SubclassDef:
    """Read a classical subclass file (``relation`` and two-column ``row`` lines)."""
    name = alg = None
    rels: list[int] = []
    facts: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "subclass":
                name = rest
            elif head == "algebra":
                if rest not in algebras:
                    raise AlgebraFormatError(f"unknown algebra {rest!r}", source, lineno)
                alg = algebras[rest]
            elif head == "fact":
                key, _, cite = rest.partition(":")
                facts[key.strip()] = cite.strip()
            elif head in ("relation", "row"):
                if alg is None:
                    raise AlgebraFormatError(f"'{head}' before 'algebra'", source, lineno)
                cells = rest.split("|") if head == "row" else [rest]
                rels.extend(alg.parse_bits(c.strip()) for c in cells)
            else:
                raise AlgebraFormatError(f"unknown directive {head!r}", source, lineno)
        except KeyError as exc:
            raise AlgebraFormatError(str(exc.args[0]), source, lineno) from None
    if name is None or alg is None:
        raise AlgebraFormatError("missing 'subclass' or 'algebra' line", source)
    sub = SubclassDef(name, MultiAlgebra.mono(alg), slices=(frozenset(rels),), facts=facts)
    sub.notes.append(f"{len(rels)} listed entries, {len(set(rels))} distinct relations")
    return sub


def closure_defects(a: Algebra, rels: Iterable[int]) -> list[str]:
    """Ways in which a relation set fails to be a subclass (⋄, ∩, converse)."""
    s = set(rels)
    out = []
    fmt = a.format_bits
    for r in sorted(s):
        if a.conv_bits(r) not in s:
            out.append(f"converse of {fmt(r)} missing")
        for t in sorted(s):
            c = a.comp_bits(r, t)
            if c not in s:
                out.append(f"{fmt(r)} ⋄ {fmt(t)} = {fmt(c)} missing")
            if r & t not in s:
                out.append(f"{fmt(r)} ∩ {fmt(t)} = {fmt(r & t)} missing")
    return out


def _repair_rcc8s(sub: SubclassDef) -> SubclassDef:
    a = sub.ma.components[0]
    rels = sub.slices[0]
    if 0 not in rels:
        missing = closure_defects(a, rels)
        rels = rels | {0}
        left = closure_defects(a, rels)
        sub.notes.append(
            "empty relation absent from the listing "
            f"({len(missing)} closure defects without it, {len(left)} with it); added"
        )
        sub = SubclassDef(sub.name, sub.ma, slices=(rels,), facts=sub.facts, notes=sub.notes)
    return sub


# RCC8 predicate subclasses and refinements ----------------------------------------


def _rcc8_predicates(a: Algebra) -> dict[str, Callable[[int], bool]]:
    b = {x: 1 << a.atom_index(x) for x in a.atoms}
    DC, EC, PO, TPP, NTPP, TPPI, NTPPI, EQ = (b[x] for x in ("DC", "EC", "PO", "TPP", "NTPP", "TPPI", "NTPPI", "EQ"))

    def has(r, x):
        return r & x == x

    def n_class(r):
        return not (r & PO) and bool(r & (TPP | NTPP)) and bool(r & (TPPI | NTPPI))

    extra = {r1 | EC | r2 | EQ for r1 in (0, DC) for r2 in (NTPP, NTPPI)}

    def np8(r):
        return n_class(r) or r in extra

    def p8(r):
        return not np8(r)

    def h8(r):
        return (
            p8(r)
            and (not has(r, NTPP | EQ) or has(r, TPP))
            and (not has(r, NTPPI | EQ) or has(r, TPPI))
        )

    def q8(r):
        return p8(r) and (not (has(r, EQ) and r & (TPP | NTPP | TPPI | NTPPI)) or has(r, PO))

    def c8(r):
        return p8(r) and (not (has(r, EC) and r & (TPP | NTPP | TPPI | NTPPI | EQ)) or has(r, PO))

    return {"N": n_class, "NP8": np8, "P8": p8, "H8": h8, "Q8": q8, "C8": c8}


def rcc8_refinement(a: Algebra, which: str, domain: Iterable[int]) -> Refinement:
    """``h_S`` for S among H8, Q8, C8: pick one preferred atom of a non-basic relation."""
    order = ["DC"]
    if which != "C8":
        order.append("EC")
    order.append("PO")
    if which == "C8":
        order += ["NTPP", "NTPPI"]
    order += ["TPP", "TPPI"]
    mapping = {}
    for r in domain:
        if r & (r - 1) == 0:
            mapping[r] = r
            continue
        mapping[r] = 0
        for name in order:
            bit = 1 << a.atom_index(name)
            if r & bit:
                mapping[r] = bit
                break
    return Refinement(f"h_{which}", a, mapping)


# multi-algebra builders -----------------------------------------------------------


def _pa_neighbour_table(pa: Algebra) -> list[int]:
    lt, eq, gt = (1 << pa.atom_index(x) for x in ("<", "=", ">"))
    table = [0] * pa.n
    table[pa.atom_index("<")] = lt | eq
    table[pa.atom_index("=")] = pa.full
    table[pa.atom_index(">")] = gt | eq
    return table


def build_tpc(m: int, pa: Algebra) -> MultiAlgebra:
    """Point algebra over ``m`` successive instants with neighbourhood projections."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if m == 1:
        return MultiAlgebra.mono(pa)
    near = Projection(pa, pa, _pa_neighbour_table(pa))
    free = Projection.constant_full(pa, pa)
    projs = {
        (i, j): near if abs(i - j) == 1 else free
        for i in range(m)
        for j in range(m)
        if i != j
    }
    return MultiAlgebra(f"TPC{m}", [pa] * m, projs)


def _fineness_closure(m: int, pairs: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    finer = set(pairs)
    for i, j in finer:
        if not (0 <= i < m and 0 <= j < m) or i == j:
            raise ValueError(f"bad fineness pair {i + 1} {j + 1}")
    changed = True
    while changed:
        changed = False
        for (i, j), (k, l) in list(product(finer, finer)):
            if j == k and (i, l) not in finer:
                if i == l:
                    raise ValueError("fineness order has a cycle")
                finer.add((i, l))
                changed = True
    if any((j, i) in finer for i, j in finer):
        raise ValueError("fineness order has a cycle")
    return finer


def build_spc(m: int, pa: Algebra, fineness: Iterable[tuple[int, int]] | None = None) -> MultiAlgebra:
    """Point algebra at ``m`` scales; ``(i, j)`` in ``fineness`` means scale i is finer than j.

    Without ``fineness`` the scales are totally ordered, 0 being the finest.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if m == 1:
        return MultiAlgebra.mono(pa)
    pairs = [(i, i + 1) for i in range(m - 1)] if fineness is None else list(fineness)
    finer = _fineness_closure(m, pairs)
    lt, eq, gt = (1 << pa.atom_index(x) for x in ("<", "=", ">"))
    up_tab = [0] * pa.n
    down_tab = [0] * pa.n
    up_tab[pa.atom_index("<")] = lt | eq
    up_tab[pa.atom_index("=")] = eq
    up_tab[pa.atom_index(">")] = eq | gt
    down_tab[pa.atom_index("<")] = lt
    down_tab[pa.atom_index("=")] = pa.full
    down_tab[pa.atom_index(">")] = gt
    up = Projection(pa, pa, up_tab)
    down = Projection(pa, pa, down_tab)
    free = Projection.constant_full(pa, pa)
    projs = {}
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if (i, j) in finer:
                projs[(i, j)] = up
            elif (j, i) in finer:
                projs[(i, j)] = down
            else:
                projs[(i, j)] = free
    return MultiAlgebra(f"SPC{m}", [pa] * m, projs)


def loose_integration(
    components: Sequence[Algebra],
    overlap: Mapping[tuple[int, int], Iterable[tuple[str, str]]],
    name: str = "loose",
) -> MultiAlgebra:
    """Projections from a co-realizability table of atom pairs.

    ``overlap[(i, j)]`` lists pairs ``(a, b)`` of atoms of components ``i``
    and ``j`` whose interpretations intersect.  Pairs of components without
    an entry in either direction are fully co-realizable.
    """
    m = len(components)
    table: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for (i, j), pairs in overlap.items():
        if not (0 <= i < m and 0 <= j < m) or i == j:
            raise ValueError(f"bad component pair {i + 1} {j + 1}")
        a, b = components[i], components[j]
        table[(i, j)] = {(a.atom_index(x), b.atom_index(y)) for x, y in pairs}
    for (i, j), pairs in list(table.items()):
        mirrored = {(y, x) for x, y in pairs}
        if (j, i) in table:
            if table[(j, i)] != mirrored:
                raise ValueError(f"overlap between components {i + 1} and {j + 1} is not symmetric")
        else:
            table[(j, i)] = mirrored
    projs = {}
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            a, b = components[i], components[j]
            if (i, j) not in table:
                projs[(i, j)] = Projection.constant_full(a, b)
                continue
            rows = [0] * a.n
            for x, y in table[(i, j)]:
                rows[x] |= 1 << y
            projs[(i, j)] = Projection(a, b, rows)
    return MultiAlgebra(name, components, projs)


# weakenings -----------------------------------------------------------------------


@dataclass(frozen=True)
class Weakening:
    name: str
    base: MultiAlgebra
    weak: MultiAlgebra
    tree: AntiTree
    replaced: tuple[tuple[int, int], ...]

    def describe(self) -> str:
        pairs = ", ".join(f"{i + 1}->{j + 1}" for i, j in self.replaced) or "none"
        return f"{self.name}: {self.base.name} with constant-full projections on {pairs}; anti-tree {self.tree.format()}"


# the catalog ----------------------------------------------------------------------

_TPC_RE = re.compile(r"^(TPC|SPC)(\d+)$")

PRODUCTS = {
    "RCC8s_x_PAs": ("STC", ("RCC8_s", "PA_s")),
    "H8_x_PA": ("STC", ("H8", "PA")),
    "Q8_x_PA": ("STC", ("Q8", "PA")),
    "C8_x_PA": ("STC", ("C8", "PA")),
}

PRODUCT_REFINEMENTS = {
    "H8_x_PA": ("h_H8", "h_max"),
    "Q8_x_PA": ("h_Q8", "h_max"),
    "C8_x_PA": ("h_C8", "h_max"),
}

RENZ_1999 = "Renz (1999), maximal tractable fragments of RCC8"

COMPLETENESS = {
    "STC": "Gerevini and Renz (2002); Cohen-Solal, Bouzid and Niveau (2017)",
    "PA": "Vilain and Kautz (1986); van Beek (1990)",
    "RCC8": "Renz and Nebel (1999)",
}


class Catalog:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.algebras: dict[str, Algebra] = {}
        self.multialgebras: dict[str, MultiAlgebra] = {}
        self.subclasses: dict[str, SubclassDef] = {}
        self.refinements: dict[str, Refinement] = {}
        self.completeness: dict[str, CompletenessAssumption] = {}
        self._load()

    # loading ------------------------------------------------------------------
    def _files(self, sub: str, suffix: str) -> list[Path]:
        d = self.root / sub
        return sorted(d.glob(f"*{suffix}")) if d.is_dir() else []

    def _load(self) -> None:
        for path in self._files("algebras", ".alg"):
            a = parse_algebra(path.read_text(encoding="utf-8"), str(path))
            self.algebras[a.name] = a
        for name in ("PA", "RCC8"):
            if name not in self.algebras:
                raise CatalogError(f"catalog at {self.root} lacks the {name} algebra")
        for a in self.algebras.values():
            self.multialgebras[a.name] = MultiAlgebra.mono(a)
        for path in self._files("multialgebras", ".ma"):
            ma = parse_multialgebra(path.read_text(encoding="utf-8"), self.algebras, str(path))
            self.multialgebras[ma.name] = ma
        for path in self._files("refinements", ".ref"):
            h = parse_refinement(path.read_text(encoding="utf-8"), self.algebras, str(path))
            self.refinements[h.name] = h
        for path in self._files("subclasses", ".sub"):
            sub = parse_subclass(path.read_text(encoding="utf-8"), self.algebras, str(path))
            if sub.name == "RCC8_s":
                sub = _repair_rcc8s(sub)
            self.subclasses[sub.name] = sub

        pa, rcc8 = self.algebras["PA"], self.algebras["RCC8"]
        for a in (pa, rcc8):
            self.subclasses[a.name] = SubclassDef(
                a.name, MultiAlgebra.mono(a), slices=(frozenset(range(1 << a.n)),)
            )
        preds = _rcc8_predicates(rcc8)
        for name, pred in preds.items():
            rels = frozenset(r for r in range(1 << rcc8.n) if pred(r))
            self.subclasses[name] = SubclassDef(name, MultiAlgebra.mono(rcc8), slices=(rels,))
        for name in ("H8", "Q8", "C8"):
            h = rcc8_refinement(rcc8, name, self.subclasses[name].slices[0])
            self.refinements[h.name] = h
            self.subclasses[name].facts[f"composition-stable-through:{h.name}"] = RENZ_1999
        if "h_max" in self.refinements:
            self.subclasses["PA"].facts["composition-stable-through:h_max"] = RENZ_1999
        self.refinements["id_PA"] = Refinement.identity(pa)
        self.refinements["id_RCC8"] = Refinement.identity(rcc8)

        for name, (ma_name, parts) in PRODUCTS.items():
            if ma_name not in self.multialgebras or any(p not in self.subclasses for p in parts):
                continue
            ma = self.multialgebras[ma_name]
            slices = tuple(self.subclasses[p].slices[0] for p in parts)
            facts = {}
            for i, p in enumerate(parts):
                for key, cite in self.subclasses[p].facts.items():
                    facts[f"slice{i + 1}:{key}"] = cite
            self.subclasses[name] = SubclassDef(name, ma, slices=slices, facts=facts, slice_names=parts)

        for ma_name, cite in COMPLETENESS.items():
            if ma_name in self.multialgebras:
                self.completeness[ma_name] = CompletenessAssumption(ma_name, cite)

    # lookup -------------------------------------------------------------------
    def algebra(self, name: str) -> Algebra:
        try:
            return self.algebras[name]
        except KeyError:
            raise CatalogError(f"unknown algebra {name!r}") from None

    def multialgebra(self, name: str) -> MultiAlgebra:
        if name in self.multialgebras:
            return self.multialgebras[name]
        mt = _TPC_RE.match(name)
        if mt:
            m = int(mt.group(2))
            builder = build_tpc if mt.group(1) == "TPC" else build_spc
            ma = builder(m, self.algebras["PA"])
            if m > 1:
                self.multialgebras[name] = ma
            return ma
        raise CatalogError(f"unknown multi-algebra {name!r}")

    def subclass(self, name: str) -> SubclassDef:
        try:
            return self.subclasses[name]
        except KeyError:
            raise CatalogError(f"unknown subclass {name!r}") from None

    def refinement(self, name: str) -> Refinement:
        try:
            return self.refinements[name]
        except KeyError:
            raise CatalogError(f"unknown refinement {name!r}") from None

    def multi_refinement(self, sub: SubclassDef, names: Sequence[str] | None = None) -> MultiRefinement:
        """Multi-refinement for a product subclass (default: its registered one)."""
        if names is None:
            if sub.name not in PRODUCT_REFINEMENTS:
                raise CatalogError(f"no registered multi-refinement for {sub.name}")
            names = PRODUCT_REFINEMENTS[sub.name]
        return MultiRefinement(sub.ma, tuple(self.refinement(n) for n in names))

    def completeness_for(self, ma: MultiAlgebra) -> CompletenessAssumption | None:
        c = self.completeness.get(ma.name)
        if c is not None and self.multialgebras.get(ma.name) == ma:
            return c
        return None

    def weakening(self, key: str) -> Weakening:
        """Resolve ``stc-weak-pa2rcc`` or ``const:SRC>DST[,SRC>DST...][@MA]``."""
        if key == "stc-weak-pa2rcc":
            return self._weaken_const(self.multialgebra("STC"), [("PA", "RCC8")], key)
        if key.startswith("const:"):
            body = key[len("const:"):]
            body, _, ma_name = body.partition("@")
            ma = self.multialgebra(ma_name or "STC")
            pairs = []
            for item in body.split(","):
                src, sep, dst = item.partition(">")
                if not sep:
                    raise CatalogError(f"bad weakening item {item!r}")
                pairs.append((src.strip(), dst.strip()))
            return self._weaken_const(ma, pairs, key)
        raise CatalogError(f"unknown weakening {key!r}")

    def _component(self, ma: MultiAlgebra, token: str) -> int:
        if token.isdigit():
            i = int(token) - 1
            if 0 <= i < ma.m:
                return i
        else:
            hits = [i for i, a in enumerate(ma.components) if a.name == token]
            if len(hits) == 1:
                return hits[0]
        raise CatalogError(f"cannot resolve component {token!r} of {ma.name}")

    def _weaken_const(self, ma: MultiAlgebra, pairs, name: str) -> Weakening:
        idx = [(self._component(ma, s), self._component(ma, d)) for s, d in pairs]
        repl = {
            (i, j): Projection.constant_full(ma.components[i], ma.components[j]) for i, j in idx
        }
        weak = weaken(ma, repl, name=f"{ma.name}~{name}")
        trees = [t for t in plenary_antitrees(ma) if is_tree_weakening(ma, weak, t)]
        if not trees:
            raise CatalogError(f"{name} is not a tree weakening of {ma.name}")
        return Weakening(name, ma, weak, trees[0], tuple(sorted(idx)))

    def names(self) -> dict[str, list[str]]:
        return {
            "algebras": sorted(self.algebras),
            "multialgebras": sorted(self.multialgebras) + ["TPC<m>", "SPC<m>"],
            "subclasses": sorted(self.subclasses),
            "refinements": sorted(self.refinements),
            "weakenings": ["stc-weak-pa2rcc", "const:SRC>DST[@MA]"],
        }


@functools.lru_cache(maxsize=4)
def _load_cached(root: str) -> Catalog:
    return Catalog(Path(root))


def load_catalog(root: str | Path | None = None) -> Catalog:
    return _load_cached(str(Path(root) if root is not None else data_dir()))
