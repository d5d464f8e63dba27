"""Exact finite-group arithmetic, presentations, and homomorphism enumeration.

A group is an immutable multiplication table over a canonically ordered
element list; all downstream machinery (graph-of-groups solvers, torsor
patching) manipulates element *indices* into these tables, so composition
stays exact and serialization deterministic.  Multiplication composes like
functions: for permutation groups ``mul(a, b)`` means "apply b first, then a".

Practical ceiling is around order 200: construction checks the axioms on
every triple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class GroupAxiomError(ValueError):
    """An explicit multiplication table violates the group axioms."""


class FiniteGroup:
    """A finite group given by labeled elements and a full Cayley table."""

    __slots__ = ("name", "elements", "table", "identity", "inverse", "_index")

    def __init__(self, name: str, elements: Sequence[str], table: Sequence[Sequence[int]]):
        elements = tuple(str(e) for e in elements)
        n = len(elements)
        if n == 0:
            raise GroupAxiomError("a group needs at least one element")
        if len(set(elements)) != n:
            raise GroupAxiomError(f"duplicate element labels in {name!r}")
        rows = tuple(tuple(int(x) for x in row) for row in table)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise GroupAxiomError(f"multiplication table of {name!r} is not {n}x{n}")
        for row in rows:
            for x in row:
                if not 0 <= x < n:
                    raise GroupAxiomError(f"table entry {x} out of range in {name!r}")

        identity = None
        for e in range(n):
            if all(rows[e][a] == a and rows[a][e] == a for a in range(n)):
                identity = e
                break
        if identity is None:
            raise GroupAxiomError(f"{name!r} has no two-sided identity")

        inverse = [None] * n
        for a in range(n):
            for b in range(n):
                if rows[a][b] == identity and rows[b][a] == identity:
                    inverse[a] = b
                    break
            if inverse[a] is None:
                raise GroupAxiomError(f"element {elements[a]!r} of {name!r} has no inverse")

        for a in range(n):
            for b in range(n):
                ab = rows[a][b]
                row_ab = rows[ab]
                row_b = rows[b]
                for c in range(n):
                    if row_ab[c] != rows[a][row_b[c]]:
                        raise GroupAxiomError(
                            f"associativity fails in {name!r} on triple "
                            f"({elements[a]}, {elements[b]}, {elements[c]})"
                        )

        self.name = name
        self.elements = elements
        self.table = rows
        self.identity = identity
        self.inverse = tuple(inverse)
        self._index = {e: i for i, e in enumerate(elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of {self.name}") from None

    def label(self, a: int) -> str:
        return self.elements[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse[a], -k)
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][a]
        return acc

    def element_order(self, a: int) -> int:
        acc, k = a, 1
        while acc != self.identity:
            acc = self.table[acc][a]
            k += 1
        return k

    def conjugate(self, g: int, a: int) -> int:
        """g a g^-1."""
        return self.table[self.table[g][a]][self.inverse[g]]

    def is_abelian(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(self.order)
        )

    def exponent(self) -> int:
        exp = 1
        for a in range(self.order):
            k = self.element_order(a)
            exp = exp * k // _gcd(exp, k)
        return exp

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.elements == other.elements and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.elements, self.table))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    """Cyclic group of order n, written additively mod n."""
    if n < 1:
        raise ValueError(f"cyclic group order must be >= 1, got {n}")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(name or f"C{n}", [str(i) for i in range(n)], table)


def symmetric(n: int, name: str | None = None) -> FiniteGroup:
    """Symmetric group on {0,..,n-1}; elements are image strings in lex order."""
    if n < 1:
        raise ValueError(f"symmetric group degree must be >= 1, got {n}")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(a[b[i]] for i in range(n))] for b in perms]
        for a in perms
    ]
    labels = ["".join(str(i) for i in p) for p in perms]
    return FiniteGroup(name or f"S{n}", labels, table)


def direct_product(*factors: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Direct product with elements ordered lexicographically by factor."""
    if not factors:
        raise ValueError("direct product needs at least one factor")
    tuples = list(itertools.product(*[range(g.order) for g in factors]))
    index = {t: i for i, t in enumerate(tuples)}
    table = [
        [
            index[tuple(g.table[a[k]][b[k]] for k, g in enumerate(factors))]
            for b in tuples
        ]
        for a in tuples
    ]
    labels = [
        "(" + ",".join(g.label(a[k]) for k, g in enumerate(factors)) + ")"
        for a in tuples
    ]
    return FiniteGroup(name or "x".join(g.name for g in factors), labels, table)


def from_table(elements: Sequence[str], table: Sequence[Sequence[str]], name: str = "G") -> FiniteGroup:
    """Build a group from a label-valued multiplication table (validated)."""
    elems = [str(e) for e in elements]
    lookup = {e: i for i, e in enumerate(elems)}
    if len(lookup) != len(elems):
        raise GroupAxiomError(f"duplicate element labels in {name!r}")
    rows = []
    for row in table:
        idx_row = []
        for entry in row:
            entry = str(entry)
            if entry not in lookup:
                raise GroupAxiomError(f"table entry {entry!r} is not a declared element of {name!r}")
            idx_row.append(lookup[entry])
        rows.append(idx_row)
    return FiniteGroup(name, elems, rows)


def make_group(descriptor: Mapping, name: str = "G") -> FiniteGroup:
    """Build a group from a structured descriptor.

    Accepted shapes: ``{"cyclic": n}``, ``{"symmetric": n}``,
    ``{"product": [descriptor, ...]}``, and
    ``{"table": {"elements": [...], "table": [[...]]}}``.
    """
    if not isinstance(descriptor, Mapping) or len(descriptor) != 1:
        raise ValueError(f"group descriptor must have exactly one key, got {descriptor!r}")
    kind, value = next(iter(descriptor.items()))
    if kind == "cyclic":
        return cyclic(int(value), name=name)
    if kind == "symmetric":
        return symmetric(int(value), name=name)
    if kind == "product":
        factors = [make_group(d, name=f"{name}.{k}") for k, d in enumerate(value)]
        return direct_product(*factors, name=name)
    if kind == "table":
        return from_table(value["elements"], value["table"], name=name)
    raise ValueError(f"unknown group descriptor kind {kind!r}")


# ---------------------------------------------------------------------------
# Presentations and words


def word(tokens: Iterable[str], generators: Sequence[str]) -> tuple[int, ...]:
    """Translate tokens like "x", "x^-1", "x^3" into a signed 1-based word."""
    index = {g: i + 1 for i, g in enumerate(generators)}
    out: list[int] = []
    for tok in tokens:
        if "^" in tok:
            sym, _, exp = tok.partition("^")
            k = int(exp)
        else:
            sym, k = tok, 1
        if sym not in index:
            raise ValueError(f"undeclared generator {sym!r} in word")
        letter = index[sym] if k >= 0 else -index[sym]
        out.extend([letter] * abs(k))
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator symbols and relator words.

    A relator is a tuple of nonzero signed integers: ``i`` means generator
    ``i-1`` and ``-i`` its inverse.  Every relator evaluates to the identity
    in the presented group.
    """

    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator symbols")
        n = len(self.generators)
        for rel in self.relators:
            for letter in rel:
                if letter == 0 or abs(letter) > n:
                    raise ValueError(f"relator letter {letter} refers to no declared generator")

    @classmethod
    def from_words(cls, generators: Sequence[str], words: Iterable[Iterable[str]]) -> "Presentation":
        gens = tuple(generators)
        rels = tuple(word(w, gens) for w in words)
        return cls(gens, rels)

    def evaluate(self, rel: tuple[int, ...], images: Sequence[int], target: FiniteGroup) -> int:
        """Evaluate a word at given generator images."""
        table = target.table
        inv = target.inverse
        acc = target.identity
        for letter in rel:
            g = images[letter - 1] if letter > 0 else inv[images[-letter - 1]]
            acc = table[acc][g]
        return acc


def enumerate_homs(source: Presentation, target: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    """All maps generator -> target element under which every relator dies.

    Exhaustive over ``|target|^r`` candidates, pruned by checking each
    relator as soon as the last generator it mentions has been assigned.
    Output is in lexicographic order of the image tuples, so it is
    deterministic and canonical.
    """
    gens = source.generators
    r = len(gens)
    n = target.order
    if r == 0:
        for rel in source.relators:
            if source.evaluate(rel, (), target) != target.identity:
                return ()
        return ((),)

    buckets: list[list[tuple[int, ...]]] = [[] for _ in range(r)]
    for rel in source.relators:
        if not rel:
            continue
        buckets[max(abs(letter) for letter in rel) - 1].append(rel)

    table = target.table
    inv = target.inverse
    identity = target.identity
    images = [0] * r
    out: list[tuple[int, ...]] = []

    def extend(depth: int) -> None:
        if depth == r:
            out.append(tuple(images))
            return
        bucket = buckets[depth]
        for cand in range(n):
            images[depth] = cand
            ok = True
            for rel in bucket:
                acc = identity
                for letter in rel:
                    g = images[letter - 1] if letter > 0 else inv[images[-letter - 1]]
                    acc = table[acc][g]
                if acc != identity:
                    ok = False
                    break
            if ok:
                extend(depth + 1)

    extend(0)
    return tuple(out)


def group_presentation(group: FiniteGroup, prefix: str = "g") -> Presentation:
    """Present a group on its full element set with all table relations.

    Generator ``prefix:<label>`` stands for the element with that label; the
    relators are one word ``a b (ab)^-1`` per pair, so homomorphisms from the
    presented group to any target are exactly the group homomorphisms.
    """
    n = group.order
    gens = tuple(f"{prefix}:{lbl}" for lbl in group.elements)
    rels = []
    for a in range(n):
        for b in range(n):
            rels.append((a + 1, b + 1, -(group.table[a][b] + 1)))
    return Presentation(gens, tuple(rels))


def hom_set(source: FiniteGroup, target: FiniteGroup) -> tuple["GroupHom", ...]:
    """All homomorphisms source -> target, canonically ordered."""
    pres = group_presentation(source)
    return tuple(
        GroupHom(source, target, images) for images in enumerate_homs(pres, target)
    )


# ---------------------------------------------------------------------------
# Homomorphisms


class GroupHom:
    """A homomorphism between finite groups as an element-index table."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping: Sequence[int]):
        mapping = tuple(int(x) for x in mapping)
        if len(mapping) != source.order:
            raise ValueError("mapping length does not match source order")
        for x in mapping:
            if not 0 <= x < target.order:
                raise ValueError(f"image index {x} not in target")
        if mapping[source.identity] != target.identity:
            raise ValueError("map does not send identity to identity")
        for a in range(source.order):
            for b in range(source.order):
                if mapping[source.table[a][b]] != target.table[mapping[a]][mapping[b]]:
                    raise ValueError(
                        f"not multiplicative on ({source.label(a)}, {source.label(b)})"
                    )
        self.source = source
        self.target = target
        self.mapping = mapping

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == self.source.order

    def is_trivial(self) -> bool:
        return all(x == self.target.identity for x in self.mapping)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def __hash__(self) -> int:
        return hash(self.mapping)

    def __repr__(self) -> str:
        pairs = ", ".join(
            f"{self.source.label(a)}->{self.target.label(self.mapping[a])}"
            for a in range(self.source.order)
        )
        return f"GroupHom({pairs})"

    @classmethod
    def trivial(cls, source: FiniteGroup, target: FiniteGroup) -> "GroupHom":
        return cls(source, target, [target.identity] * source.order)

    @classmethod
    def identity_hom(cls, group: FiniteGroup) -> "GroupHom":
        return cls(group, group, range(group.order))


def compose(outer: GroupHom, inner: GroupHom) -> GroupHom:
    """outer . inner (inner applied first)."""
    if inner.target != outer.source:
        raise ValueError("compose: inner.target must equal outer.source")
    return GroupHom(inner.source, outer.target, [outer.mapping[x] for x in inner.mapping])


def restrict_hom(f: GroupHom, mono: GroupHom) -> GroupHom:
    """Restrict f along an injective map into its source (f . mono)."""
    if mono.target != f.source:
        raise ValueError("restrict_hom: mono must land in the source of f")
    if not mono.is_injective():
        raise ValueError("restrict_hom: mono is not injective")
    return compose(f, mono)


def conjugate_hom(f: GroupHom, g: int) -> GroupHom:
    """x -> g f(x) g^-1 for g an element index of the target."""
    t = f.target
    if not 0 <= g < t.order:
        raise ValueError(f"{g} is not an element index of {t.name}")
    return GroupHom(f.source, t, [t.conjugate(g, x) for x in f.mapping])
