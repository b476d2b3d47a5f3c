"""Bruhat order, Schubert singularity patterns, and the stratification
catalog for complete flags of a 3-dimensional space.

Permutations are one-line tuples on {1..n}.  The Bruhat comparison uses
rank matrices: v <= w iff every northwest rank of v dominates that of w.
Cells have dimension equal to the inversion count, closures are downward
Bruhat sets, and a Schubert variety is singular exactly when the one-line
word contains one of the two four-letter patterns below.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import SizeMismatch, UnknownLabel


class Permutation:
    __slots__ = ("word",)

    def __init__(self, word):
        word = tuple(int(v) for v in word)
        n = len(word)
        if n < 1 or sorted(word) != list(range(1, n + 1)):
            raise SizeMismatch(f"{word} is not a permutation of 1..{n}")
        self.word = word

    @property
    def n(self) -> int:
        return len(self.word)

    def __call__(self, a: int) -> int:
        return self.word[a - 1]

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def __repr__(self):
        return "".join(str(v) for v in self.word) if self.n < 10 else str(self.word)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        if self.n != other.n:
            raise SizeMismatch("composition of permutations of different sizes")
        return Permutation(tuple(self.word[other.word[a] - 1] for a in range(self.n)))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(range(1, n + 1))

    @staticmethod
    def longest(n: int) -> "Permutation":
        return Permutation(range(n, 0, -1))


def length(w: Permutation) -> int:
    """Inversion count; the dimension of the Schubert cell."""
    word = w.word
    return sum(
        1
        for a in range(len(word))
        for b in range(a + 1, len(word))
        if word[a] > word[b]
    )


def _rank_table(w: Permutation) -> list[list[int]]:
    n = w.n
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            table[i][j] = table[i - 1][j] + (1 if w.word[i - 1] <= j else 0)
    return table


def bruhat_leq(v: Permutation, w: Permutation) -> bool:
    """v <= w in Bruhat order, decided by rank-matrix domination."""
    if v.n != w.n:
        raise SizeMismatch("Bruhat comparison of different sizes")
    rv, rw = _rank_table(v), _rank_table(w)
    n = v.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if rv[i][j] < rw[i][j]:
                return False
    return True


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in permutations(range(1, n + 1))]


def schubert_closure(w: Permutation) -> set[Permutation]:
    """The Zariski closure of the cell: all v below w."""
    return {v for v in all_permutations(w.n) if bruhat_leq(v, w)}


def covering_relations(n: int) -> list[tuple[Permutation, Permutation]]:
    """Pairs (v, w) with v < w and nothing strictly between."""
    perms = all_permutations(n)
    out = []
    for v in perms:
        for w in perms:
            if v == w or not bruhat_leq(v, w):
                continue
            if length(w) != length(v) + 1:
                # covers in Bruhat order always raise length by one; the
                # length filter keeps the scan cheap and the check honest
                continue
            if any(
                u != v and u != w and bruhat_leq(v, u) and bruhat_leq(u, w)
                for u in perms
            ):
                continue
            out.append((v, w))
    return sorted(out, key=lambda p: (p[0].word, p[1].word))


def incomparable_pairs(n: int) -> list[tuple[Permutation, Permutation]]:
    perms = all_permutations(n)
    out = []
    for i, v in enumerate(perms):
        for w in perms[i + 1:]:
            if not bruhat_leq(v, w) and not bruhat_leq(w, v):
                out.append(tuple(sorted((v, w), key=lambda p: p.word)))
    return sorted(out, key=lambda p: (p[0].word, p[1].word))


def is_singular(w: Permutation):
    """Singularity of the Schubert variety, by the positional criterion:
    positions i<j<k<l with t_k<t_l<t_i<t_j or t_l<t_j<t_k<t_i.

    Returns (verdict, witness positions or None)."""
    t = w.word
    for i, j, k, l in combinations(range(len(t)), 4):
        if t[k] < t[l] < t[i] < t[j]:
            return True, (i + 1, j + 1, k + 1, l + 1)
        if t[l] < t[j] < t[k] < t[i]:
            return True, (i + 1, j + 1, k + 1, l + 1)
    return False, None


# ---------------------------------------------------------------------------
# the stratification catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    label: str
    support: str  # open-cell label
    divisor: str  # description of the twist defining the sheaf
    h10: int      # holomorphic 1-form count of the ambient stratum


@dataclass
class StrataCatalog:
    cell_of: dict  # cell label -> Permutation
    tower: list    # list of (stratum label, set of cell labels, dimension)
    generators: list
    codim_one_nested: bool = True
    affine_complements: bool = True

    def generator(self, label: str) -> Generator:
        for g in self.generators:
            if g.label == label:
                return g
        raise UnknownLabel(f"no generator labeled {label!r}")


def flag3_catalog() -> StrataCatalog:
    """Cells, strata tower, and the six generators for complete flags of a
    3-dimensional space."""
    words = {
        "C1": (3, 2, 1),
        "C2": (3, 1, 2),
        "C3": (2, 3, 1),
        "C4": (1, 3, 2),
        "C5": (2, 1, 3),
        "C6": (1, 2, 3),
    }
    cell_of = {k: Permutation(v) for k, v in words.items()}
    tower = [
        ("Z0", {"C1", "C2", "C3", "C4", "C5", "C6"}, 3),
        ("Z1", {"C2", "C3", "C4", "C5", "C6"}, 2),
        ("Z2", {"C4", "C5", "C6"}, 1),
        ("Z3", {"C6"}, 0),
    ]
    generators = [
        Generator("L1", "C1", "O_Z0(-C2-C3)", 0),
        Generator("L2", "C2", "O_Z1(-C3)", 0),
        Generator("L3", "C3", "O_Z1(-C2)", 0),
        Generator("L4", "C4", "O_Z2(-C5)", 0),
        Generator("L5", "C5", "O_Z2(-C4)", 0),
        Generator("L6", "C6", "skyscraper", 0),
    ]
    return StrataCatalog(cell_of, tower, generators)


@dataclass
class VanishingVerdict:
    vanishes: bool
    reason: str


def hom_vanishing_verdict(catalog: StrataCatalog, r: str, s: str) -> VanishingVerdict:
    """Why morphisms from one generator to the twist of another vanish."""
    gr = catalog.generator(r)
    gs = catalog.generator(s)
    if gr.support != gs.support:
        return VanishingVerdict(True, "disjoint-support")
    if gs.h10 == 0:
        return VanishingVerdict(True, "hodge-vanishing")
    return VanishingVerdict(False, f"h10={gs.h10} on the support stratum")


@dataclass
class UniquenessReport:
    at_most_one: bool
    conditions: list  # (name, ok, detail)


def uniqueness_verdict(catalog: StrataCatalog) -> UniquenessReport:
    """At most one gauge field on any complex built from the generators,
    provided every pairwise morphism space vanishes and the tower
    hypotheses hold."""
    conditions = []
    conditions.append(
        (
            "codimension-one-nesting",
            catalog.codim_one_nested,
            "each stratum is a divisor in the previous one",
        )
    )
    conditions.append(
        (
            "affine-complements",
            catalog.affine_complements,
            "successive complements are affine",
        )
    )
    dims = [d for _, _, d in catalog.tower]
    monotone = all(a - 1 == b for a, b in zip(dims, dims[1:]))
    conditions.append(
        ("dimension-drop-by-one", monotone, f"tower dimensions {dims}")
    )
    supports = [g.support for g in catalog.generators]
    disjoint = len(set(supports)) == len(supports)
    conditions.append(
        ("pairwise-disjoint-supports", disjoint, f"supports {supports}")
    )
    failures = []
    for g in catalog.generators:
        for h in catalog.generators:
            verdict = hom_vanishing_verdict(catalog, g.label, h.label)
            if not verdict.vanishes:
                failures.append((g.label, h.label, verdict.reason))
    conditions.append(
        (
            "all-hom-spaces-vanish",
            not failures,
            "all pairs vanish" if not failures else f"failures: {failures}",
        )
    )
    ok = all(c[1] for c in conditions)
    return UniquenessReport(ok, conditions)
