"""Permutation symmetries of a matrix.

A permutation ``p`` acts on coordinates by moving the entry in slot ``j`` to
slot ``p(j)``; its matrix has ``U[p(j)][j] = 1``, so ``c' = U c`` satisfies
``c'[p(j)] = c[j]`` and ``perm_matrix(p * q) == perm_matrix(p) @ perm_matrix(q)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .core import Matrix, is_exact, rank
from .spectral import MAX_DIM, RANK_TOL, SpectralReport

__all__ = [
    "Perm",
    "SymmetryGroup",
    "NotAGroupError",
    "perm_matrix",
    "invariance_group",
    "label_group",
    "check_eigenvector_symmetry",
    "is_invariant",
]


class NotAGroupError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation of 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def _trusted(cls, images: tuple) -> "Perm":
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls._trusted(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles) -> "Perm":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        """Composition: ``(self * other)(i) == self(other(i))``."""
        mine = self.images
        return Perm._trusted(tuple([mine[j] for j in other.images]))

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(self.n))

    def order(self) -> int:
        k, p = 1, self
        while not p.is_identity():
            p = p * self
            k += 1
        return k

    def one_line(self) -> str:
        """One-line notation, 1-based: the images of 1..n."""
        return "[" + " ".join(str(i + 1) for i in self.images) + "]"

    def cycles(self) -> str:
        seen, parts = set(), []
        for start in range(self.n):
            if start in seen or self.images[start] == start:
                seen.add(start)
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(str(i + 1))
                i = self.images[i]
            parts.append("(" + " ".join(cyc) + ")")
        return "".join(parts) or "()"


def perm_matrix(p: Perm) -> Matrix:
    n = p.n
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j, i in enumerate(p.images):
        rows[i][j] = Fraction(1)
    return Matrix(rows)


def is_invariant(m: Matrix, p: Perm) -> bool:
    """Exact test of ``U^t m U == m`` for ``U = perm_matrix(p)``."""
    U = perm_matrix(p)
    return U.T @ m @ U == m


def _fast_invariant(rows, p) -> bool:
    # entrywise form of U^t m U == m: (U^t m U)[i][j] = m[p(i)][p(j)]
    n = len(rows)
    for i in range(n):
        ri, rpi = rows[i], rows[p[i]]
        for j in range(n):
            if rpi[p[j]] != ri[j]:
                return False
    return True


def _closure(gens: list[Perm], n: int) -> set[Perm]:
    e = Perm.identity(n)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def _generators(elements: list[Perm], n: int) -> list[Perm]:
    """Small generating set: a single element when cyclic, else greedy by element order."""
    order = len(elements)
    by_order = sorted(elements, key=lambda p: (-p.order(), p.images))
    if order == 1:
        return []
    if by_order[0].order() == order:
        return [by_order[0]]
    if order == math.factorial(n):
        # an n-cycle and an adjacent transposition generate S_n
        return [Perm._trusted(tuple(range(1, n)) + (0,)), Perm.from_cycles(n, [0, 1])]
    if order <= 720:
        for a, b in itertools.combinations(by_order, 2):
            if len(_closure([a, b], n)) == order:
                return [a, b]
    gens, span = [], {Perm.identity(n)}
    for p in by_order:
        if p not in span:
            gens.append(p)
            span = _closure(gens, n)
            if len(span) == order:
                break
    # drop redundant generators
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if rest and len(_closure(rest, n)) == order:
            gens = rest
    return gens


def _verify_group(elements: list[Perm], gens: list[Perm], n: int):
    elems = set(elements)
    if Perm.identity(n) not in elems:
        raise NotAGroupError("not closed: identity missing")
    for a in elements:
        if a.inverse() not in elems:
            raise NotAGroupError("not closed under inverses")
        for g in gens:
            if a * g not in elems:
                raise NotAGroupError("not closed under composition")
    if _closure(gens, n) != elems:
        raise NotAGroupError("not closed: generators do not produce the set")


@dataclass(frozen=True)
class SymmetryGroup:
    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...]
    label: str
    degree: int

    @property
    def order(self) -> int:
        return len(self.elements)

    def matrices(self) -> list[Matrix]:
        return [perm_matrix(p) for p in self.elements]

    @cached_property
    def cayley_table(self) -> tuple[tuple[int, ...], ...]:
        """``table[i][j]`` is the index of ``elements[i] * elements[j]``."""
        index = {p: k for k, p in enumerate(self.elements)}
        return tuple(tuple(index[a * b] for b in self.elements) for a in self.elements)

    def is_abelian(self) -> bool:
        return all(a * g == g * a for a in self.elements for g in self.generators)


def _is_abelian(elements) -> bool:
    return all(a * b == b * a for a, b in itertools.combinations(elements, 2))


def label_group(elements) -> str:
    """Name of the isomorphism type of a small permutation group.

    Orders up to 8 are identified from abelian-ness and element orders.
    Larger groups are labelled ``S<n>`` when they are the full symmetric
    group on their points and ``G<order>`` otherwise.
    """
    elements = list(elements)
    if not elements:
        raise NotAGroupError("not closed: empty set")
    n = elements[0].n
    elems = set(elements)
    if Perm.identity(n) not in elems or any(a * b not in elems for a in elements for b in elements):
        raise NotAGroupError("not closed")
    order = len(elements)
    orders = sorted(p.order() for p in elements)
    abelian = _is_abelian(elements)
    if order == 1:
        return "trivial"
    if order in (2, 3, 5, 7):
        return f"C{order}"
    if order == 4:
        return "C4" if 4 in orders else "C2xC2"
    if order == 6:
        return "C6" if abelian else "S3"
    if order == 8:
        if abelian:
            if 8 in orders:
                return "C8"
            return "C4xC2" if 4 in orders else "C2xC2xC2"
        return "D4" if orders.count(2) == 5 else "Q8"
    if order == math.factorial(n):
        return f"S{n}"
    return f"G{order}"


def invariance_group(m: Matrix) -> SymmetryGroup:
    """All permutations ``p`` with ``U^t m U == m``, exactly."""
    n = m.n
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    rows = m.rows
    found = [Perm._trusted(p) for p in itertools.permutations(range(n)) if _fast_invariant(rows, p)]
    found.sort()
    gens = _generators(found, n)
    _verify_group(found, gens, n)
    # the set is generated by gens, so checking gens in matrix form covers it
    for p in gens:
        if not is_invariant(m, p):
            raise AssertionError(f"entrywise and matrix invariance tests disagree at {p}")
    if len(found) <= 8:
        label = label_group(found)
    elif len(found) == math.factorial(n):
        label = f"S{n}"
    else:
        label = f"G{len(found)}"
    return SymmetryGroup(tuple(found), tuple(gens), label, n)


def _in_span(basis, v, exact: bool) -> bool:
    if exact:
        return rank([list(b) for b in basis] + [list(v)]) == rank([list(b) for b in basis])
    vs = [list(map(complex, b)) for b in basis] + [list(map(complex, v))]
    scale = max(max(abs(c) for c in w) for w in vs)
    tol = RANK_TOL * max(scale, 1e-300)
    return rank(vs, tol) == rank(vs[:-1], tol)


def check_eigenvector_symmetry(m: Matrix, g: SymmetryGroup, report: SpectralReport) -> dict:
    """For each eigenvalue, whether every group element maps its eigenspace into itself."""
    out = {}
    for e in report.eigenvalues:
        exact = e.is_exact and all(is_exact(x) for v in e.eigenspace for x in v)
        ok = True
        for p in g.elements:
            U = perm_matrix(p)
            for v in e.eigenspace:
                if not _in_span(e.eigenspace, U.apply(v), exact):
                    ok = False
                    break
            if not ok:
                break
        out[e.value] = ok
    return out
