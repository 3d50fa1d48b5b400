"""Finite and shell-enumerable group arithmetic.

Finite groups are dense multiplication tables over integer element ids
(canonical order = construction order).  Free products of finite cyclic
groups are enumerable through reduced syllable words with the word metric
for the generating set {factor generators and their inverses}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class GroupError(ValueError):
    """Invalid group data: broken table, bad homomorphism, bad descriptor."""


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``mul[a, b]`` is the id of the product a*b.  Construction validates the
    identity/inverse laws, the Latin-square property and full associativity.
    Instances are immutable after construction.
    """

    def __init__(self, mul, label: str = "G", names=None, validate: bool = True):
        mul = np.asarray(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise GroupError("multiplication table must be square")
        self.mul = mul
        self.order = mul.shape[0]
        self.label = label
        if validate:
            self._validate()
        self.identity = self._find_identity()
        self.inv = self._build_inverses()
        if names is None:
            names = [f"g{i}" for i in range(self.order)]
        if len(names) != self.order:
            raise GroupError("names length mismatch")
        self.names = list(names)
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    def _validate(self):
        n = self.order
        mul = self.mul
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("table entries out of range")
        for i in range(n):
            if len(set(mul[i])) != n or len(set(mul[:, i])) != n:
                raise GroupError("table is not a Latin square")
        # associativity: mul[mul[a,b],c] == mul[a,mul[b,c]] for all triples
        lhs = mul[mul]          # [a,b,c] = mul[mul[a,b], c]
        rhs = mul[:, mul]       # [a,b,c] = mul[a, mul[b,c]]
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)
            raise GroupError(f"non-associative table, first violation {tuple(bad[0])}")

    def _find_identity(self) -> int:
        n = self.order
        for e in range(n):
            if np.array_equal(self.mul[e], np.arange(n)) and np.array_equal(
                self.mul[:, e], np.arange(n)
            ):
                return e
        raise GroupError("no identity element")

    def _build_inverses(self) -> np.ndarray:
        inv = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul == self.identity)
        inv[rows] = cols
        for a in range(self.order):
            if self.mul[inv[a], a] != self.identity:
                raise GroupError("left and right inverses disagree")
        return inv

    # -- basic arithmetic ---------------------------------------------------

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def invert(self, a: int) -> int:
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.invert(a), -k)
        x = self.identity
        for _ in range(k):
            x = self.multiply(x, a)
        return x

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != self.identity:
            x = self.multiply(x, a)
            k += 1
        return k

    def conjugate(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return self.multiply(self.multiply(g, x), self.invert(g))

    def commutes(self, a: int, b: int) -> bool:
        return self.mul[a, b] == self.mul[b, a]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def elements(self) -> range:
        return range(self.order)

    def center(self) -> list[int]:
        return [a for a in self.elements() if np.array_equal(self.mul[a], self.mul[:, a])]

    def subgroup_closure(self, gens) -> list[int]:
        seen = {self.identity}
        frontier = [self.identity]
        gens = sorted(set(gens))
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.multiply(x, g)
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return sorted(seen)

    def generating_set(self) -> list[int]:
        """Greedy small generating set (construction order)."""
        gens: list[int] = []
        have = {self.identity}
        for a in self.elements():
            if a not in have:
                gens.append(a)
                have = set(self.subgroup_closure(gens))
                if len(have) == self.order:
                    break
        return gens

    def is_subgroup(self, ids) -> bool:
        s = set(ids)
        if self.identity not in s:
            return False
        return all(self.mul[a, b] in s for a in s for b in s) and all(
            self.inv[a] in s for a in s
        )

    def subgroup(self, ids) -> "Subgroup":
        ids = sorted(set(int(i) for i in ids))
        if not self.is_subgroup(ids):
            raise GroupError(f"{ids} is not a subgroup of {self.label}")
        pos = {g: i for i, g in enumerate(ids)}
        m = len(ids)
        table = np.zeros((m, m), dtype=np.int64)
        for i, a in enumerate(ids):
            for j, b in enumerate(ids):
                table[i, j] = pos[int(self.mul[a, b])]
        small = FiniteGroup(
            table, label=f"{self.label}|{ids}", names=[self.names[g] for g in ids],
            validate=False,
        )
        return Subgroup(parent=self, group=small, embed=np.array(ids, dtype=np.int64))

    def name(self, a: int) -> str:
        return self.names[a]

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup presented both as its own FiniteGroup and as parent ids."""

    parent: FiniteGroup
    group: FiniteGroup
    embed: np.ndarray  # embed[i] = parent id of element i

    def index_of(self, parent_id: int) -> int:
        hits = np.nonzero(self.embed == parent_id)[0]
        if len(hits) != 1:
            raise GroupError(f"element {parent_id} not in subgroup")
        return int(hits[0])

    def contains(self, parent_id: int) -> bool:
        return bool(np.any(self.embed == parent_id))


def centralizer(G: FiniteGroup, gamma: int) -> list[int]:
    """Ids of {r : gamma r = r gamma}, a subgroup of G."""
    return [r for r in G.elements() if G.commutes(r, gamma)]


# -- homomorphisms and actions ----------------------------------------------


class GroupHom:
    """Homomorphism between finite groups, stored as a full image table."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, table, validate=True):
        self.domain = domain
        self.codomain = codomain
        self.table = np.asarray(table, dtype=np.int64)
        if self.table.shape != (domain.order,):
            raise GroupError("hom table has wrong length")
        if validate:
            self.check()

    def check(self):
        d, c, t = self.domain, self.codomain, self.table
        for a in d.elements():
            for b in d.elements():
                if t[d.mul[a, b]] != c.mul[t[a], t[b]]:
                    raise GroupError(f"not a homomorphism at ({a},{b})")

    def __call__(self, a: int) -> int:
        return int(self.table[a])

    def is_automorphism(self) -> bool:
        return (
            self.domain is self.codomain or self.domain.order == self.codomain.order
        ) and len(set(self.table.tolist())) == self.domain.order

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self o other."""
        return GroupHom(other.domain, self.codomain, self.table[other.table], validate=False)

    @staticmethod
    def identity(G: FiniteGroup) -> "GroupHom":
        return GroupHom(G, G, np.arange(G.order), validate=False)


class AutAction:
    """A homomorphism tau: L -> Aut(G), stored as a (|L|, |G|) table.

    ``table[r, g] = tau_r(g)``.  Validates that every row is an automorphism
    of G and that r -> tau_r is multiplicative.
    """

    def __init__(self, L: FiniteGroup, G: FiniteGroup, table, validate=True):
        self.L = L
        self.G = G
        self.table = np.asarray(table, dtype=np.int64)
        if self.table.shape != (L.order, G.order):
            raise GroupError("action table has wrong shape")
        if validate:
            self.check()
        self.table.setflags(write=False)

    def check(self):
        L, G, t = self.L, self.G, self.table
        if not np.array_equal(t[L.identity], np.arange(G.order)):
            raise GroupError("tau(identity) is not the identity map")
        for r in L.elements():
            row = t[r]
            if len(set(row.tolist())) != G.order:
                raise GroupError(f"tau({r}) is not a bijection")
            if not np.array_equal(row[G.mul], G.mul[np.ix_(row, row)]):
                raise GroupError(f"tau({r}) is not an automorphism")
        for r in L.elements():
            for s in L.elements():
                if not np.array_equal(t[L.mul[r, s]], t[r][t[s]]):
                    raise GroupError(f"tau is not multiplicative at ({r},{s})")

    def apply(self, r: int, g: int) -> int:
        return int(self.table[r, g])

    def perm(self, r: int) -> np.ndarray:
        return self.table[r]

    def restrict(self, sub: Subgroup) -> "AutAction":
        return AutAction(sub.group, self.G, self.table[sub.embed], validate=False)

    @staticmethod
    def trivial(L: FiniteGroup, G: FiniteGroup) -> "AutAction":
        return AutAction(L, G, np.tile(np.arange(G.order), (L.order, 1)), validate=False)

    @staticmethod
    def inversion(L: FiniteGroup, G: FiniteGroup) -> "AutAction":
        """Each nontrivial element of L acts by g -> g^{-1}; needs G abelian
        and L of exponent 2 acting consistently, checked by the constructor."""
        if not G.is_abelian():
            raise GroupError("inversion action needs an abelian target")
        table = np.empty((L.order, G.order), dtype=np.int64)
        for r in L.elements():
            table[r] = np.arange(G.order) if r == L.identity else G.inv
        return AutAction(L, G, table)

    @staticmethod
    def from_generator_images(L: FiniteGroup, G: FiniteGroup, images: dict) -> "AutAction":
        """Extend generator images multiplicatively to all of L.

        ``images`` maps L-ids to permutations of G (image tables).  Raises if
        the images do not extend consistently or do not cover L.
        """
        known: dict[int, np.ndarray] = {L.identity: np.arange(G.order, dtype=np.int64)}
        for r, perm in images.items():
            perm = np.asarray(perm, dtype=np.int64)
            if int(r) in known and not np.array_equal(known[int(r)], perm):
                raise GroupError(f"conflicting image for generator {r}")
            known[int(r)] = perm
        frontier = list(known)
        while frontier:
            new = []
            for a in frontier:
                for b in list(images):
                    c = L.multiply(a, int(b))
                    perm = known[a][known[int(b)]]
                    if c in known:
                        if not np.array_equal(known[c], perm):
                            raise GroupError(f"inconsistent tau extension at {c}")
                    else:
                        known[c] = perm
                        new.append(c)
            frontier = new
        if len(known) != L.order:
            raise GroupError("tau generators do not generate lambda")
        table = np.stack([known[r] for r in L.elements()])
        return AutAction(L, G, table)


class ActionOnSet:
    """A group action on a set of hashable points, given by a callable.

    ``act(g, p)`` returns the image of p under g; ``side`` is "left"
    (g.(h.p) = (gh).p) or "right" (p.(gh) = (p.g).h).
    """

    ORBIT_GUARD = 10**6

    def __init__(self, group: FiniteGroup, act, side: str = "left", validate_points=None):
        if side not in ("left", "right"):
            raise GroupError("side must be 'left' or 'right'")
        self.group = group
        self.act = act
        self.side = side
        if validate_points is not None:
            self.check(validate_points)

    def check(self, points):
        G = self.group
        for p in points:
            if self.act(G.identity, p) != p:
                raise GroupError("identity does not act trivially")
            for g in G.elements():
                for h in G.elements():
                    if self.side == "left":
                        lhs = self.act(g, self.act(h, p))
                        rhs = self.act(G.multiply(g, h), p)
                    else:
                        lhs = self.act(h, self.act(g, p))
                        rhs = self.act(G.multiply(g, h), p)
                    if lhs != rhs:
                        raise GroupError(f"composition law fails at ({g},{h},{p})")


def orbit(action: ActionOnSet, point, guard: int | None = None):
    """Orbit of a point and its stabilizer subgroup.

    Returns (orbit_list, stabilizer_ids); the orbit is sorted for
    determinism.  Raises GroupError if the orbit exceeds the guard bound
    (cannot happen for a finite acting group smaller than the bound).
    """
    guard = ActionOnSet.ORBIT_GUARD if guard is None else guard
    G = action.group
    seen = {point}
    for g in G.elements():
        seen.add(action.act(g, point))
        if len(seen) > guard:
            raise GroupError(f"orbit exceeds guard bound {guard}")
    stab = [g for g in G.elements() if action.act(g, point) == point]
    return sorted(seen), stab


# -- product constructions ---------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic order must be >= 1")
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    names = ["e"] + [f"a{k}" if k > 1 else "a" for k in range(1, n)]
    return FiniteGroup(mul, label=f"Z{n}", names=names[:n], validate=False)


def _cycle_name(p) -> str:
    """Cycle notation with 1-based points, e.g. '(12)' or '(123)'."""
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            seen.add(start)
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x]
        cycles.append("(" + "".join(str(i + 1) for i in cyc) + ")")
    return "".join(cycles) if cycles else "e"


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on lexicographically ordered permutation tuples; (p*q)(i) = p(q(i))."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    mul = np.zeros((m, m), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[tuple(p[q[k]] for k in range(n))]
    g = FiniteGroup(mul, label=f"S{n}", names=[_cycle_name(p) for p in perms],
                    validate=False)
    g.perm_tuples = perms
    return g


def perm_id(G: FiniteGroup, p) -> int:
    """Id of a permutation tuple in a symmetric_group-built group."""
    return G.perm_tuples.index(tuple(p))


def permutation_parity(G: FiniteGroup, a: int) -> int:
    """Parity of element ``a`` of a symmetric_group-built group (0 even, 1 odd)."""
    p = G.perm_tuples[a]
    inversions = sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )
    return inversions % 2


def dihedral_group(n: int) -> FiniteGroup:
    """D_n of order 2n; ids 0..n-1 are rotations r^k, n..2n-1 are s r^k."""
    if n < 1:
        raise GroupError("dihedral order parameter must be >= 1")
    m = 2 * n
    mul = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            fi, ki = divmod(i, n)
            fj, kj = divmod(j, n)
            # (s^fi r^ki)(s^fj r^kj) = s^(fi+fj) r^(kj +- ki)
            f = (fi + fj) % 2
            k = (kj + (ki if fj == 0 else -ki)) % n
            mul[i, j] = f * n + k
    names = [f"r{k}" for k in range(n)] + [f"sr{k}" for k in range(n)]
    return FiniteGroup(mul, label=f"D{n}", names=names, validate=False)


class ProductGroup(FiniteGroup):
    """Direct product with tuple bookkeeping; id = lexicographic tuple rank."""

    def __init__(self, factors: list[FiniteGroup], label=None):
        self.factors = list(factors)
        orders = [f.order for f in factors]
        tuples = list(itertools.product(*[range(o) for o in orders]))
        index = {t: i for i, t in enumerate(tuples)}
        m = len(tuples)
        mul = np.zeros((m, m), dtype=np.int64)
        for i, a in enumerate(tuples):
            for j, b in enumerate(tuples):
                mul[i, j] = index[tuple(f.multiply(x, y) for f, x, y in zip(factors, a, b))]
        names = ["(" + ",".join(f.names[x] for f, x in zip(factors, t)) + ")" for t in tuples]
        if label is None:
            label = "x".join(f.label for f in factors)
        super().__init__(mul, label=label, names=names, validate=False)
        self.tuples = tuples
        self.tuple_index = index


def direct_product(factors) -> ProductGroup:
    return ProductGroup(list(factors))


class SemidirectGroup(FiniteGroup):
    """G x| L for an action tau: L -> Aut(G); pairs (g, r) with id g*|L| + r.

    Multiplication: (g, r)(h, s) = (g tau_r(h), r s).
    """

    def __init__(self, G: FiniteGroup, L: FiniteGroup, tau: AutAction, label=None):
        if tau.L is not L or tau.G is not G:
            raise GroupError("tau must act by L on G")
        nG, nL = G.order, L.order
        m = nG * nL
        mul = np.zeros((m, m), dtype=np.int64)
        for g in range(nG):
            for r in range(nL):
                i = g * nL + r
                tg = tau.table[r]
                for h in range(nG):
                    gh = G.mul[g, tg[h]]
                    row = gh * nL
                    for s in range(nL):
                        mul[i, h * nL + s] = row + L.mul[r, s]
        names = [f"({G.names[g]},{L.names[r]})" for g in range(nG) for r in range(nL)]
        if label is None:
            label = f"{G.label}x|{L.label}"
        super().__init__(mul, label=label, names=names, validate=False)
        self.G = G
        self.L = L
        self.tau = tau

    def pair_id(self, g: int, r: int) -> int:
        return g * self.L.order + r

    def unpair(self, i: int) -> tuple[int, int]:
        return divmod(i, self.L.order)

    def g_part(self, i: int) -> int:
        return i // self.L.order

    def l_part(self, i: int) -> int:
        return i % self.L.order


def semidirect_product(G: FiniteGroup, L: FiniteGroup, tau: AutAction) -> SemidirectGroup:
    return SemidirectGroup(G, L, tau)


def cyclic_shift_embedding(A: FiniteGroup, C: FiniteGroup):
    """Embed a cyclic group A of order n into Aut(C^n) by the coordinate shift.

    The chosen generator is element 1 of A (construction order); it acts on the
    n-fold direct power of C by (c_1, ..., c_n) -> (c_2, ..., c_n, c_1).
    Returns (B, tau) with B = C^n and tau: A -> Aut(B).
    """
    n = A.order
    gen = 1 if n > 1 else A.identity
    if n > 1 and A.element_order(gen) != n:
        # cyclic groups built here always have element 1 as a generator
        raise GroupError("A is not cyclic with generator at id 1")
    B = direct_product([C] * n) if n > 1 else direct_product([C])
    shift = np.array(
        [B.tuple_index[t[1:] + t[:1]] for t in B.tuples], dtype=np.int64
    )
    images = {gen: shift} if n > 1 else {A.identity: np.arange(B.order)}
    tau = AutAction.from_generator_images(A, B, images)
    if C.order > 1 and n > 1 and len({tuple(tau.table[r]) for r in A.elements()}) != n:
        raise GroupError("shift embedding is not injective")
    return B, tau


def inner_automorphisms(G: FiniteGroup) -> list[np.ndarray]:
    """Distinct conjugation tables Ad_g, deduplicated."""
    seen, out = set(), []
    for g in G.elements():
        perm = np.array([G.conjugate(g, x) for x in G.elements()], dtype=np.int64)
        key = tuple(perm.tolist())
        if key not in seen:
            seen.add(key)
            out.append(perm)
    return out


def automorphism_group(G: FiniteGroup, bound: int = 512) -> list[np.ndarray]:
    """All automorphisms as permutation tables, by brute force over
    generator images (element-order pruning); feasible for small groups."""
    if G.order > bound:
        raise GroupError(f"automorphism enumeration bounded at order {bound}")
    gens = G.generating_set() or [G.identity]
    # express every element as a word in the generators (BFS)
    words = {G.identity: ()}
    frontier = [G.identity]
    while frontier:
        new = []
        for x in frontier:
            for i, s in enumerate(gens):
                y = G.multiply(x, s)
                if y not in words:
                    words[y] = words[x] + (i,)
                    new.append(y)
        frontier = new
    orders = [G.element_order(x) for x in G.elements()]
    candidates = [[y for y in G.elements() if orders[y] == orders[s]] for s in gens]
    out = []
    for images in itertools.product(*candidates):
        table = np.empty(G.order, dtype=np.int64)
        for x in G.elements():
            y = G.identity
            for i in words[x]:
                y = G.multiply(y, images[i])
            table[x] = y
        if len(set(table.tolist())) != G.order:
            continue
        if np.array_equal(table[G.mul], G.mul[np.ix_(table, table)]):
            out.append(table)
    return out


# ---------------------------------------------------------------------------
# free products of finite cyclic groups (enumerable, with word metric)


class FreeProduct:
    """Free product of finite cyclic groups Z/n_1 * Z/n_2 * ...

    Elements are reduced words: tuples of syllables (factor, exponent) with
    1 <= exponent < n_factor and adjacent syllables in distinct factors.
    Word length uses the generating set {factor generators and inverses},
    each of length one, so a syllable (i, e) costs min(e, n_i - e).
    ``ball(n)`` is the cumulative ball {x : word_length(x) <= n}.
    """

    FACTOR_LETTERS = "stuvwxyz"

    def __init__(self, orders):
        orders = tuple(int(n) for n in orders)
        if any(n < 2 for n in orders):
            raise GroupError("free product factors must be cyclic of order >= 2")
        if len(orders) < 1:
            raise GroupError("free product needs at least one factor")
        self.orders = orders
        self.identity = ()
        self.label = "*".join(f"Z{n}" for n in orders)

    def generator(self, i: int):
        return ((i, 1),)

    def syllable(self, i: int, e: int):
        e %= self.orders[i]
        return ((i, e),) if e else ()

    def multiply(self, a, b):
        w = list(a)
        for f, e in b:
            if w and w[-1][0] == f:
                e2 = (w[-1][1] + e) % self.orders[f]
                w.pop()
                if e2:
                    w.append((f, e2))
            else:
                w.append((f, e))
        return tuple(w)

    def invert(self, a):
        return tuple((f, self.orders[f] - e) for f, e in reversed(a))

    def word_length(self, a) -> int:
        return sum(min(e, self.orders[f] - e) for f, e in a)

    def sort_key(self, a):
        return (self.word_length(a), a)

    def ball(self, n: int) -> list:
        """All elements with word_length <= n, sorted by (length, word)."""
        if n < 0:
            return []
        out = [()]
        def extend(word, last_factor, remaining):
            for f in range(len(self.orders)):
                if f == last_factor:
                    continue
                for e in range(1, self.orders[f]):
                    cost = min(e, self.orders[f] - e)
                    if cost <= remaining:
                        w = word + ((f, e),)
                        out.append(w)
                        extend(w, f, remaining - cost)
        extend((), -1, n)
        return sorted(out, key=self.sort_key)

    def name(self, a) -> str:
        if not a:
            return "e"
        parts = []
        for f, e in a:
            letter = self.FACTOR_LETTERS[f % len(self.FACTOR_LETTERS)]
            parts.append(letter if e == 1 else f"{letter}{e}")
        return "*".join(parts)

    def parse(self, text: str):
        """Inverse of name(); accepts e.g. 'e', 's', 't2', 's*t2*s'."""
        if text == "e":
            return ()
        word = ()
        for part in text.split("*"):
            f = self.FACTOR_LETTERS.index(part[0])
            if f >= len(self.orders):
                raise GroupError(f"unknown factor letter in {part!r}")
            e = int(part[1:]) if len(part) > 1 else 1
            word = self.multiply(word, self.syllable(f, e))
        return word

    def __repr__(self):
        return f"FreeProduct({self.label})"


class FreeProductAut:
    """Action of a free product on a finite group, from factor-generator images.

    ``images[i]`` is the permutation of G induced by the generator of factor i;
    it must be an automorphism whose order divides the factor order.
    """

    def __init__(self, fp: FreeProduct, G: FiniteGroup, images):
        self.fp = fp
        self.G = G
        self.images = [np.asarray(p, dtype=np.int64) for p in images]
        if len(self.images) != len(fp.orders):
            raise GroupError("one image per free-product factor required")
        ident = np.arange(G.order)
        for i, perm in enumerate(self.images):
            if sorted(perm.tolist()) != list(range(G.order)):
                raise GroupError(f"image of factor {i} is not a bijection")
            if not np.array_equal(perm[G.mul], G.mul[np.ix_(perm, perm)]):
                raise GroupError(f"image of factor {i} is not an automorphism")
            p = ident
            for _ in range(fp.orders[i]):
                p = perm[p]
            if not np.array_equal(p, ident):
                raise GroupError(f"image of factor {i} has order not dividing {fp.orders[i]}")

    def perm(self, word) -> np.ndarray:
        """Permutation table of tau_word on G (tau is a homomorphism)."""
        p = np.arange(self.G.order)
        for f, e in word:
            q = np.arange(self.G.order)
            for _ in range(e):
                q = self.images[f][q]
            p = p[q]  # tau(prefix) o tau(syllable)
        return p


# ---------------------------------------------------------------------------
# descriptors


def build_group(spec: dict):
    """Build a group from a JSON-style descriptor.

    Kinds: cyclic, symmetric, dihedral, direct_sum, semidirect, free_product,
    table.  Free products return a FreeProduct (enumerable); everything else
    returns a FiniteGroup.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise GroupError("group descriptor must be a dict with a 'kind'")
    kind = spec["kind"]
    if kind == "cyclic":
        return cyclic_group(int(spec["n"]))
    if kind == "symmetric":
        return symmetric_group(int(spec["n"]))
    if kind == "dihedral":
        return dihedral_group(int(spec["n"]))
    if kind == "direct_sum":
        return direct_product([build_group(f) for f in spec["factors"]])
    if kind == "table":
        return FiniteGroup(np.asarray(spec["mul"]), label=spec.get("label", "G"))
    if kind == "free_product":
        orders = []
        for f in spec["factors"]:
            if not (isinstance(f, dict) and f.get("kind") == "cyclic"):
                raise GroupError("free product factors must be finite cyclic descriptors")
            orders.append(int(f["n"]))
        return FreeProduct(orders)
    if kind == "semidirect":
        G = build_group(spec["g"])
        L = build_group(spec["lambda"])
        if not isinstance(G, FiniteGroup) or not isinstance(L, FiniteGroup):
            raise GroupError("semidirect factors must be finite")
        tau = build_tau(spec["tau"], L, G)
        return semidirect_product(G, L, tau)
    raise GroupError(f"unknown group kind {kind!r}")


def build_tau(spec, L: FiniteGroup, G: FiniteGroup) -> AutAction:
    """Action descriptor: named form or explicit generator image tables."""
    if isinstance(spec, dict) and "name" in spec:
        name = spec["name"]
        if name == "trivial":
            return AutAction.trivial(L, G)
        if name == "inversion":
            return AutAction.inversion(L, G)
        if name == "power":
            # g -> g^k for abelian G, generator of L given by 'generator'
            if not G.is_abelian():
                raise GroupError("power action needs an abelian target")
            k = int(spec["k"])
            gen = int(spec.get("generator", 1))
            perm = np.array([G.power(g, k) for g in G.elements()], dtype=np.int64)
            return AutAction.from_generator_images(L, G, {gen: perm})
        raise GroupError(f"unknown tau name {name!r}")
    if isinstance(spec, dict):
        images = {int(r): np.asarray(p, dtype=np.int64) for r, p in spec.items()}
        return AutAction.from_generator_images(L, G, images)
    raise GroupError("tau descriptor must be a dict")
