"""Finitely presented groups: Wirtinger data, coset enumeration, covers.

The enumerator is the relator-based (HLT) strategy with periodic
lookahead and table compaction: every live coset is scanned against every
relator, gaps are filled by defining new cosets, and coincidences are
merged through a union-find with table migration.  A completed table is
certified post hoc -- all relators trace to the identity from every coset
and the action is transitive -- before an order is reported; hitting the
coset cap yields an Inconclusive outcome, never a guess.

The double-branched-cover group of a knot is the index-2 kernel of the
meridian parity map on the orbifold quotient (knot group modulo meridian
squares), extracted from the regular permutation action of the completed
table.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotIndexTwo, ValidationError
from .groups import FiniteGroup
from .linalg import cokernel

DEFAULT_COSET_CAP = 200_000


def free_reduce(word):
    out = []
    for letter in word:
        if letter == 0:
            raise ValidationError("generator index 0 is not allowed")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def cyclic_reduce(word):
    word = list(free_reduce(word))
    while len(word) >= 2 and word[0] == -word[-1]:
        word = word[1:-1]
    return tuple(word)


@dataclass(frozen=True)
class GroupPresentation:
    """Generators 1..ngens and freely reduced relator words."""

    ngens: int
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for rel in self.relators:
            for letter in rel:
                if letter == 0 or abs(letter) > self.ngens:
                    raise ValidationError(f"relator letter {letter} out of range")
            if free_reduce(rel) != rel:
                raise ValidationError(f"relator {rel!r} is not freely reduced")

    @classmethod
    def make(cls, ngens, relators):
        return cls(ngens, tuple(free_reduce(r) for r in relators))

    def text(self):
        rels = ", ".join(" ".join(str(l) for l in rel) for rel in self.relators)
        return f"gens={self.ngens}; rel= {rels}"

    @classmethod
    def parse(cls, text):
        head, _, tail = text.partition(";")
        if not head.strip().startswith("gens="):
            raise ValidationError("presentation text must start with 'gens=n;'")
        ngens = int(head.strip()[len("gens="):])
        tail = tail.strip()
        if not tail.startswith("rel="):
            raise ValidationError("presentation text needs 'rel=' relator list")
        body = tail[len("rel="):].strip()
        relators = []
        if body:
            for chunk in body.split(","):
                relators.append(tuple(int(t) for t in chunk.split()))
        return cls.make(ngens, relators)


# -- knot presentations -----------------------------------------------------------


def wirtinger(diagram):
    """Arc-meridian presentation: one generator per arc, one relation per crossing.

    At a crossing with sign s, over-arc w, under-in a and under-out c the
    relator is w^s a w^-s c^-1; one redundant relator is dropped.
    """
    arcs = diagram.arc_of_edge
    ngens = diagram.arc_count
    relators = []
    for cr in diagram.crossings:
        w = arcs[cr.over_edges[0]] + 1
        a = arcs[cr.under_in] + 1
        c = arcs[cr.under_out] + 1
        s = cr.sign
        relators.append(free_reduce((s * w, a, -s * w, -c)))
    if relators:
        relators = relators[:-1]
    return GroupPresentation.make(ngens, [r for r in relators if r])


def orbifold_quotient(pres):
    """Adjoin the square of every generator (meridian) as a relator."""
    extra = [(i, i) for i in range(1, pres.ngens + 1)]
    return GroupPresentation.make(pres.ngens, list(pres.relators) + extra)


def abelianize(pres):
    """Smith normal form of the exponent-sum matrix."""
    rows = []
    for rel in pres.relators:
        row = [0] * pres.ngens
        for letter in rel:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        rows.append(row)
    return cokernel(rows, pres.ngens)


# -- coset enumeration -------------------------------------------------------------


@dataclass
class CosetTable:
    """Completed or capped enumeration state over the trivial subgroup."""

    ngens: int
    status: str  # "complete" | "capped"
    order: int | None
    perms: tuple | None  # per generator: tuple of images on 0..order-1
    cap: int

    def is_complete(self):
        return self.status == "complete"


@dataclass(frozen=True)
class EnumerationOutcome:
    """Finite order with its regular action, or inconclusive at the cap."""

    table: CosetTable

    @property
    def finite(self):
        return self.table.is_complete()

    @property
    def order(self):
        return self.table.order

    @property
    def perms(self):
        return self.table.perms


class _Enumerator:
    def __init__(self, pres, cap):
        self.ngens = pres.ngens
        self.ncols = 2 * pres.ngens
        self.cap = cap
        rels = []
        for rel in pres.relators:
            rel = cyclic_reduce(rel)
            if rel:
                rels.append(tuple(self._col(l) for l in rel))
        self.relators = rels
        self.table = [[-1] * self.ncols]
        self.p = [0]
        self.n_live = 1
        self.dead = 0

    def _col(self, letter):
        return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)

    def rep(self, k):
        p = self.p
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def _merge(self, a, b, queue):
        a, b = self.rep(a), self.rep(b)
        if a != b:
            if a > b:
                a, b = b, a
            self.p[b] = a
            self.n_live -= 1
            self.dead += 1
            queue.append(b)

    def _coincidence(self, a, b):
        queue = []
        self._merge(a, b, queue)
        table = self.table
        while queue:
            gamma = queue.pop()
            row = table[gamma]
            for x in range(self.ncols):
                delta = row[x]
                if delta == -1:
                    continue
                table[delta][x ^ 1] = -1
                mu = self.rep(gamma)
                nu = self.rep(delta)
                if table[mu][x] != -1:
                    self._merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] != -1:
                    self._merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def _define(self, alpha, x):
        if self.n_live >= self.cap:
            raise _TableFull
        table = self.table
        beta = len(table)
        table.append([-1] * self.ncols)
        self.p.append(beta)
        self.n_live += 1
        table[alpha][x] = beta
        table[beta][x ^ 1] = alpha
        return beta

    def _scan(self, alpha, word, fill):
        table = self.table
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] != -1:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] != -1:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            if not fill:
                return
            self._define(f, word[i])

    def _lookahead(self):
        for alpha in range(len(self.table)):
            if self.p[alpha] != alpha:
                continue
            for word in self.relators:
                self._scan(alpha, word, fill=False)
                if self.p[alpha] != alpha:
                    break

    def _compact(self):
        live = [i for i in range(len(self.table)) if self.p[i] == i]
        remap = {old: new for new, old in enumerate(live)}
        new_table = []
        for old in live:
            row = self.table[old]
            new_table.append(
                [remap[self.rep(v)] if v != -1 else -1 for v in row]
            )
        self.table = new_table
        self.p = list(range(len(live)))
        self.dead = 0
        return remap

    def run(self):
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] != alpha:
                alpha += 1
                continue
            try:
                for word in self.relators:
                    self._scan(alpha, word, fill=True)
                    if self.p[alpha] != alpha:
                        break
                if self.p[alpha] == alpha:
                    for x in range(self.ncols):
                        if self.table[alpha][x] == -1:
                            self._define(alpha, x)
                alpha += 1
            except _TableFull:
                before = self.n_live
                self._lookahead()
                remap = self._compact()
                alpha = 0  # renumbered; completed rows rescan cheaply
                del remap
                if self.n_live >= self.cap or before - self.n_live < max(
                    16, before // 20
                ):
                    return self._capped()
        self._compact()
        return self._complete()

    def _capped(self):
        return CosetTable(self.ngens, "capped", None, None, self.cap)

    def _complete(self):
        order = len(self.table)
        perms = []
        for g in range(self.ngens):
            col = 2 * g
            perms.append(tuple(self.table[i][col] for i in range(order)))
        table = CosetTable(self.ngens, "complete", order, tuple(perms), self.cap)
        assert certify_table(table, self.relators_signed()), "uncertified table"
        return table

    def relators_signed(self):
        out = []
        for word in self.relators:
            out.append(tuple((x // 2 + 1) * (1 if x % 2 == 0 else -1) for x in word))
        return out


class _TableFull(Exception):
    pass


def certify_table(table, relators):
    """Closed-table certificate: bijectivity, transitivity, relator identity."""
    if not table.is_complete():
        return False
    n = table.order
    perms = table.perms
    inv = []
    for perm in perms:
        if sorted(perm) != list(range(n)):
            return False
        ip = [0] * n
        for i, v in enumerate(perm):
            ip[v] = i
        inv.append(tuple(ip))
    # transitivity from coset 0
    seen = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for perm in list(perms) + inv:
            d = perm[c]
            if d not in seen:
                seen.add(d)
                frontier.append(d)
    if len(seen) != n:
        return False
    for rel in relators:
        for start in range(n):
            c = start
            for letter in rel:
                c = perms[letter - 1][c] if letter > 0 else inv[-letter - 1][c]
            if c != start:
                return False
    return True


def todd_coxeter(pres, cap=DEFAULT_COSET_CAP):
    """Enumerate cosets of the trivial subgroup; deterministic HLT strategy."""
    if cap < 1:
        raise ValidationError("coset cap must be >= 1")
    return EnumerationOutcome(_Enumerator(pres, cap).run())


# -- permutations and cover extraction ----------------------------------------------


class Perm:
    """Permutation composed left-to-right, matching a right coset action."""

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        self.images = tuple(images)
        self._hash = None

    def __mul__(self, other):
        oi = other.images
        return Perm(tuple(oi[i] for i in self.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images):
            inv[v] = i
        return Perm(inv)

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    def __eq__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __repr__(self):
        return f"Perm{self.images}"


def parity_classes(outcome):
    """2-coloring of cosets by meridian parity; None when not bipartite."""
    n = outcome.order
    perms = outcome.perms
    color = [-1] * n
    color[0] = 0
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for perm in perms:
            d = perm[c]
            if color[d] == -1:
                color[d] = color[c] ^ 1
                frontier.append(d)
            elif color[d] != color[c] ^ 1:
                return None
    return color


def branched_cover_group(outcome, group_cap=None):
    """Index-2 kernel of the meridian parity map as a permutation group.

    Returns (order, FiniteGroup of permutations).  The kernel is generated
    by the Schreier elements g_i * t^-1 and t * g_i over the transversal
    {identity, t}, with t the image of the first generator.
    """
    if not outcome.finite:
        raise ValidationError("cover extraction requires a completed enumeration")
    color = parity_classes(outcome)
    if color is None:
        raise NotIndexTwo("meridian parity map is not onto Z/2")
    n = outcome.order
    perms = [Perm(p) for p in outcome.perms]
    t = perms[0]
    t_inv = t.inverse()
    gens = []
    for g in perms:
        for cand in (g * t_inv, t * g):
            if cand not in gens:
                gens.append(cand)
    group = FiniteGroup.generate(gens, cap=group_cap or max(2, n), identity=Perm.identity(n))
    assert group.order * 2 == n, "kernel must have index two"
    return group.order, group
