"""Finite group engine over exact elements.

Groups are materialized as explicit element lists produced by
breadth-first closure of a generating set, with an index-based
multiplication cache so that conjugacy classes, normal closures, derived
series and abelianizations run on integers rather than on the (expensive)
exact elements.  The same engine drives quaternionic rotation groups and
the permutation groups extracted from coset tables.
"""

from __future__ import annotations

from . import quaternions as qt
from .errors import CapExceeded, NotMember, WrongAmbient
from .linalg import AbelianGroup

DEFAULT_GROUP_CAP = 100_000


class FiniteGroup:
    """A finite group as an explicit closed element list with generators."""

    def __init__(self, elements, gens_idx, identity_idx):
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.gens_idx = list(gens_idx)
        self.identity_idx = identity_idx
        self._mul_cache = {}
        self._inv_cache = {}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements in group construction")

    # -- construction -----------------------------------------------------

    @classmethod
    def generate(cls, gens, cap=DEFAULT_GROUP_CAP, identity=None):
        """Breadth-first closure of the generators under multiplication."""
        if cap < 1:
            raise ValueError("cap must be >= 1")
        gens = list(gens)
        if identity is None:
            if not gens:
                raise ValueError("need generators or an explicit identity")
            identity = gens[0] * gens[0].inverse()
        index = {identity: 0}
        elements = [identity]
        queue = [identity]
        step = 0
        while step < len(queue):
            e = queue[step]
            step += 1
            for g in gens:
                p = e * g
                if p not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(cap)
                    index[p] = len(elements)
                    elements.append(p)
                    queue.append(p)
        gens_idx = [index[g] for g in gens if g in index]
        return cls(elements, gens_idx, 0)

    @classmethod
    def from_elements(cls, elements, gens, identity):
        """Wrap an element list already known to be closed (e.g. a group image)."""
        group = cls(list(elements), [], 0)
        group.identity_idx = group.index[identity]
        group.gens_idx = [group.index[g] for g in gens]
        return group

    # -- index arithmetic ---------------------------------------------------

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, element):
        return element in self.index

    def imul(self, i, j):
        key = (i, j)
        k = self._mul_cache.get(key)
        if k is None:
            product = self.elements[i] * self.elements[j]
            k = self.index.get(product)
            if k is None:
                raise NotMember("product escaped the element set; group not closed")
            self._mul_cache[key] = k
        return k

    def iinv(self, i):
        k = self._inv_cache.get(i)
        if k is None:
            inv = self.elements[i].inverse()
            k = self.index.get(inv)
            if k is None:
                raise NotMember("inverse escaped the element set; group not closed")
            self._inv_cache[i] = k
        return k

    def element_order(self, i):
        n = 1
        cur = i
        while cur != self.identity_idx:
            cur = self.imul(cur, i)
            n += 1
        return n

    def _as_index(self, g):
        if isinstance(g, int):
            if not 0 <= g < len(self.elements):
                raise NotMember(f"index {g} out of range")
            return g
        idx = self.index.get(g)
        if idx is None:
            raise NotMember(f"{g!r} is not an element of the group")
        return idx

    # -- subgroup machinery ---------------------------------------------------

    def _check_lagrange(self, idxs):
        assert len(self) % len(idxs) == 0, "subgroup order must divide group order"
        return idxs

    def conjugacy_class(self, g):
        """Orbit of g under conjugation, as a sorted tuple of indices."""
        start = self._as_index(g)
        seen = {start}
        queue = [start]
        while queue:
            x = queue.pop()
            for gi in self.gens_idx:
                y = self.imul(self.imul(gi, x), self.iinv(gi))
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return tuple(sorted(seen))

    def conjugacy_classes(self):
        remaining = set(range(len(self)))
        out = []
        while remaining:
            rep = min(remaining)
            cls = self.conjugacy_class(rep)
            out.append(cls)
            remaining.difference_update(cls)
        return out

    def subgroup_closure(self, idxs):
        """Smallest subgroup containing the given indices."""
        return self._check_lagrange(tuple(sorted(self._closure_incremental(idxs)[0])))

    def _closure_incremental(self, idxs):
        """Closure that keeps only non-redundant generators; returns (set, gens).

        A subgroup of order more than |G|/2 is G itself (Lagrange), which
        lets the final growth round stop early.
        """
        seed = sorted({self._as_index(i) for i in idxs})
        members = {self.identity_idx}
        kept = []
        whole = len(self.elements)
        for s in seed:
            if s in members:
                continue
            kept.append(s)
            queue = list(members)
            while queue:
                x = queue.pop()
                for g in kept:
                    y = self.imul(x, g)
                    if y not in members:
                        members.add(y)
                        queue.append(y)
                if 2 * len(members) > whole:
                    return set(range(whole)), kept
        return members, kept

    def normal_closure(self, idxs):
        """Smallest normal subgroup containing the given elements/indices."""
        seed = {self._as_index(i) for i in idxs}
        # close under conjugation by generators first ...
        queue = list(seed)
        while queue:
            x = queue.pop()
            for gi in self.gens_idx:
                y = self.imul(self.imul(gi, x), self.iinv(gi))
                if y not in seed:
                    seed.add(y)
                    queue.append(y)
        # ... the subgroup generated by a conjugation-closed set is normal
        return self.subgroup_closure(seed)

    def small_generating_set(self, idxs):
        """Greedy small generating subset of a subgroup's element list."""
        members, kept = self._closure_incremental(idxs)
        expected = {self._as_index(i) for i in idxs} | {self.identity_idx}
        assert members == expected, "input was not a subgroup"
        return kept or [self.identity_idx]

    def derived_subgroup(self, sub=None):
        """Commutator subgroup, via normal closure of generator commutators."""
        if sub is None:
            gen_idxs = list(self.gens_idx)
            conjugators = list(self.gens_idx)
        else:
            gen_idxs = self.small_generating_set(sub)
            conjugators = gen_idxs
        commutators = set()
        for a in gen_idxs:
            for b in gen_idxs:
                c = self.imul(
                    self.imul(a, b), self.imul(self.iinv(a), self.iinv(b))
                )
                commutators.add(c)
        # normal closure inside the subgroup generated by gen_idxs
        queue = list(commutators)
        while queue:
            x = queue.pop()
            for gi in conjugators:
                y = self.imul(self.imul(gi, x), self.iinv(gi))
                if y not in commutators:
                    commutators.add(y)
                    queue.append(y)
        result = self.subgroup_closure(commutators)
        for gi in conjugators:
            for x in result:
                assert self.imul(self.imul(gi, x), self.iinv(gi)) in set(result)
        return result

    def derived_series(self):
        """Subgroup chain G >= G' >= G'' >= ... until it stabilizes."""
        series = [tuple(range(len(self)))]
        current = None
        while True:
            nxt = self.derived_subgroup(current)
            if current is not None and set(nxt) == set(current):
                break
            if current is None and len(nxt) == len(self):
                series.append(nxt)
                break
            series.append(nxt)
            current = nxt
            if len(current) == 1:
                break
        return series

    def is_perfect(self):
        return len(self.derived_subgroup()) == len(self)

    def abelianization(self, sub=None):
        """Invariant factors of G/[G,G] by maximal-order extraction."""
        if sub is None:
            sub = tuple(range(len(self)))
        derived = set(self.derived_subgroup(sub if len(sub) != len(self) else None))
        total = list(sub)
        kernel = set(derived)
        factors = []
        while len(kernel) < len(total):
            best_e, best_o = None, 1
            for e in total:
                if e in kernel:
                    continue
                o = 1
                cur = e
                while cur not in kernel:
                    cur = self.imul(cur, e)
                    o += 1
                if o > best_o:
                    best_e, best_o = e, o
            factors.append(best_o)
            new_kernel = set()
            cur = self.identity_idx
            for _ in range(best_o):
                new_kernel.update(self.imul(cur, s) for s in kernel)
                cur = self.imul(cur, best_e)
            kernel = new_kernel
        factors.reverse()
        for a, b in zip(factors, factors[1:]):
            assert b % a == 0, "abelian invariant chain violated"
        return AbelianGroup.from_factors(factors)


# -- rotation groups --------------------------------------------------------------


class FiniteRotationGroup(FiniteGroup):
    """Finite subgroup of Spin(4) or SO(4) with generator provenance."""

    def __init__(self, elements, gens_idx, identity_idx, ambient):
        super().__init__(elements, gens_idx, identity_idx)
        self.ambient = ambient  # "spin4" | "so4"

    @classmethod
    def generate_rotations(cls, gens, cap=DEFAULT_GROUP_CAP):
        import math

        gens = list(gens)
        if not gens:
            raise ValueError("need at least one generator")
        ambient = "so4" if isinstance(gens[0], qt.RotationClass) else "spin4"
        # One conductor per group: element hashes are conductor-scoped, so the
        # closure must never mix representations of the same value.
        conductor = math.lcm(*(g.conductor() for g in gens))
        gens = [g.lift(conductor) for g in gens]
        identity = (
            qt.RotationClass(qt.spin_identity())
            if ambient == "so4"
            else qt.spin_identity()
        ).lift(conductor)
        base = FiniteGroup.generate(gens, cap=cap, identity=identity)
        group = cls(base.elements, base.gens_idx, base.identity_idx, ambient)
        return group

    def generators(self):
        return [self.elements[i] for i in self.gens_idx]

    def to_so4(self):
        """Image in SO(4); the image of a closed set is closed, no re-closure."""
        if self.ambient == "so4":
            return self
        seen = {}
        for e in self.elements:
            rc = qt.RotationClass(e)
            seen.setdefault(rc, None)
        elements = list(seen)
        identity = qt.RotationClass(self.elements[self.identity_idx])
        gens = []
        for gi in self.gens_idx:
            rc = qt.RotationClass(self.elements[gi])
            if rc not in gens and not rc.is_identity():
                gens.append(rc)
        group = FiniteRotationGroup(elements, [], 0, "so4")
        group.identity_idx = group.index[identity]
        group.gens_idx = [group.index[g] for g in gens]
        return group

    def acts_freely(self):
        """(True, None) iff no non-identity rotation fixes a point of S^3.

        Uses the exact real-part criterion; the kernel-dimension route in
        :func:`spherecover.quaternions.fixed_set` is the independent
        cross-check exercised by the test suite.
        """
        if self.ambient != "so4":
            raise WrongAmbient("free-action test expects an SO(4) group")
        for i, e in enumerate(self.elements):
            if i == self.identity_idx:
                continue
            if qt.has_fixed_points(e):
                return False, e
        return True, None

    def subgroup_intersections(self):
        """Orders of the intersections with S^3 x {1} and {1} x S^1, plus gcd."""
        if self.ambient != "spin4":
            raise WrongAmbient("intersection counts expect a Spin(4) group")
        one = qt.quat_one()
        left_count = 0
        right_count = 0
        for e in self.elements:
            if not e.right.is_circle_factor():
                raise WrongAmbient("group is not inside S^3 x S^1")
            if e.right == one:
                left_count += 1
            if e.left == one:
                right_count += 1
        import math

        return left_count, right_count, math.gcd(left_count, right_count)


def generate_group(gens, cap=DEFAULT_GROUP_CAP):
    """Closure of Spin(4) elements or rotation classes into a rotation group."""
    return FiniteRotationGroup.generate_rotations(gens, cap=cap)


# -- convenience: named quaternion groups ------------------------------------------


def quaternion_group_q8():
    """The eight Lipschitz units as a Spin(4) group acting on the left."""
    i = qt.Spin4Element(qt.quat_i(), qt.quat_one())
    j = qt.Spin4Element(qt.quat_j(), qt.quat_one())
    return generate_group([i, j], cap=32)

