"""Combinatorial knot diagrams: parsers, generators, and the determinant.

Diagram convention.  A diagram with n crossings has 2n edges labeled
1..2n consecutively along the knot.  Each crossing is a 4-tuple
``(a, b, c, d)`` listing the incident edge labels counterclockwise
starting from the incoming under-edge ``a``; the under-strand continues
as ``c = a + 1 (mod 2n)`` and the over-strand occupies ``b`` and ``d``
with ``d = b + 1`` (over-strand running b -> d, recorded as sign +1) or
``b = d + 1`` (d -> b, sign -1).  Published PD codes for knots satisfy
these rules; anything else is rejected, which in particular enforces the
knots-only (single component) invariant.

Wirtinger arcs are the over-strand runs: edges glued across the two over
slots of every crossing.  The determinant and the homology of the double
branched cover come from the crossing/arc incidence matrix evaluated at
-1 (one redundant row and column dropped).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NotAKnot, ParseError, SpecViolation, ValidationError
from .linalg import AbelianGroup, cokernel, integer_determinant


@dataclass(frozen=True)
class Crossing:
    edges: tuple[int, int, int, int]  # CCW from incoming under-edge
    sign: int  # +1: over-strand runs edges[1]->edges[3]; -1: the reverse

    @property
    def under_in(self):
        return self.edges[0]

    @property
    def under_out(self):
        return self.edges[2]

    @property
    def over_edges(self):
        return (self.edges[1], self.edges[3])


@dataclass
class KnotDiagram:
    """Validated single-component diagram with arc structure."""

    crossings: list[Crossing]
    name: str = ""
    arc_of_edge: dict = field(default_factory=dict)
    arc_count: int = 0

    @property
    def crossing_count(self):
        return len(self.crossings)

    @property
    def edge_count(self):
        return 2 * len(self.crossings)

    def pd_text(self):
        inner = ",".join("(%d,%d,%d,%d)" % c.edges for c in self.crossings)
        return f"[{inner}]"


def _succ(e, n2):
    return e % n2 + 1


def diagram_from_pd_tuples(tuples, name=""):
    """Validate raw PD tuples and compute arcs; raises ValidationError."""
    tuples = [tuple(int(x) for x in t) for t in tuples]
    n = len(tuples)
    if n == 0:
        return KnotDiagram([], name=name, arc_of_edge={1: 0}, arc_count=1)
    n2 = 2 * n
    counts = {}
    for t in tuples:
        if len(t) != 4:
            raise ValidationError(f"crossing {t!r} is not a 4-tuple")
        for e in t:
            if not 1 <= e <= n2:
                raise ValidationError(f"edge label {e} outside 1..{n2}")
            counts[e] = counts.get(e, 0) + 1
    bad = [e for e in range(1, n2 + 1) if counts.get(e, 0) != 2]
    if bad:
        raise ValidationError(f"edge labels {bad} do not occur exactly twice")
    crossings = []
    succ = {}

    def set_succ(e, target, t):
        if e in succ:
            raise ValidationError(
                f"crossing {t!r}: edge {e} has two successors; multi-component input?"
            )
        succ[e] = target

    for t in tuples:
        a, b, c, d = t
        if c != _succ(a, n2):
            raise ValidationError(
                f"crossing {t!r}: under-strand must continue consecutively "
                f"(expected {_succ(a, n2)}, got {c}); multi-component input?"
            )
        set_succ(a, c, t)
        if d == _succ(b, n2):
            sign = 1
            set_succ(b, d, t)
        elif b == _succ(d, n2):
            sign = -1
            set_succ(d, b, t)
        else:
            raise ValidationError(f"crossing {t!r}: over edges {b},{d} not consecutive")
        crossings.append(Crossing(t, sign))
    cursor, visited = 1, 0
    while visited < n2:
        if cursor not in succ:
            raise ValidationError(f"edge {cursor} never enters a crossing")
        cursor = succ.pop(cursor)
        visited += 1
    if cursor != 1:
        raise ValidationError("edge successors do not close into one cycle")
    # arcs: edges glued across over-strand passages
    parent = list(range(n2 + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cr in crossings:
        b, d = cr.over_edges
        rb, rd = find(b), find(d)
        if rb != rd:
            parent[rb] = rd
    reps = {}
    arc_of_edge = {}
    for e in range(1, n2 + 1):
        r = find(e)
        if r not in reps:
            reps[r] = len(reps)
        arc_of_edge[e] = reps[r]
    if len(reps) != n:
        raise ValidationError(f"expected {n} arcs, found {len(reps)}")
    return KnotDiagram(crossings, name=name, arc_of_edge=arc_of_edge, arc_count=n)


# -- PD parsing -----------------------------------------------------------------


def parse_pd(text, name=""):
    """Parse '[(a,b,c,d),(e,f,g,h),...]' into a validated diagram."""
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos] in " \t\r\n":
            pos += 1

    def expect(ch):
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != ch:
            raise ParseError(f"expected {ch!r}", pos)
        pos += 1

    def read_int():
        nonlocal pos
        skip_ws()
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ParseError("expected an integer", pos)
        return int(text[start:pos])

    expect("[")
    tuples = []
    skip_ws()
    if pos < n and text[pos] == "]":
        pos += 1
    else:
        while True:
            expect("(")
            quad = [read_int()]
            for _ in range(3):
                expect(",")
                quad.append(read_int())
            expect(")")
            tuples.append(tuple(quad))
            skip_ws()
            if pos < n and text[pos] == ",":
                pos += 1
                continue
            expect("]")
            break
    skip_ws()
    if pos != n:
        raise ParseError("trailing input", pos)
    return diagram_from_pd_tuples(tuples, name=name)


# -- braid words ----------------------------------------------------------------


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise ValidationError("braid needs at least one strand")
        for l in self.letters:
            if l == 0 or abs(l) >= self.strands:
                raise ValidationError(f"braid letter {l} out of range for {self.strands} strands")

    def closure_permutation(self):
        perm = list(range(self.strands))
        for l in self.letters:
            i = abs(l) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return perm

    def closure_components(self):
        perm = self.closure_permutation()
        seen = [False] * self.strands
        comps = 0
        for s in range(self.strands):
            if not seen[s]:
                comps += 1
                while not seen[s]:
                    seen[s] = True
                    s = perm[s]
        return comps


def parse_braid(text, name=""):
    """Parse 'strands=n w1 w2 ...' into a braid word."""
    tokens = text.split()
    if not tokens or not tokens[0].startswith("strands="):
        raise ParseError("braid input must start with 'strands=n'", 0)
    try:
        strands = int(tokens[0][len("strands="):])
    except ValueError:
        raise ParseError("invalid strand count", 0) from None
    letters = []
    for idx, tok in enumerate(tokens[1:], start=1):
        try:
            letters.append(int(tok))
        except ValueError:
            raise ParseError(f"invalid braid letter {tok!r}", idx) from None
    try:
        return BraidWord(strands, tuple(letters))
    except ValidationError as exc:
        raise ParseError(str(exc), 0) from None


def torus_knot(p, q):
    """Braid word (s_1 s_2 ... s_{p-1})^q whose closure is the (p,q) torus knot."""
    if p < 2 or q < 2:
        raise SpecViolation("torus parameters must be >= 2")
    if math.gcd(p, q) != 1:
        raise NotAKnot(f"torus({p},{q}) closes to a {math.gcd(p, q)}-component link")
    return BraidWord(p, tuple(list(range(1, p)) * q))


# -- generic diagram assembly -----------------------------------------------------


class _Assembler:
    """Crossing soup with union-find edge gluing, closed into a labeled diagram.

    Raw crossings carry edge *keys* in CCW slot order with the under-strand
    on slots (u, u+2); strands run through opposite slots.  ``finish``
    orients the single component, assigns consecutive labels, and emits
    validated PD tuples.
    """

    def __init__(self):
        self.crossings = []  # list of ([k0,k1,k2,k3], under_slot)
        self.parent = {}
        self.next_key = 0

    def fresh(self):
        k = self.next_key
        self.next_key += 1
        self.parent[k] = k
        return k

    def find(self, k):
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise NotAKnot("closure created a crossingless loop")
        self.parent[ra] = rb

    def add_crossing(self, ends, under_slot):
        self.crossings.append((list(ends), under_slot % 2))

    def finish(self, name=""):
        if not self.crossings:
            return KnotDiagram([], name=name, arc_of_edge={1: 0}, arc_count=1)
        incidences = {}
        for ci, (ends, _) in enumerate(self.crossings):
            for slot, key in enumerate(ends):
                incidences.setdefault(self.find(key), []).append((ci, slot))
        for key, incs in incidences.items():
            if len(incs) != 2:
                raise ValidationError(f"edge key {key} has {len(incs)} endpoints")
        n = len(self.crossings)
        # traverse: enter a crossing at a slot, leave through the opposite slot
        start_key = self.find(self.crossings[0][0][0])
        enter = incidences[start_key][0]
        labels = {}  # (ci, slot) -> edge label of the edge ENTERING at that slot
        label = 0
        edge_key = start_key
        while True:
            label += 1
            ci, slot = enter
            labels[(ci, slot)] = label
            out_slot = (slot + 2) % 4
            edge_key = self.find(self.crossings[ci][0][out_slot])
            inc1, inc2 = incidences[edge_key]
            enter = inc2 if inc1 == (ci, out_slot) else inc1
            if edge_key == start_key:
                break
        if label != 2 * n:
            raise NotAKnot(f"{label} of {2 * n} edges on the first component")
        tuples = []
        n2 = 2 * n
        for ci, (ends, under_slot) in enumerate(self.crossings):
            in_slots = [s for s in range(4) if (ci, s) in labels]
            assert len(in_slots) == 2, "each crossing is entered exactly twice"
            a_slot = under_slot if under_slot in in_slots else under_slot + 2
            assert a_slot in in_slots, "under strand never enters its crossing"
            quad = []
            for off in range(4):
                s = (a_slot + off) % 4
                if s in in_slots:
                    quad.append(labels[(ci, s)])
                else:
                    # outgoing edge: its label is successor of the entering one
                    quad.append(_succ(labels[(ci, (s + 2) % 4)], n2))
            tuples.append(tuple(quad))
        return diagram_from_pd_tuples(tuples, name=name)


def braid_to_diagram(braid, name=""):
    """Close a braid word into a knot diagram; rejects multi-component closures."""
    if braid.closure_components() != 1:
        raise NotAKnot(
            f"braid closure has {braid.closure_components()} components"
        )
    asm = _Assembler()
    top = [asm.fresh() for _ in range(braid.strands)]
    cur = list(top)
    for letter in braid.letters:
        i = abs(letter) - 1
        nw, ne = cur[i], cur[i + 1]
        sw, se = asm.fresh(), asm.fresh()
        # CCW slots (NE, NW, SW, SE); strands NW<->SE and NE<->SW
        if letter > 0:
            asm.add_crossing([ne, nw, sw, se], under_slot=0)  # left strand over
        else:
            asm.add_crossing([ne, nw, sw, se], under_slot=1)
        cur[i], cur[i + 1] = sw, se
    if braid.letters:
        for s in range(braid.strands):
            asm.union(cur[s], top[s])
        return asm.finish(name=name)
    return KnotDiagram([], name=name, arc_of_edge={1: 0}, arc_count=1)


# -- rational tangles and their closures ---------------------------------------


class _Tangle:
    """A 2-string tangle under construction, with NW/NE/SW/SE corner keys."""

    def __init__(self, asm):
        self.asm = asm
        self.nw = asm.fresh()
        self.ne = self.nw  # zero tangle: two horizontal strands
        self.sw = asm.fresh()
        self.se = self.sw

    def twist_right(self, sign):
        """One crossing between the NE and SE strands."""
        t, u = self.asm.fresh(), self.asm.fresh()
        # CCW slots (NE, NW, SW, SE) = (new t, old ne, old se, new u)
        self.asm.add_crossing(
            [t, self.ne, self.se, u], under_slot=0 if sign > 0 else 1
        )
        self.ne, self.se = t, u

    def twist_bottom(self, sign):
        """One crossing between the SW and SE strands."""
        v, w = self.asm.fresh(), self.asm.fresh()
        # CCW slots (NE, NW, SW, SE) = (old se, old sw, new v, new w)
        self.asm.add_crossing(
            [self.se, self.sw, v, w], under_slot=0 if sign > 0 else 1
        )
        self.sw, self.se = v, w


def continued_fraction(p, q):
    """Continued fraction p/q = a1 + 1/(a2 + 1/(...)) with an odd term count.

    The Euclidean expansion has a last term >= 2 whenever q > 1, so an even
    expansion can always be padded to odd length via a_k = (a_k - 1) + 1/1.
    """
    out = []
    while q:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    if len(out) % 2 == 0:
        assert out[-1] >= 2
        out[-1] -= 1
        out.append(1)
    return out


def rational_tangle(asm, p, q):
    """Build the p/q rational tangle from inner twists outward.

    With terms [a1..ak] (k odd), applying a_k right twists, a_{k-1} bottom
    twists, ..., a_1 right twists realizes the tangle fraction
    a1 + 1/(a2 + 1/(...)): right twists add one, bottom twists act on the
    reciprocal.
    """
    terms = continued_fraction(p, q)
    tangle = _Tangle(asm)
    for pos in range(len(terms) - 1, -1, -1):
        a = terms[pos]
        horizontal = (len(terms) - 1 - pos) % 2 == 0
        for _ in range(abs(a)):
            if horizontal:
                tangle.twist_right(1 if a > 0 else -1)
            else:
                tangle.twist_bottom(1 if a > 0 else -1)
    return tangle


def two_bridge(p, q, name=""):
    """4-plat diagram of the two-bridge knot determined by the fraction p/q."""
    if p < 1 or p % 2 == 0:
        raise SpecViolation("two-bridge p must be odd and positive")
    if p == 1:
        return KnotDiagram([], name=name or "unknot", arc_of_edge={1: 0}, arc_count=1)
    if not 0 < q < p or math.gcd(p, q) != 1:
        raise SpecViolation("two-bridge q must satisfy 0 < q < p, gcd(p,q) = 1")
    asm = _Assembler()
    tangle = rational_tangle(asm, p, q)
    asm.union(tangle.nw, tangle.ne)
    asm.union(tangle.sw, tangle.se)
    return asm.finish(name=name or f"twobridge({p},{q})")


def montesinos(e, fractions, name=""):
    """Numerator closure of a sum of rational tangles plus e extra half-twists.

    Fractions are (numerator, denominator) pairs building tangles of value
    num/den with den odd and positive, so the closure of the sum has odd
    determinant |prod(den) * (e + sum(num/den))| when it is a knot; links
    raise NotAKnot.  A single fraction with e = 0 reproduces the two-bridge
    knot of the same fraction.
    """
    for num, den in fractions:
        if den < 1 or den % 2 == 0:
            raise SpecViolation("tangle denominators must be odd and positive")
        if num < 1:
            raise SpecViolation("tangle numerators must be positive")
        if math.gcd(num, den) != 1:
            raise SpecViolation("tangle fractions must be reduced")
    if not fractions:
        return braid_to_diagram(
            BraidWord(2, tuple([1 if e > 0 else -1] * abs(e))) if e else BraidWord(1, ()),
            name=name or "unknot",
        )
    asm = _Assembler()
    tangles = [rational_tangle(asm, num, den) for num, den in fractions]
    combined = tangles[0]
    for t in tangles[1:]:
        asm.union(combined.ne, t.nw)
        asm.union(combined.se, t.sw)
        combined.ne, combined.se = t.ne, t.se
    for _ in range(abs(e)):
        combined.twist_right(1 if e > 0 else -1)
    asm.union(combined.nw, combined.ne)
    asm.union(combined.sw, combined.se)
    return asm.finish(name=name or f"montesinos(e={e})")


# -- DT codes -------------------------------------------------------------------

DT_REALIZATION_CAP = 14


def parse_dt(text, name=""):
    """Parse a single-row DT code ('4 6 2'), realizing a planar diagram.

    Convention: entry i pairs odd position 2i-1 with the given even
    position; a positive entry means the odd pass goes under.  Crossing
    handedness is recovered by exhaustive search over the 2^n local
    choices, keeping an assignment whose face count satisfies Euler's
    formula for the sphere; prime codes admit one up to overall mirror,
    and every invariant computed downstream is mirror-safe.
    """
    tokens = text.split()
    if not tokens:
        raise ParseError("empty DT code", 0)
    code = []
    for idx, tok in enumerate(tokens):
        try:
            code.append(int(tok))
        except ValueError:
            raise ParseError(f"invalid DT entry {tok!r}", idx) from None
    n = len(code)
    if n > DT_REALIZATION_CAP:
        raise ValidationError(
            f"DT realization supports at most {DT_REALIZATION_CAP} crossings"
        )
    evens = sorted(abs(v) for v in code)
    if evens != [2 * i for i in range(1, n + 1)]:
        raise ValidationError("DT entries must cover 2,4,...,2n exactly once")
    n2 = 2 * n
    pairs = []
    for i, v in enumerate(code):
        odd = 2 * i + 1
        even = abs(v)
        under_pos = odd if v > 0 else even
        pairs.append((odd, even, under_pos))

    def edge_into(pos):
        return (pos - 2) % n2 + 1

    base = []
    for odd, even, under_pos in pairs:
        over_pos = even if under_pos == odd else odd
        a = edge_into(under_pos)
        c = under_pos
        b_in = edge_into(over_pos)
        b_out = over_pos
        base.append((a, b_in, c, b_out))
    for mask in range(1 << n):
        tuples = []
        for i, (a, b_in, c, b_out) in enumerate(base):
            if (mask >> i) & 1:
                tuples.append((a, b_out, c, b_in))
            else:
                tuples.append((a, b_in, c, b_out))
        try:
            diagram = diagram_from_pd_tuples(tuples, name=name)
        except ValidationError:
            continue
        if diagram_face_count(diagram) == n + 2:
            return diagram
    raise ValidationError("DT code is not realizable as a planar knot diagram")


def diagram_face_count(diagram):
    """Number of faces of the underlying 4-valent map (n + 2 iff planar)."""
    n = diagram.crossing_count
    if n == 0:
        return 2
    incidences = {}
    for ci, cr in enumerate(diagram.crossings):
        for slot, e in enumerate(cr.edges):
            incidences.setdefault(e, []).append((ci, slot))
    darts = {(ci, slot) for ci in range(n) for slot in range(4)}
    faces = 0
    while darts:
        start = min(darts)
        cur = start
        faces += 1
        while True:
            darts.discard(cur)
            ci, slot = cur
            e = diagram.crossings[ci].edges[slot]
            inc1, inc2 = incidences[e]
            other = inc2 if inc1 == cur else inc1
            cur = (other[0], (other[1] + 1) % 4)
            if cur == start:
                break
    return faces


# -- determinant and branched-cover homology -------------------------------------


def _crossing_arc_matrix(diagram):
    """Rows: 2*(over arc) - (under-in arc) - (under-out arc), one per crossing."""
    rows = []
    arcs = diagram.arc_of_edge
    for cr in diagram.crossings:
        row = [0] * diagram.arc_count
        row[arcs[cr.over_edges[0]]] += 2
        row[arcs[cr.under_in]] -= 1
        row[arcs[cr.under_out]] -= 1
        rows.append(row)
    return rows


def determinant(diagram):
    """|H_1| of the double branched cover: |det| of the deleted incidence matrix."""
    n = diagram.crossing_count
    if n == 0:
        return 1
    rows = _crossing_arc_matrix(diagram)
    deleted = [row[: n - 1] for row in rows[: n - 1]]
    return abs(integer_determinant(deleted))


def h1_double_cover(diagram):
    """Full homology of the double branched cover via Smith normal form."""
    n = diagram.crossing_count
    if n == 0:
        return AbelianGroup()
    rows = [row[: n - 1] for row in _crossing_arc_matrix(diagram)[: n - 1]]
    return cokernel(rows, n - 1)


def alexander_at(diagram, t):
    """|det| of the Alexander matrix at integer t (defined up to powers of |t|).

    Rows follow the crossing relation: at a positive crossing the under-out
    arc is the over-conjugate of the under-in arc; evaluation abelianizes
    every arc generator to t.
    """
    n = diagram.crossing_count
    if n == 0:
        return 1
    arcs = diagram.arc_of_edge
    rows = []
    for cr in diagram.crossings:
        row = [0] * diagram.arc_count
        if cr.sign > 0:
            row[arcs[cr.over_edges[0]]] += 1 - t
            row[arcs[cr.under_in]] += t
            row[arcs[cr.under_out]] -= 1
        else:
            row[arcs[cr.over_edges[0]]] += t - 1
            row[arcs[cr.under_in]] += 1
            row[arcs[cr.under_out]] -= t
        rows.append(row)
    deleted = [row[: n - 1] for row in rows[: n - 1]]
    return abs(integer_determinant(deleted))

