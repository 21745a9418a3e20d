"""Knot in, branched-double-cover report out.

For each diagram the pipeline computes the determinant and the homology
of the double branched cover from the crossing incidence matrix, then
independently enumerates the meridian-squared quotient of the knot group
and extracts the cover group as the parity kernel of the regular action.
The two routes must agree (the homology order is the determinant), the
cover order must never be 2, and order 1 must coincide with determinant 1
-- the report carries these consistency bits rather than assuming them.

Finite cover groups fall into exactly three families: cyclic (abelian
case -- a non-cyclic abelian cover would be a contradiction and raises),
tetrahedral (solvable non-abelian), and icosahedral (derived series
stabilizing at the perfect group of order 120).  Anything else raises
UnclassifiedFiniteGroup rather than being binned silently.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import knots as kn
from . import presentations as pr
from .errors import (
    InternalInconsistency,
    NotAKnot,
    ParseError,
    SpecViolation,
    UnclassifiedFiniteGroup,
    ValidationError,
)
from .linalg import AbelianGroup

UNKNOT = "unknot"
CYCLIC = "cyclic"
TETRAHEDRAL = "tetrahedral"
ICOSAHEDRAL = "icosahedral"
INFINITE_OR_UNKNOWN = "infinite_or_unknown"

REPORT_SCHEMA = "cover-report/1"


@dataclass
class CoverReport:
    name: str
    determinant: int | None = None
    h1: AbelianGroup | None = None
    orbifold_order: int | None = None
    cover_order: int | None = None
    classification: str | None = None
    cyclic_order: int | None = None
    trichotomy_consistent: bool | None = None
    ms: float | None = None
    error: str | None = None

    def classification_label(self):
        if self.classification == CYCLIC:
            return f"cyclic({self.cyclic_order})"
        return self.classification

    def to_record(self, show_timing=False):
        rec = {
            "schema": REPORT_SCHEMA,
            "name": self.name,
            "det": self.determinant,
            "h1": str(self.h1) if self.h1 is not None else None,
            "orbifold_order": self.orbifold_order,
            "cover_order": self.cover_order,
            "classification": self.classification_label(),
            "trichotomy_consistent": self.trichotomy_consistent,
        }
        if show_timing:
            rec["ms"] = None if self.ms is None else round(self.ms, 3)
        if self.error is not None:
            rec["error"] = self.error
        return rec


def classify_finite(group):
    """Place a finite cover group into the cyclic/tetrahedral/icosahedral trichotomy."""
    series = group.derived_series()
    sizes = [len(s) for s in series]
    if sizes[-1] == 1:
        if len(sizes) == 2:  # derived subgroup already trivial: abelian
            ab = group.abelianization()
            if len(ab.torsion) > 1:
                raise InternalInconsistency(
                    f"abelian cover group is not cyclic: {ab}"
                )
            return CYCLIC, group.order
        return TETRAHEDRAL, None  # solvable and non-abelian
    if sizes[-1] == 120:  # series stabilized at a nontrivial perfect group
        return ICOSAHEDRAL, None
    raise UnclassifiedFiniteGroup(
        f"derived series sizes {sizes} fit no expected family"
    )


def analyze(diagram, coset_cap=pr.DEFAULT_COSET_CAP, name=None):
    """Full pipeline on one diagram; raises on internal inconsistencies."""
    t0 = time.perf_counter()
    report = CoverReport(name or diagram.name or "knot")
    det = kn.determinant(diagram)
    h1 = kn.h1_double_cover(diagram)
    report.determinant = det
    report.h1 = h1
    if det % 2 == 0:
        raise InternalInconsistency(
            f"{report.name}: even determinant {det}; the double cover of a knot "
            "is a Z/2-homology sphere"
        )
    if h1.order() != det:
        raise InternalInconsistency(
            f"{report.name}: determinant {det} != homology order {h1.order()}"
        )
    pres = pr.wirtinger(diagram)
    orb = pr.orbifold_quotient(pres)
    outcome = pr.todd_coxeter(orb, cap=coset_cap)
    if outcome.finite:
        report.orbifold_order = outcome.order
        cover_order, cover = pr.branched_cover_group(outcome)
        report.cover_order = cover_order
        cover_ab = cover.abelianization()
        if cover_ab.order() != det:
            raise InternalInconsistency(
                f"{report.name}: cover abelianization {cover_ab} has order "
                f"{cover_ab.order()}, determinant says {det}"
            )
        if cover_ab != h1:
            raise InternalInconsistency(
                f"{report.name}: cover abelianization {cover_ab} != homology {h1}"
            )
        if cover_order == 1:
            report.classification = UNKNOT
        else:
            label, cyc = classify_finite(cover)
            report.classification = label
            report.cyclic_order = cyc
        report.trichotomy_consistent = cover_order != 2 and (
            cover_order != 1 or det == 1
        )
    else:
        report.classification = INFINITE_OR_UNKNOWN
        report.trichotomy_consistent = True
    report.ms = (time.perf_counter() - t0) * 1000.0
    return report


# -- corpus ------------------------------------------------------------------------


def diagram_from_payload(fmt, payload, name=""):
    """Corpus row dispatch; formats: pd, dt, braid, torus, twobridge, montesinos."""
    fmt = fmt.strip().lower()
    if fmt == "pd":
        return kn.parse_pd(payload, name=name)
    if fmt == "dt":
        return kn.parse_dt(payload, name=name)
    if fmt == "braid":
        return kn.braid_to_diagram(kn.parse_braid(payload), name=name)
    if fmt == "torus":
        p, q = (int(t) for t in payload.split())
        return kn.braid_to_diagram(kn.torus_knot(p, q), name=name)
    if fmt == "twobridge":
        p, q = (int(t) for t in payload.split())
        return kn.two_bridge(p, q, name=name)
    if fmt == "montesinos":
        head, _, tail = payload.partition(";")
        head = head.strip()
        if not head.startswith("e="):
            raise ParseError("montesinos payload must start with 'e=<int>;'", 0)
        e = int(head[2:])
        fractions = []
        for tok in tail.split():
            num, _, den = tok.partition("/")
            fractions.append((int(num), int(den)))
        return kn.montesinos(e, fractions, name=name)
    raise ParseError(f"unknown corpus format {fmt!r}", 0)


def parse_corpus(text):
    """One knot per line: name<TAB>format<TAB>payload; blank/# lines skipped."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"corpus line {lineno} needs 3 tab-separated fields", lineno)
        rows.append(tuple(parts))
    return rows


@dataclass
class CorpusSummary:
    reports: list
    row_errors: int
    trichotomy_violations: int
    even_determinants: int
    order_two_covers: int

    @property
    def violations(self):
        return self.trichotomy_violations + self.even_determinants + self.order_two_covers


def run_corpus(rows, coset_cap=pr.DEFAULT_COSET_CAP, workers=1):
    """Analyze every corpus row; per-row failures are recorded, not fatal."""

    def run_row(row):
        rname, fmt, payload = row
        try:
            diagram = diagram_from_payload(fmt, payload, name=rname)
            return analyze(diagram, coset_cap=coset_cap, name=rname)
        except (
            ParseError,
            ValidationError,
            NotAKnot,
            SpecViolation,
            InternalInconsistency,
            UnclassifiedFiniteGroup,
        ) as exc:
            return CoverReport(rname, error=f"{type(exc).__name__}: {exc}")

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run_row, rows))
    else:
        reports = [run_row(row) for row in rows]
    reports.sort(key=lambda r: r.name)
    summary = CorpusSummary(
        reports=reports,
        row_errors=sum(1 for r in reports if r.error),
        trichotomy_violations=sum(
            1 for r in reports if r.trichotomy_consistent is False
        ),
        even_determinants=sum(
            1
            for r in reports
            if r.determinant is not None and r.determinant % 2 == 0
        ),
        order_two_covers=sum(1 for r in reports if r.cover_order == 2),
    )
    return summary
