"""Combinatorial trisection data for products of closed surfaces.

A closed genus-g surface decomposes into three disks whose pairwise
intersections are 2g+1 disjoint arcs and whose triple intersection is
4g+2 vertices.  Crossing such a decomposition of the first factor with
three marked disks in the second factor produces a trisection of the
product whose central surface has genus (2g+1)(2h+1)+1 and whose three
pieces are 1-handlebodies of genus 2g+2h each.

Everything here is exact integer arithmetic on explicit incidence data;
validators return report entries instead of raising, so deliberately
broken inputs can be audited.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .report import PLUMBING, CheckEntry, entry

# Face labels are 1, 2, 3 throughout; arc "pairs" are unordered label pairs
# stored in canonical cyclic form.
PAIRS = ((1, 2), (2, 3), (3, 1))


def _canonical_pair(a: int, b: int) -> tuple[int, int]:
    for p in PAIRS:
        if {a, b} == set(p):
            return p
    raise ValueError(f"not a face pair: ({a}, {b})")


@dataclass(frozen=True)
class Arc:
    """One arc of a pairwise face intersection.

    ``pair`` names the two adjacent faces; ``ends`` are the two endpoint
    vertex ids (a vertex may repeat if the arc were a loop, which the
    builders never produce).
    """

    pair: tuple[int, int]
    ends: tuple[int, int]


@dataclass(frozen=True)
class SurfaceDecomposition:
    """Three-disk decomposition of a closed surface, with incidence.

    vertices are integer ids; arcs carry their face pair and endpoints.
    ``faces`` is the number of disks (always 3 for valid data, but stored
    so validators can detect corrupted inputs).
    """

    genus: int
    faces: int
    vertices: tuple[int, ...]
    arcs: tuple[Arc, ...]

    def arcs_of_pair(self, pair: tuple[int, int]) -> tuple[Arc, ...]:
        return tuple(a for a in self.arcs if a.pair == pair)

    @property
    def arcs_per_pair(self) -> dict[tuple[int, int], int]:
        return {p: len(self.arcs_of_pair(p)) for p in PAIRS}

    def vertex_stars(self) -> dict[int, list[tuple[int, int]]]:
        """Map vertex id -> list of incident arc pairs (with multiplicity)."""
        stars: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for a in self.arcs:
            for v in a.ends:
                if v in stars:
                    stars[v].append(a.pair)
        return stars

    @property
    def euler_characteristic(self) -> int:
        return self.faces - len(self.arcs) + len(self.vertices)


def _sphere_decomposition() -> SurfaceDecomposition:
    # Three sectors on the sphere: two poles, one arc (meridian) per pair.
    return SurfaceDecomposition(
        genus=0,
        faces=3,
        vertices=(0, 1),
        arcs=tuple(Arc(pair=p, ends=(0, 1)) for p in PAIRS),
    )


def _torus_template() -> SurfaceDecomposition:
    """Genus-1 decomposition: 3 disks, 3 arcs per pair, 6 vertices.

    Realized as the bipartite incidence u_k -- w_{k+d}, where the offset d
    selects the face pair; every vertex then meets exactly one arc of each
    pair, as required of a triple-point structure.
    """
    u = (0, 1, 2)
    w = (3, 4, 5)
    arcs = []
    for d, pair in enumerate(PAIRS):
        for k in range(3):
            arcs.append(Arc(pair=pair, ends=(u[k], w[(k + d) % 3])))
    return SurfaceDecomposition(genus=1, faces=3, vertices=u + w, arcs=tuple(arcs))


def _other_end(arc: Arc, v: int) -> int:
    if arc.ends[0] == v:
        return arc.ends[1]
    if arc.ends[1] == v:
        return arc.ends[0]
    raise ValueError(f"vertex {v} is not an end of {arc}")


def stabilize(d: SurfaceDecomposition, at_vertex: int | None = None) -> SurfaceDecomposition:
    """Connect-sum move raising the genus by one.

    Removes a disk neighborhood of one vertex together with the matching
    neighborhood in a genus-1 template and splices the truncated arcs
    pairwise (the arc of pair (i,j) on one side joins the arc of pair (i,j)
    on the other).  Adds 2 arcs per pair and 4 vertices.  The cyclic
    matching of arc stubs around the removed vertices is a fixed
    convention: stubs join by equal face pair.
    """
    if at_vertex is None:
        at_vertex = max(d.vertices)
    if at_vertex not in d.vertices:
        raise ValueError(f"no vertex {at_vertex} in decomposition")
    host_cut = [a for a in d.arcs if at_vertex in a.ends]
    if len(host_cut) != 3 or {a.pair for a in host_cut} != set(PAIRS):
        raise ValueError("chosen vertex does not have one arc per pair")

    template = _torus_template()
    offset = max(d.vertices) + 1
    t_vertices = tuple(v + offset for v in template.vertices)
    t_arcs = [replace(a, ends=(a.ends[0] + offset, a.ends[1] + offset)) for a in template.arcs]
    cut_at = t_vertices[0]
    tmpl_cut = [a for a in t_arcs if cut_at in a.ends]

    kept = [a for a in d.arcs if at_vertex not in a.ends]
    kept += [a for a in t_arcs if cut_at not in a.ends]
    for pair in PAIRS:
        (ha,) = [a for a in host_cut if a.pair == pair]
        (ta,) = [a for a in tmpl_cut if a.pair == pair]
        kept.append(Arc(pair=pair, ends=(_other_end(ha, at_vertex), _other_end(ta, cut_at))))

    vertices = tuple(v for v in d.vertices if v != at_vertex) + tuple(
        v for v in t_vertices if v != cut_at
    )
    return SurfaceDecomposition(
        genus=d.genus + 1, faces=3, vertices=vertices, arcs=tuple(kept)
    )


def build_surface_decomposition(genus: int) -> SurfaceDecomposition:
    """Three-disk decomposition of the closed genus-g surface.

    Genus 0 is the three-sector sphere; each higher genus applies the
    vertex connect-sum move once more.
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    d = _sphere_decomposition()
    for _ in range(genus):
        d = stabilize(d)
    return d


def validate_decomposition(d: SurfaceDecomposition, prefix: str = "decomposition") -> list[CheckEntry]:
    """Check every decomposition invariant; failures become report entries."""
    g = d.genus
    checks: list[CheckEntry] = []
    checks.append(
        entry(
            f"{prefix}/faces",
            "decomposition has exactly three disk faces",
            "closed surface decomposes into three disks",
            d.faces == 3,
            {"faces": d.faces},
        )
    )
    per_pair = d.arcs_per_pair
    expected_arcs = 2 * g + 1
    checks.append(
        entry(
            f"{prefix}/arcs-per-pair",
            f"each face pair meets in {expected_arcs} arcs",
            "pairwise intersection is 2g+1 disjoint arcs",
            all(n == expected_arcs for n in per_pair.values()),
            {"expected": expected_arcs, "counts": {f"{p[0]}{p[1]}": n for p, n in per_pair.items()}},
        )
    )
    expected_vertices = 4 * g + 2
    checks.append(
        entry(
            f"{prefix}/vertices",
            f"triple intersection has {expected_vertices} vertices",
            "triple intersection is 4g+2 points",
            len(d.vertices) == expected_vertices,
            {"expected": expected_vertices, "actual": len(d.vertices)},
        )
    )
    chi = d.euler_characteristic
    checks.append(
        entry(
            f"{prefix}/euler",
            f"Euler characteristic equals {2 - 2 * g}",
            "faces - arcs + vertices = 2 - 2g",
            chi == 2 - 2 * g,
            {"expected": 2 - 2 * g, "actual": chi},
        )
    )
    stars = d.vertex_stars()
    bad = {
        v: sorted(f"{p[0]}{p[1]}" for p in pairs)
        for v, pairs in stars.items()
        if sorted(pairs) != sorted(PAIRS)
    }
    checks.append(
        entry(
            f"{prefix}/vertex-incidence",
            "every vertex meets exactly three arcs, one per face pair",
            "vertices are triple points of the three disks",
            not bad,
            {"violations": bad},
        )
    )
    return checks


@dataclass(frozen=True)
class TrisectionData:
    """Genus and handlebody-rank bookkeeping for a surface-product trisection."""

    g: int
    h: int
    central_genus: int
    handlebody_ranks: tuple[int, int, int]
    sector_decomposition: SurfaceDecomposition
    num_marked_disks: int = 3


def expected_central_genus(g: int, h: int) -> int:
    return (2 * g + 1) * (2 * h + 1) + 1


def expected_handlebody_rank(g: int, h: int) -> int:
    return 2 * g + 2 * h


def build_trisection_data(g: int, h: int) -> TrisectionData:
    """Trisection bookkeeping for the product of genus-g and genus-h surfaces."""
    if g < 0 or h < 0:
        raise ValueError("genera must be non-negative")
    k = expected_handlebody_rank(g, h)
    return TrisectionData(
        g=g,
        h=h,
        central_genus=expected_central_genus(g, h),
        handlebody_ranks=(k, k, k),
        sector_decomposition=build_surface_decomposition(g),
    )


def validate_trisection(t: TrisectionData, prefix: str = "trisection") -> list[CheckEntry]:
    """Check the genus formula, handle counts, and the Euler identity."""
    g, h = t.g, t.h
    checks: list[CheckEntry] = []
    expected_g = expected_central_genus(g, h)
    checks.append(
        entry(
            f"{prefix}/central-genus",
            f"central surface genus equals (2g+1)(2h+1)+1 = {expected_g}",
            "trisection genus of the surface product is (2g+1)(2h+1)+1",
            t.central_genus == expected_g,
            {"expected": expected_g, "actual": t.central_genus},
        )
    )
    expected_k = expected_handlebody_rank(g, h)
    checks.append(
        entry(
            f"{prefix}/handlebody-ranks",
            f"each piece is a 1-handlebody of genus {expected_k}",
            "each trisection piece has handlebody genus 2g+2h",
            all(k == expected_k for k in t.handlebody_ranks),
            {"expected": expected_k, "actual": list(t.handlebody_ranks)},
        )
    )
    # Standard trisection handle count: chi(X) = 2 + G - (k1+k2+k3).
    lhs = 2 + t.central_genus - sum(t.handlebody_ranks)
    rhs = (2 - 2 * g) * (2 - 2 * h)
    checks.append(
        entry(
            f"{prefix}/euler-identity",
            f"2 + G - (k1+k2+k3) = {lhs} matches chi of the product = {rhs}",
            PLUMBING,
            lhs == rhs,
            {"lhs": lhs, "rhs": rhs},
        )
    )
    checks.append(
        entry(
            f"{prefix}/rank-bound",
            "handlebody ranks do not exceed the central genus",
            "trisection parameters satisfy max(k1,k2,k3) <= g",
            max(t.handlebody_ranks) <= t.central_genus,
            {"max_rank": max(t.handlebody_ranks), "central_genus": t.central_genus},
        )
    )
    checks.append(
        entry(
            f"{prefix}/marked-disks",
            "second factor carries three marked disks",
            PLUMBING,
            t.num_marked_disks == 3,
            {"actual": t.num_marked_disks},
        )
    )
    if t.sector_decomposition.genus != g:
        checks.append(
            entry(
                f"{prefix}/sector-genus",
                "embedded sector decomposition has the base genus",
                PLUMBING,
                False,
                {"expected": g, "actual": t.sector_decomposition.genus},
            )
        )
    else:
        checks.extend(validate_decomposition(t.sector_decomposition, prefix=f"{prefix}/sectors"))
    return checks
