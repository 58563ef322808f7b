"""
Splitting polygons by chords.

A ChordArrangement precomputes, for a fixed polygon, prefix sums of shoelace
terms and of ray-crossing counts along every ring. Faces produced by a set of
non-crossing chords between ring vertices are then traced on a compressed
graph whose edges are ring arcs (between consecutive chord endpoints) and the
chords themselves, so the cost of one decomposition depends on the number of
chords rather than on the number of contour vertices.

Every half-edge keeps the interior of the polygon on its left; a face is
traced by always taking the outgoing half-edge met first when rotating
clockwise from the reverse of the incoming direction.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from error_handler import ErrorType, TerrainError
from geometry.primitives import (
    Coord,
    Location,
    Point,
    Polygon,
    Segment,
    make_point,
    normalize,
    point_in_polygon,
    point_on_segment,
    ray_crosses_edge,
    segments_intersect,
    segments_properly_cross,
)

logger = logging.getLogger(__name__)

# ("a", ring, vertex) arc to the next chord endpoint on the ring
# ("c", chord, side)  chord traversed from side 0 (a -> b) or side 1 (b -> a)
# ("l", ring)         whole ring carrying no chord endpoint
HalfEdge = Tuple


class ChordRef(NamedTuple):
    """A chord given by the (ring, vertex index) of both endpoints."""
    ring_a: int
    index_a: int
    ring_b: int
    index_b: int


@dataclass
class Face:
    """One face of an arrangement: an outer cycle and its hole cycles."""
    outer: List[HalfEdge]
    holes: List[List[HalfEdge]] = field(default_factory=list)
    area2: Coord = 0

    @property
    def area(self) -> Coord:
        return normalize(Fraction(self.area2, 2))


@dataclass
class FaceSet:
    """Faces traced for one chord set."""
    chords: Tuple[ChordRef, ...]
    endpoints: Dict[int, List[int]]
    faces: List[Face]
    chord_faces: List[Tuple[int, int]]  # faces left of side 0 and side 1

    def arc_end(self, ring: int, index: int) -> int:
        ends = self.endpoints[ring]
        k = bisect_right(ends, index)
        return ends[k % len(ends)]


def _cross_vec(u: Tuple, v: Tuple) -> Coord:
    return u[0] * v[1] - u[1] * v[0]


def _angle_class(ref: Tuple, d: Tuple) -> int:
    c = _cross_vec(ref, d)
    if c == 0:
        return 0 if ref[0] * d[0] + ref[1] * d[1] > 0 else 2
    return 1 if c > 0 else 3


def _further_ccw(d1: Tuple, d2: Tuple, ref: Tuple) -> bool:
    """Is d1 strictly further counterclockwise from ref than d2?"""
    k1, k2 = _angle_class(ref, d1), _angle_class(ref, d2)
    if k1 != k2:
        return k1 > k2
    if k1 in (1, 3):
        return _cross_vec(d2, d1) > 0
    return False


def _range_sum(prefix: List, i: int, j: int):
    """Sum of ring edge terms i, i+1, ..., j-1 (a full turn when i == j)."""
    if j > i:
        return prefix[j] - prefix[i]
    return prefix[-1] - prefix[i] + prefix[j]


class ChordArrangement:
    """
    Face tracing for chords of a fixed polygon.

    Args:
        polygon: Polygon whose ring vertices carry the chord endpoints
        sites: Points located repeatedly (cluster anchors, member tiles)
    """

    def __init__(self, polygon: Polygon, sites: Sequence[Point] = ()):
        self.polygon = polygon
        self.rings: List[Tuple[Point, ...]] = [tuple(r) for r in polygon.rings]
        self.sites: List[Point] = list(sites)

        self._area_prefix = [
            self._prefix(ring, lambda u, w: u.x * w.y - u.y * w.x) for ring in self.rings
        ]
        self._site_prefix = [self._site_prefixes(p) for p in self.sites]
        self._edge_site_prefix: Dict[Tuple[int, int], Tuple[Point, List[List[int]]]] = {}

        self.vertex_refs: Dict[Point, Tuple[int, int]] = {}
        for r, ring in enumerate(self.rings):
            for i, p in enumerate(ring):
                self.vertex_refs.setdefault(p, (r, i))

    @staticmethod
    def _prefix(ring, term) -> List:
        n = len(ring)
        prefix = [0] * (n + 1)
        for i in range(n):
            prefix[i + 1] = prefix[i] + term(ring[i], ring[(i + 1) % n])
        return prefix

    def _site_prefixes(self, q: Point) -> List[List[int]]:
        return [
            self._prefix(ring, lambda u, w: 1 if ray_crosses_edge(q, u, w) else 0)
            for ring in self.rings
        ]

    def point(self, ring: int, index: int) -> Point:
        return self.rings[ring][index]

    def chord_points(self, chord: ChordRef) -> Tuple[Point, Point]:
        return self.point(chord.ring_a, chord.index_a), self.point(chord.ring_b, chord.index_b)

    def chord_segment(self, chord: ChordRef) -> Segment:
        return Segment(*self.chord_points(chord))

    # -- tracing ---------------------------------------------------------

    def trace(self, chords: Sequence[ChordRef]) -> FaceSet:
        """
        Trace the faces of the polygon cut by non-crossing chords.

        Args:
            chords: Chords between ring vertices, pairwise non-crossing

        Returns:
            FaceSet with faces and, per chord, the faces on either side

        Raises:
            TerrainError: If a boundary cycle ends up enclosed by no face
        """
        chords = tuple(chords)
        endpoints: Dict[int, List[int]] = {}
        out_edges: Dict[Tuple[int, int], List[HalfEdge]] = {}
        for c, chord in enumerate(chords):
            for side, node in enumerate(((chord.ring_a, chord.index_a), (chord.ring_b, chord.index_b))):
                ends = endpoints.setdefault(node[0], [])
                if node[1] not in ends:
                    ends.append(node[1])
                out_edges.setdefault(node, []).append(("c", c, side))
        for ends in endpoints.values():
            ends.sort()

        face_set = FaceSet(chords=chords, endpoints=endpoints, faces=[], chord_faces=[])

        def chord_nodes(h: HalfEdge):
            chord = chords[h[1]]
            a, b = (chord.ring_a, chord.index_a), (chord.ring_b, chord.index_b)
            return (a, b) if h[2] == 0 else (b, a)

        def end_of(h: HalfEdge) -> Tuple[int, int]:
            if h[0] == "a":
                return (h[1], face_set.arc_end(h[1], h[2]))
            return chord_nodes(h)[1]

        def direction(h: HalfEdge, leaving: bool) -> Tuple:
            if h[0] == "a":
                ring = self.rings[h[1]]
                n = len(ring)
                if leaving:
                    p, q = ring[h[2]], ring[(h[2] + 1) % n]
                else:
                    j = face_set.arc_end(h[1], h[2])
                    p, q = ring[(j - 1) % n], ring[j]
            else:
                (r0, i0), (r1, i1) = chord_nodes(h)
                p, q = self.rings[r0][i0], self.rings[r1][i1]
            return (q.x - p.x, q.y - p.y)

        def next_edge(h: HalfEdge) -> HalfEdge:
            d_in = direction(h, leaving=False)
            reverse = (-d_in[0], -d_in[1])
            best, best_dir = None, None
            for candidate in out_edges[end_of(h)]:
                d = direction(candidate, leaving=True)
                if best is None or _further_ccw(d, best_dir, reverse):
                    best, best_dir = candidate, d
            return best

        half_edges: List[HalfEdge] = []
        for r in range(len(self.rings)):
            if r in endpoints:
                for i in endpoints[r]:
                    arc = ("a", r, i)
                    out_edges[(r, i)].insert(0, arc)
                    half_edges.append(arc)
            else:
                half_edges.append(("l", r))
        for c in range(len(chords)):
            half_edges.extend((("c", c, 0), ("c", c, 1)))

        cycles: List[List[HalfEdge]] = []
        cycle_of: Dict[HalfEdge, int] = {}
        for h in half_edges:
            if h in cycle_of:
                continue
            cycle = []
            current = h
            while current not in cycle_of:
                cycle_of[current] = len(cycles)
                cycle.append(current)
                if current[0] == "l":
                    break
                current = next_edge(current)
            cycles.append(cycle)

        areas = [self._cycle_area2(face_set, cycle) for cycle in cycles]
        face_of_cycle: Dict[int, int] = {}
        for k, area2 in enumerate(areas):
            if area2 > 0:
                face_of_cycle[k] = len(face_set.faces)
                face_set.faces.append(Face(outer=cycles[k], area2=area2))

        for k, cycle in enumerate(cycles):
            if areas[k] > 0:
                continue
            owner = self._owner_face(face_set, cycle)
            face_set.faces[owner].holes.append(cycle)
            face_set.faces[owner].area2 += areas[k]
            face_of_cycle[k] = owner

        face_set.chord_faces = [
            (face_of_cycle[cycle_of[("c", c, 0)]], face_of_cycle[cycle_of[("c", c, 1)]])
            for c in range(len(chords))
        ]
        return face_set

    # -- cycle measures --------------------------------------------------

    def _cycle_area2(self, face_set: FaceSet, cycle: List[HalfEdge]) -> Coord:
        total = 0
        for h in cycle:
            if h[0] == "l":
                total += self._area_prefix[h[1]][-1]
            elif h[0] == "a":
                total += _range_sum(self._area_prefix[h[1]], h[2], face_set.arc_end(h[1], h[2]))
            else:
                a, b = self.chord_points(face_set.chords[h[1]])
                if h[2] == 1:
                    a, b = b, a
                total += a.x * b.y - a.y * b.x
        return total

    def _cycle_parity(self, face_set: FaceSet, cycle, prefixes: List[List[int]], q: Point) -> int:
        count = 0
        for h in cycle:
            if h[0] == "l":
                count += prefixes[h[1]][-1]
            elif h[0] == "a":
                count += _range_sum(prefixes[h[1]], h[2], face_set.arc_end(h[1], h[2]))
            else:
                a, b = self.chord_points(face_set.chords[h[1]])
                if ray_crosses_edge(q, a, b):
                    count += 1
        return count & 1

    def _edge_midpoint_prefixes(self, r: int, i: int) -> Tuple[Point, List[List[int]]]:
        if (r, i) not in self._edge_site_prefix:
            ring = self.rings[r]
            u, w = ring[i], ring[(i + 1) % len(ring)]
            q = make_point(Fraction(u.x + w.x, 2), Fraction(u.y + w.y, 2))
            self._edge_site_prefix[(r, i)] = (q, self._site_prefixes(q))
        return self._edge_site_prefix[(r, i)]

    def _owner_face(self, face_set: FaceSet, cycle: List[HalfEdge]) -> int:
        piece = next(h for h in cycle if h[0] in ("a", "l"))
        r = piece[1]
        i = piece[2] if piece[0] == "a" else 0
        q, prefixes = self._edge_midpoint_prefixes(r, i)

        owner, owner_area = None, None
        for f, face in enumerate(face_set.faces):
            if self._cycle_parity(face_set, face.outer, prefixes, q):
                if owner is None or face.area2 < owner_area:
                    owner, owner_area = f, face.area2
        if owner is None:
            raise TerrainError(
                ErrorType.CHORD_EXITS_POLYGON,
                "A boundary cycle is enclosed by no face; a chord leaves the polygon",
                details={"ring": r}
            )
        return owner

    # -- point location --------------------------------------------------

    def locate_site(self, face_set: FaceSet, site: int) -> Optional[int]:
        """
        Face containing a precomputed site.

        Args:
            face_set: Result of trace()
            site: Index into self.sites

        Returns:
            Face index, or None if the site lies on a chord
        """
        q = self.sites[site]
        for chord in face_set.chords:
            a, b = self.chord_points(chord)
            if point_on_segment(q, a, b):
                return None
        prefixes = self._site_prefix[site]
        for f, face in enumerate(face_set.faces):
            if not self._cycle_parity(face_set, face.outer, prefixes, q):
                continue
            if any(self._cycle_parity(face_set, hole, prefixes, q) for hole in face.holes):
                continue
            return f
        return None

    # -- expansion -------------------------------------------------------

    def cycle_points(self, face_set: FaceSet, cycle: List[HalfEdge]) -> Tuple[Point, ...]:
        points: List[Point] = []
        for h in cycle:
            if h[0] == "l":
                points.extend(self.rings[h[1]])
            elif h[0] == "a":
                ring = self.rings[h[1]]
                j = face_set.arc_end(h[1], h[2])
                k = h[2]
                while True:
                    points.append(ring[k])
                    k = (k + 1) % len(ring)
                    if k == j:
                        break
            else:
                a, b = self.chord_points(face_set.chords[h[1]])
                points.append(a if h[2] == 0 else b)
        return tuple(points)

    def face_polygons(self, face_set: FaceSet) -> List[Polygon]:
        return [
            Polygon(
                outer=self.cycle_points(face_set, face.outer),
                holes=tuple(self.cycle_points(face_set, hole) for hole in face.holes),
            )
            for face in face_set.faces
        ]


def _insert_endpoints(polygon: Polygon, points: Sequence[Point]) -> Polygon:
    rings = [list(r) for r in polygon.rings]
    for p in points:
        if any(p in ring for ring in rings):
            continue
        placed = False
        for ring in rings:
            for i in range(len(ring)):
                if point_on_segment(p, ring[i], ring[(i + 1) % len(ring)]):
                    ring.insert(i + 1, p)
                    placed = True
                    break
            if placed:
                break
        if not placed:
            raise TerrainError(
                ErrorType.CHORD_NOT_ON_RING,
                f"Chord endpoint ({p.x}, {p.y}) is not on the polygon boundary",
                details={"point": (str(p.x), str(p.y))}
            )
    return Polygon(outer=tuple(rings[0]), holes=tuple(tuple(r) for r in rings[1:]))


def chord_stays_inside(polygon: Polygon, seg: Segment, edge_candidates=None) -> bool:
    """
    True iff the chord meets the boundary only at its endpoints and its
    midpoint is strictly inside.

    Args:
        polygon: Polygon
        seg: Chord between two boundary points
        edge_candidates: Optional iterable of (ring, index) edges to test
            instead of all edges, e.g. pre-filtered by a spatial index
    """
    if point_in_polygon(seg.midpoint, polygon) is not Location.INSIDE:
        return False
    rings = polygon.rings
    if edge_candidates is None:
        edge_candidates = [(r, i) for r, ring in enumerate(rings) for i in range(len(ring))]
    for r, i in edge_candidates:
        ring = rings[r]
        u, w = ring[i], ring[(i + 1) % len(ring)]
        edge = Segment(u, w)
        if not segments_intersect(seg, edge):
            continue
        if segments_properly_cross(seg, edge):
            return False
        for p in (u, w):
            if p != seg.a and p != seg.b and point_on_segment(p, seg.a, seg.b):
                return False
    return True


def split_by_chords(poly: Polygon, chords: Sequence[Segment]) -> List[Polygon]:
    """
    Split a polygon by non-crossing chords.

    Args:
        poly: Polygon (outer ring with interior on the left, holes reversed)
        chords: Chords with both endpoints on the polygon's rings

    Returns:
        Sub-polygons partitioning poly; their areas sum exactly to its area

    Raises:
        TerrainError: If an endpoint is off the boundary or a chord leaves the polygon
    """
    if not chords:
        return [poly]

    refined = _insert_endpoints(poly, [p for seg in chords for p in (seg.a, seg.b)])
    for seg in chords:
        if not chord_stays_inside(refined, seg):
            raise TerrainError(
                ErrorType.CHORD_EXITS_POLYGON,
                f"Chord ({seg.a.x}, {seg.a.y})-({seg.b.x}, {seg.b.y}) leaves the polygon",
            )

    arrangement = ChordArrangement(refined)
    refs = [ChordRef(*arrangement.vertex_refs[seg.a], *arrangement.vertex_refs[seg.b]) for seg in chords]
    face_set = arrangement.trace(refs)
    logger.debug(f"Split polygon by {len(chords)} chords into {len(face_set.faces)} faces")
    return arrangement.face_polygons(face_set)
