"""Spaces serving as the hyperbolic coordinate targets of a structure.

Each space fixes a point type, an exact metric, geodesics, and a
deterministic sampler around the basepoint.  The fellow-traveling checks
in the rest of the package only ever see this interface.
"""

from itertools import combinations

from .errors import InputError, PreconditionError, WrongKindError
from .groups import FreeGroup, FreeProduct, invert_word


class Space:
    """Metric space with basepoint, geodesics, and a ball sampler."""

    label = "space"
    delta = 0.0
    bounded = False
    diameter_bound = None

    def dist(self, x, y):
        raise NotImplementedError

    def basepoint(self):
        raise NotImplementedError

    def geodesic(self, x, y):
        """A geodesic as a list of points from x to y, consecutive at distance 1."""
        raise NotImplementedError

    def sample_points(self, radius, limit=None):
        """Deterministic list of points within the given radius of the basepoint."""
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def check_point(self, x):
        if not self.contains(x):
            raise InputError(f"{x!r} is not a point of {self.label}")
        return x


class PointSpace(Space):
    """Single point; the coordinate space of a bounded domain."""

    bounded = True
    diameter_bound = 0.0

    def __init__(self, label="point"):
        self.label = label

    def dist(self, x, y):
        return 0.0

    def basepoint(self):
        return 0

    def geodesic(self, x, y):
        return [x]

    def sample_points(self, radius, limit=None):
        return [0]

    def contains(self, x):
        return x == 0


class LineSpace(Space):
    """The integer line."""

    def __init__(self, label="line"):
        self.label = label

    def dist(self, x, y):
        return abs(x - y)

    def basepoint(self):
        return 0

    def geodesic(self, x, y):
        step = 1 if y >= x else -1
        return list(range(x, y + step, step))

    def sample_points(self, radius, limit=None):
        pts = list(range(-int(radius), int(radius) + 1))
        return pts[:limit] if limit else pts

    def contains(self, x):
        return isinstance(x, int)


class PathGraphSpace(Space):
    """Path graph on vertices 0..n; bounded with diameter n."""

    bounded = True

    def __init__(self, n, label="path"):
        if n < 0:
            raise InputError("need at least one vertex")
        self.n = n
        self.label = label
        self.diameter_bound = float(n)

    def dist(self, x, y):
        self.check_point(x)
        self.check_point(y)
        return abs(x - y)

    def basepoint(self):
        return 0

    def geodesic(self, x, y):
        step = 1 if y >= x else -1
        return list(range(x, y + step, step))

    def sample_points(self, radius, limit=None):
        pts = [p for p in range(self.n + 1) if p <= radius]
        return pts[:limit] if limit else pts

    def contains(self, x):
        return isinstance(x, int) and 0 <= x <= self.n


class GraphSpace(Space):
    """Finite connected graph with the edge-path metric."""

    bounded = True

    def __init__(self, n_vertices, edges, label="graph"):
        self.n = n_vertices
        self.label = label
        self.adj = {v: set() for v in range(n_vertices)}
        for a, b in edges:
            if not (0 <= a < n_vertices and 0 <= b < n_vertices) or a == b:
                raise InputError(f"bad edge ({a}, {b})")
            self.adj[a].add(b)
            self.adj[b].add(a)
        self._dist_cache = {}
        self.diameter_bound = float(self._diameter())

    def _bfs(self, src):
        if src in self._dist_cache:
            return self._dist_cache[src]
        dist = {src: 0}
        parent = {src: None}
        frontier = [src]
        while frontier:
            nxt = []
            for v in frontier:
                for w in self.adj[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        nxt.append(w)
            frontier = nxt
        if len(dist) != self.n:
            raise InputError("graph is not connected")
        self._dist_cache[src] = (dist, parent)
        return dist, parent

    def _diameter(self):
        return max(self._bfs(v)[0][w] for v in range(self.n) for w in range(self.n))

    def dist(self, x, y):
        self.check_point(x)
        self.check_point(y)
        return self._bfs(x)[0][y]

    def basepoint(self):
        return 0

    def geodesic(self, x, y):
        _, parent = self._bfs(x)
        path = [y]
        while path[-1] != x:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def sample_points(self, radius, limit=None):
        d = self._bfs(self.basepoint())[0]
        pts = [v for v in range(self.n) if d[v] <= radius]
        return pts[:limit] if limit else pts

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < self.n


class CayleyTreeSpace(Space):
    """Cayley graph of a free group with its standard generators (a tree)."""

    def __init__(self, free_model, label="tree"):
        if not isinstance(free_model, FreeGroup):
            raise WrongKindError("CayleyTreeSpace needs a free group model")
        self.model = free_model
        self.label = label

    def dist(self, x, y):
        return len(self.model.multiply(self.model.inverse(x), y))

    def basepoint(self):
        return ()

    def geodesic(self, x, y):
        u = self.model.multiply(self.model.inverse(x), y)
        return [self.model.multiply(x, u[:i]) for i in range(len(u) + 1)]

    def sample_points(self, radius, limit=None):
        from .balls import cayley_ball_layers, symmetrize

        layers = cayley_ball_layers(
            self.model, symmetrize(self.model, self.model.generators()), int(radius)
        )
        pts = [p for layer in layers for p in layer]
        return pts[:limit] if limit else pts

    def contains(self, x):
        try:
            w = self.model.check_word(x)
        except InputError:
            return False
        return w == self.model.normal_form(w)


class CosetTreeSpace(Space):
    """Tree of factor cosets of a two-factor free product.

    Vertices are pairs (factor index, canonical representative): the
    representative drops a trailing syllable lying in the vertex's own
    factor, so each coset names exactly one vertex.  Cosets g F_i and
    h F_j are adjacent when they intersect, which yields a tree.
    """

    def __init__(self, product_model, label="coset tree"):
        if not isinstance(product_model, FreeProduct) or len(product_model.parts) != 2:
            raise WrongKindError("CosetTreeSpace needs a two-factor free product")
        self.model = product_model
        self.label = label

    def vertex(self, factor, word):
        if factor not in (0, 1):
            raise InputError("factor index must be 0 or 1")
        return (factor, self._rep(factor, self.model.normal_form(word)))

    def _rep(self, factor, nf_word):
        syls = self.model.syllables(nf_word)
        if syls and syls[-1][0] == factor:
            syls = syls[:-1]
        out = []
        for fi, local in syls:
            out.extend(self.model.to_global(fi, local))
        return tuple(out)

    def translate(self, g, v):
        """Left action of the group on cosets."""
        factor, rep = v
        return self.vertex(factor, self.model.multiply(g, rep))

    def dist(self, x, y):
        self.check_point(x)
        self.check_point(y)
        if x == y:
            return 0
        (i, h), (j, k) = x, y
        u = self.model.multiply(invert_word(h), k)
        syls = self.model.syllables(u)
        if syls and syls[0][0] == i:
            syls = syls[1:]
        if syls and syls[-1][0] == j:
            syls = syls[:-1]
        return len(syls) + 1

    def basepoint(self):
        return (0, ())

    def geodesic(self, x, y):
        self.check_point(x)
        self.check_point(y)
        if x == y:
            return [x]
        (i, h), (j, k) = x, y
        u = self.model.multiply(invert_word(h), k)
        syls = self.model.syllables(u)
        g = h
        if syls and syls[0][0] == i:
            g = self.model.multiply(g, self.model.to_global(i, syls[0][1]))
            syls = syls[1:]
        verts = [x]
        for fi, local in syls:
            step = (fi, self._rep(fi, g))
            if step != verts[-1]:
                verts.append(step)
            g = self.model.multiply(g, self.model.to_global(fi, local))
        end = (j, self._rep(j, g))
        if end != verts[-1]:
            verts.append(end)
        return verts

    def sample_points(self, radius, limit=None):
        from .balls import cayley_ball_layers, symmetrize

        layers = cayley_ball_layers(
            self.model, symmetrize(self.model, self.model.generators()), int(radius)
        )
        pts = set()
        for layer in layers:
            for w in layer:
                pts.add(self.vertex(0, w))
                pts.add(self.vertex(1, w))
        pts = sorted(pts)
        return pts[:limit] if limit else pts

    def contains(self, x):
        if not (isinstance(x, tuple) and len(x) == 2 and x[0] in (0, 1)):
            return False
        factor, rep = x
        try:
            w = self.model.check_word(rep)
        except InputError:
            return False
        return w == self.model.normal_form(w) and self._rep(factor, w) == w


def gromov_product(space, x, y, z):
    """(y . z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2."""
    return (space.dist(x, y) + space.dist(x, z) - space.dist(y, z)) / 2


def four_point_defect(space, w, x, y, z):
    """Half the gap between the two largest of the three pairings; a space is
    delta-hyperbolic in the four-point sense when this never exceeds delta."""
    sums = sorted(
        [
            space.dist(w, x) + space.dist(y, z),
            space.dist(w, y) + space.dist(x, z),
            space.dist(w, z) + space.dist(x, y),
        ]
    )
    return (sums[2] - sums[1]) / 2


def max_four_point_defect(space, points, quad_budget=60000):
    """Worst defect over quadruples of the sample; (worst, witness)."""
    worst = 0.0
    witness = None
    count = 0
    for quad in combinations(points, 4):
        count += 1
        if count > quad_budget:
            break
        d = four_point_defect(space, *quad)
        if d > worst:
            worst = d
            witness = quad
    return worst, witness


def check_hyperbolicity(space, radius, quad_budget=60000, limit=120):
    """Sampled four-point check against the declared constant.

    Returns (ok, worst defect, witness quadruple)."""
    pts = space.sample_points(radius, limit=limit)
    worst, witness = max_four_point_defect(space, pts, quad_budget)
    return worst <= space.delta, worst, witness


def translation_length(space, act, x=None):
    """max(0, d(x, g^2 x) - d(x, g x)): exact translation length whenever the
    space is a tree (coset trees, Cayley trees, lines, paths)."""
    if x is None:
        x = space.basepoint()
    gx = act(x)
    ggx = act(gx)
    return max(0, space.dist(x, ggx) - space.dist(x, gx))


def verify_geodesic(space, path):
    """Consecutive steps of size one and total length equal to the metric."""
    if not path:
        raise PreconditionError("empty path")
    for a, b in zip(path, path[1:]):
        if space.dist(a, b) != 1:
            return False
    return space.dist(path[0], path[-1]) == len(path) - 1
