"""Coordinates: consistent tuples, realization, and the distance formula.

A group element is recorded by its projections to every domain space.
The operations here run the other direction: test whether an abstract
tuple satisfies the consistency inequalities, search a Cayley ball for
elements realizing it, compare the word metric against the th
thresholded sum of domain distances, and read coarse product geometry
(orthogonal blocks, quasi-lines) off the structure.
"""

import math
from dataclasses import dataclass

from .balls import ball_elements, cayley_ball_layers, symmetrize
from .errors import InputError, PreconditionError
from .groups import IDENTITY
from .spaces import CayleyTreeSpace, CosetTreeSpace, LineSpace
from .structures import NEST_IN, ORTHOGONAL, TRANSVERSE


def _point_json(p):
    if isinstance(p, tuple):
        return [_point_json(x) for x in p]
    return p


@dataclass
class ConsistentTuple:
    """Coordinates: one point per domain, plus the slack they claim."""

    entries: dict
    kappa: float

    def domains(self):
        return sorted(self.entries)

    def to_json(self):
        return {
            "kappa": self.kappa,
            "entries": {u: _point_json(p) for u, p in sorted(self.entries.items())},
        }


@dataclass
class ConsistencyReport:
    ok: bool
    kappa: float
    worst_margin: float
    condition: str
    pair: tuple
    checks: int

    def to_json(self):
        return {
            "ok": self.ok,
            "kappa": self.kappa,
            "worst_margin": self.worst_margin,
            "condition": self.condition,
            "pair": list(self.pair),
            "checks": self.checks,
        }


def project_tuple(structure, g, domains=None):
    """Tuple of projections of g; consistent with kappa1 by the axioms."""
    doms = list(domains) if domains is not None else structure.domains()
    entries = {u: structure.pi(structure.check_domain(u), g) for u in doms}
    return ConsistentTuple(entries, structure.constants.kappa1)


def is_consistent(structure, tup, kappa=None, domains=None, sample_radius=2):
    """Check the three consistency conditions, reporting the worst margin.

    Condition 1 compares each entry against the projection image (via the
    declared lift when one exists, else a sampled ball).  Condition 2 is
    the transverse min-inequality, condition 3 the nested one.  The index
    set checked is the structure's unless a sub-index-set is declared.
    """
    if kappa is None:
        kappa = tup.kappa
    doms = list(domains) if domains is not None else structure.domains()
    missing = [u for u in doms if u not in tup.entries]
    if missing:
        raise InputError(f"tuple is missing entries for {missing}")

    worst = (math.inf, "vacuous", ())
    checks = 0
    sampled = None

    def consider(margin, condition, pair):
        nonlocal worst
        if margin < worst[0]:
            worst = (margin, condition, pair)

    for u in doms:
        b = tup.entries[u]
        space = structure.space(u)
        if not space.contains(b):
            raise InputError(f"entry for {u} is not a point of its space")
        g = structure.lift(u, b)
        if g is not None:
            val = space.dist(b, structure.pi(u, g))
        else:
            if sampled is None:
                gens = symmetrize(structure.group, structure.group.generators())
                layers = cayley_ball_layers(structure.group, gens, sample_radius)
                sampled = ball_elements(layers)
            val = min(space.dist(b, structure.pi(u, h)) for h in sampled)
        checks += 1
        consider(kappa - val, "projection-image", (u,))

    for i, u in enumerate(doms):
        for v in doms[i + 1:]:
            rel = structure.relation(u, v)
            if rel == TRANSVERSE:
                val = min(
                    structure.space(u).dist(tup.entries[u], structure.rho_point(v, u)),
                    structure.space(v).dist(tup.entries[v], structure.rho_point(u, v)),
                )
                checks += 1
                consider(kappa - val, "transverse", (u, v))
            elif rel in (NEST_IN, ">"):
                lo, hi = (u, v) if rel == NEST_IN else (v, u)
                val = min(
                    structure.space(hi).dist(tup.entries[hi], structure.rho_point(lo, hi)),
                    structure.space(lo).dist(
                        tup.entries[lo], structure.rho_map_point(hi, lo, tup.entries[hi])
                    ),
                )
                checks += 1
                consider(kappa - val, "nested", (lo, hi))

    margin, condition, pair = worst
    return ConsistencyReport(margin >= 0, kappa, margin, condition, pair, checks)


@dataclass
class RealizationResult:
    """Ball elements closest to a coordinate tuple.

    theta_e is the smallest slack putting an element within reach of every
    entry; diameter is the word-metric spread of the achievers.  exhausted
    marks a search that ran out of radius before meeting max_slack; that
    signals a bigger ball is needed, not that realization fails.
    """

    elements: list
    theta_e: float
    diameter: int
    search_radius: int
    exhausted: bool

    def to_json(self, model=None):
        shown = [model.format(g) if model else list(g) for g in self.elements]
        return {
            "elements": shown,
            "theta_e": self.theta_e,
            "diameter": self.diameter,
            "search_radius": self.search_radius,
            "exhausted": self.exhausted,
        }


def realize(structure, tup, search_radius, gens=None, max_slack=None, check=True):
    """All ball elements whose projections sit within theta_e of the tuple."""
    if check:
        report = is_consistent(structure, tup, domains=list(tup.entries))
        if not report.ok:
            raise PreconditionError(
                f"tuple is not {tup.kappa}-consistent: {report.condition} "
                f"violated on {report.pair} by {-report.worst_margin}"
            )
    model = structure.group
    gens = symmetrize(model, gens if gens is not None else model.generators())
    ball = ball_elements(cayley_ball_layers(model, gens, search_radius))
    items = sorted(tup.entries.items())
    spaces = {u: structure.space(u) for u, _ in items}

    def score(g):
        return max(spaces[u].dist(b, structure.pi(u, g)) for u, b in items)

    scores = [(score(g), g) for g in ball]
    theta_e = min(s for s, _ in scores)
    elements = [g for s, g in scores if s == theta_e]
    diameter = 0
    for i, g in enumerate(elements):
        for h in elements[i + 1:]:
            diameter = max(diameter, structure.word_metric(g, h))
    exhausted = max_slack is not None and theta_e > max_slack
    return RealizationResult(elements, theta_e, diameter, search_radius, exhausted)


@dataclass
class ThresholdedSum:
    """Per-domain distances above the threshold, and their total."""

    s: float
    contributions: dict
    total: float

    def to_json(self):
        return {
            "s": self.s,
            "total": self.total,
            "contributions": dict(sorted(self.contributions.items())),
        }


def distance_formula_sum(structure, x, y, s):
    """Sum of domain distances, counting a term iff it exceeds s."""
    if s < 0:
        raise InputError("threshold must be nonnegative")
    contributions = {}
    for u in structure.domains_between(x, y):
        d = structure.dsub(u, x, y)
        if d > s:
            contributions[u] = d
    return ThresholdedSum(s, contributions, float(sum(contributions.values())))


@dataclass
class FitResult:
    ok: bool
    K: float
    C: float
    s: float
    n_samples: int
    binding: dict
    failure: dict

    def to_json(self):
        return {
            "ok": self.ok,
            "K": self.K,
            "C": self.C,
            "s": self.s,
            "n_samples": self.n_samples,
            "binding": self.binding,
            "failure": self.failure,
        }


def fit_distance_formula(structure, sample_pairs, s, k_max=16.0, k_step=0.5, c_step=0.5):
    """Least (K, C), lexicographically, with d/K - C <= sum <= K*d + C.

    The additive grid is capped at max(8, 2*s*m) where m is the largest
    number of contributing domains seen, so a threshold that suppresses
    terms is absorbed by C and never inflates K.  Reports the binding
    sample; if even (k_max, c_max) fails, returns a fit-failure record.
    """
    pairs = list(sample_pairs)
    if len(pairs) < 2:
        raise PreconditionError("need at least two sample pairs")
    rows = []
    max_terms = 1
    for x, y in pairs:
        d = structure.word_metric(x, y)
        ts = distance_formula_sum(structure, x, y, s)
        rows.append((x, y, d, ts.total))
        max_terms = max(max_terms, len(ts.contributions))
    c_max = max(8.0, 2.0 * s * max_terms)

    k = 1.0
    while k <= k_max + 1e-9:
        need = 0.0
        for _, _, d, total in rows:
            need = max(need, total - k * d, d / k - total)
        c = math.ceil(need / c_step - 1e-9) * c_step
        if c <= c_max + 1e-9:
            binding = None
            for x, y, d, total in rows:
                slack = min(k * d + c - total, total - (d / k - c))
                if binding is None or slack < binding["slack"]:
                    binding = {
                        "x": structure.group.format(x),
                        "y": structure.group.format(y),
                        "d": d,
                        "total": total,
                        "slack": round(slack, 9),
                    }
            return FitResult(True, k, c, s, len(rows), binding, None)
        k += k_step

    worst = None
    for x, y, d, total in rows:
        need = max(total - k_max * d, d / k_max - total)
        if worst is None or need > worst["needed_c"]:
            worst = {
                "x": structure.group.format(x),
                "y": structure.group.format(y),
                "d": d,
                "total": total,
                "needed_c": round(need, 9),
            }
    failure = {"k_max": k_max, "c_max": c_max, "worst": worst}
    return FitResult(False, None, None, s, len(rows), None, failure)


def restrict_to_big(structure, tup, C=0.0):
    """Drop domains whose whole space has diameter at most C."""
    if not C < tup.kappa:
        raise PreconditionError("cutoff must stay below the tuple's kappa")
    entries = {}
    for u, b in tup.entries.items():
        space = structure.space(u)
        if not space.bounded or space.diameter_bound > C:
            entries[u] = b
    return ConsistentTuple(entries, tup.kappa)


def expand_tuple(structure, tup, x=IDENTITY):
    """Fill the missing domains of a restricted tuple with projections of x."""
    entries = {}
    for u in structure.domains():
        entries[u] = tup.entries[u] if u in tup.entries else structure.pi(u, x)
    return ConsistentTuple(entries, tup.kappa)


@dataclass
class Decomposition:
    """Partition of the unbounded domains into mutually orthogonal blocks."""

    blocks: list
    descriptors: list
    degenerate: bool

    def to_json(self):
        return {
            "blocks": self.blocks,
            "descriptors": self.descriptors,
            "degenerate": self.degenerate,
        }


def _block_kind(structure, block):
    if len(block) != 1:
        return "mixed"
    space = structure.space(block[0])
    if isinstance(space, LineSpace):
        return "line"
    if isinstance(space, (CayleyTreeSpace, CosetTreeSpace)):
        return "tree"
    return "space"


def product_decomposition(structure):
    """Connected components of non-orthogonality on unbounded domains."""
    unbounded = sorted(u for u in structure.domains() if not structure.is_bounded_domain(u))
    if not unbounded:
        return Decomposition([], [], True)
    remaining = list(unbounded)
    blocks = []
    while remaining:
        seed = remaining.pop(0)
        block = [seed]
        frontier = [seed]
        while frontier:
            u = frontier.pop()
            linked = [v for v in remaining if structure.relation(u, v) != ORTHOGONAL]
            for v in linked:
                remaining.remove(v)
                block.append(v)
                frontier.append(v)
        blocks.append(sorted(block))
    blocks.sort()
    descriptors = [
        {
            "domains": block,
            "spaces": [structure.space(u).label for u in block],
            "kind": _block_kind(structure, block),
        }
        for block in blocks
    ]
    return Decomposition(blocks, descriptors, False)


def quasi_line_detect(space, radius, q_max=4, max_points=600):
    """Smallest Q at which the sample hugs one geodesic and has two ends.

    The axis comes from two farthest-point sweeps (exact on trees, a
    standard approximation elsewhere).  Ends at scale Q are components of
    the sample minus the Q-ball around the basepoint that reach the outer
    sphere.  Returns None when no Q <= q_max works, as on a tree with 3 or
    more directions.
    """
    if radius < 2:
        raise InputError("radius must be at least 2")
    pts = space.sample_points(radius, limit=max_points)
    base = space.basepoint()
    far1 = max(pts, key=lambda p: space.dist(base, p))
    far2 = max(pts, key=lambda p: space.dist(far1, p))
    axis = list(space.geodesic(far1, far2))
    off_axis = {i: min(space.dist(p, a) for a in axis) for i, p in enumerate(pts)}
    d_base = {i: space.dist(base, p) for i, p in enumerate(pts)}

    neighbors = {i: [] for i in range(len(pts))}
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if space.dist(pts[i], pts[j]) == 1:
                neighbors[i].append(j)
                neighbors[j].append(i)

    for q in range(q_max + 1):
        if any(off_axis[i] > q for i in off_axis):
            continue
        far = {i for i in d_base if d_base[i] > q}
        ends = 0
        seen = set()
        for i in sorted(far):
            if i in seen:
                continue
            stack = [i]
            seen.add(i)
            touches_sphere = False
            while stack:
                j = stack.pop()
                if d_base[j] == radius:
                    touches_sphere = True
                for nb in neighbors[j]:
                    if nb in far and nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            if touches_sphere:
                ends += 1
        if ends == 2:
            return q
    return None
