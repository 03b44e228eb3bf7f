"""Finitely generated group models with solvable word problem.

A word is a tuple of letters; generator i contributes the letter 2*i and
its inverse the letter 2*i + 1, so ``letter ^ 1`` is the inverse letter.
Every family exposes a normal form that is geodesic for the standard
generating set, hence ``len(normal_form(w))`` is the word length.

Families: free, free abelian, direct products, free products, and graph
products of the above.  Labels are single lowercase ASCII letters; the
compact string form writes inverses as uppercase ("caC" is c a c^-1, "1"
is the identity).
"""

from __future__ import annotations

import string

from .errors import InputError, WrongKindError

Word = tuple[int, ...]

IDENTITY: Word = ()


def invert_word(w: Word) -> Word:
    return tuple(x ^ 1 for x in reversed(w))


def _free_reduce(letters) -> Word:
    out = []
    for x in letters:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class GroupModel:
    """Base class: a marked group with normal forms.

    Subclasses must set self.ngens, self.labels and implement
    normal_form.  All other operations are derived.
    """

    family = "abstract"
    # every family shipped here is torsion-free; flags the classification
    # anomaly path (an empty big set on a non-identity element)
    torsion_free = True

    ngens: int
    labels: list[str]

    def _check_labels(self):
        if len(self.labels) != self.ngens:
            raise InputError("need one label per generator")
        for lab in self.labels:
            if len(lab) != 1 or lab not in string.ascii_lowercase:
                raise InputError(f"label {lab!r} must be a single lowercase letter")
        if len(set(self.labels)) != self.ngens:
            raise InputError("labels must be distinct")

    def check_word(self, w) -> Word:
        w = tuple(w)
        for x in w:
            if not isinstance(x, int) or not 0 <= x < 2 * self.ngens:
                raise InputError(f"letter {x!r} out of range for {self.ngens} generators")
        return w

    def normal_form(self, w: Word) -> Word:
        raise NotImplementedError

    def multiply(self, u: Word, v: Word) -> Word:
        return self.normal_form(tuple(u) + tuple(v))

    def inverse(self, w: Word) -> Word:
        return self.normal_form(invert_word(w))

    def conjugate(self, t: Word, g: Word) -> Word:
        """t g t^-1."""
        return self.multiply(self.multiply(t, g), self.inverse(t))

    def power(self, w: Word, n: int) -> Word:
        if n < 0:
            return self.power(self.inverse(w), -n)
        acc: Word = IDENTITY
        base = self.normal_form(w)
        while n:
            if n & 1:
                acc = self.multiply(acc, base)
            base = self.multiply(base, base)
            n >>= 1
        return acc

    def equal(self, u: Word, v: Word) -> bool:
        return self.normal_form(u) == self.normal_form(v)

    def is_identity(self, w: Word) -> bool:
        return self.normal_form(w) == IDENTITY

    def word_length(self, w: Word) -> int:
        return len(self.normal_form(w))

    def generators(self) -> list[Word]:
        return [(2 * i,) for i in range(self.ngens)]

    def generator_word(self, label: str) -> Word:
        if label not in self.labels:
            raise InputError(f"unknown generator label {label!r}")
        return (2 * self.labels.index(label),)

    def parse(self, text: str) -> Word:
        text = text.strip()
        if text in ("", "1", "e"):
            return IDENTITY
        letters = []
        for ch in text:
            low = ch.lower()
            if low not in self.labels:
                raise InputError(f"unknown generator letter {ch!r} in {text!r}")
            letter = 2 * self.labels.index(low)
            if ch.isupper():
                letter ^= 1
            letters.append(letter)
        return self.normal_form(tuple(letters))

    def format(self, w: Word) -> str:
        if not w:
            return "1"
        out = []
        for x in w:
            lab = self.labels[x >> 1]
            out.append(lab.upper() if x & 1 else lab)
        return "".join(out)

    def to_json(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.family} group on {','.join(self.labels)}>"


class FreeGroup(GroupModel):
    """Free group of given rank; normal form is free reduction."""

    family = "free"

    def __init__(self, rank: int, labels=None):
        if rank < 0:
            raise InputError("rank must be nonnegative")
        self.ngens = rank
        self.labels = list(labels) if labels is not None else list(string.ascii_lowercase[:rank])
        self._check_labels()

    def normal_form(self, w: Word) -> Word:
        return _free_reduce(self.check_word(w))

    def multiply(self, u: Word, v: Word) -> Word:
        u = self.normal_form(u)
        v = self.normal_form(v)
        # boundary cancellation only: both inputs are reduced
        i, j = len(u), 0
        while i > 0 and j < len(v) and u[i - 1] == v[j] ^ 1:
            i -= 1
            j += 1
        return u[:i] + v[j:]

    def to_json(self) -> dict:
        return {"family": "free", "rank": self.ngens, "labels": list(self.labels)}


class FreeAbelianGroup(GroupModel):
    """Z^rank; normal form sorts letters by generator, inverses cancelled."""

    family = "free_abelian"

    def __init__(self, rank: int, labels=None):
        if rank < 0:
            raise InputError("rank must be nonnegative")
        self.ngens = rank
        if labels is not None:
            self.labels = list(labels)
        elif rank == 1:
            self.labels = ["t"]
        else:
            self.labels = list(string.ascii_lowercase[:rank])
        self._check_labels()

    def exponents(self, w: Word) -> list[int]:
        e = [0] * self.ngens
        for x in self.check_word(w):
            e[x >> 1] += -1 if x & 1 else 1
        return e

    def from_exponents(self, e) -> Word:
        if len(e) != self.ngens:
            raise InputError("exponent vector has wrong length")
        out = []
        for i, k in enumerate(e):
            letter = 2 * i if k > 0 else 2 * i + 1
            out.extend([letter] * abs(k))
        return tuple(out)

    def normal_form(self, w: Word) -> Word:
        return self.from_exponents(self.exponents(w))

    def to_json(self) -> dict:
        return {"family": "free_abelian", "rank": self.ngens, "labels": list(self.labels)}


class _CombinedModel(GroupModel):
    """Shared letter bookkeeping for products: factor letters get even offsets."""

    def _init_parts(self, parts):
        if not parts:
            raise InputError("need at least one factor")
        self.parts = list(parts)
        self._offsets = []
        self.labels = []
        off = 0
        for p in self.parts:
            if not isinstance(p, GroupModel):
                raise WrongKindError("factors must be group models")
            self._offsets.append(off)
            self.labels.extend(p.labels)
            off += 2 * p.ngens
        self.ngens = off // 2
        self._part_of = []
        for i, p in enumerate(self.parts):
            self._part_of.extend([i] * (2 * p.ngens))
        self._check_labels()

    def part_of_letter(self, letter: int) -> int:
        return self._part_of[letter]

    def to_local(self, part_index: int, w: Word) -> Word:
        off = self._offsets[part_index]
        return tuple(x - off for x in w)

    def to_global(self, part_index: int, w: Word) -> Word:
        off = self._offsets[part_index]
        return tuple(x + off for x in w)


class DirectProduct(_CombinedModel):
    """Direct product; factors commute, normal form concatenates factor forms."""

    family = "direct_product"

    def __init__(self, factors):
        self._init_parts(factors)

    def factor_word(self, w: Word, i: int) -> Word:
        """Component of w in factor i, as a local word in that factor's letters."""
        sub = tuple(x for x in self.check_word(w) if self._part_of[x] == i)
        return self.parts[i].normal_form(self.to_local(i, sub))

    def normal_form(self, w: Word) -> Word:
        w = self.check_word(w)
        out = []
        for i in range(len(self.parts)):
            out.extend(self.to_global(i, self.factor_word(w, i)))
        return tuple(out)

    def to_json(self) -> dict:
        return {"family": "direct_product", "factors": [p.to_json() for p in self.parts]}


class FreeProduct(_CombinedModel):
    """Free product; normal form is the alternating-syllable form."""

    family = "free_product"

    def __init__(self, factors):
        self._init_parts(factors)
        if len(self.parts) < 2:
            raise InputError("a free product needs at least two factors")

    def _push_syllable(self, stack, fi: int, local: Word):
        while local:
            if stack and stack[-1][0] == fi:
                _, prev = stack.pop()
                local = self.parts[fi].multiply(prev, local)
                continue
            stack.append((fi, local))
            return

    def _syllable_stack(self, w: Word):
        stack = []
        for x in self.check_word(w):
            fi = self._part_of[x]
            self._push_syllable(stack, fi, (x - self._offsets[fi],))
        return stack

    def syllables(self, w: Word) -> list[tuple[int, Word]]:
        """Alternating factor syllables of nf(w) as (factor index, local word)."""
        return self._syllable_stack(w)

    def normal_form(self, w: Word) -> Word:
        out = []
        for fi, local in self._syllable_stack(w):
            out.extend(self.to_global(fi, local))
        return tuple(out)

    def to_json(self) -> dict:
        return {"family": "free_product", "factors": [p.to_json() for p in self.parts]}


class GraphProduct(_CombinedModel):
    """Graph product: vertex groups, joined ones commute elementwise.

    Normal form reduces syllables (merging across commuting blocks) and then
    emits movable syllables greedily by least vertex id, which is a canonical
    representative of the shuffle class.
    """

    family = "graph_product"

    def __init__(self, vertex_models, edges):
        self._init_parts(vertex_models)
        self.edges = set()
        for e in edges:
            pair = tuple(sorted(e))
            if len(pair) != 2 or pair[0] == pair[1]:
                raise InputError(f"edge {e!r} must join two distinct vertices")
            for v in pair:
                if not 0 <= v < len(self.parts):
                    raise InputError(f"edge {e!r} names a missing vertex")
            self.edges.add(pair)

    def adjacent(self, u: int, v: int) -> bool:
        return u != v and tuple(sorted((u, v))) in self.edges

    def _reduce_syllables(self, sylls):
        sylls = [s for s in sylls if s[1]]
        changed = True
        while changed:
            changed = False
            for i in range(len(sylls)):
                for j in range(i + 1, len(sylls)):
                    vi = sylls[i][0]
                    if sylls[j][0] != vi:
                        continue
                    if all(self.adjacent(sylls[k][0], vi) for k in range(i + 1, j)):
                        merged = self.parts[vi].multiply(sylls[i][1], sylls[j][1])
                        del sylls[j]
                        if merged:
                            sylls[i] = (vi, merged)
                        else:
                            del sylls[i]
                        changed = True
                        break
                if changed:
                    break
        return sylls

    def _canonical_order(self, sylls):
        rest = list(sylls)
        out = []
        while rest:
            best = None
            for idx in range(len(rest)):
                movable = all(self.adjacent(rest[k][0], rest[idx][0]) for k in range(idx))
                if movable and (best is None or rest[idx][0] < rest[best][0]):
                    best = idx
            out.append(rest.pop(best))
        return out

    def normal_form(self, w: Word) -> Word:
        sylls = []
        for x in self.check_word(w):
            vi = self._part_of[x]
            sylls.append((vi, (x - self._offsets[vi],)))
        sylls = self._reduce_syllables(sylls)
        out = []
        for vi, local in self._canonical_order(sylls):
            out.extend(self.to_global(vi, self.parts[vi].normal_form(local)))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "family": "graph_product",
            "vertices": [p.to_json() for p in self.parts],
            "edges": sorted(list(e) for e in self.edges),
        }


def model_from_json(data: dict) -> GroupModel:
    if not isinstance(data, dict) or "family" not in data:
        raise InputError("group model json needs a 'family' key")
    fam = data["family"]
    if fam == "free":
        return FreeGroup(data["rank"], data.get("labels"))
    if fam == "free_abelian":
        return FreeAbelianGroup(data["rank"], data.get("labels"))
    if fam == "direct_product":
        return DirectProduct([model_from_json(f) for f in data["factors"]])
    if fam == "free_product":
        return FreeProduct([model_from_json(f) for f in data["factors"]])
    if fam == "graph_product":
        return GraphProduct([model_from_json(v) for v in data["vertices"]], data["edges"])
    raise InputError(f"unknown group family {fam!r}")
