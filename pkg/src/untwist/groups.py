"""Finitely generated group models with exact arithmetic and word metrics.

Elements are plain hashable normal forms (tuples), so they double as dict
keys in ball tables.  Every model ships a symmetric ordered generating set,
a certified lower bound for the compression of powers of its elements, and
enough structural metadata (ends, divergence class) for the higher layers.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field


class GroupError(ValueError):
    """Structurally invalid element or unsupported operation for a model."""


class OutOfRange(LookupError):
    """Requested value lies outside the certified exact range of a table."""


class ResourceLimit(RuntimeError):
    """An enumeration exceeded its element budget."""

    def __init__(self, message: str, last_complete_radius: int):
        super().__init__(message)
        self.last_complete_radius = last_complete_radius


# ---------------------------------------------------------------------------
# Certified lower bounds for word lengths of powers.
#
# A bound object certifies value(j) <= min_{i >= j} l(g^i) for all j >= 1.
# The claim is analytic per model (coordinate/area arguments); profiles
# re-validate it against exact BFS data before any tail bound uses it.
# ---------------------------------------------------------------------------

class LengthLowerBound(ABC):
    """Pointwise lower bound for the compression of <g>, with summable tails."""

    @abstractmethod
    def value(self, j: int) -> int:
        """Certified lower bound for the compression at j >= 0."""

    @abstractmethod
    def tail(self, r: float, n: int) -> float:
        """Closed-form upper bound for sum_{j >= n} r**value(j), 0 < r < 1."""

    def linear_slope(self) -> int | None:
        """Positive slope s with value(j) >= s*j, or None if not linear."""
        return None

    def describe(self) -> str:
        return repr(self)


# Closed-form tails are exact in real arithmetic; this factor absorbs the
# floating-point evaluation error so they always over-approximate.
_TAIL_SAFETY = 1.0 + 1e-9


class LinearBound(LengthLowerBound):
    def __init__(self, slope: int):
        if slope < 1:
            raise GroupError("linear length bound needs slope >= 1")
        self.slope = slope

    def value(self, j):
        return self.slope * j

    def tail(self, r, n):
        q = r ** self.slope
        return q ** n / (1.0 - q) * _TAIL_SAFETY

    def linear_slope(self):
        return self.slope

    def describe(self):
        return f"linear(slope={self.slope})"


class SqrtBound(LengthLowerBound):
    """value(j) = scale * ceil(sqrt(j)); summable but sublinear."""

    def __init__(self, scale: int = 1):
        if scale < 1:
            raise GroupError("sqrt length bound needs scale >= 1")
        self.scale = scale

    def value(self, j):
        if j <= 0:
            return 0
        return self.scale * (math.isqrt(j - 1) + 1)

    def tail(self, r, n):
        if n <= 0:
            return 1.0 + self.tail(r, 1)
        q = r ** self.scale
        k0 = math.isqrt(n - 1) + 1  # ceil(sqrt(n))
        # indices n..k0^2 share the value scale*k0, then blocks of 2k-1.
        total = (k0 * k0 - n + 1) * q ** k0
        m = k0 + 1
        geo = q ** m / (1.0 - q)
        kgeo = q ** m * (m - (m - 1) * q) / (1.0 - q) ** 2
        return (total + 2.0 * kgeo - geo) * _TAIL_SAFETY

    def describe(self):
        return f"sqrt(scale={self.scale})"


class SumBound(LengthLowerBound):
    """Sum of component bounds (used by direct products)."""

    def __init__(self, parts):
        if not parts:
            raise GroupError("sum bound needs at least one part")
        self.parts = tuple(parts)

    def value(self, j):
        return sum(p.value(j) for p in self.parts)

    def tail(self, r, n):
        # r**value(j) <= r**part.value(j) for each part, so any part's tail works.
        return min(p.tail(r, n) for p in self.parts)

    def linear_slope(self):
        slopes = [p.linear_slope() for p in self.parts]
        slopes = [s for s in slopes if s is not None]
        if not slopes:
            return None
        return sum(slopes)

    def describe(self):
        return "sum(" + ",".join(p.describe() for p in self.parts) + ")"


# ---------------------------------------------------------------------------
# Group models
# ---------------------------------------------------------------------------

class Group(ABC):
    """A finitely generated group with a fixed symmetric generating set."""

    name: str = "?"
    ends: str = "one"  # "one" | "two" | "infinitely_many"
    subexponential_divergence: bool = False

    @property
    @abstractmethod
    def identity(self):
        ...

    @property
    @abstractmethod
    def gens(self):
        """Ordered symmetric generating set as (label, element) pairs."""

    @abstractmethod
    def mul(self, a, b):
        ...

    @abstractmethod
    def inv(self, a):
        ...

    @abstractmethod
    def validate(self, a) -> None:
        """Raise GroupError unless a is a canonical normal form for this model."""

    @abstractmethod
    def format_elem(self, a) -> str:
        ...

    @abstractmethod
    def parse_elem(self, s: str):
        ...

    @abstractmethod
    def compression_lower_bound(self, g) -> LengthLowerBound:
        """Certified lower bound for the compression of <g>; g must have
        infinite order (all built-ins are torsion-free, so g != identity)."""

    def exact_length(self, a) -> int | None:
        """Closed-form word length, or None when only BFS can answer."""
        return None

    def defining_relation_word_pairs(self):
        """Pairs of generator words with equal products (cocycle sanity checks)."""
        return []

    def generation_witnesses(self):
        """(element, radius) pairs certifying the generators generate."""
        return []

    def gen(self, label: str):
        for lab, g in self.gens:
            if lab == label:
                return g
        raise GroupError(f"unknown generator label {label!r} for {self.name}")

    def inverse_label(self, label: str) -> str:
        g = self.gen(label)
        ig = self.inv(g)
        for lab, h in self.gens:
            if h == ig:
                return lab
        raise GroupError(f"generating set is not symmetric at {label!r}")

    @property
    def positive_labels(self):
        """One label per generator/inverse pair, in declared order."""
        seen = set()
        out = []
        for lab, _ in self.gens:
            if lab in seen:
                continue
            seen.add(lab)
            seen.add(self.inverse_label(lab))
            out.append(lab)
        return out

    def eval_word(self, labels):
        """Left-to-right product of the labelled generators."""
        acc = self.identity
        for lab in labels:
            acc = self.mul(acc, self.gen(lab))
        return acc

    def power(self, g, n: int):
        if n < 0:
            return self.power(self.inv(g), -n)
        acc = self.identity
        for _ in range(n):
            acc = self.mul(acc, g)
        return acc

    def generating_set_description(self) -> str:
        return "{" + ",".join(lab for lab, _ in self.gens) + "}"

    def __repr__(self):
        return f"<group {self.name}>"


def _as_int_tuple(a, d):
    if not (isinstance(a, tuple) and len(a) == d and all(isinstance(v, int) for v in a)):
        raise GroupError(f"expected an integer {d}-tuple, got {a!r}")
    return a


class IntegerLattice(Group):
    """Z^d with the standard basis generators, optionally augmented by the
    all-ones diagonal pair (a second generating set for sensitivity checks)."""

    def __init__(self, dimension: int, diagonal: bool = False):
        if dimension < 1:
            raise GroupError("lattice dimension must be >= 1")
        self.dimension = dimension
        self.diagonal = diagonal
        self.name = f"z^{dimension}" + ("+diag" if diagonal else "")
        self.ends = "two" if dimension == 1 else "one"
        self.subexponential_divergence = dimension >= 2
        gens = []
        for i in range(dimension):
            e = tuple(1 if j == i else 0 for j in range(dimension))
            gens.append((f"x{i + 1}+", e))
            gens.append((f"x{i + 1}-", tuple(-v for v in e)))
        if diagonal:
            ones = tuple(1 for _ in range(dimension))
            gens.append(("diag+", ones))
            gens.append(("diag-", tuple(-1 for _ in range(dimension))))
        self._gens = tuple(gens)
        self._identity = tuple(0 for _ in range(dimension))

    @property
    def identity(self):
        return self._identity

    @property
    def gens(self):
        return self._gens

    def mul(self, a, b):
        d = self.dimension
        if len(a) != d or len(b) != d:
            raise GroupError("element does not belong to this lattice model")
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        if len(a) != self.dimension:
            raise GroupError("element does not belong to this lattice model")
        return tuple(-x for x in a)

    def validate(self, a):
        _as_int_tuple(a, self.dimension)

    def format_elem(self, a):
        if self.dimension == 1:
            return str(a[0])
        return "(" + ",".join(str(v) for v in a) + ")"

    def parse_elem(self, s):
        s = s.strip()
        if self.dimension == 1:
            try:
                return (int(s),)
            except ValueError:
                raise GroupError(f"cannot parse {s!r} as an integer") from None
        body = s[1:-1] if s.startswith("(") and s.endswith(")") else s
        parts = [p for p in body.split(",") if p.strip() != ""]
        if len(parts) != self.dimension:
            raise GroupError(f"expected {self.dimension} coordinates in {s!r}")
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise GroupError(f"cannot parse {s!r} as an integer vector") from None

    def exact_length(self, a):
        self.validate(a)
        if not self.diagonal:
            return sum(abs(v) for v in a)
        # One diagonal pair: k net diagonal steps plus axis corrections.
        lo = min(0, min(a))
        hi = max(0, max(a))
        return min(abs(k) + sum(abs(v - k) for v in a) for k in range(lo, hi + 1))

    def compression_lower_bound(self, g):
        self.validate(g)
        if g == self._identity:
            raise GroupError("identity has no infinite-order power data")
        if not self.diagonal:
            return LinearBound(sum(abs(v) for v in g))
        # Each generator moves every coordinate by at most 1.
        return LinearBound(max(abs(v) for v in g))

    def defining_relation_word_pairs(self):
        pairs = []
        labels = [lab for lab, _ in self._gens]
        for lab in labels:
            pairs.append(([lab, self.inverse_label(lab)], []))
        pos = self.positive_labels
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                pairs.append(([pos[i], pos[j]], [pos[j], pos[i]]))
        return pairs

    def generation_witnesses(self):
        return [(g, 1) for _, g in self._gens]


class InfiniteCyclic(IntegerLattice):
    """Z with generators +-1 (two ends)."""

    def __init__(self):
        super().__init__(1)
        self.name = "z"


class DiscreteHeisenberg(Group):
    """Integer Heisenberg group, triples under
    (x,y,z)*(x',y',z') = (x+x', y+y', z+z'+x*y')."""

    name = "heisenberg"
    ends = "one"
    subexponential_divergence = True

    _gens = (
        ("a", (1, 0, 0)),
        ("A", (-1, 0, 0)),
        ("b", (0, 1, 0)),
        ("B", (0, -1, 0)),
    )

    @property
    def identity(self):
        return (0, 0, 0)

    @property
    def gens(self):
        return self._gens

    def mul(self, a, b):
        try:
            x, y, z = a
            X, Y, Z = b
            return (x + X, y + Y, z + Z + x * Y)
        except (TypeError, ValueError):
            raise GroupError("element does not belong to the Heisenberg model") from None

    def inv(self, a):
        try:
            x, y, z = a
            return (-x, -y, -z + x * y)
        except (TypeError, ValueError):
            raise GroupError("element does not belong to the Heisenberg model") from None

    def validate(self, a):
        _as_int_tuple(a, 3)

    def format_elem(self, a):
        return "(" + ",".join(str(v) for v in a) + ")"

    def parse_elem(self, s):
        s = s.strip()
        shorthand = {"a": (1, 0, 0), "b": (0, 1, 0), "z": (0, 0, 1),
                     "A": (-1, 0, 0), "B": (0, -1, 0), "Z": (0, 0, -1),
                     "e": (0, 0, 0)}
        if s in shorthand:
            return shorthand[s]
        body = s[1:-1] if s.startswith("(") and s.endswith(")") else s
        parts = body.split(",")
        if len(parts) != 3:
            raise GroupError(f"expected a triple or one of a/b/z, got {s!r}")
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise GroupError(f"cannot parse {s!r} as a Heisenberg triple") from None

    def compression_lower_bound(self, g):
        self.validate(g)
        x, y, z = g
        if (x, y) != (0, 0):
            # Every generator changes |x| or |y| by at most one.
            return LinearBound(max(abs(x), abs(y)))
        if z != 0:
            # Central powers: a word for (0,0,m) is a closed lattice loop of
            # enclosed area m, so its length is at least 4*sqrt(|m|).
            return SqrtBound(1)
        raise GroupError("identity has no infinite-order power data")

    def defining_relation_word_pairs(self):
        zw = ["a", "b", "A", "B"]  # evaluates to the central element (0,0,1)
        pairs = [(["a", "A"], []), (["b", "B"], [])]
        pairs.append((["a"] + zw, zw + ["a"]))
        pairs.append((["b"] + zw, zw + ["b"]))
        return pairs

    def generation_witnesses(self):
        return [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 4)]


class FreeGroup(Group):
    """Free group on `rank` letters; elements are freely reduced tuples of
    signed letter indices (1-based; negative = inverse)."""

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise GroupError("free group rank must be between 1 and 26")
        self.rank = rank
        self.name = f"free:{rank}"
        self.ends = "two" if rank == 1 else "infinitely_many"
        self.subexponential_divergence = False
        gens = []
        for i in range(rank):
            gens.append((chr(ord("a") + i), (i + 1,)))
            gens.append((chr(ord("A") + i), (-(i + 1),)))
        self._gens = tuple(gens)

    @property
    def identity(self):
        return ()

    @property
    def gens(self):
        return self._gens

    def mul(self, a, b):
        word = list(a)
        for letter in b:
            if word and word[-1] == -letter:
                word.pop()
            else:
                word.append(letter)
        return tuple(word)

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def validate(self, a):
        if not isinstance(a, tuple):
            raise GroupError(f"expected a reduced word tuple, got {a!r}")
        for x in a:
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                raise GroupError(f"letter {x!r} is not valid for rank {self.rank}")
        for u, v in zip(a, a[1:]):
            if u == -v:
                raise GroupError(f"word {a!r} is not freely reduced")

    def format_elem(self, a):
        if not a:
            return "e"
        return "".join(
            chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in a
        )

    def parse_elem(self, s):
        s = s.strip()
        if s in ("", "e"):
            return ()
        word = ()
        for ch in s:
            if "a" <= ch <= "z":
                letter = ord(ch) - ord("a") + 1
            elif "A" <= ch <= "Z":
                letter = -(ord(ch) - ord("A") + 1)
            else:
                raise GroupError(f"bad letter {ch!r} in free-group word {s!r}")
            if abs(letter) > self.rank:
                raise GroupError(f"letter {ch!r} exceeds rank {self.rank}")
            word = self.mul(word, (letter,))
        return word

    def exact_length(self, a):
        self.validate(a)
        return len(a)

    def compression_lower_bound(self, g):
        self.validate(g)
        if not g:
            raise GroupError("identity has no infinite-order power data")
        # Cyclically reduced core length grows linearly under powers.
        core = list(g)
        while len(core) >= 2 and core[0] == -core[-1]:
            core = core[1:-1]
        return LinearBound(max(1, len(core)))

    def defining_relation_word_pairs(self):
        return [([lab, self.inverse_label(lab)], []) for lab, _ in self._gens]

    def generation_witnesses(self):
        return [(g, 1) for _, g in self._gens]


class DirectProduct(Group):
    """Direct product with the union generating set, so word length is the
    sum of the factor lengths."""

    def __init__(self, left: Group, right: Group):
        self.left = left
        self.right = right
        self.name = f"prod({left.name},{right.name})"
        # Both factors are infinite, so the product is one-ended and wide.
        self.ends = "one"
        self.subexponential_divergence = True
        gens = [(f"l:{lab}", (g, right.identity)) for lab, g in left.gens]
        gens += [(f"r:{lab}", (left.identity, g)) for lab, g in right.gens]
        self._gens = tuple(gens)

    @property
    def identity(self):
        return (self.left.identity, self.right.identity)

    @property
    def gens(self):
        return self._gens

    def mul(self, a, b):
        try:
            (al, ar), (bl, br) = a, b
        except (TypeError, ValueError):
            raise GroupError("element does not belong to this product model") from None
        return (self.left.mul(al, bl), self.right.mul(ar, br))

    def inv(self, a):
        try:
            al, ar = a
        except (TypeError, ValueError):
            raise GroupError("element does not belong to this product model") from None
        return (self.left.inv(al), self.right.inv(ar))

    def validate(self, a):
        if not (isinstance(a, tuple) and len(a) == 2):
            raise GroupError(f"expected a component pair, got {a!r}")
        self.left.validate(a[0])
        self.right.validate(a[1])

    def format_elem(self, a):
        return f"({self.left.format_elem(a[0])}|{self.right.format_elem(a[1])})"

    def parse_elem(self, s):
        s = s.strip()
        if not (s.startswith("(") and s.endswith(")")):
            raise GroupError(f"expected (left|right), got {s!r}")
        body = s[1:-1]
        depth = 0
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "|" and depth == 0:
                return (self.left.parse_elem(body[:i]),
                        self.right.parse_elem(body[i + 1:]))
        raise GroupError(f"no top-level '|' separator in {s!r}")

    def exact_length(self, a):
        ll = self.left.exact_length(a[0])
        rl = self.right.exact_length(a[1])
        if ll is None or rl is None:
            return None
        return ll + rl

    def compression_lower_bound(self, g):
        self.validate(g)
        parts = []
        if g[0] != self.left.identity:
            parts.append(self.left.compression_lower_bound(g[0]))
        if g[1] != self.right.identity:
            parts.append(self.right.compression_lower_bound(g[1]))
        if not parts:
            raise GroupError("identity has no infinite-order power data")
        if len(parts) == 1:
            return parts[0]
        return SumBound(parts)

    def defining_relation_word_pairs(self):
        pairs = []
        for lab, _ in self._gens:
            pairs.append(([lab, self.inverse_label(lab)], []))
        for ll in self.left.positive_labels:
            for rl in self.right.positive_labels:
                pairs.append(([f"l:{ll}", f"r:{rl}"], [f"r:{rl}", f"l:{ll}"]))
        for w1, w2 in self.left.defining_relation_word_pairs():
            pairs.append(([f"l:{lab}" for lab in w1], [f"l:{lab}" for lab in w2]))
        for w1, w2 in self.right.defining_relation_word_pairs():
            pairs.append(([f"r:{lab}" for lab in w1], [f"r:{lab}" for lab in w2]))
        return pairs

    def generation_witnesses(self):
        out = [((g, self.right.identity), rad)
               for g, rad in self.left.generation_witnesses()]
        out += [((self.left.identity, g), rad)
                for g, rad in self.right.generation_witnesses()]
        return out


def parse_group(descriptor: str) -> Group:
    """Build a group model from a descriptor string.

    Supported forms: ``z``, ``z^d``, ``z^d+diag``, ``heisenberg``,
    ``free:r``, ``prod(desc,desc)``.
    """
    s = descriptor.strip().lower()
    if s == "z":
        return InfiniteCyclic()
    if s == "heisenberg":
        return DiscreteHeisenberg()
    if s.startswith("free:"):
        try:
            return FreeGroup(int(s[len("free:"):]))
        except ValueError:
            raise GroupError(f"bad free-group rank in {descriptor!r}") from None
    if s.startswith("z^"):
        body = s[2:]
        diagonal = body.endswith("+diag")
        if diagonal:
            body = body[:-len("+diag")]
        try:
            return IntegerLattice(int(body), diagonal=diagonal)
        except ValueError:
            raise GroupError(f"bad lattice dimension in {descriptor!r}") from None
    if s.startswith("prod(") and s.endswith(")"):
        body = s[len("prod("):-1]
        depth = 0
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return DirectProduct(parse_group(body[:i]), parse_group(body[i + 1:]))
        raise GroupError(f"no top-level ',' in {descriptor!r}")
    raise GroupError(f"unknown group descriptor {descriptor!r}")


# ---------------------------------------------------------------------------
# Ball enumeration and the word metric
# ---------------------------------------------------------------------------

@dataclass
class BallTable:
    """Complete ball of a given radius with exact lengths and BFS parents."""

    group: Group
    radius: int
    lengths: dict
    parents: dict  # element -> (parent element, generator label)
    order: list = field(default_factory=list)  # deterministic discovery order
    complete: bool = True

    def __len__(self):
        return len(self.lengths)

    def length(self, g) -> int | None:
        """Exact word length, or None when g is outside the ball."""
        return self.lengths.get(g)

    def geodesic_word(self, g):
        """Labels t1..tk with t1*...*tk = g and k = l(g); canonical per table."""
        if g not in self.lengths:
            raise OutOfRange(f"{self.group.format_elem(g)} is outside radius {self.radius}")
        word = []
        cur = g
        while cur != self.group.identity:
            parent, label = self.parents[cur]
            word.append(label)
            cur = parent
        word.reverse()
        return word

    def elements_of_length(self, k):
        return [g for g in self.order if self.lengths[g] == k]


def enumerate_ball(group: Group, radius: int, max_elements: int | None = None) -> BallTable:
    """Breadth-first enumeration of every element of word length <= radius."""
    if radius < 0:
        raise GroupError("ball radius must be >= 0")
    e = group.identity
    lengths = {e: 0}
    parents = {}
    order = [e]
    frontier = [e]
    for layer in range(radius):
        nxt = []
        for g in frontier:
            for label, s in group.gens:
                h = group.mul(g, s)
                if h not in lengths:
                    lengths[h] = layer + 1
                    parents[h] = (g, label)
                    order.append(h)
                    nxt.append(h)
                    if max_elements is not None and len(lengths) > max_elements:
                        raise ResourceLimit(
                            f"ball enumeration for {group.name} exceeded "
                            f"{max_elements} elements; last complete radius {layer}",
                            last_complete_radius=layer,
                        )
        frontier = nxt
        if not frontier:
            break
    return BallTable(group, radius, lengths, parents, order)


DEFAULT_METRIC_BUDGET = 5_000_000


class WordMetric:
    """Exact word lengths, distances and canonical geodesics for one model.

    Keeps a single lazily grown ball table; growth doubles the radius, so
    geodesics are stable (BFS layer order does not depend on the radius).
    """

    def __init__(self, group: Group, max_elements: int = DEFAULT_METRIC_BUDGET):
        self.group = group
        self.max_elements = max_elements
        self._table: BallTable | None = None

    def table(self, radius: int) -> BallTable:
        if self._table is None or self._table.radius < radius:
            self._table = enumerate_ball(self.group, radius, self.max_elements)
        return self._table

    def length(self, g) -> int:
        self.group.validate(g)
        exact = self.group.exact_length(g)
        if exact is not None:
            return exact
        radius = self._table.radius if self._table is not None else 0
        while True:
            if self._table is not None:
                found = self._table.length(g)
                if found is not None:
                    return found
            radius = max(4, 2 * radius)
            self.table(radius)

    def distance(self, g, h) -> int:
        return self.length(self.group.mul(self.group.inv(g), h))

    def geodesic_word(self, g):
        n = self.length(g)
        return self.table(max(n, self._table.radius if self._table else 0)).geodesic_word(g)

    def ball(self, radius: int) -> BallTable:
        return self.table(radius)
