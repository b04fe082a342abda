"""Target groups for cocycles: complete groups with bi-invariant metrics.

Instances: real vector groups with the Euclidean metric, tori with the
quotient metric, and finite groups with the discrete metric.  Bi-invariance
is property-tested rather than assumed (abelian and discrete cases make it
automatic, but the interface admits any multiplication table).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod


class TargetError(ValueError):
    """Invalid target-group element or inconsistent table."""


class TargetGroup(ABC):
    name: str = "?"
    is_discrete: bool = False

    @property
    @abstractmethod
    def identity(self):
        ...

    @abstractmethod
    def mul(self, a, b):
        ...

    @abstractmethod
    def inv(self, a):
        ...

    @abstractmethod
    def dist(self, a, b) -> float:
        ...

    @abstractmethod
    def random_element(self, rng):
        ...

    @abstractmethod
    def validate(self, a) -> None:
        ...

    def product(self, items):
        acc = self.identity
        for h in items:
            acc = self.mul(acc, h)
        return acc

    def to_jsonable_elem(self, a):
        return list(a) if isinstance(a, tuple) else a

    def describe(self) -> dict:
        return {"kind": self.name}

    def __repr__(self):
        return f"<target {self.name}>"


class RealVector(TargetGroup):
    """(R^dim, +) with the Euclidean metric."""

    def __init__(self, dim: int):
        if dim < 1:
            raise TargetError("dimension must be >= 1")
        self.dim = dim
        self.name = f"real_vector({dim})"

    @property
    def identity(self):
        return tuple(0.0 for _ in range(self.dim))

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def dist(self, a, b):
        return math.dist(a, b)

    def random_element(self, rng):
        return tuple(rng.uniform(-1.0, 1.0) for _ in range(self.dim))

    def validate(self, a):
        if not (isinstance(a, tuple) and len(a) == self.dim
                and all(isinstance(v, (int, float)) for v in a)):
            raise TargetError(f"expected a length-{self.dim} float tuple, got {a!r}")

    def from_jsonable_elem(self, obj):
        return tuple(float(v) for v in obj)

    def describe(self):
        return {"kind": "real_vector", "dim": self.dim}


class Torus(TargetGroup):
    """(R/Z)^dim with the flat quotient metric; coordinates stored in [0,1)."""

    def __init__(self, dim: int):
        if dim < 1:
            raise TargetError("dimension must be >= 1")
        self.dim = dim
        self.name = f"torus({dim})"

    @property
    def identity(self):
        return tuple(0.0 for _ in range(self.dim))

    def mul(self, a, b):
        return tuple((x + y) % 1.0 for x, y in zip(a, b))

    def inv(self, a):
        return tuple((-x) % 1.0 for x in a)

    def dist(self, a, b):
        total = 0.0
        for x, y in zip(a, b):
            d = abs((x - y) % 1.0)
            d = min(d, 1.0 - d)
            total += d * d
        return math.sqrt(total)

    def random_element(self, rng):
        return tuple(rng.random() for _ in range(self.dim))

    def validate(self, a):
        if not (isinstance(a, tuple) and len(a) == self.dim
                and all(isinstance(v, (int, float)) and 0.0 <= v < 1.0 for v in a)):
            raise TargetError(f"expected a length-{self.dim} tuple in [0,1), got {a!r}")

    def wrap(self, values):
        return tuple(float(v) % 1.0 for v in values)

    def from_jsonable_elem(self, obj):
        return self.wrap(obj)

    def describe(self):
        return {"kind": "torus", "dim": self.dim}


class FiniteGroup(TargetGroup):
    """Finite group given by a multiplication table, with the discrete metric."""

    is_discrete = True

    def __init__(self, elements, table, identity, name="finite"):
        self.elements = tuple(elements)
        self.table = dict(table)
        self._identity = identity
        self.name = name
        index = set(self.elements)
        if identity not in index:
            raise TargetError("identity must be listed among the elements")
        for a in self.elements:
            for b in self.elements:
                if (a, b) not in self.table or self.table[(a, b)] not in index:
                    raise TargetError(f"multiplication table is not closed at ({a},{b})")
            if self.table[(a, identity)] != a or self.table[(identity, a)] != a:
                raise TargetError(f"identity fails at {a}")
        self._inverses = {}
        for a in self.elements:
            for b in self.elements:
                if self.table[(a, b)] == identity and self.table[(b, a)] == identity:
                    self._inverses[a] = b
                    break
            else:
                raise TargetError(f"no inverse for {a}")

    @property
    def identity(self):
        return self._identity

    def mul(self, a, b):
        try:
            return self.table[(a, b)]
        except KeyError:
            raise TargetError(f"elements ({a!r},{b!r}) are not in the group") from None

    def inv(self, a):
        try:
            return self._inverses[a]
        except KeyError:
            raise TargetError(f"element {a!r} is not in the group") from None

    def dist(self, a, b):
        self.validate(a)
        self.validate(b)
        return 0.0 if a == b else 1.0

    def random_element(self, rng):
        return self.elements[rng.randrange(len(self.elements))]

    def validate(self, a):
        if a not in self._inverses:
            raise TargetError(f"element {a!r} is not in the group")

    def from_jsonable_elem(self, obj):
        return obj if not isinstance(obj, list) else tuple(obj)

    def describe(self):
        return {
            "kind": "finite",
            "elements": list(self.elements),
            "identity": self._identity,
            "table": [[a, b, c] for (a, b), c in sorted(self.table.items(),
                                                        key=lambda kv: repr(kv[0]))],
            "name": self.name,
        }


def cyclic_group(n: int) -> FiniteGroup:
    """Integers modulo n with the discrete metric."""
    if n < 1:
        raise TargetError("cyclic order must be >= 1")
    elements = list(range(n))
    table = {(a, b): (a + b) % n for a in elements for b in elements}
    return FiniteGroup(elements, table, 0, name=f"cyclic({n})")


def bi_invariance_defect(target: TargetGroup, rng, trials: int = 100) -> float:
    """Largest violation of d(ab, ac) = d(b, c) = d(ba, ca) over random triples."""
    worst = 0.0
    for _ in range(trials):
        a = target.random_element(rng)
        b = target.random_element(rng)
        c = target.random_element(rng)
        base = target.dist(b, c)
        left = target.dist(target.mul(a, b), target.mul(a, c))
        right = target.dist(target.mul(b, a), target.mul(c, a))
        worst = max(worst, abs(left - base), abs(right - base))
    return worst


def target_from_description(obj) -> TargetGroup:
    kind = obj.get("kind")
    if kind == "real_vector":
        return RealVector(int(obj["dim"]))
    if kind == "torus":
        return Torus(int(obj["dim"]))
    if kind == "cyclic":
        return cyclic_group(int(obj["n"]))
    if kind == "finite":
        table = {(a, b): c for a, b, c in obj["table"]}
        return FiniteGroup(obj["elements"], table, obj["identity"],
                           obj.get("name", "finite"))
    raise TargetError(f"unknown target description {obj!r}")


def describe_target(target: TargetGroup) -> dict:
    if isinstance(target, FiniteGroup) and target.name.startswith("cyclic("):
        return {"kind": "cyclic", "n": len(target.elements)}
    return target.describe()
