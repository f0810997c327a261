"""Analytic descriptions of infinite block families.

A finite instance can only ever be a truncation of the multipoint direct
sum.  Statements about the untruncated family are certified from an explicit
:class:`GrowthModel`, never extrapolated from partial sums.  Each sequence
is indexed by the block number ``n >= 1`` and is one of

* ``constant``  -- ``value``
* ``linear``    -- ``slope * n + intercept``
* ``power``     -- ``coef * n ** exponent``
* ``table``     -- explicit ``values`` for ``n = 1..len(values)``, then an
  optional ``tail`` sequence for larger ``n`` (evaluated at the absolute
  index).  A table without a tail describes a finite family.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

KINDS = ("constant", "linear", "power", "table")


@dataclass(frozen=True)
class Sequence:
    kind: str
    value: float = 0.0
    slope: float = 0.0
    intercept: float = 0.0
    coef: float = 1.0
    exponent: float = 0.0
    values: tuple = ()
    tail: Optional["Sequence"] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.kind == "table" and not self.values:
            raise ValueError("table sequence needs at least one value")

    # constructors mirroring the file format
    @classmethod
    def constant(cls, value):
        return cls("constant", value=float(value))

    @classmethod
    def linear(cls, slope, intercept=0.0):
        return cls("linear", slope=float(slope), intercept=float(intercept))

    @classmethod
    def power(cls, coef, exponent):
        return cls("power", coef=float(coef), exponent=float(exponent))

    @classmethod
    def table(cls, values, tail=None):
        return cls("table", values=tuple(values), tail=tail)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        kind = d.pop("kind", None)
        if kind == "constant":
            return cls.constant(d["value"])
        if kind == "linear":
            return cls.linear(d["slope"], d.get("intercept", 0.0))
        if kind == "power":
            return cls.power(d["coef"], d["exponent"])
        if kind == "table":
            tail = d.get("tail")
            return cls.table(d["values"], cls.from_dict(tail) if tail is not None else None)
        raise ValueError(f"unknown sequence kind {kind!r}")

    def to_dict(self):
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        if self.kind == "linear":
            return {"kind": "linear", "slope": self.slope, "intercept": self.intercept}
        if self.kind == "power":
            return {"kind": "power", "coef": self.coef, "exponent": self.exponent}
        d = {"kind": "table", "values": list(self.values)}
        if self.tail is not None:
            d["tail"] = self.tail.to_dict()
        return d

    @property
    def finite(self):
        """True when the sequence only has finitely many terms."""
        return self.kind == "table" and self.tail is None

    def __call__(self, n):
        if n < 1:
            raise IndexError("sequences are indexed from n = 1")
        if self.kind == "constant":
            return self.value
        if self.kind == "linear":
            return self.slope * n + self.intercept
        if self.kind == "power":
            return self.coef * float(n) ** self.exponent
        if n <= len(self.values):
            return self.values[n - 1]
        if self.tail is None:
            raise IndexError(f"table has only {len(self.values)} entries")
        return self.tail(n)

    def growth_exponent(self):
        """``e`` with ``self(n) = Theta(n**e)``; ``None`` for finite tables."""
        if self.kind == "constant":
            return 0.0
        if self.kind == "linear":
            return 1.0 if self.slope > 0 else 0.0
        if self.kind == "power":
            return self.exponent
        return None if self.tail is None else self.tail.growth_exponent()

    def supremum(self):
        if self.kind == "constant":
            return self.value
        if self.kind == "linear":
            return float("inf") if self.slope > 0 else self(1)
        if self.kind == "power":
            return float("inf") if self.exponent > 0 else self(1)
        head = max(self.values)
        return head if self.tail is None else max(head, self.tail.supremum())

    def infimum(self):
        if self.kind == "constant":
            return self.value
        if self.kind == "linear":
            return self(1) if self.slope >= 0 else float("-inf")
        if self.kind == "power":
            return self(1) if self.exponent >= 0 else 0.0
        head = min(self.values)
        return head if self.tail is None else min(head, self.tail.infimum())

    def check_positive(self, lower=0.0):
        """Raise unless every term is ``>= lower`` (and the family is positive)."""
        if self.kind == "linear" and self.slope < 0:
            raise ValueError("decreasing linear sequences eventually go negative")
        if self.kind == "power" and self.coef <= 0:
            raise ValueError("power sequences need a positive coefficient")
        if self.infimum() < lower:
            raise ValueError(f"sequence drops below {lower}")


@dataclass(frozen=True)
class GrowthModel:
    """Smallest eigenvalue ``lambda1(n)`` of ``A_n``, block dims ``d_n`` and
    (optionally) interval lengths ``l_n`` of the untruncated family.

    Lengths default to "anything within the instance's observed range";
    :func:`length_bounds` makes that explicit.
    """

    lambda1: Sequence
    dims: Sequence = field(default_factory=lambda: Sequence.constant(1))
    lengths: Optional[Sequence] = None

    def __post_init__(self):
        self.lambda1.check_positive(1.0)
        self.dims.check_positive(1.0)
        if self.lengths is not None:
            self.lengths.check_positive(0.0)

    @property
    def infinite(self):
        return not (self.lambda1.finite and self.dims.finite)

    @classmethod
    def from_dict(cls, d):
        return cls(
            lambda1=Sequence.from_dict(d["lambda1"]),
            dims=Sequence.from_dict(d.get("dims", {"kind": "constant", "value": 1})),
            lengths=Sequence.from_dict(d["lengths"]) if d.get("lengths") is not None else None,
        )

    def to_dict(self):
        d = {"lambda1": self.lambda1.to_dict(), "dims": self.dims.to_dict()}
        if self.lengths is not None:
            d["lengths"] = self.lengths.to_dict()
        return d

    def length_bounds(self, instance=None):
        """``(inf l_n, sup l_n)`` for the untruncated family."""
        if self.lengths is not None:
            return self.lengths.infimum(), self.lengths.supremum()
        if instance is None:
            return 0.0, float("inf")
        ls = [b.length for b in instance.blocks]
        return min(ls), max(ls)


def power_series_converges(exponent):
    """Whether ``sum_n n**exponent`` converges."""
    return exponent < -1.0


def evaluate(seq, n_max):
    return np.array([seq(n) for n in range(1, n_max + 1)], dtype=float)
