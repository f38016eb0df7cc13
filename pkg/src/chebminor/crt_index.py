"""CRT splitting of Z_n into Z_m x Z_r and the layer decomposition of index sets.

Coordinates: an index ``i`` in Z_n corresponds to the pair ``(a, b)`` with
``a`` taken mod ``m`` and ``b`` taken mod ``r`` such that

    i = a*r + b*m  (mod n).

``b`` is the *layer* of ``i``.  With n = p*r and m = p this is the usual
``(i_p, i_r)`` pair, so the layer of ``i`` is its ``i_r`` coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

from .errors import ContextMismatch, PreconditionError


@dataclass(frozen=True)
class CrtContext:
    n: int
    r: int
    m: int
    _r_inv: int = field(init=False, repr=False, compare=False)
    _m_inv: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.r < 2 or self.m < 2:
            raise PreconditionError("both CRT factors must be >= 2")
        if self.r * self.m != self.n:
            raise PreconditionError(f"n={self.n} is not r*m = {self.r}*{self.m}")
        if gcd(self.r, self.m) != 1:
            raise PreconditionError(f"r={self.r} and m={self.m} are not coprime")
        object.__setattr__(self, "_r_inv", pow(self.r, -1, self.m))
        object.__setattr__(self, "_m_inv", pow(self.m, -1, self.r))

    @classmethod
    def from_layer_modulus(cls, n: int, r: int) -> "CrtContext":
        if r <= 0 or n % r:
            raise PreconditionError(f"layer modulus r={r} does not divide n={n}")
        return cls(n, r, n // r)

    def split(self, i: int) -> "CrtPair":
        if not 0 <= i < self.n:
            raise PreconditionError(f"index {i} out of range for n={self.n}")
        return CrtPair(i * self._r_inv % self.m, i * self._m_inv % self.r)

    def join(self, pair: "CrtPair") -> int:
        a, b = pair
        if not (0 <= a < self.m and 0 <= b < self.r):
            raise PreconditionError(f"pair {tuple(pair)} out of range for (m, r)=({self.m}, {self.r})")
        return (a * self.r + b * self.m) % self.n

    def layer(self, i: int) -> int:
        return i * self._m_inv % self.r

    def layers(self) -> list[list[int]]:
        """Members of Z_n grouped by layer, each sorted ascending."""
        out: list[list[int]] = [[] for _ in range(self.r)]
        for i in range(self.n):
            out[self.layer(i)].append(i)
        return out


class CrtPair(tuple):
    """``(a, b)`` with ``a`` mod m and ``b`` mod r."""

    __slots__ = ()

    def __new__(cls, a: int, b: int):
        return super().__new__(cls, (a, b))

    @property
    def a(self) -> int:
        return self[0]

    @property
    def b(self) -> int:
        return self[1]

    def __repr__(self):
        return f"CrtPair(a={self[0]}, b={self[1]})"


def crt_split(ctx: CrtContext, i: int) -> CrtPair:
    return ctx.split(i)


def crt_join(ctx: CrtContext, pair: CrtPair | tuple[int, int]) -> int:
    return ctx.join(pair)


@dataclass(frozen=True)
class LayeredIndexSet:
    context: CrtContext
    members: tuple[int, ...]
    layers: tuple[tuple[int, ...], ...]

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def __len__(self):
        return len(self.members)

    def to_json(self) -> dict:
        # layers are derived data and are not written out
        return {"n": self.context.n, "r": self.context.r, "members": list(self.members)}

    @classmethod
    def from_json(cls, data: dict) -> "LayeredIndexSet":
        ctx = CrtContext.from_layer_modulus(int(data["n"]), int(data["r"]))
        return decompose(ctx, data["members"])


def decompose(ctx: CrtContext, members: Iterable[int]) -> LayeredIndexSet:
    ms = sorted(set(int(i) for i in members))
    layers: list[list[int]] = [[] for _ in range(ctx.r)]
    for i in ms:
        if not 0 <= i < ctx.n:
            raise PreconditionError(f"index {i} out of range for n={ctx.n}")
        layers[ctx.layer(i)].append(i)
    return LayeredIndexSet(ctx, tuple(ms), tuple(tuple(layer) for layer in layers))


def layer_profile_equal(I: LayeredIndexSet, J: LayeredIndexSet) -> bool:
    if I.context != J.context:
        raise ContextMismatch("index sets use different CRT contexts")
    return I.profile == J.profile
