"""Symmetric bilinear pairing suites.

A suite bundles the prime order ``q``, the additive source group G1 with
generator ``P`` and the multiplicative target group G2 together with the map
``e: G1 x G1 -> G2``.  Two backends exist:

``TransparentSuite``
    G1 = (Z_q, +) with P = 1 and e(a, b) = g^(ab) mod p.  Discrete logs in G1
    are visible, which makes it useless for security and ideal as a test
    oracle.
``CurveSuite``
    G1 = order-q subgroup of the supersingular curve y^2 = x^3 + x over F_p,
    G2 = order-q subgroup of F_{p^2}^*, e = reduced Tate pairing with a
    distortion map.

Group elements are wrapped in :class:`G1Elem` / :class:`G2Elem` so that the
protocol code can be written with ``+``, ``*`` and ``**``.  Scalars are plain
ints reduced modulo ``q``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Tuple

from sympy import isprime, nextprime

from . import curve
from .errors import ParameterError, SuiteMismatch


def _width(n: int) -> int:
    return (n.bit_length() + 7) // 8


class G1Elem:
    """Element of the additive source group."""

    __slots__ = ("suite", "raw")

    def __init__(self, suite: "PairingSuite", raw):
        self.suite = suite
        self.raw = raw

    def _check(self, other) -> None:
        if not isinstance(other, G1Elem):
            raise TypeError(f"expected G1Elem, got {type(other).__name__}")
        if other.suite is not self.suite and other.suite != self.suite:
            raise SuiteMismatch("G1 elements belong to different suites")

    def __add__(self, other: "G1Elem") -> "G1Elem":
        self._check(other)
        return G1Elem(self.suite, self.suite._add(self.raw, other.raw))

    def __neg__(self) -> "G1Elem":
        return G1Elem(self.suite, self.suite._neg(self.raw))

    def __sub__(self, other: "G1Elem") -> "G1Elem":
        return self + (-other)

    def __rmul__(self, k: int) -> "G1Elem":
        if not isinstance(k, int):
            return NotImplemented
        return G1Elem(self.suite, self.suite._mul(self.raw, k % self.suite.q))

    __mul__ = __rmul__

    def is_identity(self) -> bool:
        return self == self.suite.identity

    def __eq__(self, other) -> bool:
        if not isinstance(other, G1Elem):
            return NotImplemented
        return self.raw == other.raw and (other.suite is self.suite or other.suite == self.suite)

    def __hash__(self) -> int:
        return hash(("G1", self.raw))

    def __bytes__(self) -> bytes:
        return self.suite.encode_g1(self)

    def __repr__(self) -> str:
        return f"G1Elem({self.raw!r})"


class G2Elem:
    """Element of the multiplicative target group."""

    __slots__ = ("suite", "raw")

    def __init__(self, suite: "PairingSuite", raw):
        self.suite = suite
        self.raw = raw

    def __mul__(self, other: "G2Elem") -> "G2Elem":
        if not isinstance(other, G2Elem):
            return NotImplemented
        if other.suite is not self.suite and other.suite != self.suite:
            raise SuiteMismatch("G2 elements belong to different suites")
        return G2Elem(self.suite, self.suite._gt_mul(self.raw, other.raw))

    def __pow__(self, k: int) -> "G2Elem":
        return G2Elem(self.suite, self.suite._gt_pow(self.raw, k % self.suite.q))

    def __truediv__(self, other: "G2Elem") -> "G2Elem":
        return self * other ** -1

    def is_unit(self) -> bool:
        return self == self.suite.unit

    def __eq__(self, other) -> bool:
        if not isinstance(other, G2Elem):
            return NotImplemented
        return self.raw == other.raw and (other.suite is self.suite or other.suite == self.suite)

    def __hash__(self) -> int:
        return hash(("G2", self.raw))

    def __bytes__(self) -> bytes:
        return self.suite.encode_g2(self)

    def __repr__(self) -> str:
        return f"G2Elem({self.raw!r})"


class PairingSuite(ABC):
    """Common interface of both backends.

    Subclasses implement the raw-value hooks (``_add``, ``_mul``, ``_pair``
    and friends) plus encoding of raw values; everything else is shared.
    """

    tag: str
    q: int

    # -- backend hooks -------------------------------------------------
    @abstractmethod
    def _key(self) -> tuple: ...

    @abstractmethod
    def _add(self, a, b): ...

    @abstractmethod
    def _neg(self, a): ...

    @abstractmethod
    def _mul(self, a, k: int): ...

    @abstractmethod
    def _gt_mul(self, x, y): ...

    @abstractmethod
    def _gt_pow(self, x, k: int): ...

    @abstractmethod
    def _pair(self, a, b): ...

    @abstractmethod
    def _g1_raw_ok(self, raw) -> bool: ...

    @abstractmethod
    def _g2_raw_ok(self, raw) -> bool: ...

    @property
    @abstractmethod
    def g1_width(self) -> int: ...

    @property
    @abstractmethod
    def g2_width(self) -> int: ...

    @abstractmethod
    def encode_g1(self, a: G1Elem) -> bytes: ...

    @abstractmethod
    def decode_g1(self, data: bytes) -> G1Elem: ...

    @abstractmethod
    def encode_g2(self, z: G2Elem) -> bytes: ...

    @abstractmethod
    def decode_g2(self, data: bytes) -> G2Elem: ...

    @abstractmethod
    def describe(self) -> dict:
        """Suite parameters as a flat mapping of decimal integers."""

    # -- shared surface ------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, PairingSuite) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @property
    def P(self) -> G1Elem:
        return self._generator

    @property
    def identity(self) -> G1Elem:
        return self._identity

    @property
    def unit(self) -> G2Elem:
        return self._unit

    @property
    def scalar_width(self) -> int:
        return _width(self.q)

    def g1(self, raw) -> G1Elem:
        if not self._g1_raw_ok(raw):
            raise ParameterError(f"{raw!r} is not an element of G1")
        return G1Elem(self, raw)

    def g2(self, raw) -> G2Elem:
        if not self._g2_raw_ok(raw):
            raise ParameterError(f"{raw!r} is not an element of G2")
        return G2Elem(self, raw)

    def _own(self, a, cls) -> None:
        if not isinstance(a, cls):
            raise TypeError(f"expected {cls.__name__}, got {type(a).__name__}")
        if a.suite is not self and a.suite != self:
            raise SuiteMismatch(f"{cls.__name__} from a different suite")

    def pair(self, a: G1Elem, b: G1Elem) -> G2Elem:
        self._own(a, G1Elem)
        self._own(b, G1Elem)
        return G2Elem(self, self._pair(a.raw, b.raw))

    def gt(self) -> G2Elem:
        """e(P, P), the canonical generator of G2."""
        return self._gt

    def encode_scalar(self, k: int) -> bytes:
        return (k % self.q).to_bytes(self.scalar_width, "big")

    def decode_scalar(self, data: bytes) -> int:
        if len(data) != self.scalar_width:
            raise ParameterError("scalar encoding has the wrong width")
        k = int.from_bytes(data, "big")
        if k >= self.q:
            raise ParameterError("scalar encoding out of range")
        return k

    def _finish_init(self, generator_raw, identity_raw, unit_raw) -> None:
        self._generator = G1Elem(self, generator_raw)
        self._identity = G1Elem(self, identity_raw)
        self._unit = G2Elem(self, unit_raw)
        self._gt = self.pair(self._generator, self._generator)
        if self._gt == self._unit:
            raise ParameterError("degenerate pairing: e(P, P) = 1")


class TransparentSuite(PairingSuite):
    tag = "transparent"

    def __init__(self, q: int, p: int, g: int):
        self.q, self.p, self.g = q, p, g
        self._finish_init(1, 0, 1)

    def _key(self) -> tuple:
        return (self.tag, self.q, self.p, self.g)

    def _add(self, a, b):
        return (a + b) % self.q

    def _neg(self, a):
        return -a % self.q

    def _mul(self, a, k):
        return a * k % self.q

    def _gt_mul(self, x, y):
        return x * y % self.p

    def _gt_pow(self, x, k):
        return pow(x, k, self.p)

    def _pair(self, a, b):
        return pow(self.g, a * b % self.q, self.p)

    def _g1_raw_ok(self, raw) -> bool:
        return isinstance(raw, int) and 0 <= raw < self.q

    def _g2_raw_ok(self, raw) -> bool:
        return isinstance(raw, int) and 0 < raw < self.p and pow(raw, self.q, self.p) == 1

    @property
    def g1_width(self) -> int:
        return _width(self.q)

    @property
    def g2_width(self) -> int:
        return _width(self.p)

    def encode_g1(self, a):
        self._own(a, G1Elem)
        return a.raw.to_bytes(self.g1_width, "big")

    def decode_g1(self, data):
        if len(data) != self.g1_width:
            raise ParameterError("G1 encoding has the wrong width")
        return self.g1(int.from_bytes(data, "big"))

    def encode_g2(self, z):
        self._own(z, G2Elem)
        return z.raw.to_bytes(self.g2_width, "big")

    def decode_g2(self, data):
        if len(data) != self.g2_width:
            raise ParameterError("G2 encoding has the wrong width")
        return self.g2(int.from_bytes(data, "big"))

    def dlog(self, a: G1Elem) -> int:
        """Discrete log of ``a`` to base P; trivial here since P = 1."""
        self._own(a, G1Elem)
        return a.raw

    def describe(self) -> dict:
        return {"backend": self.tag, "q": self.q, "p": self.p, "g": self.g}

    def __repr__(self) -> str:
        return f"TransparentSuite(q={self.q}, p={self.p}, g={self.g})"


@dataclass(frozen=True)
class CurveSuiteParams:
    """y^2 = x^3 + x over F_p with base point (gx, gy) of prime order q."""

    p: int
    q: int
    gx: int
    gy: int

    @property
    def cofactor(self) -> int:
        return (self.p + 1) // self.q


class CurveSuite(PairingSuite):
    tag = "curve"

    def __init__(self, params: CurveSuiteParams):
        self.params = params
        self.q, self.p = params.q, params.p
        self._finish_init((params.gx, params.gy), None, curve.FP2_ONE)

    def _key(self) -> tuple:
        return (self.tag, self.params)

    def _add(self, a, b):
        return curve.add(a, b, self.p)

    def _neg(self, a):
        return curve.neg(a, self.p)

    def _mul(self, a, k):
        return curve.mul(a, k, self.p)

    def _gt_mul(self, x, y):
        return curve.fp2_mul(x, y, self.p)

    def _gt_pow(self, x, k):
        return curve.fp2_pow(x, k, self.p)

    def _pair(self, a, b):
        return curve.tate(a, b, self.q, self.p)

    def _g1_raw_ok(self, raw) -> bool:
        if raw is None:
            return True
        if not (isinstance(raw, tuple) and len(raw) == 2):
            return False
        return curve.on_curve(raw, self.p) and curve.mul(raw, self.q, self.p) is None

    def _g2_raw_ok(self, raw) -> bool:
        if not (isinstance(raw, tuple) and len(raw) == 2):
            return False
        if not all(isinstance(c, int) and 0 <= c < self.p for c in raw):
            return False
        return raw != (0, 0) and curve.fp2_pow(raw, self.q, self.p) == curve.FP2_ONE

    @property
    def g1_width(self) -> int:
        return 2 * _width(self.p)

    @property
    def g2_width(self) -> int:
        return 2 * _width(self.p)

    def encode_g1(self, a):
        self._own(a, G1Elem)
        w = _width(self.p)
        # (0, 0) has order 2, so all-zero bytes safely denote the identity
        x, y = a.raw if a.raw is not None else (0, 0)
        return x.to_bytes(w, "big") + y.to_bytes(w, "big")

    def decode_g1(self, data):
        w = _width(self.p)
        if len(data) != 2 * w:
            raise ParameterError("G1 encoding has the wrong width")
        x, y = int.from_bytes(data[:w], "big"), int.from_bytes(data[w:], "big")
        return self.g1(None if (x, y) == (0, 0) else (x, y))

    def encode_g2(self, z):
        self._own(z, G2Elem)
        w = _width(self.p)
        return z.raw[0].to_bytes(w, "big") + z.raw[1].to_bytes(w, "big")

    def decode_g2(self, data):
        w = _width(self.p)
        if len(data) != 2 * w:
            raise ParameterError("G2 encoding has the wrong width")
        return self.g2((int.from_bytes(data[:w], "big"), int.from_bytes(data[w:], "big")))

    def describe(self) -> dict:
        prm = self.params
        return {"backend": self.tag, "p": prm.p, "q": prm.q, "gx": prm.gx, "gy": prm.gy}

    def __repr__(self) -> str:
        return f"CurveSuite(p~2^{self.p.bit_length()}, q~2^{self.q.bit_length()})"


# ---------------------------------------------------------------------------
# constructors

def make_transparent_suite(q: int, p: int, g: int) -> TransparentSuite:
    if not isprime(q):
        raise ParameterError(f"q={q} is not prime")
    if not isprime(p):
        raise ParameterError(f"p={p} is not prime")
    if (p - 1) % q:
        raise ParameterError("q does not divide p - 1")
    g %= p
    if g == 1 or g == 0 or pow(g, q, p) != 1:
        raise ParameterError(f"g={g} does not have order q modulo p")
    return TransparentSuite(q, p, g)


def make_curve_suite(params: CurveSuiteParams) -> CurveSuite:
    p, q = params.p, params.q
    if not isprime(p) or p % 4 != 3:
        raise ParameterError("p must be a prime congruent to 3 mod 4")
    if not isprime(q) or (p + 1) % q:
        raise ParameterError("q must be a prime dividing p + 1")
    if params.cofactor % q == 0:
        raise ParameterError("q^2 divides the group order; subgroup is not unique")
    base = (params.gx, params.gy)
    if not curve.on_curve(base, p):
        raise ParameterError("base point is not on the curve")
    if curve.mul(base, q, p) is not None:
        raise ParameterError("base point is not in the order-q subgroup")
    return CurveSuite(params)


def find_safe_prime_pair(min_q: int) -> Tuple[int, int]:
    """Smallest prime q >= min_q with p = 2q + 1 also prime."""
    q = nextprime(min_q - 1)
    while not isprime(2 * q + 1):
        q = nextprime(q)
    return q, 2 * q + 1


def generate_curve_params(min_q: int, max_cofactor: int = 1 << 16) -> CurveSuiteParams:
    """Search q >= min_q prime and p = c*q - 1 prime with p = 3 mod 4.

    The base point is the cofactor multiple of the curve point with the
    smallest x-coordinate that lifts to a point of exact order q.
    """
    q = nextprime(min_q - 1)
    while True:
        for c in range(4, max_cofactor, 4):
            p = c * q - 1
            if c % q and isprime(p):
                x = 1
                while True:
                    pt = curve.lift_x(x, p)
                    if pt is not None:
                        base = curve.mul(pt, c, p)
                        if base is not None:
                            return CurveSuiteParams(p, q, base[0], base[1])
                    x += 1
        q = nextprime(q)


# Desk-scale parameter sets.  Each is re-derived by the test suite.
TINY_TRANSPARENT = (11, 23, 2)
LARGE_TRANSPARENT = (2305843009213697249, 4611686018427394499, 4)
TINY_CURVE = CurveSuiteParams(p=43, q=11, gx=31, gy=18)
# generate_curve_params(2**159): 160-bit q, 166-bit p, cofactor 80
DEFAULT_CURVE = CurveSuiteParams(
    p=58460065493236116728147393308651320786237301742959,
    q=730750818665451459101842416358141509827966271787,
    gx=23143361933009451594555667123421051615430546210285,
    gy=50490905534452627918728162530382284037561950895981,
)


def tiny_suite() -> TransparentSuite:
    return make_transparent_suite(*TINY_TRANSPARENT)


def large_suite() -> TransparentSuite:
    return make_transparent_suite(*LARGE_TRANSPARENT)


def curve_suite(params: CurveSuiteParams | None = None) -> CurveSuite:
    return make_curve_suite(params or DEFAULT_CURVE)


def suite_from_description(desc: dict) -> PairingSuite:
    backend = desc.get("backend")
    try:
        if backend == "transparent":
            return make_transparent_suite(int(desc["q"]), int(desc["p"]), int(desc["g"]))
        if backend == "curve":
            return make_curve_suite(CurveSuiteParams(
                int(desc["p"]), int(desc["q"]), int(desc["gx"]), int(desc["gy"])))
    except KeyError as exc:
        raise ParameterError(f"suite description lacks {exc.args[0]!r}") from None
    raise ParameterError(f"unknown backend {backend!r}")


SUITE_NAMES = ("transparent", "transparent-large", "curve", "curve-tiny")


def named_suite(name: str) -> PairingSuite:
    if name == "transparent":
        return tiny_suite()
    if name == "transparent-large":
        return large_suite()
    if name == "curve":
        return curve_suite()
    if name == "curve-tiny":
        return curve_suite(TINY_CURVE)
    raise ParameterError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")


# ---------------------------------------------------------------------------
# module-level operations

def pair(suite: PairingSuite, a: G1Elem, b: G1Elem) -> G2Elem:
    return suite.pair(a, b)


def g1_lincomb(suite: PairingSuite, terms: Iterable[Tuple[int, G1Elem]]) -> G1Elem:
    """sum(c * X for c, X in terms); the empty sum is the identity."""
    acc = suite.identity
    for c, x in terms:
        suite._own(x, G1Elem)
        acc = acc + c * x
    return acc


def gt_prodpow(suite: PairingSuite, terms: Iterable[Tuple[G2Elem, int]]) -> G2Elem:
    """prod(Z ** c for Z, c in terms); the empty product is the unit."""
    acc = suite.unit
    for z, c in terms:
        suite._own(z, G2Elem)
        acc = acc * z ** c
    return acc

