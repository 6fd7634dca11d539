"""Runtime value universe: data, bodies, composites, transfers, types, values.

Every datum travels together with a structural descriptor (its body) inside a
composite.  A type pairs a body with a transfer; transfers whose results are
Boolean composites act as integrity constraints (yokes).  Everything here is
immutable and freely shareable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union


# ---------------------------------------------------------------------------
# abstract errors


@dataclass(frozen=True)
class AbstractError:
    """An error word, stored in state registers and returned by evaluation."""

    word: str

    def __post_init__(self) -> None:
        if not self.word or self.word == "OK":
            raise ValueError("an abstract error needs a non-'OK' word")

    def __str__(self) -> str:
        return self.word


DIVISION_BY_ZERO = AbstractError("division-by-zero")
OVERFLOW = AbstractError("overflow")
NUMBER_EXPECTED = AbstractError("number-expected")
WORD_EXPECTED = AbstractError("word-expected")
BOOLEAN_EXPECTED = AbstractError("Boolean-expected")
LIST_EXPECTED = AbstractError("list-expected")
ARRAY_EXPECTED = AbstractError("array-expected")
RECORD_EXPECTED = AbstractError("record-expected")
INDEX_OUT_OF_RANGE = AbstractError("index-out-of-range")
ATTRIBUTE_NOT_PRESENT = AbstractError("attribute-not-present")
ATTRIBUTE_ALREADY_PRESENT = AbstractError("attribute-already-present")
IDENTIFIER_NOT_DECLARED = AbstractError("identifier-not-declared")
IDENTIFIER_NOT_FREE = AbstractError("identifier-not-free")
VARIABLE_NOT_INITIALIZED = AbstractError("variable-not-initialized")
TYPE_NOT_DEFINED = AbstractError("type-not-defined")
NOT_A_RECORD_TYPE = AbstractError("not-a-record-type")
NO_COHERENCE = AbstractError("no-coherence")
A_YOKE_EXPECTED = AbstractError("a-yoke-expected")
YOKE_NOT_SATISFIED = AbstractError("yoke-not-satisfied")
PARAMETER_TYPE_MISMATCH = AbstractError("parameter-type-mismatch")
PARAMETER_LIST_MISMATCH = AbstractError("parameter-list-mismatch")
PROCEDURE_NOT_DECLARED = AbstractError("procedure-not-declared")
RETURN_TYPE_MISMATCH = AbstractError("return-type-mismatch")
EMPTY_LIST = AbstractError("empty-list")

ERROR_CATALOGUE = (
    DIVISION_BY_ZERO,
    OVERFLOW,
    NUMBER_EXPECTED,
    WORD_EXPECTED,
    BOOLEAN_EXPECTED,
    LIST_EXPECTED,
    ARRAY_EXPECTED,
    RECORD_EXPECTED,
    INDEX_OUT_OF_RANGE,
    ATTRIBUTE_NOT_PRESENT,
    ATTRIBUTE_ALREADY_PRESENT,
    IDENTIFIER_NOT_DECLARED,
    IDENTIFIER_NOT_FREE,
    VARIABLE_NOT_INITIALIZED,
    TYPE_NOT_DEFINED,
    NOT_A_RECORD_TYPE,
    NO_COHERENCE,
    A_YOKE_EXPECTED,
    YOKE_NOT_SATISFIED,
    PARAMETER_TYPE_MISMATCH,
    PARAMETER_LIST_MISMATCH,
    PROCEDURE_NOT_DECLARED,
    RETURN_TYPE_MISMATCH,
    EMPTY_LIST,
)


# ---------------------------------------------------------------------------
# exact decimal numbers


@dataclass(frozen=True)
class Number:
    """An exact decimal number coeff * 10**exp.

    Normalized so that zero is (0, 0) and a nonzero coeff is never divisible
    by 10.  Arithmetic is exact; a quotient that has no finite decimal
    representation is reported as None and surfaces as an overflow.
    """

    coeff: int
    exp: int

    def __post_init__(self) -> None:
        if self.coeff == 0:
            if self.exp != 0:
                raise ValueError("zero must be Number(0, 0)")
        elif self.coeff % 10 == 0:
            raise ValueError("coefficient not normalized")

    @staticmethod
    def make(coeff: int, exp: int = 0) -> "Number":
        if coeff == 0:
            return Number(0, 0)
        while coeff % 10 == 0:
            coeff //= 10
            exp += 1
        return Number(coeff, exp)

    @staticmethod
    def parse(text: str) -> "Number":
        negative = text.startswith("-")
        body = text[1:] if negative else text
        if "." in body:
            whole, frac = body.split(".", 1)
        else:
            whole, frac = body, ""
        if not (whole + frac).isdigit():
            raise ValueError(f"not a decimal literal: {text!r}")
        coeff = int(whole + frac) if whole + frac else 0
        return Number.make(-coeff if negative else coeff, -len(frac))

    @staticmethod
    def from_int(value: int) -> "Number":
        return Number.make(value, 0)

    def as_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.coeff * 10**self.exp)
        return Fraction(self.coeff, 10 ** -self.exp)

    def digits(self) -> int:
        """Decimal digit positions needed to write the number out in full."""
        if self.coeff == 0:
            return 1
        n = len(str(abs(self.coeff)))
        if self.exp >= 0:
            return n + self.exp
        return max(n, -self.exp)

    def text(self) -> str:
        sign = "-" if self.coeff < 0 else ""
        magnitude = abs(self.coeff)
        if self.exp >= 0:
            return sign + str(magnitude) + "0" * self.exp
        s = str(magnitude)
        point = len(s) + self.exp
        if point <= 0:
            return sign + "0." + "0" * (-point) + s
        return sign + s[:point] + "." + s[point:]

    def add(self, other: "Number") -> "Number":
        e = min(self.exp, other.exp)
        return Number.make(
            self.coeff * 10 ** (self.exp - e) + other.coeff * 10 ** (other.exp - e), e
        )

    def sub(self, other: "Number") -> "Number":
        return self.add(other.neg())

    def mul(self, other: "Number") -> "Number":
        return Number.make(self.coeff * other.coeff, self.exp + other.exp)

    def divide(self, other: "Number") -> Optional["Number"]:
        """Exact quotient, or None when it is not a finite decimal."""
        if other.coeff == 0:
            raise ZeroDivisionError("division of Number by zero")
        quotient = Fraction(self.coeff, other.coeff)
        den = quotient.denominator
        twos = 0
        while den % 2 == 0:
            den //= 2
            twos += 1
        fives = 0
        while den % 5 == 0:
            den //= 5
            fives += 1
        if den != 1:
            return None
        shift = max(twos, fives)
        coeff = quotient.numerator * 2 ** (shift - twos) * 5 ** (shift - fives)
        return Number.make(coeff, self.exp - other.exp - shift)

    def neg(self) -> "Number":
        return Number.make(-self.coeff, self.exp)

    def abs(self) -> "Number":
        return Number.make(abs(self.coeff), self.exp)

    def lt(self, other: "Number") -> bool:
        return self.as_fraction() < other.as_fraction()

    def is_zero(self) -> bool:
        return self.coeff == 0

    def is_integer(self) -> bool:
        return self.exp >= 0

    def to_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self.text()} is not an integer")
        return self.coeff * 10**self.exp

    def __str__(self) -> str:
        return self.text()


# ---------------------------------------------------------------------------
# bodies


class Body:
    """Structural descriptor of a datum."""


@dataclass(frozen=True)
class SimpleBody(Body):
    name: str  # 'Boolean' | 'number' | 'word'


@dataclass(frozen=True)
class ListBody(Body):
    element: Body


@dataclass(frozen=True)
class ArrayBody(Body):
    element: Body


@dataclass(frozen=True)
class RecordBody(Body):
    """Attribute map; stored sorted by name so equality ignores written order."""

    fields: tuple[tuple[str, Body], ...]

    @staticmethod
    def of(mapping: Mapping[str, Body]) -> "RecordBody":
        return RecordBody(tuple(sorted(mapping.items())))

    def attributes(self) -> dict[str, Body]:
        return dict(self.fields)

    def has(self, name: str) -> bool:
        return any(n == name for n, _ in self.fields)

    def get(self, name: str) -> Body:
        for n, b in self.fields:
            if n == name:
                return b
        raise KeyError(name)

    def with_added(self, name: str, body: Body) -> "RecordBody":
        return RecordBody.of({**self.attributes(), name: body})

    def with_removed(self, name: str) -> "RecordBody":
        remaining = self.attributes()
        del remaining[name]
        return RecordBody.of(remaining)


BOOLEAN = SimpleBody("Boolean")
NUMBER = SimpleBody("number")
WORD = SimpleBody("word")


# ---------------------------------------------------------------------------
# data


class Data:
    """A runtime datum: boolean, number, word, list, array or record."""


@dataclass(frozen=True)
class BoolData(Data):
    value: bool


@dataclass(frozen=True)
class NumberData(Data):
    value: Number


@dataclass(frozen=True)
class WordData(Data):
    text: str


@dataclass(frozen=True)
class ListData(Data):
    items: tuple[Data, ...]

    def __post_init__(self) -> None:
        body_of(self)  # raises on a provably heterogeneous collection


@dataclass(frozen=True)
class ArrayData(Data):
    """Array indexed 1..n; item with index i sits at items[i - 1]."""

    items: tuple[Data, ...]

    def __post_init__(self) -> None:
        body_of(self)


@dataclass(frozen=True)
class RecordData(Data):
    fields: tuple[tuple[str, Data], ...]

    @staticmethod
    def of(mapping: Mapping[str, Data]) -> "RecordData":
        return RecordData(tuple(sorted(mapping.items())))

    def attributes(self) -> dict[str, Data]:
        return dict(self.fields)

    def has(self, name: str) -> bool:
        return any(n == name for n, _ in self.fields)

    def get(self, name: str) -> Data:
        for n, d in self.fields:
            if n == name:
                return d
        raise KeyError(name)


def num(value: Union[int, str]) -> NumberData:
    if isinstance(value, int):
        return NumberData(Number.from_int(value))
    return NumberData(Number.parse(value))


def word(text: str) -> WordData:
    return WordData(text)


def body_of(dat: Data) -> Optional[Body]:
    """Best-effort descriptor; None when empty collections leave it open.

    Raises ValueError for a collection whose elements provably disagree.
    """
    match dat:
        case BoolData():
            return BOOLEAN
        case NumberData():
            return NUMBER
        case WordData():
            return WORD
        case ListData(items) | ArrayData(items):
            element: Optional[Body] = None
            for item in items:
                b = body_of(item)
                if b is None:
                    continue
                if element is None:
                    element = b
                elif element != b:
                    raise ValueError("collection elements have different bodies")
            if element is None:
                return None
            return ListBody(element) if isinstance(dat, ListData) else ArrayBody(element)
        case RecordData(fields):
            out: dict[str, Body] = {}
            for name, d in fields:
                b = body_of(d)
                if b is None:
                    return None
                out[name] = b
            return RecordBody.of(out)
    raise TypeError(f"not a datum: {dat!r}")


def clan_bo_member(dat: Data, bod: Body) -> bool:
    """Does the datum structurally match the body?

    Empty lists and arrays match any element body.
    """
    match dat:
        case BoolData():
            return bod == BOOLEAN
        case NumberData():
            return bod == NUMBER
        case WordData():
            return bod == WORD
        case ListData(items):
            return isinstance(bod, ListBody) and all(
                clan_bo_member(item, bod.element) for item in items
            )
        case ArrayData(items):
            return isinstance(bod, ArrayBody) and all(
                clan_bo_member(item, bod.element) for item in items
            )
        case RecordData(fields):
            if not isinstance(bod, RecordBody):
                return False
            attrs = bod.attributes()
            if set(attrs) != {name for name, _ in fields}:
                return False
            return all(clan_bo_member(d, attrs[name]) for name, d in fields)
    return False


# ---------------------------------------------------------------------------
# composites, transfers, types, values


@dataclass(frozen=True)
class Composite:
    """A certified datum/body pair: construction checks the pairing."""

    dat: Data
    bod: Body

    def __post_init__(self) -> None:
        if not clan_bo_member(self.dat, self.bod):
            raise ValueError("data does not match body")


@dataclass(frozen=True)
class Transfer:
    """A total map over composites-or-errors, tagged with its source text.

    Two transfers compare equal when their source texts do: the text of a
    transfer expression determines its behaviour.
    """

    source: str
    fn: Callable[[Composite], Union[Composite, AbstractError]] = field(
        compare=False, repr=False
    )

    def apply(self, x: Union[Composite, AbstractError]) -> Union[Composite, AbstractError]:
        return apply_transfer(self, x)


def apply_transfer(
    tra: Transfer, x: Union[Composite, AbstractError]
) -> Union[Composite, AbstractError]:
    """Errors pass through untouched; composites go through the transfer."""
    if isinstance(x, AbstractError):
        return x
    return tra.fn(x)


TRUE_COMPOSITE = Composite(BoolData(True), BOOLEAN)
FALSE_COMPOSITE = Composite(BoolData(False), BOOLEAN)

TT = Transfer("true", lambda com: TRUE_COMPOSITE)


def boo_composite(value: bool) -> Composite:
    return TRUE_COMPOSITE if value else FALSE_COMPOSITE


def is_boo_composite(com: Union[Composite, AbstractError]) -> bool:
    return (
        isinstance(com, Composite)
        and com.bod == BOOLEAN
        and isinstance(com.dat, BoolData)
    )


@dataclass(frozen=True)
class LangType:
    """A (body, transfer) pair; its clan holds the composites it admits."""

    bod: Body
    tra: Transfer


def clan_tr_member(com: Composite, tra: Transfer) -> bool:
    return apply_transfer(tra, com) == TRUE_COMPOSITE


def clan_ty_member(com: Composite, typ: LangType) -> bool:
    return (
        com.bod == typ.bod
        and clan_bo_member(com.dat, typ.bod)
        and clan_tr_member(com, typ.tra)
    )


class _Omega:
    """The pseudo-datum marking a declared but uninitialized variable."""

    _instance: Optional["_Omega"] = None

    def __new__(cls) -> "_Omega":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Ω"


OMEGA = _Omega()


@dataclass(frozen=True)
class Value:
    """What a variable is bound to: a datum (or Ω) together with its type."""

    content: Union[Data, _Omega]
    typ: LangType

    def composite(self) -> Composite:
        if self.content is OMEGA:
            raise ValueError("uninitialized value has no composite")
        return Composite(self.content, self.typ.bod)


# ---------------------------------------------------------------------------
# coherence and size limits


def coherent(b1: Body, b2: Body) -> bool:
    """Equal bodies, or record bodies where one attribute map extends the other."""
    if b1 == b2:
        return True
    if isinstance(b1, RecordBody) and isinstance(b2, RecordBody):
        a1, a2 = b1.attributes(), b2.attributes()
        if set(a1) <= set(a2):
            return all(a2[name] == body for name, body in a1.items())
        if set(a2) <= set(a1):
            return all(a1[name] == body for name, body in a2.items())
    return False


@dataclass(frozen=True)
class Limits:
    """Size bounds applied to freshly computed data (top level only)."""

    max_significant_digits: int = 20
    max_word_length: int = 10_000
    max_collection_size: int = 100_000

    def __post_init__(self) -> None:
        if min(self.max_significant_digits, self.max_word_length, self.max_collection_size) < 1:
            raise ValueError("limits must be strictly positive")


def oversized(dat: Data, lim: Limits) -> bool:
    match dat:
        case NumberData(value):
            return value.digits() > lim.max_significant_digits
        case WordData(text):
            return len(text) > lim.max_word_length
        case ListData(items) | ArrayData(items):
            return len(items) > lim.max_collection_size
        case RecordData(fields):
            return len(fields) > lim.max_collection_size
    return False
