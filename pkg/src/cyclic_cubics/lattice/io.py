"""JSON encoding of lattices, sublattices and isometries.

Integers that do not fit in 64 bits are written as decimal strings so that
any JSON consumer can read them back without loss; rationals are ``"p/q"``.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Isometry, Lattice, Sublattice

_INT64 = 2 ** 63


class SchemaError(ValueError):
    """Input JSON does not match the expected lattice schema."""


def encode_int(x: int):
    return x if -_INT64 <= x < _INT64 else str(x)


def encode_rational(x) -> int | str:
    x = Fraction(x)
    if x.denominator == 1:
        return encode_int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def encode_matrix(A) -> list:
    return [[encode_int(int(x)) for x in row] for row in A]


def encode_vector(v) -> list:
    return [encode_rational(x) for x in v]


def decode_int(x) -> int:
    if isinstance(x, bool):
        raise SchemaError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError as exc:
            raise SchemaError(f"expected an integer string, got {x!r}") from exc
    raise SchemaError(f"expected an integer, got {x!r}")


def decode_rational(x) -> Fraction:
    if isinstance(x, str) and "/" in x:
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {x!r}") from exc
    return Fraction(decode_int(x))


def decode_matrix(A, square: bool = False) -> list:
    if not isinstance(A, list) or not all(isinstance(r, list) for r in A):
        raise SchemaError("matrix must be a list of rows")
    M = [[decode_int(x) for x in row] for row in A]
    if M and len({len(r) for r in M}) != 1:
        raise SchemaError("matrix rows have different lengths")
    if square and any(len(r) != len(M) for r in M):
        raise SchemaError("matrix must be square")
    return M


def decode_vector(v) -> list:
    if not isinstance(v, list):
        raise SchemaError("vector must be a list")
    return [decode_int(x) for x in v]


def lattice_to_json(L: Lattice) -> dict:
    out = {"gram": encode_matrix(L.gram)}
    if L.name is not None:
        out = {"name": L.name, **out}
    return out


def lattice_from_json(d: dict) -> Lattice:
    if not isinstance(d, dict) or "gram" not in d:
        raise SchemaError("lattice JSON needs a 'gram' field")
    try:
        return Lattice(decode_matrix(d["gram"], square=True), d.get("name"))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def sublattice_to_json(S: Sublattice) -> dict:
    return {**lattice_to_json(S.ambient), "basis": encode_matrix(S.basis)}


def sublattice_from_json(d: dict) -> Sublattice:
    L = lattice_from_json(d)
    if "basis" not in d:
        raise SchemaError("sublattice JSON needs a 'basis' field")
    B = decode_matrix(d["basis"])
    if any(len(r) != L.rank for r in B):
        raise SchemaError("basis vectors must have one entry per lattice coordinate")
    try:
        return Sublattice(L, B)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def isometry_to_json(phi: Isometry) -> dict:
    return {**lattice_to_json(phi.lattice), "matrix": encode_matrix(phi.matrix)}


def isometry_from_json(d: dict) -> Isometry:
    L = lattice_from_json(d)
    if "matrix" not in d:
        raise SchemaError("isometry JSON needs a 'matrix' field")
    try:
        return Isometry(L, decode_matrix(d["matrix"], square=True))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
