"""Unitaries for oracle problems: Hadamard and black-box function evaluation.

Oracles are materialized as explicit permutation matrices so unitarity and
self-inverseness are directly checkable; at dimension <= 2^12 the cost is
negligible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import FunctionFormatError, IncompleteOracleError

SQRT2 = np.sqrt(2.0)


def hadamard() -> np.ndarray:
    """2x2 transform sending |0> to (|0>+|1>)/sqrt(2) and |1> to (|0>-|1>)/sqrt(2)."""
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / SQRT2


class Classification(enum.Enum):
    CONSTANT = "constant"
    BALANCED = "balanced"
    NEITHER = "neither"


def _validate_values(values: Sequence[int]) -> tuple[int, ...]:
    vals = tuple(int(v) for v in values)
    if any(v not in (0, 1) for v in vals):
        raise ValueError(f"function values must be 0 or 1, got {values}")
    m = len(vals)
    if m < 2 or m & (m - 1):
        raise ValueError(f"value list length {m} is not a power of two >= 2")
    return vals


def classify_function(values: Sequence[int]) -> Classification:
    """Constant if all outputs equal, balanced if exactly half are 1, else neither."""
    vals = _validate_values(values)
    ones = sum(vals)
    if ones in (0, len(vals)):
        return Classification.CONSTANT
    if 2 * ones == len(vals):
        return Classification.BALANCED
    return Classification.NEITHER


@dataclass(frozen=True)
class FunctionTable:
    """One boolean function of ``arg_bits`` arguments per setting label.

    ``settings[b][a]`` is the function value f_b(a); every value list has
    length ``2 ** arg_bits``.
    """

    arg_bits: int
    settings: Mapping[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        if self.arg_bits < 1:
            raise ValueError("arg_bits must be >= 1")
        if not self.settings:
            raise FunctionFormatError("function table has no settings")
        settings = {}
        widths = set()
        for label, values in self.settings.items():
            if set(label) - {"0", "1"} or not label:
                raise FunctionFormatError(f"setting label {label!r} is not a bitstring")
            widths.add(len(label))
            vals = _validate_values(values)
            if len(vals) != 1 << self.arg_bits:
                raise FunctionFormatError(
                    f"setting {label!r} lists {len(vals)} values, "
                    f"need {1 << self.arg_bits}"
                )
            settings[label] = vals
        if len(widths) != 1:
            raise FunctionFormatError(f"setting labels mix widths {sorted(widths)}")
        object.__setattr__(self, "settings", settings)

    @property
    def setting_bits(self) -> int:
        return len(next(iter(self.settings)))

    @classmethod
    def canonical(cls) -> FunctionTable:
        """The four one-bit functions: two constant, two balanced."""
        return cls(
            arg_bits=1,
            settings={
                "00": (0, 0),
                "01": (0, 1),
                "10": (1, 0),
                "11": (1, 1),
            },
        )


def parse_function_table(text: str) -> FunctionTable:
    """Parse the text format: one ``<label>: <comma-separated 0/1 values>`` per line.

    The argument width is inferred from the value-list length, which must be
    a power of two.  Blank lines and ``#`` comments are ignored.
    """
    settings: dict[str, tuple[int, ...]] = {}
    lengths = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, rest = line.partition(":")
        if not sep:
            raise FunctionFormatError(f"line {lineno}: missing ':' in {raw!r}")
        label = label.strip()
        try:
            values = tuple(int(tok.strip()) for tok in rest.split(","))
        except ValueError:
            raise FunctionFormatError(f"line {lineno}: values must be integers") from None
        if any(v not in (0, 1) for v in values):
            raise FunctionFormatError(f"line {lineno}: values must be 0 or 1")
        m = len(values)
        if m < 2 or m & (m - 1):
            raise FunctionFormatError(
                f"line {lineno}: {m} values is not a power of two >= 2"
            )
        if label in settings:
            raise FunctionFormatError(f"line {lineno}: duplicate label {label!r}")
        settings[label] = values
        lengths.add(m)
    if not settings:
        raise FunctionFormatError("no function definitions found")
    if len(lengths) != 1:
        raise FunctionFormatError(f"value lists mix lengths {sorted(lengths)}")
    n = lengths.pop().bit_length() - 1
    try:
        return FunctionTable(arg_bits=n, settings=settings)
    except FunctionFormatError:
        raise
    except ValueError as exc:
        raise FunctionFormatError(str(exc)) from None


def oracle_fixed(values: Sequence[int]) -> np.ndarray:
    """Black box for one function: permutation |a,v> -> |a, v xor f(a)>.

    Basis order is argument bits then value bit, big endian.
    """
    vals = _validate_values(values)
    dim = 2 * len(vals)
    u = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(dim):
        a, v = i >> 1, i & 1
        u[(a << 1) | (v ^ vals[a]), i] = 1.0
    return u


def oracle_with_setting(table: FunctionTable) -> np.ndarray:
    """Function evaluation keyed by the setting register.

    Permutation on the (setting, argument, value) basis mapping
    |b,a,v> -> |b,a, v xor f_b(a)>; the setting and argument bits pass
    through unaltered.
    """
    w, n = table.setting_bits, table.arg_bits
    if len(table.settings) != 1 << w:
        missing = sorted(
            set(format(i, f"0{w}b") for i in range(1 << w)) - set(table.settings)
        )
        raise IncompleteOracleError(f"settings missing labels {missing}")
    dim = 1 << (w + n + 1)
    u = np.zeros((dim, dim), dtype=np.complex128)
    arg_mask = (1 << n) - 1
    for i in range(dim):
        b = i >> (n + 1)
        a = (i >> 1) & arg_mask
        f = table.settings[format(b, f"0{w}b")][a]
        u[i ^ f, i] = 1.0
    return u
