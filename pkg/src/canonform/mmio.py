"""Dense Matrix Market files (``array`` format).

Only the dense flavour is read; entries are stored column by column, one
per line, as ``re im`` for complex files. Values are written with 17
significant digits, which round-trips every double exactly.
"""
import numpy as np

from .errors import ParseError, UnsupportedFormat

__all__ = ["BANNER", "read_matrix", "write_matrix"]

BANNER = "%%MatrixMarket matrix array complex general"
_FIELDS = {"complex": 2, "real": 1, "integer": 1, "double": 1}


def _parse_float(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", lineno) from None


def _parse_header(line):
    words = line.split()
    if not words or words[0].lower() != "%%matrixmarket":
        raise ParseError("missing '%%MatrixMarket' banner", 1)
    if len(words) != 5:
        raise ParseError("banner must read '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    obj, fmt, fld, sym = (w.lower() for w in words[1:])
    if obj != "matrix":
        raise UnsupportedFormat(f"object {obj!r} is not supported", 1)
    if fmt == "coordinate":
        raise UnsupportedFormat("coordinate (sparse) format is not supported; use array", 1)
    if fmt != "array":
        raise ParseError(f"unknown format {fmt!r}", 1)
    if fld not in _FIELDS:
        raise UnsupportedFormat(f"field {fld!r} is not supported", 1)
    if sym != "general":
        raise UnsupportedFormat(f"symmetry {sym!r} is not supported; use general", 1)
    return _FIELDS[fld]


def read_matrix(path):
    """Read a dense Matrix Market file into a complex array.

    Raises
    ------
    ParseError
        Malformed content; the message carries the offending line number.
    UnsupportedFormat
        Coordinate (sparse) files and symmetric storage.
    """
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    width = _parse_header(lines[0])
    shape = None
    values = []
    for lineno, line in enumerate(lines[1:], start=2):
        text = line.strip()
        if not text or text.startswith("%"):
            continue
        toks = text.split()
        if shape is None:
            if len(toks) != 2:
                raise ParseError("size line must hold 'rows cols'", lineno)
            try:
                shape = tuple(int(t) for t in toks)
            except ValueError:
                raise ParseError(f"bad size line {text!r}", lineno) from None
            if min(shape) < 0:
                raise ParseError("negative dimension", lineno)
            continue
        if len(toks) != width:
            raise ParseError(f"expected {width} value(s) per entry, got {len(toks)}", lineno)
        if len(values) == shape[0] * shape[1]:
            raise ParseError("more entries than rows * cols", lineno)
        re = _parse_float(toks[0], lineno)
        im = _parse_float(toks[1], lineno) if width == 2 else 0.0
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ParseError("non-finite entry", lineno)
        values.append(complex(re, im))
    if shape is None:
        raise ParseError("missing size line", len(lines))
    if len(values) != shape[0] * shape[1]:
        raise ParseError(f"expected {shape[0] * shape[1]} entries, found {len(values)}",
                         len(lines))
    return np.array(values, dtype=np.complex128).reshape(shape, order="F")


def write_matrix(path, a, comment=None):
    """Write `a` as ``%%MatrixMarket matrix array complex general``."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError("only 2-D arrays can be written")
    out = [BANNER]
    if comment:
        out += [f"% {c}" for c in str(comment).splitlines()]
    out.append(f"{a.shape[0]} {a.shape[1]}")
    out += [f"{z.real:.17g} {z.imag:.17g}" for z in a.ravel(order="F")]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(out) + "\n")
