"""Readers, writers, quantization, and seeded generators for symbol matrices."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from .core import SymbolMatrix

__all__ = [
    "PlantedPair",
    "gen_planted_pair",
    "gen_random",
    "load_csv",
    "load_pgm",
    "quantize",
    "read_matrix_file",
    "render_csv",
]

_WHITESPACE = b" \t\r\n\x0b\x0c"


def _pgm_tokens(data: bytes):
    """Yield (token, end_offset) pairs, treating # through end of line as noise."""
    pos = 0
    size = len(data)
    while pos < size:
        c = data[pos : pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            pos = size if nl < 0 else nl + 1
            continue
        if c in _WHITESPACE:
            pos += 1
            continue
        start = pos
        while pos < size and data[pos : pos + 1] not in _WHITESPACE and data[pos : pos + 1] != b"#":
            pos += 1
        yield data[start:pos], pos


def load_pgm(data: bytes) -> SymbolMatrix:
    """Parse a P2 (ascii) or P5 (binary) graymap into a matrix.

    The alphabet becomes maxval + 1, so maxval must stay below 256.
    """
    tokens = _pgm_tokens(data)

    def next_token(what: str) -> Tuple[bytes, int]:
        try:
            return next(tokens)
        except StopIteration:
            raise ValueError(f"truncated header: missing {what}") from None

    magic, _ = next_token("magic")
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"unsupported magic {magic.decode('ascii', 'replace')!r}")

    def int_token(what: str) -> Tuple[int, int]:
        tok, end = next_token(what)
        try:
            return int(tok), end
        except ValueError:
            raise ValueError(f"invalid {what} {tok.decode('ascii', 'replace')!r}") from None

    width, _ = int_token("width")
    height, _ = int_token("height")
    maxval, header_end = int_token("maxval")
    if width < 1 or height < 1:
        raise ValueError(f"matrix dimensions must be >= 1, got {height}x{width}")
    if maxval < 1:
        raise ValueError(f"maxval must be >= 1, got {maxval}")
    if maxval > 255:
        raise ValueError(f"maxval {maxval} exceeds 255")

    count = width * height
    if magic == b"P2":
        pixels = []
        for tok, _ in tokens:
            try:
                pixels.append(int(tok))
            except ValueError:
                raise ValueError(f"invalid pixel {tok.decode('ascii', 'replace')!r}") from None
        if len(pixels) != count:
            raise ValueError(f"expected {count} pixels, got {len(pixels)}")
        arr = np.array(pixels, dtype=np.int64)
    else:
        # One whitespace byte separates the maxval token from the raw payload.
        if data[header_end : header_end + 1] not in (b" ", b"\t", b"\r", b"\n"):
            raise ValueError("missing whitespace between header and pixel payload")
        payload = data[header_end + 1 :]
        if len(payload) < count:
            raise ValueError(f"truncated pixel payload: expected {count} bytes, got {len(payload)}")
        arr = np.frombuffer(payload[:count], dtype=np.uint8).astype(np.int64)
    if arr.size and int(arr.min()) < 0:
        raise ValueError(f"pixel {int(arr.min())} is negative")
    if arr.size and int(arr.max()) > maxval:
        raise ValueError(f"pixel {int(arr.max())} exceeds maxval {maxval}")
    return SymbolMatrix(height, width, maxval + 1, arr.reshape(height, width))


def load_csv(text: str, alphabet_size: Optional[int] = None) -> SymbolMatrix:
    """Parse rows of comma or whitespace separated non-negative integers.

    Blank lines and lines starting with # are skipped; a comment of the form
    ``# ... alphabet=N ...`` pins the alphabet, as does the alphabet_size
    argument (which wins).  Otherwise the alphabet is max symbol + 1.
    """
    rows = []
    declared: Optional[int] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for piece in line[1:].replace(",", " ").split():
                if piece.startswith("alphabet="):
                    try:
                        declared = int(piece.split("=", 1)[1])
                    except ValueError:
                        raise ValueError(f"invalid alphabet directive on line {line_no}") from None
            continue
        row = []
        for tok in line.replace(",", " ").split():
            try:
                value = int(tok)
            except ValueError:
                raise ValueError(f"invalid token {tok!r} on line {line_no}") from None
            if value < 0:
                raise ValueError(f"negative symbol {value} on line {line_no}")
            row.append(value)
        rows.append(row)
    if not rows:
        raise ValueError("no matrix rows found")
    width = len(rows[0])
    for idx, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ValueError(f"row {idx} has {len(row)} columns, expected {width}")
    arr = np.array(rows, dtype=np.int64)
    if alphabet_size is None:
        alphabet_size = declared if declared is not None else int(arr.max()) + 1
    return SymbolMatrix(len(rows), width, alphabet_size, arr)


def render_csv(matrix: SymbolMatrix) -> str:
    """Inverse of load_csv: comma separated rows under an alphabet directive."""
    lines = [f"# alphabet={matrix.alphabet_size}"]
    for row in matrix.symbols:
        lines.append(",".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def read_matrix_file(path: Union[str, Path], alphabet_size: Optional[int] = None) -> SymbolMatrix:
    """Load a matrix file, picking the parser from the suffix (.pgm is binary)."""
    p = Path(path)
    if p.suffix.lower() == ".pgm":
        return load_pgm(p.read_bytes())
    return load_csv(p.read_text(), alphabet_size)


def quantize(matrix: SymbolMatrix, alphabet_size: int) -> SymbolMatrix:
    """Map symbols onto a smaller alphabet by v -> floor(v * L' / L)."""
    if alphabet_size < 1:
        raise ValueError(f"target alphabet must be >= 1, got {alphabet_size}")
    scaled = (matrix.symbols.astype(np.int64) * alphabet_size) // matrix.alphabet_size
    return SymbolMatrix(matrix.rows, matrix.cols, alphabet_size, scaled)


def gen_random(n: int, alphabet_size: int, seed) -> SymbolMatrix:
    """Seeded uniform n x n matrix over [0, alphabet_size)."""
    if n < 1:
        raise ValueError(f"matrix side must be >= 1, got {n}")
    if alphabet_size < 1:
        raise ValueError(f"alphabet size must be >= 1, got {alphabet_size}")
    rng = np.random.default_rng(seed)
    arr = rng.integers(0, alphabet_size, size=(n, n), dtype=np.int64)
    return SymbolMatrix(n, n, alphabet_size, arr)


@dataclass(frozen=True)
class PlantedPair:
    """Two random matrices sharing one copied square block.

    The block of side ``block_side`` is anchored (bottom-right) at ``anchor``
    in both matrices, so an exact window comparison there succeeds by
    construction.
    """

    a: SymbolMatrix
    b: SymbolMatrix
    block_side: int
    anchor: Tuple[int, int]


def gen_planted_pair(n: int, m: int, alphabet_size: int, block_side: int, seed) -> PlantedPair:
    """Seeded pair of matrices with a shared block planted at a random anchor."""
    if n < 1 or m < 1:
        raise ValueError(f"matrix sides must be >= 1, got n={n} m={m}")
    if alphabet_size < 1:
        raise ValueError(f"alphabet size must be >= 1, got {alphabet_size}")
    smallest = min(n, m)
    if not (1 <= block_side <= smallest):
        raise ValueError(f"block side {block_side} exceeds min(n, m) = {smallest}")
    rng = np.random.default_rng(seed)
    grid_a = rng.integers(0, alphabet_size, size=(n, n), dtype=np.int64)
    grid_b = rng.integers(0, alphabet_size, size=(m, m), dtype=np.int64)
    i = int(rng.integers(block_side, smallest + 1))
    j = int(rng.integers(block_side, smallest + 1))
    grid_b[i - block_side : i, j - block_side : j] = grid_a[i - block_side : i, j - block_side : j]
    return PlantedPair(
        a=SymbolMatrix(n, n, alphabet_size, grid_a),
        b=SymbolMatrix(m, m, alphabet_size, grid_b),
        block_side=block_side,
        anchor=(i, j),
    )
