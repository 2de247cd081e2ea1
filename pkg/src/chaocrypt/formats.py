"""Binary PPM (P6) images, ``CBPX`` cipher envelopes and text key files.

Envelope layout, little-endian::

    magic "CBPX" | version u8 (=1) | width u32 | height u32 | channels u8
    | block_size u16 | digest u32 | ciphertext (width*height*channels bytes)

Key files hold one ``name=value`` line per field of :class:`MasterKey`,
reals written with 17 significant digits so they parse back bit-exactly.
"""
from __future__ import annotations

import math
import struct

import numpy as np

from .cipher import KEY_FIELDS, CipherEnvelope, MasterKey, as_image
from .errors import (BadMagicError, ChaocryptError, FormatError, HeaderError, MaxvalError,
                     MissingFieldError, NumberParseError, TruncatedError,
                     UnsupportedVersionError)

ENVELOPE_MAGIC = b"CBPX"
ENVELOPE_VERSION = 1
_HEADER = struct.Struct("<4sBIIBHI")
HEADER_SIZE = _HEADER.size

PPM_MAGIC = b"P6"


# -- PPM ---------------------------------------------------------------------

def _ppm_tokens(data: bytes, count: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset of the single whitespace byte that
    terminates the last one.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and (data[pos:pos + 1].isspace() or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                end = data.find(b"\n", pos)
                if end < 0:
                    raise HeaderError("unterminated comment in PPM header")
                pos = end + 1
            else:
                pos += 1
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise HeaderError("PPM header ends prematurely")
        tokens.append(data[start:pos])
    if pos >= n or not data[pos:pos + 1].isspace():
        raise HeaderError("PPM header must end with a single whitespace byte")
    return tokens, pos


def decode_ppm(data: bytes) -> np.ndarray:
    if not data.startswith(PPM_MAGIC) or (len(data) > 2 and not data[2:3].isspace()):
        raise BadMagicError(f"not a binary PPM (P6) file: magic {data[:2]!r}")
    tokens, end = _ppm_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise HeaderError(f"non-numeric PPM header fields {tokens[1:]!r}") from None
    if width < 1 or height < 1:
        raise HeaderError(f"PPM dimensions must be positive, got {width}x{height}")
    if maxval != 255:
        raise MaxvalError(f"only maxval 255 is supported, got {maxval}")
    expected = width * height * 3
    payload = data[end + 1:]
    if len(payload) < expected:
        raise TruncatedError(f"PPM pixel data has {len(payload)} bytes, expected {expected}")
    return np.frombuffer(payload, dtype=np.uint8, count=expected).reshape(height, width, 3).copy()


def encode_ppm(image) -> bytes:
    img = as_image(image)
    h, w, c = img.shape
    if c != 3:
        raise FormatError(f"P6 holds 3-channel images, got {c} channels")
    return b"P6\n%d %d\n255\n" % (w, h) + img.tobytes()


def read_ppm(path) -> np.ndarray:
    with open(path, "rb") as f:
        return decode_ppm(f.read())


def write_ppm(image, path) -> None:
    data = encode_ppm(image)
    with open(path, "wb") as f:
        f.write(data)


# -- envelopes ---------------------------------------------------------------

def pack_envelope(env: CipherEnvelope) -> bytes:
    try:
        header = _HEADER.pack(ENVELOPE_MAGIC, ENVELOPE_VERSION, env.width, env.height,
                              env.channels, env.block_size, env.digest)
    except struct.error as exc:
        raise FormatError(f"envelope header field out of range: {exc}") from None
    return header + env.ciphertext


def unpack_envelope(data: bytes) -> CipherEnvelope:
    if len(data) < 4 or data[:4] != ENVELOPE_MAGIC:
        raise BadMagicError(f"bad envelope magic {data[:4]!r}")
    if len(data) < HEADER_SIZE:
        raise TruncatedError(f"envelope header needs {HEADER_SIZE} bytes, got {len(data)}")
    _, version, width, height, channels, block_size, digest = _HEADER.unpack_from(data)
    if version != ENVELOPE_VERSION:
        raise UnsupportedVersionError(f"unsupported envelope version {version}")
    payload = data[HEADER_SIZE:]
    expected = width * height * channels
    if len(payload) < expected:
        raise TruncatedError(f"ciphertext has {len(payload)} bytes, header implies {expected}")
    if len(payload) > expected:
        raise FormatError(f"{len(payload) - expected} trailing bytes after ciphertext")
    try:
        return CipherEnvelope(width, height, channels, block_size, digest, bytes(payload))
    except ChaocryptError as exc:
        raise HeaderError(f"inconsistent envelope header: {exc}") from None


def read_envelope(path) -> CipherEnvelope:
    with open(path, "rb") as f:
        return unpack_envelope(f.read())


def write_envelope(env: CipherEnvelope, path) -> None:
    data = pack_envelope(env)
    with open(path, "wb") as f:
        f.write(data)


# -- keys --------------------------------------------------------------------

def format_key(key: MasterKey) -> str:
    lines = []
    for name in KEY_FIELDS:
        value = getattr(key, name)
        text = str(int(value)) if name == "n_iter" else format(float(value), ".17g")
        lines.append(f"{name}={text}")
    return "\n".join(lines) + "\n"


def parse_key(text: str) -> MasterKey:
    """Parse a key file; blank lines and ``#`` comments are ignored.

    Raises :class:`MissingFieldError`, :class:`NumberParseError` or
    :class:`~chaocrypt.errors.KeyRangeError`.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or name not in KEY_FIELDS:
            raise FormatError(f"line {lineno}: expected one of {', '.join(KEY_FIELDS)} as name=value")
        if name in values:
            raise FormatError(f"line {lineno}: duplicate field {name!r}")
        try:
            values[name] = int(value) if name == "n_iter" else float(value)
        except ValueError:
            raise NumberParseError(f"line {lineno}: cannot parse {name}={value!r}") from None
        if name != "n_iter" and not math.isfinite(values[name]):
            raise NumberParseError(f"line {lineno}: {name} must be finite")
    missing = [n for n in KEY_FIELDS if n not in values]
    if missing:
        raise MissingFieldError(f"key file lacks field(s): {', '.join(missing)}")
    return MasterKey(**values)


def read_key(path) -> MasterKey:
    with open(path, "rb") as f:
        data = f.read()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise FormatError("key file is not ASCII text") from None
    return parse_key(text)


def write_key(key: MasterKey, path) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(format_key(key))
