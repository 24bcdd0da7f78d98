"""Image and float-map I/O: PNG/PPM/PGM through Pillow, PFM by hand."""
import re
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from .image_core import as_float_image


def read_image(path):
    """Read an 8-bit (or 16-bit) image as float64 in [0, 1].

    Grayscale inputs are returned as (H, W); color as (H, W, 3).  PFM files
    are read without rescaling.
    """
    path = Path(path)
    if path.suffix.lower() == ".pfm":
        return read_pfm(path)
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode in ("RGBA", "P", "CMYK", "YCbCr", "LA"):
                im = im.convert("RGB")
            arr = np.array(im)
    except (OSError, ValueError) as exc:
        raise ValueError(f"cannot read image {path}: {exc}") from exc
    if arr.dtype == np.int32:  # Pillow 'I' mode for 16-bit PGM
        arr = arr.astype(np.uint16)
    return as_float_image(arr)


def read_color(path):
    img = read_image(path)
    if img.ndim == 2:
        img = np.repeat(img[..., None], 3, axis=2)
    return img


def to_uint8(img):
    return np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def write_image(path, img):
    """Write a [0, 1] float image as 8-bit PNG/PPM/PGM (format from suffix)."""
    Image.fromarray(to_uint8(np.asarray(img))).save(Path(path))


def write_pfm(path, data, little_endian=True):
    """Write a float map as PFM: ``Pf`` for (H, W), ``PF`` for (H, W, 3).

    Rows are stored bottom-to-top; a negative scale marks little-endian data.
    """
    data = np.asarray(data, dtype=np.float32)
    if data.ndim == 2:
        magic = "Pf"
    elif data.ndim == 3 and data.shape[2] == 3:
        magic = "PF"
    else:
        raise ValueError(f"PFM needs (H, W) or (H, W, 3) data, got {data.shape}")
    h, w = data.shape[:2]
    scale = -1.0 if little_endian else 1.0
    dtype = "<f4" if little_endian else ">f4"
    header = f"{magic}\n{w} {h}\n{scale}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.flipud(data).astype(dtype).tobytes())


_TOKEN = re.compile(rb"\S+")


def read_pfm(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    # header: three whitespace-separated lines (magic, dims, scale)
    pos = 0
    tokens = []
    while len(tokens) < 4:
        m = _TOKEN.search(raw, pos)
        if m is None:
            raise ValueError(f"{path}: truncated PFM header")
        tokens.append(m.group())
        pos = m.end()
    pos += 1  # single whitespace byte after the scale
    magic = tokens[0]
    if magic == b"PF":
        channels = 3
    elif magic == b"Pf":
        channels = 1
    else:
        raise ValueError(f"{path}: not a PFM file (magic {magic!r})")
    try:
        w, h = int(tokens[1]), int(tokens[2])
        scale = float(tokens[3])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed PFM header") from exc
    dtype = "<f4" if scale < 0 else ">f4"
    count = w * h * channels
    body = raw[pos:pos + 4 * count]
    if len(body) != 4 * count:
        raise ValueError(f"{path}: PFM payload too short")
    data = np.frombuffer(body, dtype=dtype).astype(np.float64)
    data = data.reshape((h, w, 3) if channels == 3 else (h, w))
    return np.flipud(data).copy()


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment.  Values stay strings."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            print(f"{path}:{lineno}: ignoring line without '='", file=sys.stderr)
            continue
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def write_airlight(path, airlight):
    Path(path).write_text(" ".join(f"{a:.10g}" for a in airlight) + "\n")


def read_airlight(path):
    vals = [float(v) for v in re.split(r"[,\s]+", Path(path).read_text().strip()) if v]
    if len(vals) != 3:
        raise ValueError(f"{path}: expected three airlight components")
    return np.array(vals)
