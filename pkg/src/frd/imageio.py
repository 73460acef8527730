"""Loading, canonicalizing and writing grayscale image sets.

Supported inputs are 8/16-bit grayscale PNG and PGM files plus a small raw
float format (``.rawf32``: two little-endian ``u32`` values H and W followed by
H*W little-endian ``f32`` pixels in row-major order). Intensities are divided
by the storage maximum (255 or 65535), never by a per-image min/max, so the
relationship between images is preserved.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from PIL import Image as PILImage, UnidentifiedImageError

from .errors import ChannelError, EmptyInput, FileError, FRDError

SUPPORTED_SUFFIXES = (".png", ".pgm", ".rawf32")
DEFAULT_SIZE = 256

_RAW_HEADER = struct.Struct("<II")
_PIL_GRAY_16 = {"I;16", "I;16L", "I;16B", "I;16N"}


@dataclass(frozen=True, eq=False)
class Image:
    """A single grayscale image with intensities in [0, 1]."""

    id: str
    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2:
            raise ValueError(f"image {self.id!r} must be 2D, got shape {px.shape}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(eq=False)
class ImageSet:
    """Images ordered lexicographically by id."""

    images: list[Image]
    name: str = ""
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.images = sorted(self.images, key=lambda im: im.id)
        ids = [im.id for im in self.images]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise FRDError(f"duplicate image ids: {', '.join(dupes)}")
        self._index = {i: k for k, i in enumerate(ids)}

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def __getitem__(self, key):
        if isinstance(key, str):
            return self.images[self._index[key]]
        return self.images[key]

    @property
    def ids(self) -> list[str]:
        return [im.id for im in self.images]


def resize_bilinear(pixels: np.ndarray, height: int, width: int | None = None) -> np.ndarray:
    """Corner-aligned bilinear resampling.

    Output sample ``i`` reads the source at ``i * (H_in - 1) / (H_out - 1)``
    so the four corner pixels are preserved exactly.
    """
    width = height if width is None else width
    src = np.asarray(pixels, dtype=np.float64)
    if src.shape == (height, width):
        return src.copy()
    rows, r0, r1, fr = _axis_weights(src.shape[0], height)
    cols, c0, c1, fc = _axis_weights(src.shape[1], width)
    # a + f * (b - a) keeps constant regions exactly constant
    top = src[r0][:, c0] + fc * (src[r0][:, c1] - src[r0][:, c0])
    bottom = src[r1][:, c0] + fc * (src[r1][:, c1] - src[r1][:, c0])
    return top + fr[:, None] * (bottom - top)


def _axis_weights(n_in: int, n_out: int):
    if n_out == 1 or n_in == 1:
        pos = np.zeros(n_out)
    else:
        pos = np.arange(n_out) * ((n_in - 1) / (n_out - 1))
    lo = np.floor(pos).astype(np.intp)
    lo = np.minimum(lo, n_in - 1)
    hi = np.minimum(lo + 1, n_in - 1)
    return pos, lo, hi, pos - lo


def _read_raw(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if len(data) < _RAW_HEADER.size:
        raise FileError(path, "truncated raw header")
    h, w = _RAW_HEADER.unpack_from(data)
    if h == 0 or w == 0 or len(data) != _RAW_HEADER.size + 4 * h * w:
        raise FileError(path, "raw payload does not match header")
    px = np.frombuffer(data, dtype="<f4", offset=_RAW_HEADER.size).reshape(h, w)
    if not np.all(np.isfinite(px)):
        raise FileError(path, "non-finite raw pixel values")
    return np.clip(px.astype(np.float64), 0.0, 1.0)


def _read_pgm(path: Path, bit_depth_hint: int | None) -> np.ndarray:
    data = path.read_bytes()
    tokens: list[bytes] = []
    pos = 0
    # magic, width, height, maxval; '#' comments may appear between tokens
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FileError(path, "truncated PGM header")
        tokens.append(data[start:pos])
    magic = tokens[0]
    if magic in (b"P3", b"P6"):
        raise ChannelError(path, "RGB")
    if magic not in (b"P2", b"P5"):
        raise FileError(path, "not a PGM file")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FileError(path, "malformed PGM header") from None
    if w <= 0 or h <= 0 or not 0 < maxval < 65536:
        raise FileError(path, "malformed PGM header")
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        dtype = ">u2" if maxval > 255 else "u1"
        nbytes = h * w * np.dtype(dtype).itemsize
        if len(data) - pos < nbytes:
            raise FileError(path, "truncated PGM payload")
        raw = np.frombuffer(data, dtype=dtype, count=h * w, offset=pos)
    else:
        try:
            raw = np.array(data[pos:].split()[: h * w], dtype=np.int64)
        except ValueError:
            raise FileError(path, "malformed PGM payload") from None
        if raw.size != h * w:
            raise FileError(path, "truncated PGM payload")
    scale = _format_max(bit_depth_hint, 16 if maxval > 255 else 8)
    return raw.reshape(h, w).astype(np.float64) / scale


def _read_pil(path: Path, bit_depth_hint: int | None) -> np.ndarray:
    try:
        with PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "1":
                return np.asarray(im, dtype=np.float64)
            if mode == "L":
                default_bits = 8
            elif mode in _PIL_GRAY_16 or mode == "I":
                default_bits = 16
            else:
                raise ChannelError(path, mode)
            arr = np.asarray(im).astype(np.float64)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise FileError(path, f"unreadable image ({exc.__class__.__name__})") from None
    if mode == "I" and (arr.min() < 0 or arr.max() > 65535):
        raise FileError(path, "32-bit integer images are not supported")
    return arr / _format_max(bit_depth_hint, default_bits)


def _format_max(bit_depth_hint: int | None, default_bits: int) -> float:
    bits = default_bits if bit_depth_hint is None else int(bit_depth_hint)
    return float(2**bits - 1)


def read_pixels(path: str | Path, bit_depth_hint: int | None = None) -> np.ndarray:
    """Read one file into a float grid in [0, 1] at its native size."""
    path = Path(path)
    suffix = path.suffix.lower()
    try:
        if suffix == ".rawf32":
            px = _read_raw(path)
        elif suffix == ".pgm":
            px = _read_pgm(path, bit_depth_hint)
        elif suffix == ".png":
            px = _read_pil(path, bit_depth_hint)
        else:
            raise FileError(path, "unsupported file type")
    except OSError as exc:
        raise FileError(path, f"cannot read file ({exc.strerror or exc})") from None
    return np.clip(px, 0.0, 1.0)


def load_image(
    path: str | Path, target_size: int | None = DEFAULT_SIZE, bit_depth_hint: int | None = None
) -> Image:
    path = Path(path)
    px = read_pixels(path, bit_depth_hint)
    if target_size is not None:
        px = resize_bilinear(px, target_size, target_size)
    return Image(path.stem, px)


def list_image_files(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileError(directory, "not a directory")
    files = [p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in SUPPORTED_SUFFIXES]
    return sorted(files, key=lambda p: (p.stem, p.name))


def load_image_set(
    path: str | Path,
    target_size: int = DEFAULT_SIZE,
    bit_depth_hint: int | None = None,
    name: str | None = None,
    workers: int = 1,
) -> ImageSet:
    """Load every supported image in ``path`` and canonicalize to a square grid."""
    if target_size is None or int(target_size) < 1:
        raise FRDError(f"target size must be a positive integer, got {target_size!r}")
    files = list_image_files(path)
    if not files:
        raise EmptyInput(f"no supported images in {path}")
    stems = [p.stem for p in files]
    if len(set(stems)) != len(stems):
        dupe = next(p for p in files if stems.count(p.stem) > 1)
        raise FileError(dupe, "duplicate image id")

    def _load(p: Path) -> Image:
        return load_image(p, target_size, bit_depth_hint)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            images = list(pool.map(_load, files))
    else:
        images = [_load(p) for p in files]
    return ImageSet(images, name=name if name is not None else Path(path).name)


def write_image(img: Image, path: str | Path) -> None:
    """Write ``img`` as ``.rawf32`` (exact), or 16-bit ``.png`` / ``.pgm``."""
    path = Path(path)
    suffix = path.suffix.lower()
    px = np.clip(img.pixels, 0.0, 1.0)
    try:
        if suffix == ".rawf32":
            h, w = px.shape
            payload = _RAW_HEADER.pack(h, w) + px.astype("<f4").tobytes()
            path.write_bytes(payload)
            return
        q = np.rint(px * 65535.0).astype(np.uint16)
        if suffix == ".pgm":
            h, w = q.shape
            path.write_bytes(f"P5\n{w} {h}\n65535\n".encode("ascii") + q.astype(">u2").tobytes())
        elif suffix == ".png":
            PILImage.fromarray(q).save(path, format="PNG")
        else:
            raise FileError(path, "unsupported output type")
    except OSError as exc:
        raise FileError(path, f"cannot write file ({exc.strerror or exc})") from None


def write_image_set(images: Iterable[Image], directory: str | Path, suffix: str = ".png") -> list[Path]:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError:
        raise FileError(directory, "cannot create output directory") from None
    written = []
    for img in images:
        out = directory / f"{img.id}{suffix}"
        write_image(img, out)
        written.append(out)
    return written


def as_image_set(images: Sequence[Image] | ImageSet, name: str = "") -> ImageSet:
    if isinstance(images, ImageSet):
        return images
    return ImageSet(list(images), name=name)
