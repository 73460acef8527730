"""Per-image feature extraction and the FeatureMatrix container."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import CatalogError, EmptyInput, FileError, InternalError
from ..imageio import Image, ImageSet, as_image_set
from ..wavelet import HAAR, FilterVariant, WaveletKernel, filter_bank
from .catalog import FULL_CATALOG, Family, FeatureCatalog
from .discretize import DEFAULT_BIN_COUNT, discretize
from .firstorder import first_order_features
from .glcm import glcm_features
from .gldm import gldm_features
from .glrlm import glrlm_features
from .glszm import glszm_features
from .ngtdm import ngtdm_features

_TEXTURE = {
    Family.GLCM: glcm_features,
    Family.GLRLM: glrlm_features,
    Family.GLSZM: glszm_features,
    Family.GLDM: gldm_features,
    Family.NGTDM: ngtdm_features,
}


@dataclass(eq=False)
class FeatureMatrix:
    """One row of catalog-ordered features per image, rows in id order."""

    values: np.ndarray
    ids: list[str]
    catalog: FeatureCatalog

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("feature matrix must be 2D")
        self.ids = list(self.ids)
        if self.values.shape != (len(self.ids), self.catalog.m):
            raise CatalogError(
                f"matrix shape {self.values.shape} does not match {len(self.ids)} ids x {self.catalog.m} features"
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.n

    def rows(self, index) -> "FeatureMatrix":
        index = np.asarray(index)
        return FeatureMatrix(self.values[index], [self.ids[i] for i in np.atleast_1d(index)], self.catalog)

    def select(self, catalog: FeatureCatalog) -> "FeatureMatrix":
        """Restrict to the columns of ``catalog`` (must be a sub-catalog)."""
        pos = {e: k for k, e in enumerate(self.catalog.entries)}
        try:
            cols = [pos[e] for e in catalog.entries]
        except KeyError as exc:
            raise CatalogError(f"feature {exc.args[0].column} not present in matrix") from None
        return FeatureMatrix(self.values[:, cols], self.ids, catalog)

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", *self.catalog.columns])
        for rid, row in zip(self.ids, self.values):
            writer.writerow([rid, *(format(float(v), ".17g") for v in row)])
        text = buf.getvalue()
        if path is not None:
            try:
                Path(path).write_text(text)
            except OSError:
                raise FileError(path, "cannot write feature CSV") from None
        return text

    @classmethod
    def from_csv(cls, path: str | Path) -> "FeatureMatrix":
        try:
            text = Path(path).read_text()
        except OSError:
            raise FileError(path, "cannot read feature CSV") from None
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or not rows[0] or rows[0][0] != "id":
            raise FileError(path, "feature CSV must start with an 'id' column")
        catalog = FeatureCatalog.from_columns(rows[0][1:])
        body = [r for r in rows[1:] if r]
        if not body:
            raise EmptyInput(f"feature CSV has no rows: {path}")
        try:
            values = np.array([[float(v) for v in r[1:]] for r in body], dtype=np.float64)
        except ValueError:
            raise FileError(path, "non-numeric feature value") from None
        if values.shape[1] != catalog.m:
            raise FileError(path, "row length does not match header")
        return cls(values, [r[0] for r in body], catalog)


def _families_by_variant(catalog: FeatureCatalog) -> dict[FilterVariant, set[Family]]:
    need: dict[FilterVariant, set[Family]] = {}
    for e in catalog.entries:
        need.setdefault(e.variant, set()).add(e.family)
    return need


def extract_image(
    img: Image | np.ndarray,
    catalog: FeatureCatalog = FULL_CATALOG,
    bin_count: int = DEFAULT_BIN_COUNT,
    kernel: WaveletKernel | None = HAAR,
) -> np.ndarray:
    """Feature row for one image, in catalog order."""
    need = _families_by_variant(catalog)
    if kernel is None and any(v is not FilterVariant.Original for v in need):
        raise CatalogError("catalog contains wavelet features but no wavelet kernel was given")
    computed: dict[tuple[FilterVariant, Family], dict[str, float]] = {}
    for band in filter_bank(img, kernel):
        fams = need.get(band.variant)
        if not fams:
            continue
        d = discretize(band.pixels, bin_count)
        for fam in fams:
            if fam is Family.FirstOrder:
                computed[band.variant, fam] = first_order_features(band.pixels, bin_count, levels=d)
            else:
                computed[band.variant, fam] = _TEXTURE[fam](d)
    row = np.array([computed[e.variant, e.family][e.name] for e in catalog.entries], dtype=np.float64)
    bad = ~np.isfinite(row)
    if bad.any():
        e = catalog.entries[int(np.flatnonzero(bad)[0])]
        ident = getattr(img, "id", "<array>")
        raise InternalError(f"non-finite feature for image {ident!r}: {e.variant.value} {e.family.value} {e.name}")
    return row


def _extract_one(args):
    img, catalog, bin_count, kernel = args
    return extract_image(img, catalog, bin_count, kernel)


def extract_features(
    images: ImageSet | Sequence[Image],
    catalog: FeatureCatalog = FULL_CATALOG,
    bin_count: int = DEFAULT_BIN_COUNT,
    kernel: WaveletKernel | None = HAAR,
    workers: int = 1,
) -> FeatureMatrix:
    """Extract the catalog features for every image in ``images``.

    Work is a parallel map over images; rows are collected in id order, so the
    result does not depend on ``workers``.
    """
    image_set = as_image_set(images)
    if len(image_set) == 0:
        raise EmptyInput("cannot extract features from an empty image set")
    tasks = [(img, catalog, bin_count, kernel) for img in image_set]
    if workers > 1 and len(tasks) > 1:
        chunk = max(1, math.ceil(len(tasks) / (4 * workers)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_extract_one, tasks, chunksize=chunk))
    else:
        rows = [_extract_one(t) for t in tasks]
    return FeatureMatrix(np.vstack(rows), image_set.ids, catalog)
