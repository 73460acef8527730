"""The ordered feature catalog that fixes column order of every feature matrix.

Column names follow the ``<variant>_<family>_<feature>`` convention used by
common radiomics tooling, e.g. ``wavelet-HH_glcm_Contrast``. A catalog is plain
data: it can be exported to JSON, edited, and loaded back.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import CatalogError
from ..wavelet import VARIANTS, FilterVariant


class Family(enum.Enum):
    FirstOrder = "firstorder"
    GLCM = "glcm"
    GLRLM = "glrlm"
    GLSZM = "glszm"
    GLDM = "gldm"
    NGTDM = "ngtdm"

    @classmethod
    def from_label(cls, label: str) -> "Family":
        for f in cls:
            if f.value == label:
                return f
        raise CatalogError(f"unknown feature family {label!r}")


FIRST_ORDER_NAMES = (
    "Energy",
    "TotalEnergy",
    "Entropy",
    "Minimum",
    "P10",
    "P90",
    "Maximum",
    "Mean",
    "Median",
    "InterquartileRange",
    "Range",
    "MeanAbsoluteDeviation",
    "RobustMeanAbsoluteDeviation",
    "RootMeanSquared",
    "Skewness",
    "Kurtosis",
    "Variance",
    "Uniformity",
)

GLCM_NAMES = (
    "Autocorrelation",
    "JointAverage",
    "ClusterProminence",
    "ClusterShade",
    "ClusterTendency",
    "Contrast",
    "Correlation",
    "DifferenceAverage",
    "DifferenceEntropy",
    "DifferenceVariance",
    "JointEnergy",
    "JointEntropy",
    "Imc1",
    "Imc2",
    "Idm",
    "MCC",
    "Idmn",
    "Id",
    "Idn",
    "InverseVariance",
    "MaximumProbability",
    "SumAverage",
    "SumEntropy",
    "SumSquares",
)

GLRLM_NAMES = (
    "ShortRunEmphasis",
    "LongRunEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "RunLengthNonUniformity",
    "RunLengthNonUniformityNormalized",
    "RunPercentage",
    "GrayLevelVariance",
    "RunVariance",
    "RunEntropy",
    "LowGrayLevelRunEmphasis",
    "HighGrayLevelRunEmphasis",
    "ShortRunLowGrayLevelEmphasis",
    "ShortRunHighGrayLevelEmphasis",
    "LongRunLowGrayLevelEmphasis",
    "LongRunHighGrayLevelEmphasis",
)

GLSZM_NAMES = (
    "SmallAreaEmphasis",
    "LargeAreaEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "SizeZoneNonUniformity",
    "SizeZoneNonUniformityNormalized",
    "ZonePercentage",
    "GrayLevelVariance",
    "ZoneVariance",
    "ZoneEntropy",
    "LowGrayLevelZoneEmphasis",
    "HighGrayLevelZoneEmphasis",
    "SmallAreaLowGrayLevelEmphasis",
    "SmallAreaHighGrayLevelEmphasis",
    "LargeAreaLowGrayLevelEmphasis",
    "LargeAreaHighGrayLevelEmphasis",
)

GLDM_NAMES = (
    "SmallDependenceEmphasis",
    "LargeDependenceEmphasis",
    "GrayLevelNonUniformity",
    "DependenceNonUniformity",
    "DependenceNonUniformityNormalized",
    "GrayLevelVariance",
    "DependenceVariance",
    "DependenceEntropy",
    "LowGrayLevelEmphasis",
    "HighGrayLevelEmphasis",
    "SmallDependenceLowGrayLevelEmphasis",
    "SmallDependenceHighGrayLevelEmphasis",
    "LargeDependenceLowGrayLevelEmphasis",
    "LargeDependenceHighGrayLevelEmphasis",
)

NGTDM_NAMES = ("Coarseness", "Contrast", "Busyness", "Complexity", "Strength")

FAMILY_FEATURES: dict[Family, tuple[str, ...]] = {
    Family.FirstOrder: FIRST_ORDER_NAMES,
    Family.GLCM: GLCM_NAMES,
    Family.GLRLM: GLRLM_NAMES,
    Family.GLSZM: GLSZM_NAMES,
    Family.GLDM: GLDM_NAMES,
    Family.NGTDM: NGTDM_NAMES,
}

FAMILY_ALIASES = {
    "first": Family.FirstOrder,
    "firstorder": Family.FirstOrder,
    "glcm": Family.GLCM,
    "glrlm": Family.GLRLM,
    "glszm": Family.GLSZM,
    "gldm": Family.GLDM,
    "ngtdm": Family.NGTDM,
}

VARIANT_ALIASES = {
    "orig": FilterVariant.Original,
    "original": FilterVariant.Original,
    "ll": FilterVariant.LL,
    "lh": FilterVariant.LH,
    "hl": FilterVariant.HL,
    "hh": FilterVariant.HH,
}


@dataclass(frozen=True, order=False)
class CatalogEntry:
    variant: FilterVariant
    family: Family
    name: str

    @property
    def column(self) -> str:
        return f"{self.variant.value}_{self.family.value}_{self.name}"

    @property
    def label(self) -> str:
        return f"{self.variant.value} {self.family.value} {self.name}"

    @classmethod
    def from_column(cls, column: str) -> "CatalogEntry":
        parts = column.split("_")
        if len(parts) != 3:
            raise CatalogError(f"malformed feature column {column!r}")
        try:
            variant = FilterVariant.from_label(parts[0])
        except ValueError as exc:
            raise CatalogError(str(exc)) from None
        family = Family.from_label(parts[1])
        if parts[2] not in FAMILY_FEATURES[family]:
            raise CatalogError(f"unknown {family.value} feature {parts[2]!r}")
        return cls(variant, family, parts[2])


class FeatureCatalog:
    """An ordered, duplicate-free list of catalog entries."""

    def __init__(self, entries: Iterable[CatalogEntry]):
        self.entries: tuple[CatalogEntry, ...] = tuple(entries)
        if not self.entries:
            raise CatalogError("catalog is empty")
        if len(set(self.entries)) != len(self.entries):
            raise CatalogError("catalog contains duplicate entries")

    @classmethod
    def full(cls) -> "FeatureCatalog":
        return cls(
            CatalogEntry(v, f, n) for v in VARIANTS for f in Family for n in FAMILY_FEATURES[f]
        )

    @classmethod
    def from_columns(cls, columns: Sequence[str]) -> "FeatureCatalog":
        return cls(CatalogEntry.from_column(c) for c in columns)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, FeatureCatalog) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"FeatureCatalog(m={self.m})"

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def columns(self) -> list[str]:
        return [e.column for e in self.entries]

    @property
    def variants(self) -> list[FilterVariant]:
        return [v for v in VARIANTS if any(e.variant is v for e in self.entries)]

    def subset(
        self,
        families: Iterable[Family] | None = None,
        variants: Iterable[FilterVariant] | None = None,
    ) -> "FeatureCatalog":
        fams = None if families is None else set(families)
        vars_ = None if variants is None else set(variants)
        kept = [
            e
            for e in self.entries
            if (fams is None or e.family in fams) and (vars_ is None or e.variant in vars_)
        ]
        if not kept:
            raise CatalogError("subset selects no features")
        return FeatureCatalog(kept)

    def to_json(self) -> str:
        payload = {
            "m": self.m,
            "entries": [
                {"variant": e.variant.value, "family": e.family.value, "name": e.name}
                for e in self.entries
            ],
        }
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FeatureCatalog":
        try:
            payload = json.loads(text)
            items = payload["entries"] if isinstance(payload, dict) else payload
            entries = []
            for it in items:
                if isinstance(it, dict):
                    v, f, n = it["variant"], it["family"], it["name"]
                else:
                    v, f, n = it
                entries.append(CatalogEntry.from_column(f"{v}_{f}_{n}"))
        except (ValueError, KeyError, TypeError) as exc:
            raise CatalogError(f"malformed catalog JSON: {exc}") from None
        return cls(entries)

    @classmethod
    def load(cls, path: str | Path) -> "FeatureCatalog":
        try:
            text = Path(path).read_text()
        except OSError:
            raise CatalogError(f"cannot read catalog file {path}") from None
        return cls.from_json(text)


FULL_CATALOG = FeatureCatalog.full()


def parse_families(spec: str | None) -> list[Family] | None:
    """Parse a CLI ``--families`` value (``all`` or a comma list)."""
    if spec is None or spec.strip() in ("", "all"):
        return None
    out = []
    for tok in spec.split(","):
        tok = tok.strip().lower()
        if tok not in FAMILY_ALIASES:
            raise CatalogError(f"unknown feature family {tok!r}")
        out.append(FAMILY_ALIASES[tok])
    return out


def parse_variants(spec: str | None) -> list[FilterVariant] | None:
    if spec is None or spec.strip() in ("", "all"):
        return None
    out = []
    for tok in spec.split(","):
        tok = tok.strip().lower()
        if tok not in VARIANT_ALIASES:
            raise CatalogError(f"unknown filter variant {tok!r}")
        out.append(VARIANT_ALIASES[tok])
    return out
