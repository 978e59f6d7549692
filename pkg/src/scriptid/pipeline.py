"""End-to-end page pipeline: binarize, close, deskew, segment, measure, classify."""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace

from . import raster
from ._validation import check_gray_image
from .classifier import ClassifierConfig, PROFILES, ScriptLabel, classify
from .errors import InvalidParameter
from .features import extract_features
from .schemas import validate
from .segmenter import SegmenterConfig, analyze_page


@dataclass(frozen=True)
class PipelineConfig:
    binarize: str = "otsu"
    threshold: int = 128  # only used by binarize="fixed"
    se_width: int = 3
    se_height: int = 3
    close: bool = True
    deskew: bool = False
    deskew_max_angle: float = 5.0
    deskew_step: float = 0.5
    min_line_height: int = 3
    min_word_width: int = 2
    min_gap: int | None = None
    tau: float = 1.0
    profile: str = "table1"
    hindi_range: tuple | None = None
    kannada_range: tuple | None = None
    english_range: tuple | None = None
    hindi_min_vs: int = 2
    english_min_vs: int = 2
    kannada_max_vs: int = 1
    ratio_only: bool = False

    def __post_init__(self):
        if self.binarize not in ("otsu", "fixed"):
            raise InvalidParameter(f"binarize must be 'otsu' or 'fixed', got {self.binarize!r}")
        if not 0 <= self.threshold <= 255:
            raise InvalidParameter("threshold must be in [0, 255]")
        if self.profile not in PROFILES:
            raise InvalidParameter(f"unknown profile {self.profile!r}")
        if not 0 < self.tau <= 1:
            raise InvalidParameter("tau must lie in (0, 1]")
        if self.deskew_step <= 0 or self.deskew_max_angle < 0:
            raise InvalidParameter("deskew needs step > 0 and max_angle >= 0")
        for name in ("hindi_range", "kannada_range", "english_range"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(float(v) for v in value))
        # building the derived configs runs their own validation
        self.structuring_element()
        self.segmenter_config()
        self.classifier_config()

    @classmethod
    def from_dict(cls, data):
        """Build from a flat mapping; unknown keys are rejected."""
        validate(data, "config")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidParameter(f"unknown config key(s): {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        d = asdict(self)
        for name in ("hindi_range", "kannada_range", "english_range"):
            if d[name] is not None:
                d[name] = list(d[name])
        return d

    def with_overrides(self, **overrides):
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def structuring_element(self):
        return raster.StructuringElement.rect(self.se_width, self.se_height)

    def segmenter_config(self):
        return SegmenterConfig(self.min_line_height, self.min_word_width, self.min_gap)

    def classifier_config(self):
        overrides = {name: getattr(self, name)
                     for name in ("hindi_range", "kannada_range", "english_range")
                     if getattr(self, name) is not None}
        return ClassifierConfig.from_profile(
            self.profile,
            hindi_min_vs=self.hindi_min_vs,
            english_min_vs=self.english_min_vs,
            kannada_max_vs=self.kannada_max_vs,
            ratio_only=self.ratio_only,
            **overrides,
        )


@dataclass(frozen=True)
class WordResult:
    box: object
    features: object
    label: ScriptLabel

    def to_dict(self):
        d = self.box.to_dict()
        d["features"] = self.features.to_dict()
        d["label"] = self.label.value
        return d


def preprocess(img, cfg=None):
    """Gray page to the binary page fed to segmentation. Returns ``(binary, angle)``."""
    cfg = cfg or PipelineConfig()
    gray = check_gray_image(img)
    binary = raster.binarize(gray, cfg.binarize, cfg.threshold)
    if cfg.close:
        binary = raster.close(binary, cfg.structuring_element())
    angle = 0.0
    if cfg.deskew:
        binary, angle = raster.deskew(binary, cfg.deskew_max_angle, cfg.deskew_step)
    return binary, angle


def classify_page(img, cfg=None, jobs=1):
    """Label every word on a gray page, in reading order.

    With ``jobs > 1`` the words are measured on a thread pool; results keep
    reading order regardless.
    """
    cfg = cfg or PipelineConfig()
    binary, _ = preprocess(img, cfg)
    return classify_binary(binary, cfg, jobs)


def classify_binary(binary, cfg=None, jobs=1):
    """Segment, measure and label an already preprocessed binary page."""
    cfg = cfg or PipelineConfig()
    words = analyze_page(binary, cfg.segmenter_config()).words
    ccfg = cfg.classifier_config()

    def run(word):
        feats = extract_features(binary, word, cfg.tau)
        return WordResult(word, feats, classify(feats, ccfg))

    if jobs > 1 and len(words) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, words))
    return [run(w) for w in words]
