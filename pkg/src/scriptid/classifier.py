"""Rule-based script decision from the Lp/Lm ratio and the stroke count."""

import enum
from dataclasses import asdict, dataclass, fields

from .errors import InvalidParameter


class ScriptLabel(str, enum.Enum):
    KANNADA = "Kannada"
    ENGLISH = "English"
    HINDI = "Hindi"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


SCRIPTS = (ScriptLabel.KANNADA, ScriptLabel.ENGLISH, ScriptLabel.HINDI)

# Lp/Lm range sets. They differ only in the Hindi and English upper bounds.
PROFILES = {
    "table1": {
        "hindi_range": (0.071, 0.31),
        "kannada_range": (0.31, 0.50),
        "english_range": (0.50, 0.96),
    },
    "alg6": {
        "hindi_range": (0.071, 0.258),
        "kannada_range": (0.258, 0.50),
        "english_range": (0.50, 0.90),
    },
}
DEFAULT_PROFILE = "table1"


@dataclass(frozen=True)
class ClassifierConfig:
    """Decision ranges and stroke gates.

    Every range is ``[lo, hi)`` except the one with the largest ``lo``, which
    also includes ``hi``.
    """

    hindi_range: tuple = PROFILES[DEFAULT_PROFILE]["hindi_range"]
    kannada_range: tuple = PROFILES[DEFAULT_PROFILE]["kannada_range"]
    english_range: tuple = PROFILES[DEFAULT_PROFILE]["english_range"]
    hindi_min_vs: int = 2
    english_min_vs: int = 2
    kannada_max_vs: int = 1
    ratio_only: bool = False

    def __post_init__(self):
        ranges = []
        for name in ("hindi_range", "kannada_range", "english_range"):
            value = getattr(self, name)
            try:
                lo, hi = (float(v) for v in value)
            except (TypeError, ValueError):
                raise InvalidParameter(f"{name} must be a [lo, hi] pair, got {value!r}") from None
            if not lo < hi:
                raise InvalidParameter(f"{name} needs lo < hi, got {value!r}")
            object.__setattr__(self, name, (lo, hi))
            ranges.append((lo, hi))
        if not ranges[0][0] < ranges[1][0] < ranges[2][0]:
            raise InvalidParameter("ranges must be ordered hindi < kannada < english by lower bound")
        if ranges[0][1] > ranges[1][0] or ranges[1][1] > ranges[2][0]:
            raise InvalidParameter("decision ranges must not overlap")
        for name in ("hindi_min_vs", "english_min_vs", "kannada_max_vs"):
            if int(getattr(self, name)) < 0:
                raise InvalidParameter(f"{name} must be >= 0")

    @classmethod
    def from_profile(cls, name=DEFAULT_PROFILE, **overrides):
        if name not in PROFILES:
            raise InvalidParameter(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")
        return cls(**{**PROFILES[name], **overrides})

    def to_dict(self):
        d = asdict(self)
        for name in ("hindi_range", "kannada_range", "english_range"):
            d[name] = list(d[name])
        return d


CONFIG_FIELDS = tuple(f.name for f in fields(ClassifierConfig))


def in_range(ratio, bounds, top=False):
    lo, hi = bounds
    return lo <= ratio < hi or (top and ratio == hi)


def classify_ratio(ratio, vs, cfg=None):
    """First matching rule: Hindi, then Kannada, then English; else Unknown."""
    cfg = cfg or ClassifierConfig()
    if ratio is None or ratio != ratio:  # None or NaN
        return ScriptLabel.UNKNOWN
    gate = not cfg.ratio_only
    if in_range(ratio, cfg.hindi_range) and (not gate or vs >= cfg.hindi_min_vs):
        return ScriptLabel.HINDI
    if in_range(ratio, cfg.kannada_range) and (not gate or vs <= cfg.kannada_max_vs):
        return ScriptLabel.KANNADA
    if in_range(ratio, cfg.english_range, top=True) and (not gate or vs >= cfg.english_min_vs):
        return ScriptLabel.ENGLISH
    return ScriptLabel.UNKNOWN


def classify(features, cfg=None):
    """Script label of one word's features."""
    return classify_ratio(features.ratio, features.vs, cfg)
