"""JSON schemas for config files, manifests and CLI outputs."""

import json
from functools import lru_cache
from importlib import resources

import jsonschema

from ..errors import InvalidParameter

NAMES = ("config", "classify", "segment", "profile", "manifest", "report")


@lru_cache(maxsize=None)
def load(name):
    if name not in NAMES:
        raise KeyError(name)
    text = resources.files(__package__).joinpath(f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


def validate(document, name):
    """Raise InvalidParameter when ``document`` does not match schema ``name``."""
    try:
        jsonschema.validate(document, load(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InvalidParameter(f"invalid {name} document at {where}: {exc.message}") from None
