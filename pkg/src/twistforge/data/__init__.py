"""Bundled example specs."""
import json
from importlib import resources

from ..series import LieRingSpec

LIE_RINGS = ("jordanian", "null_plane", "nc2")


def bundled_names():
    return LIE_RINGS


def spec_path(name):
    """Filesystem path of a bundled JSON file, e.g. ``spec_path("jordanian")``."""
    return resources.files(__name__).joinpath(f"{name}.json")


def bundled_lie(name) -> LieRingSpec:
    if name not in LIE_RINGS:
        raise KeyError(f"no bundled Lie ring {name!r}; have {', '.join(LIE_RINGS)}")
    with spec_path(name).open() as fh:
        return LieRingSpec.from_dict(json.load(fh))
