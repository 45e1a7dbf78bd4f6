"""Small named configurations, shipped as JSON.

``fig1a``  isolated configuration of D_2 on Q^3_(3,3,2)
``fig1b``  the two configurations ("red", "blue") on a small planar domain
           that differ by a single 8-cycle and have no shorter alternating cycle
``fig1c``  configuration on T_{4,3} with no alternating 4-cycle
``fig3a``  odd-section pattern of the pyramid, 6x6
``fig3b``  even-section pattern of the pyramid, 6x6
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .errors import ConfigError
from .lattice import lattice_from_descriptor
from .matching import DimerConfig, config_from_dict

NAMES = ("fig1a", "fig1b", "fig1c", "fig3a", "fig3b")


@lru_cache(maxsize=None)
def _raw(name: str) -> dict:
    if name not in NAMES:
        raise ConfigError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    text = resources.files("dimerflip.data").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def load(name: str, variant: str | None = None) -> DimerConfig:
    obj = _raw(name)
    if "configs" in obj:
        if variant is None:
            raise ConfigError(f"fixture {name} holds several configurations: {sorted(obj['configs'])}")
        lat = lattice_from_descriptor(obj["lattice"])
        return DimerConfig.from_coord_dimers(lat, obj["configs"][variant])
    return config_from_dict(obj)


def fig1b_pair() -> tuple[DimerConfig, DimerConfig]:
    red = load("fig1b", "red")
    blue = DimerConfig.from_coord_dimers(red.lattice, _raw("fig1b")["configs"]["blue"])
    return red, blue
