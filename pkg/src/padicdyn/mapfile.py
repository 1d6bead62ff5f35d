"""Map-specification files: UTF-8 JSON with the polynomial components in
canonical text form plus optional run parameters.

Required fields: n, numerators (list of polynomial strings). Optional:
denominators (default all "1"), prime ("auto" or an integer), e, precision,
degree, kmax, m_max, search_budget, lift ("teichmuller" or "naive").
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .polynomials import RationalSelfMap

DEFAULTS = {
    "prime": "auto",
    "e": 1,
    "precision": 64,
    "degree": 8,
    "kmax": 32,
    "m_max": 6,
    "search_budget": 200,
    "lift": "teichmuller",
}


@dataclass
class MapConfig:
    map: RationalSelfMap
    prime: object
    e: int
    precision: int
    degree: int
    kmax: int
    m_max: int
    search_budget: int
    lift: str


def load_map_file(path):
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return parse_map_config(raw, source=path)


def parse_map_config(raw, source="<config>"):
    if not isinstance(raw, dict):
        raise ValueError(f"{source}: expected a JSON object")
    try:
        n = int(raw["n"])
        numerators = list(raw["numerators"])
    except KeyError as exc:
        raise ValueError(f"{source}: missing field {exc}")
    denominators = raw.get("denominators")
    f = RationalSelfMap.from_texts(n, numerators, denominators)
    values = {}
    for key, default in DEFAULTS.items():
        values[key] = raw.get(key, default)
    for key in ("e", "precision", "degree", "kmax", "m_max", "search_budget"):
        values[key] = int(values[key])
    if values["prime"] not in ("auto", None):
        values["prime"] = int(values["prime"])
    if values["lift"] not in ("teichmuller", "naive"):
        raise ValueError(f"{source}: lift must be 'teichmuller' or 'naive'")
    return MapConfig(map=f, **values)
