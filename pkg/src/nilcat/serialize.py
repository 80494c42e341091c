"""JSON input/output shared by the command line and the suites.

Ring values are always written as decimal strings.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .cohomology import Cocycle2
from .finite import FiniteGroup
from .fo import FiniteModel
from .n2n import N2nGroup
from .qn2n import group_from_json, group_to_json
from .rings import ring_from_json, ring_from_name


def load(source):
    """Parse JSON from a file path, an ``@path`` reference or literal text."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source)
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    elif not text.lstrip().startswith(("{", "[", '"')) and Path(text).exists():
        text = Path(text).read_text()
    return json.loads(text)


def dumps(obj):
    """Canonical, byte-stable JSON."""
    return json.dumps(_plain(obj), indent=2, sort_keys=True)


def digest(obj):
    return hashlib.sha256(json.dumps(_plain(obj), sort_keys=True).encode()).hexdigest()[:16]


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def ring_arg(value):
    """A ring from a short name (``mod3``, ``Z``) or a JSON descriptor."""
    if isinstance(value, dict):
        return ring_from_json(value)
    text = str(value)
    if text.lstrip().startswith("{") or text.startswith("@"):
        return ring_from_json(load(text))
    return ring_from_name(text)


def group_from_spec(spec):
    return group_from_json(load(spec))


def spec_of(G):
    return group_to_json(G)


def element_from_json(G, obj):
    return G.from_json(load(obj))


def cocycle_from_json(obj):
    return Cocycle2.from_json(load(obj))


def group_table_from_json(obj):
    """``{"table": [[...]], "labels": [...]}`` -> validated FiniteGroup."""
    obj = load(obj)
    return FiniteGroup.from_table(np.array(obj["table"], dtype=np.int64), labels=obj.get("labels"))


def model_from_json(obj):
    """A model is either a raw table or a group spec, plus named parameters.

    ``{"table": [[...]], "params": {"h1": 3}}`` or
    ``{"group": {spec}, "params": {"h1": {"alphas": [...], "gammas": [...]}}}``.
    """
    obj = load(obj)
    if "table" in obj:
        F = group_table_from_json(obj)
        return FiniteModel(F, {k: int(v) for k, v in obj.get("params", {}).items()})
    G = group_from_json(obj["group"])
    F = G.finite()
    params = {}
    for k, v in obj.get("params", {}).items():
        params[k] = int(v) if isinstance(v, (int, str)) else F.index(G.from_json(v))
    return FiniteModel(F, params)


def input_group(obj):
    """Either a structured group (from a spec) or a FiniteGroup (from a table)."""
    obj = load(obj)
    if "table" in obj:
        return group_table_from_json(obj)
    return group_from_json(obj.get("group", obj))


def element_label(x):
    """JSON for a group element (structured element or table index)."""
    if hasattr(x, "to_json"):
        return x.to_json()
    return int(x)


def standard_group(ring, n):
    return N2nGroup(ring, n)
