"""JSON file formats for modules, elements, submodules, sequences and morphisms.

Module file::

    {"p": 2, "generators": [{"id": "2", "parent": null}, {"id": "2·1", "parent": "2"}]}

Walker files carry ``"beta"`` (ordinal text) and optionally ``"labels"``; their
generators may be omitted and are then materialized.  Elements are
``{"terms": {"2·1·0": 3}}``.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .elements import Element
from .homlift import Morphism
from .ordinal import parse_ordinal
from .presentation import ForestPresentation, WalkerPresentation, p_beta
from .purity import ShortExactSequence
from .realization import Submodule

__all__ = [
    "SchemaError",
    "load_json",
    "digest",
    "module_from_json",
    "module_to_json",
    "element_from_json",
    "element_to_json",
    "submodule_from_json",
    "sequence_from_json",
    "sequence_to_json",
    "morphism_from_json",
    "morphism_to_json",
]


class SchemaError(ValueError):
    pass


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


def _require(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"missing field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"field {key!r} must be {kind.__name__}")
    return val


def module_from_json(obj) -> ForestPresentation:
    p = _require(obj, "p", int)
    if "beta" in obj:
        beta = parse_ordinal(str(obj["beta"]))
        labels = obj.get("labels")
        if labels is None:
            P = p_beta(beta, p)
        else:
            P = p_beta(beta, p, [parse_ordinal(str(x)) for x in labels])
        if "generators" in obj:
            given = {g["id"]: g.get("parent") for g in obj["generators"]}
            if given != P.parents:
                raise SchemaError("generators disagree with the Walker construction")
        return P
    gens = _require(obj, "generators", list)
    parents = {}
    for g in gens:
        gid = _require(g, "id", str)
        if gid in parents:
            raise SchemaError(f"duplicate generator {gid!r}")
        parents[gid] = g.get("parent")
    try:
        return ForestPresentation(p, parents)
    except (ValueError, KeyError) as exc:
        raise SchemaError(str(exc)) from None


def module_to_json(F: ForestPresentation) -> dict:
    out: dict = {"p": F.p}
    if isinstance(F, WalkerPresentation):
        out["beta"] = str(F.beta)
        if not F.is_complete:
            out["labels"] = [str(x) for x in sorted(F.label_set)]
    out["generators"] = [{"id": g, "parent": F.parent(g)} for g in F.ordered_ids()]
    return out


def element_from_json(F: ForestPresentation, obj) -> Element:
    terms = obj.get("terms", obj) if isinstance(obj, dict) else None
    if not isinstance(terms, dict):
        raise SchemaError("element must be {\"terms\": {...}}")
    for g, c in terms.items():
        if g not in F:
            raise SchemaError(f"unknown generator {g!r}")
        if not isinstance(c, int):
            raise SchemaError(f"coefficient of {g!r} must be an integer")
    return Element(F, terms)


def element_to_json(x: Element) -> dict:
    return x.to_json()


def submodule_from_json(F: ForestPresentation, obj) -> Submodule:
    gens = _require(obj, "generators", list)
    G = F.realization
    return Submodule(G, [element_from_json(F, g).coords for g in gens])


def sequence_from_json(obj) -> tuple[ForestPresentation, ShortExactSequence]:
    F = module_from_json(_require(obj, "B", dict))
    N_obj = _require(obj, "N", dict)
    if "module" in N_obj and module_from_json(N_obj["module"]).parents != F.parents:
        raise SchemaError("submodule refers to a different module than B")
    N = submodule_from_json(F, N_obj)
    return F, ShortExactSequence(F.realization, N)


def sequence_to_json(F: ForestPresentation, N: Submodule) -> dict:
    gens = [Element.from_coords(F, y).to_json() for y in N.generators()]
    return {"B": module_to_json(F), "N": {"generators": gens}}


def morphism_from_json(obj):
    """Returns ``(source, target, images)`` with images as Elements of the target."""
    source = module_from_json(_require(obj, "source", dict))
    target = module_from_json(_require(obj, "target", dict))
    imgs = _require(obj, "images", dict)
    if set(imgs) != set(source.ordered_ids()):
        raise SchemaError("images must cover exactly the source generators")
    return source, target, {g: element_from_json(target, e) for g, e in imgs.items()}


def morphism_to_json(f: Morphism, target: ForestPresentation) -> dict:
    return {
        "source": module_to_json(f.source),
        "target": module_to_json(target),
        "images": {
            g: Element.from_coords(target, x).to_json() for g, x in sorted(f.images.items())
        },
    }
