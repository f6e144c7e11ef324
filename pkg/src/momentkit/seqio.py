"""JSON serialization for moment sequences and density-spec argument parsing.

Sequence files look like

    { "dimension": 1, "max_degree": 2, "exact": true,
      "entries":   [ {"alpha": [0], "re": 1.0}, {"alpha": [1], "re": 0.5} ],
      "rationals": [ {"alpha": [0], "num": 1, "den": 1},
                     {"alpha": [1], "num": 1, "den": 2} ] }

``entries`` always carries the float projection (humans and plotting tools
read it); ``rationals`` carries the authoritative values when exact is true.
Missing multi-indices are zero.  Density specs come either as JSON objects
or as the compact CLI shorthands ``indicator:0,1`` / ``gaussian:0,2`` /
a bare registered name like ``square-bump``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .density import DensitySpec
from .errors import SchemaError
from .sequence import MomentSequence


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SchemaError(msg)


def _as_alpha(raw, dimension: int, where: str) -> tuple:
    _require(isinstance(raw, list) and len(raw) == dimension, f"{where}: alpha must be a list of {dimension} ints")
    _require(all(isinstance(t, int) and t >= 0 for t in raw), f"{where}: alpha entries must be ints >= 0")
    return tuple(raw)


def sequence_to_dict(s: MomentSequence) -> dict:
    entries = []
    rationals = []
    for alpha in sorted(s.values):
        v = s.values[alpha]
        if v == 0:
            continue
        if isinstance(v, complex):
            entries.append({"alpha": list(alpha), "re": v.real, "im": v.imag})
        else:
            entries.append({"alpha": list(alpha), "re": float(v)})
        if s.exact:
            f = Fraction(v)
            rationals.append({"alpha": list(alpha), "num": f.numerator, "den": f.denominator})
    out = {"dimension": s.dimension, "max_degree": s.max_degree,
           "entries": entries, "exact": s.exact}
    if s.exact:
        out["rationals"] = rationals
    return out


def sequence_from_dict(doc) -> MomentSequence:
    _require(isinstance(doc, dict), "sequence document must be a JSON object")
    for field in ("dimension", "max_degree", "entries"):
        _require(field in doc, f"missing field {field!r}")
    n = doc["dimension"]
    dmax = doc["max_degree"]
    _require(isinstance(n, int) and n >= 1, "dimension must be an int >= 1")
    _require(isinstance(dmax, int) and dmax >= 0, "max_degree must be an int >= 0")
    exact = bool(doc.get("exact", False))
    values: dict = {}
    if exact:
        raws = doc.get("rationals")
        _require(isinstance(raws, list), "exact sequence needs a 'rationals' list")
        for i, item in enumerate(raws):
            _require(isinstance(item, dict) and {"alpha", "num", "den"} <= set(item),
                     f"rationals[{i}]: need alpha/num/den")
            _require(isinstance(item["num"], int) and isinstance(item["den"], int) and item["den"] != 0,
                     f"rationals[{i}]: num/den must be ints, den nonzero")
            alpha = _as_alpha(item["alpha"], n, f"rationals[{i}]")
            values[alpha] = Fraction(item["num"], item["den"])
    else:
        _require(isinstance(doc["entries"], list), "'entries' must be a list")
        for i, item in enumerate(doc["entries"]):
            _require(isinstance(item, dict) and "alpha" in item and "re" in item,
                     f"entries[{i}]: need alpha and re")
            alpha = _as_alpha(item["alpha"], n, f"entries[{i}]")
            re = item["re"]
            im = item.get("im", 0)
            _require(isinstance(re, (int, float)) and isinstance(im, (int, float)),
                     f"entries[{i}]: re/im must be numbers")
            values[alpha] = complex(re, im) if im else float(re)
    for alpha in values:
        _require(sum(alpha) <= dmax, f"entry at alpha={list(alpha)} exceeds max_degree {dmax}")
    return MomentSequence.from_values(values, dimension=n, max_degree=dmax, exact=exact)


def load_sequence(path: str) -> MomentSequence:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return sequence_from_dict(doc)


def dump_sequence(s: MomentSequence, path: str | None = None) -> str:
    """Serialize to the document format; also write it out when given a path."""
    text = json.dumps(sequence_to_dict(s), indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# --- density specs ---------------------------------------------------------

def _num(raw, where: str):
    """JSON number or "p/q" string to an exact-friendly scalar."""
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"{where}: bad rational literal {raw!r}") from exc
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise SchemaError(f"{where}: expected a number")
    return raw if isinstance(raw, int) else float(raw)


def density_from_dict(doc) -> DensitySpec:
    _require(isinstance(doc, dict) and "kind" in doc, "density spec must be an object with 'kind'")
    kind = doc["kind"]
    if kind == "indicator":
        lo = doc.get("lo")
        hi = doc.get("hi")
        _require(lo is not None and hi is not None, "indicator: need lo and hi")
        if not isinstance(lo, list):
            lo, hi = [lo], [hi]
        return DensitySpec.indicator([_num(v, "lo") for v in lo], [_num(v, "hi") for v in hi])
    if kind == "gaussian":
        _require("mean" in doc and "variance" in doc, "gaussian: need mean and variance")
        return DensitySpec.gaussian(_num(doc["mean"], "mean"), _num(doc["variance"], "variance"),
                                    float(doc.get("support_halfwidth", 40.0)))
    if kind == "piecewise":
        raw = doc.get("pieces")
        _require(isinstance(raw, list) and raw, "piecewise: need a nonempty 'pieces' list")
        pieces = []
        for i, p in enumerate(raw):
            _require(isinstance(p, dict) and {"lo", "hi", "coeffs"} <= set(p),
                     f"pieces[{i}]: need lo/hi/coeffs")
            pieces.append((_num(p["lo"], "lo"), _num(p["hi"], "hi"),
                           tuple(_num(c, "coeff") for c in p["coeffs"])))
        return DensitySpec.piecewise_polynomial(pieces)
    if kind == "mixture":
        _require("weights" in doc and "components" in doc, "mixture: need weights and components")
        comps = [density_from_dict(c) for c in doc["components"]]
        return DensitySpec.mixture([_num(w, "weight") for w in doc["weights"]], comps)
    if kind == "product":
        _require("factors" in doc, "product: need factors")
        return DensitySpec.product([density_from_dict(c) for c in doc["factors"]])
    if kind == "named":
        _require(isinstance(doc.get("name"), str), "named: need a name")
        return DensitySpec.named(doc["name"])
    raise SchemaError(f"unknown density kind {kind!r}")


def parse_density_arg(text: str) -> DensitySpec:
    """CLI shorthand: 'indicator:0,1', 'gaussian:0,2', a registered name, or
    inline JSON starting with '{'."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return density_from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"density JSON: {exc}") from exc
    if ":" in text:
        kind, _, rest = text.partition(":")
        parts = [p.strip() for p in rest.split(",") if p.strip()]
        if kind == "indicator":
            _require(len(parts) % 2 == 0 and parts, "indicator shorthand needs lo,hi[,lo2,hi2,...]")
            half = len(parts) // 2
            los = [Fraction(p) for p in parts[:half]]
            his = [Fraction(p) for p in parts[half:]]
            return DensitySpec.indicator(los, his)
        if kind == "gaussian":
            _require(len(parts) in (2, 3), "gaussian shorthand needs mean,variance[,halfwidth]")
            hw = float(Fraction(parts[2])) if len(parts) == 3 else 40.0
            return DensitySpec.gaussian(Fraction(parts[0]), Fraction(parts[1]), hw)
        raise SchemaError(f"unknown density shorthand kind {kind!r}")
    try:
        return DensitySpec.named(text)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
