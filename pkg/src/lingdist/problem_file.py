"""Reading decision-problem files and (de)serialising outcomes.

Problem files are YAML (plain JSON is accepted as well). A file names its
scales, alternatives, attributes and decision makers, then gives either
per-decision-maker terms or per-scale fused distribution matrices::

    scales:
      - {id: S5, granularity: 5}
      - {id: S7, granularity: 7, labels: [vp, p, sp, f, sg, g, vg]}
    alternatives: [G1, G2]
    attributes: [C1, C2]
    decision_makers:
      - {id: d1, scale: S5, weight: 0.4}
      - {id: d2, scale: S7, weight: 0.6}
    assessments:
      terms:
        - [d1, G1, C1, 3]
        ...
    attribute_weights: {mode: unknown}

``decision_makers`` entries may carry ``count: N`` instead of an ``id`` list
(expanded to ``<id>#1 .. <id>#N``). Fused cells are written either as
``{index: proportion}`` maps or with the inline grammar ``"0.4@3,0.6@4"``;
proportions may be fractions such as ``"1/3"``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import yaml

from .distribution import DistributionAssessment
from .linguistic import LinguisticScale, TwoTuple
from .magdm import (
    DecisionMaker,
    DecisionOutcome,
    DecisionProblem,
    KnownWeights,
    PartialWeights,
    UnknownWeights,
    validate_problem,
)
from .simplex import SENSES, LinearConstraint

FORMAT_VERSION = 1


class ProblemFileError(ValueError):
    """The file cannot be read into a decision problem.

    ``diagnostics`` lists every problem found, each naming its location.
    """

    def __init__(self, diagnostics: list[str]):
        super().__init__("\n".join(diagnostics))
        self.diagnostics = diagnostics


def parse_number(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    raise ValueError(f"expected a number, got {value!r}")


def parse_inline(spec: str) -> dict[int, float]:
    """Parse ``"0.3@1,0.5@2"`` into ``{1: 0.3, 2: 0.5}``."""
    mass: dict[int, float] = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "@" not in part:
            raise ValueError(f"expected proportion@index, got {part!r}")
        p, k = part.split("@", 1)
        idx = int(k.strip())
        mass[idx] = mass.get(idx, 0.0) + parse_number(p)
    if not mass:
        raise ValueError("empty distribution")
    return mass


def parse_cell(raw: Any, scale: LinguisticScale) -> DistributionAssessment:
    if isinstance(raw, str):
        mass = parse_inline(raw)
    elif isinstance(raw, dict):
        mass = {int(k): parse_number(v) for k, v in raw.items()}
    elif isinstance(raw, list) and len(raw) == scale.granularity:
        mass = {k: parse_number(v) for k, v in enumerate(raw)}
    else:
        raise ValueError(f"cannot read distribution from {raw!r}")
    return DistributionAssessment.from_mapping(scale, mass)


def _ids(raw: Any, where: str, diags: list[str]) -> tuple[str, ...]:
    if not isinstance(raw, list) or not raw:
        diags.append(f"{where}: expected a non-empty list")
        return ()
    return tuple(str(x) for x in raw)


def _read_scales(raw, diags) -> tuple[list[LinguisticScale], dict[str, int]]:
    scales, index = [], {}
    if not isinstance(raw, list) or not raw:
        diags.append("scales: expected a non-empty list")
        return scales, index
    for pos, item in enumerate(raw):
        where = f"scales[{pos}]"
        if not isinstance(item, dict) or "granularity" not in item:
            diags.append(f"{where}: expected a mapping with 'granularity'")
            continue
        sid = str(item.get("id", f"S{item['granularity']}"))
        try:
            labels = item.get("labels")
            scale = LinguisticScale(item["granularity"], tuple(labels) if labels else None)
        except (TypeError, ValueError) as exc:
            diags.append(f"{where} ({sid}): {exc}")
            continue
        if sid in index:
            diags.append(f"{where}: duplicate scale id {sid!r}")
            continue
        index[sid] = len(scales)
        scales.append(scale)
    return scales, index


def _read_dms(raw, scale_index, diags) -> list[DecisionMaker]:
    dms = []
    if not isinstance(raw, list) or not raw:
        diags.append("decision_makers: expected a non-empty list")
        return dms
    for pos, item in enumerate(raw):
        where = f"decision_makers[{pos}]"
        if not isinstance(item, dict) or "id" not in item or "scale" not in item:
            diags.append(f"{where}: expected a mapping with 'id' and 'scale'")
            continue
        dm_id, sid = str(item["id"]), str(item["scale"])
        if sid not in scale_index:
            diags.append(f"decision maker {dm_id!r}: unknown scale {sid!r}")
            continue
        weight = item.get("weight")
        try:
            weight = None if weight is None else parse_number(weight)
        except ValueError as exc:
            diags.append(f"decision maker {dm_id!r}: {exc}")
            continue
        count = item.get("count")
        if count is None:
            dms.append(DecisionMaker(dm_id, scale_index[sid], weight))
        elif isinstance(count, int) and count > 0:
            dms.extend(
                DecisionMaker(f"{dm_id}#{c + 1}", scale_index[sid], weight)
                for c in range(count)
            )
        else:
            diags.append(f"decision maker {dm_id!r}: count must be a positive integer")
    return dms


def _read_terms(raw, diags) -> dict[tuple[str, str, str], int]:
    out = {}
    if not isinstance(raw, list):
        diags.append("assessments.terms: expected a list of [dm, alternative, attribute, term]")
        return out
    for pos, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != 4:
            diags.append(f"assessments.terms[{pos}]: expected [dm, alternative, attribute, term]")
            continue
        dm, alt, attr, k = str(row[0]), str(row[1]), str(row[2]), row[3]
        key = (dm, alt, attr)
        if key in out:
            diags.append(f"assessment ({dm}, {alt}, {attr}): given more than once")
            continue
        out[key] = k
    return out


def _read_fused(raw, scales, scale_index, alts, attrs, diags):
    out = {}
    if not isinstance(raw, dict):
        diags.append("assessments.distributions: expected a mapping scale -> matrix")
        return out
    for sid, mat in raw.items():
        sid = str(sid)
        if sid not in scale_index:
            diags.append(f"assessments.distributions: unknown scale {sid!r}")
            continue
        h = scale_index[sid]
        scale = scales[h]
        if not isinstance(mat, dict):
            diags.append(f"distributions[{sid}]: expected alternative -> attribute -> cell")
            continue
        rows = []
        for alt in alts:
            row = []
            alt_raw = mat.get(alt)
            if not isinstance(alt_raw, dict):
                diags.append(f"distributions[{sid}][{alt}]: missing")
                row = None
            else:
                for attr in attrs:
                    where = f"distributions[{sid}][{alt}][{attr}]"
                    if attr not in alt_raw:
                        diags.append(f"{where}: missing")
                        row = None
                        break
                    try:
                        row.append(parse_cell(alt_raw[attr], scale))
                    except (ValueError, IndexError) as exc:
                        diags.append(f"{where}: {exc}")
                        row = None
                        break
            if row is None:
                rows = None
                break
            rows.append(tuple(row))
        if rows is not None:
            out[h] = tuple(rows)
    return out


def _read_weight_mode(raw, m, diags):
    if raw is None:
        return UnknownWeights()
    if not isinstance(raw, dict) or "mode" not in raw:
        diags.append("attribute_weights: expected a mapping with 'mode'")
        return UnknownWeights()
    mode = str(raw["mode"]).lower()
    if mode == "unknown":
        return UnknownWeights()
    if mode == "known":
        try:
            return KnownWeights(tuple(parse_number(v) for v in raw.get("values", [])))
        except ValueError as exc:
            diags.append(f"attribute_weights.values: {exc}")
            return UnknownWeights()
    if mode == "partial":
        cons = []
        for pos, item in enumerate(raw.get("constraints", []) or []):
            where = f"attribute_weights.constraints[{pos}]"
            try:
                if isinstance(item, dict):
                    coef, sense, bound = item["coefficients"], item["sense"], item["bound"]
                else:
                    *coef, sense, bound = item
                    if len(coef) == 1 and isinstance(coef[0], list):
                        coef = coef[0]
                cons.append(
                    LinearConstraint(
                        tuple(parse_number(c) for c in coef), parse_number(bound), str(sense)
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                diags.append(f"{where}: {exc} (senses: {', '.join(SENSES)})")
        return PartialWeights(tuple(cons))
    diags.append(f"attribute_weights: unknown mode {mode!r} (known | unknown | partial)")
    return UnknownWeights()


def problem_from_data(data: Any) -> tuple[Optional[DecisionProblem], list[str]]:
    """Build a problem from parsed file data; returns it with all diagnostics."""
    diags: list[str] = []
    if not isinstance(data, dict):
        return None, ["file: expected a mapping at top level"]
    scales, scale_index = _read_scales(data.get("scales"), diags)
    alts = _ids(data.get("alternatives"), "alternatives", diags)
    attrs = _ids(data.get("attributes"), "attributes", diags)
    dms = _read_dms(data.get("decision_makers"), scale_index, diags)
    raw = data.get("assessments")
    terms = fused = None
    if not isinstance(raw, dict) or ("terms" in raw) == ("distributions" in raw):
        diags.append("assessments: give exactly one of 'terms' or 'distributions'")
    elif "terms" in raw:
        terms = _read_terms(raw["terms"], diags)
    else:
        fused = _read_fused(raw["distributions"], scales, scale_index, alts, attrs, diags)
    mode = _read_weight_mode(data.get("attribute_weights"), len(attrs), diags)
    if diags:
        return None, diags
    problem = DecisionProblem(
        alternatives=alts,
        attributes=attrs,
        scales=tuple(scales),
        decision_makers=tuple(dms),
        assessments=terms,
        group_matrices=fused,
        weight_mode=mode,
    )
    diags.extend(validate_problem(problem))
    return (problem if not diags else None), diags


def read_problem_data(path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ProblemFileError([f"{path}: not valid YAML/JSON: {exc}"]) from exc


def load_problem(path) -> DecisionProblem:
    problem, diags = problem_from_data(read_problem_data(path))
    if diags:
        raise ProblemFileError(diags)
    return problem


# -- outcome serialisation ---------------------------------------------------


def _scale_dict(s: LinguisticScale) -> dict:
    return {"granularity": s.granularity, "labels": list(s.labels) if s.labels else None}


def _scale_from(d: dict) -> LinguisticScale:
    return LinguisticScale(d["granularity"], tuple(d["labels"]) if d["labels"] else None)


def _cell(m: DistributionAssessment) -> list:
    return [[k, p] for k, p in m.support().items()]


def _matrix(mat) -> list:
    return [[_cell(c) for c in row] for row in mat]


def outcome_to_dict(outcome: DecisionOutcome) -> dict:
    """JSON-ready mirror of an outcome; distributions are sparse [index, p] pairs."""
    return {
        "format": FORMAT_VERSION,
        "alternatives": list(outcome.alternatives),
        "attributes": list(outcome.attributes),
        "scales": [_scale_dict(s) for s in outcome.scales],
        "lcm_scale": _scale_dict(outcome.lcm_scale),
        "group_weights": list(outcome.group_weights),
        "group_matrices": [_matrix(m) for m in outcome.group_matrices],
        "unified": [_matrix(m) for m in outcome.unified],
        "collective_matrix": _matrix(outcome.collective_matrix),
        "deviation": list(outcome.deviation),
        "attribute_weights": list(outcome.attribute_weights),
        "weight_provenance": outcome.weight_provenance,
        "collective": [_cell(z) for z in outcome.collective],
        "expectations": [
            {"index": t.index, "translation": t.translation} for t in outcome.expectations
        ],
        "inaccuracies": list(outcome.inaccuracies),
        "ranking": [list(g) for g in outcome.ranking],
        "per_scale_views": [[_cell(v) for v in row] for row in outcome.per_scale_views],
    }


def outcome_from_dict(d: dict) -> DecisionOutcome:
    scales = tuple(_scale_from(s) for s in d["scales"])
    lcm = _scale_from(d["lcm_scale"])

    def cell(raw, scale):
        return DistributionAssessment.from_mapping(scale, {int(k): float(p) for k, p in raw})

    def matrix(raw, scale):
        return tuple(tuple(cell(c, scale) for c in row) for row in raw)

    return DecisionOutcome(
        alternatives=tuple(d["alternatives"]),
        attributes=tuple(d["attributes"]),
        scales=scales,
        lcm_scale=lcm,
        group_weights=tuple(d["group_weights"]),
        group_matrices=tuple(matrix(m, s) for m, s in zip(d["group_matrices"], scales)),
        unified=tuple(matrix(m, lcm) for m in d["unified"]),
        collective_matrix=matrix(d["collective_matrix"], lcm),
        deviation=tuple(d["deviation"]),
        attribute_weights=tuple(d["attribute_weights"]),
        weight_provenance=d["weight_provenance"],
        collective=tuple(cell(z, lcm) for z in d["collective"]),
        expectations=tuple(TwoTuple(lcm, e["index"], e["translation"]) for e in d["expectations"]),
        inaccuracies=tuple(d["inaccuracies"]),
        ranking=tuple(tuple(g) for g in d["ranking"]),
        per_scale_views=tuple(
            tuple(cell(v, s) for v in row) for row, s in zip(d["per_scale_views"], scales)
        ),
    )


def dump_outcome(outcome: DecisionOutcome) -> str:
    return json.dumps(outcome_to_dict(outcome), indent=2) + "\n"


def parse_outcome(text: str) -> DecisionOutcome:
    return outcome_from_dict(json.loads(text))
