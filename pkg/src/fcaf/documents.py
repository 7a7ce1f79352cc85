"""JSON documents for profiles, classifications and reports.

Exact values are written as ``"num/den"`` strings.  On input, ``"num/den"``
strings and integers are taken exactly; decimal strings and JSON floats go
through the ingestion policy: snap to the nearest rational with denominator
at most 10**9, then rescale any row whose sum is within 1e-9 of the scale so
it sums exactly.  Larger deviations are left alone and fail validation.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FcafError
from .model import MAX_DENOMINATOR, STANDARD, Profile, Setting, validate_classification

SCHEMA_VERSION = "1"
INGEST_TOL = Fraction(1, 10**9)


class ParseError(FcafError, ValueError):
    """Malformed document; ``location`` names the voter/row/column when known."""

    def __init__(self, message, location=None):
        self.location = location
        where = "" if location is None else f" at {location}"
        super().__init__(f"{message}{where}")


def format_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _parse_value(raw, location) -> tuple[Fraction, bool]:
    """Returns (value, exact)."""
    if isinstance(raw, bool):
        raise ParseError(f"boolean {raw!r} is not a degree", location)
    if isinstance(raw, int):
        return Fraction(raw), True
    if isinstance(raw, float):
        return Fraction(raw).limit_denominator(MAX_DENOMINATOR), False
    if isinstance(raw, str):
        text = raw.strip()
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read {raw!r} as a number", location) from None
        if any(ch in text.lower() for ch in ".e"):
            return value.limit_denominator(MAX_DENOMINATOR), False
        return value, True
    raise ParseError(f"unexpected value {raw!r}", location)


def setting_to_dict(s: Setting) -> dict:
    return {"n": s.n, "m": s.m, "p": s.p, "variant": s.variant, "scale": str(s.scale)}


def setting_from_dict(d: dict) -> Setting:
    try:
        return Setting(int(d["n"]), int(d["m"]), int(d["p"]),
                       Fraction(str(d.get("scale", "1"))), d.get("variant", STANDARD))
    except KeyError as e:
        raise ParseError(f"setting is missing {e.args[0]!r}") from None


def matrix_to_list(c) -> list:
    return [[format_value(v) for v in row] for row in np.asarray(c, dtype=object)]


def profile_to_dict(profile: Profile, labels: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "setting": setting_to_dict(profile.setting),
        "voters": [matrix_to_list(c) for c in profile.degrees],
    }
    if labels:
        doc["labels"] = labels
    return doc


def _read_matrix(raw, shape, scale, voter):
    m, p = shape
    if not isinstance(raw, list) or len(raw) != m:
        raise ParseError(f"expected {m} rows", f"voter {voter}")
    out = np.empty((m, p), dtype=object)
    for j, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != p:
            raise ParseError(f"expected {p} entries", f"voter {voter}, row {j}")
        exact = True
        for t, v in enumerate(row):
            out[j, t], ok = _parse_value(v, f"voter {voter}, row {j}, column {t}")
            exact &= ok
        total = sum(out[j])
        if not exact and total != scale and total != 0 and abs(total - scale) <= INGEST_TOL * max(1, abs(scale)):
            out[j] = out[j] * scale / total
    return out


def profile_from_dict(doc: dict) -> tuple[Profile, dict]:
    """Parse a profile document; returns the profile and its (possibly empty) labels."""
    if str(doc.get("schema_version", SCHEMA_VERSION)) != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.get('schema_version')!r}")
    if "setting" not in doc or "voters" not in doc:
        raise ParseError("document needs 'setting' and 'voters'")
    setting = setting_from_dict(doc["setting"])
    voters = doc["voters"]
    if len(voters) != setting.n:
        raise ParseError(f"setting says n={setting.n} but {len(voters)} voters given")
    deg = np.array([_read_matrix(v, setting.shape, setting.scale, i) for i, v in enumerate(voters)],
                   dtype=object)
    return Profile(deg, setting), doc.get("labels", {})


def load_profile(path) -> tuple[Profile, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    return profile_from_dict(doc)


def dump_json(doc, path=None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def classification_to_dict(c, setting: Setting, rule: str, labels: dict | None = None) -> dict:
    c = np.asarray(c, dtype=object)
    v = validate_classification(c, setting, 0 if all(isinstance(x, (int, Fraction)) for x in c.flat) else 1e-12)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "classification",
        "tool_version": __version__,
        "setting": setting_to_dict(setting),
        "rule": rule,
        "degrees": matrix_to_list(c),
        "valid": v is None,
    }
    if labels:
        doc["labels"] = labels
    return doc


def _plain(v):
    if isinstance(v, (Fraction, int, float, np.integer, np.floating)):
        return format_value(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_plain(x) for x in v]
    return v if v is None or isinstance(v, (str, bool)) else str(v)


def witness_to_dict(w) -> dict:
    return {
        "profiles": [profile_to_dict(c) for c in w.profiles],
        "objects": list(w.objects),
        "category": w.category,
        "values": _plain(list(w.values)),
        "permutation": None if w.permutation is None else list(w.permutation),
        "voter": w.voter,
        "note": w.note,
    }


def report_to_dict(report) -> dict:
    doc = {
        "tool_version": __version__,
        "axiom": report.axiom,
        "verdict": report.verdict,
        "trials": report.trials,
        "seed": report.seed,
        "rule": report.descriptor,
        "setting": None if report.setting is None else setting_to_dict(report.setting),
        "witness": None if report.witness is None else witness_to_dict(report.witness),
        "notes": list(report.notes),
    }
    if report.axiom == "non-dictatorship":
        doc["unrefuted_candidates"] = list(report.candidates)
        doc["refutations"] = {str(i): witness_to_dict(w) for i, w in report.refuted.items()}
    return doc
