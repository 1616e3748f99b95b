"""Attribute taxonomy and survey-table ingestion.

A survey table holds, for each (society, gender) cohort, the percentage of
respondents exhibiting each of 28 behavioral attributes. The on-disk format is
a UTF-8 CSV with one attribute per row::

    attribute,Sample 1,Sample 1,...     <- society of each value column
    gender,F,M,...
    N,5,7,...                           <- respondent counts
    Health Technology,22%,22%,...
    ...
    Sum of Transculturality (mean),5.6,7.2,...   <- optional, kept verbatim

Values may carry a trailing ``%``. An attribute name that occurs more than
once in the source table (``Inversion of Status``) is resolved by position to
the schema entries sharing that base name, e.g. ``Inversion of Status
(intervening)`` then ``Inversion of Status (resultant)``.
"""

from __future__ import annotations

import csv
import io
import math
import re
import types
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import _toml
from .errors import (
    ConfigError,
    DuplicateCohort,
    InvalidRespondentCount,
    MalformedRow,
    MissingAttribute,
    OutOfRange,
    UnknownCohort,
)

CATEGORIES = ("modernization", "intervening", "resultant")
GENDERS = ("F", "M")
AGGREGATE_LABEL = "Sum of Transculturality (mean)"
SCALE = (0.0, 100.0)

_SUFFIX = re.compile(r"\s*\([^()]*\)\s*$")


def base_name(name: str) -> str:
    """Strip a trailing parenthesised disambiguation suffix."""
    return _SUFFIX.sub("", name)


def _data_path(name: str):
    return resources.files("culturality") / "data" / name


@dataclass(frozen=True)
class AttributeDef:
    name: str
    category: str
    weight: float = 1.0
    scale: tuple[float, float] = SCALE

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ConfigError(f"{self.name!r}: unknown category {self.category!r}")
        if not (self.weight >= 0 and math.isfinite(self.weight)):
            raise ConfigError(f"{self.name!r}: weight must be finite and >= 0, got {self.weight}")


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute definitions; the order fixes every vector layout."""

    attributes: tuple[AttributeDef, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        seen = set()
        for a in self.attributes:
            if a.name in seen:
                raise ConfigError(f"attribute {a.name!r} defined twice")
            seen.add(a.name)
        if not self.attributes:
            raise ConfigError("schema has no attributes")

    def __len__(self):
        return len(self.attributes)

    def __iter__(self):
        return iter(self.attributes)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.attributes], dtype=float)

    @property
    def categories(self) -> dict[str, str]:
        return {a.name: a.category for a in self.attributes}

    def index(self, name: str) -> int:
        return self.names.index(name)

    def indices(self, *categories: str) -> np.ndarray:
        """Positions of attributes in any of ``categories``, in schema order."""
        for c in categories:
            if c not in CATEGORIES:
                raise ConfigError(f"unknown category {c!r}")
        return np.array(
            [i for i, a in enumerate(self.attributes) if a.category in categories], dtype=int
        )

    def with_weights(self, weights: Sequence[float]) -> "AttributeSchema":
        if len(weights) != len(self):
            raise ConfigError(f"expected {len(self)} weights, got {len(weights)}")
        return AttributeSchema(
            tuple(AttributeDef(a.name, a.category, float(w), a.scale) for a, w in zip(self, weights))
        )

    def resolve(self, raw: str, occurrence: int = 0) -> str | None:
        """Map a name as written in a survey file to a schema name.

        Exact matches win. Otherwise the ``occurrence``-th schema attribute
        whose base name equals ``raw`` is returned.
        """
        raw = raw.strip()
        if raw in self.names:
            return raw
        matches = [n for n in self.names if base_name(n) == raw]
        if occurrence < len(matches):
            return matches[occurrence]
        return None


def load_schema(path=None) -> AttributeSchema:
    """Read a schema config; ``None`` loads the bundled default."""
    raw = _toml.read(path, "schema.toml")
    entries = raw.get("attributes")
    if not isinstance(entries, dict) or not entries:
        raise ConfigError("schema config needs an [attributes] table")
    defs = []
    for name, spec in entries.items():
        if not isinstance(spec, dict) or "category" not in spec:
            raise ConfigError(f"attribute {name!r} needs a category")
        defs.append(AttributeDef(name, str(spec["category"]).lower(), float(spec.get("weight", 1.0))))
    return AttributeSchema(tuple(defs))


def default_schema() -> AttributeSchema:
    return load_schema(None)


@dataclass(frozen=True)
class CohortObservation:
    society: str
    gender: str
    n: int
    values: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "values", types.MappingProxyType(dict(self.values)))

    @property
    def key(self) -> tuple[str, str]:
        return (self.society, self.gender)

    def __str__(self):
        return f"({self.society}, {self.gender})"


@dataclass(frozen=True)
class SurveyTable:
    """Cohort observations plus the published aggregate row.

    ``stored_aggregate`` is carried through untouched; nothing in the package
    recomputes it.
    """

    schema: AttributeSchema
    cohorts: tuple[CohortObservation, ...]
    stored_aggregate: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "cohorts", tuple(self.cohorts))
        object.__setattr__(
            self, "stored_aggregate", types.MappingProxyType(dict(self.stored_aggregate))
        )

    @property
    def keys(self) -> list[tuple[str, str]]:
        return [c.key for c in self.cohorts]

    @property
    def societies(self) -> list[str]:
        return list(dict.fromkeys(c.society for c in self.cohorts))

    def cohort(self, society: str, gender: str) -> CohortObservation:
        for c in self.cohorts:
            if c.society == society and c.gender == gender:
                return c
        raise UnknownCohort(society, gender)


@dataclass(frozen=True)
class Diagnostic:
    cohort: tuple[str, str] | None
    attribute: str | None
    rule: str
    message: str
    value: object = None

    def to_exception(self) -> Exception:
        society, gender = self.cohort if self.cohort else (None, None)
        tag = f"({society}, {gender})"
        if self.rule == "missing":
            return MissingAttribute(self.attribute, tag)
        if self.rule == "range":
            return OutOfRange(self.attribute, tag, self.value)
        if self.rule == "duplicate":
            return DuplicateCohort(society, gender)
        if self.rule == "respondents":
            return InvalidRespondentCount(tag, self.value)
        return MalformedRow(0, f"{tag}: {self.message}")


def validate(table: SurveyTable) -> list[Diagnostic]:
    """Check every table invariant; an empty list means the table is valid."""
    out = []
    lo, hi = SCALE
    seen = set()
    for c in table.cohorts:
        key = c.key
        if key in seen:
            out.append(Diagnostic(key, None, "duplicate", f"cohort {c} appears more than once"))
        seen.add(key)
        if c.gender not in GENDERS:
            out.append(Diagnostic(key, None, "gender", f"gender {c.gender!r} not in {GENDERS}", c.gender))
        if not isinstance(c.n, (int, np.integer)) or c.n < 1:
            out.append(Diagnostic(key, None, "respondents", f"respondent count {c.n} < 1", c.n))
        for name in table.schema.names:
            if name not in c.values:
                out.append(Diagnostic(key, name, "missing", f"{name!r} has no value"))
                continue
            v = c.values[name]
            if not (lo <= v <= hi):
                out.append(Diagnostic(key, name, "range", f"{name!r} = {v} outside [{lo:g}, {hi:g}]", v))
        for name in c.values:
            if name not in table.schema.names:
                out.append(Diagnostic(key, name, "unknown", f"{name!r} is not in the schema"))
    return out


def _number(cell: str, line: int) -> float:
    s = cell.strip()
    if s.endswith("%"):
        s = s[:-1].strip()
    try:
        return float(s)
    except ValueError:
        raise MalformedRow(line, f"not a number: {cell!r}") from None


def parse_survey(text: str, schema: AttributeSchema) -> SurveyTable:
    """Parse survey CSV text. Structural problems raise; content is not validated."""
    societies = genders = counts = None
    values: dict[str, list[float]] = {}
    aggregate = None
    occurrences: dict[str, int] = {}
    width = None

    reader = csv.reader(io.StringIO(text))
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        label, cells = row[0].strip(), row[1:]
        if width is None:
            width = len(cells)
            if width == 0:
                raise MalformedRow(line, "no value columns")
        elif len(cells) != width:
            raise MalformedRow(line, f"expected {width} value columns, got {len(cells)}")
        key = label.lower()
        if key in ("attribute", "society"):
            if societies is not None:
                raise MalformedRow(line, "repeated society header")
            societies = [c.strip() for c in cells]
            if any(not s for s in societies):
                raise MalformedRow(line, "empty society id")
            continue
        if key == "gender":
            if genders is not None:
                raise MalformedRow(line, "repeated gender header")
            genders = [c.strip().upper() for c in cells]
            if any(g not in GENDERS for g in genders):
                raise MalformedRow(line, f"gender must be one of {GENDERS}")
            continue
        if key == "n":
            if counts is not None:
                raise MalformedRow(line, "repeated N header")
            counts = []
            for c in cells:
                x = _number(c, line)
                if not x.is_integer():
                    raise MalformedRow(line, f"respondent count {c!r} is not an integer")
                counts.append(int(x))
            continue
        if societies is None or genders is None or counts is None:
            raise MalformedRow(line, "attribute row before the society/gender/N headers")
        if label == AGGREGATE_LABEL:
            if aggregate is not None:
                raise MalformedRow(line, "repeated aggregate row")
            aggregate = [_number(c, line) for c in cells]
            continue
        occ = occurrences.get(label, 0)
        name = schema.resolve(label, occ)
        if name is None:
            raise MalformedRow(line, f"unknown attribute {label!r}")
        if name in values:
            raise MalformedRow(line, f"attribute {name!r} given twice")
        occurrences[label] = occ + 1
        values[name] = [_number(c, line) for c in cells]

    if societies is None or genders is None or counts is None:
        raise MalformedRow(reader.line_num, "missing society/gender/N header rows")

    cohorts = []
    for j in range(width):
        cohorts.append(
            CohortObservation(societies[j], genders[j], counts[j], {n: v[j] for n, v in values.items()})
        )
    stored = {}
    if aggregate is not None:
        stored = {(societies[j], genders[j]): aggregate[j] for j in range(width)}
    return SurveyTable(schema, tuple(cohorts), stored)


def load_survey(path=None, schema: AttributeSchema | None = None) -> SurveyTable:
    """Load and validate a survey CSV; ``None`` loads the bundled table.

    Raises the exception matching the first failed check (MissingAttribute,
    OutOfRange, DuplicateCohort, InvalidRespondentCount or MalformedRow).
    """
    if schema is None:
        schema = default_schema()
    if path is None:
        text = _data_path("table1.csv").read_text(encoding="utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ConfigError(f"{path}: no such file") from None
        except UnicodeDecodeError as exc:
            raise MalformedRow(0, f"not UTF-8: {exc}") from None
    table = parse_survey(text, schema)
    problems = validate(table)
    if problems:
        raise problems[0].to_exception()
    return table


def _fmt(v: float) -> str:
    if math.isfinite(v) and float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def dump_survey(table: SurveyTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["attribute"] + [c.society for c in table.cohorts])
    w.writerow(["gender"] + [c.gender for c in table.cohorts])
    w.writerow(["N"] + [str(c.n) for c in table.cohorts])
    for name in table.schema.names:
        w.writerow([name] + [_fmt(c.values[name]) + "%" for c in table.cohorts])
    if table.stored_aggregate:
        w.writerow([AGGREGATE_LABEL] + [_fmt(table.stored_aggregate[c.key]) for c in table.cohorts])
    return buf.getvalue()


def save_survey(table: SurveyTable, path) -> None:
    Path(path).write_text(dump_survey(table), encoding="utf-8")


def cohort_vector(table: SurveyTable, society: str, gender: str) -> np.ndarray:
    """Schema-ordered prevalence vector in [0, 1] for one cohort."""
    c = table.cohort(society, gender)
    v = np.array([c.values[n] / 100.0 for n in table.schema.names], dtype=float)
    v.setflags(write=False)
    return v
