"""Random overlap probability (ROP) tables for named population groups.

Answers "what are the odds that two people in this city share the same
value" for spaces so large that intuition fails, and renders the answers
the way a report table would: saturated probabilities collapse to
"~ 100%", everything else gets exactly two decimals.

Space sizes come either from an explicit number or from one of two
historical decompositions of a full fingerprint:

* ``GaltonModel``: Galton's 1892 argument scored 24 independent six-ridge
  squares plus allowances of 8 and 4 binary guesses for the ridge
  entry/exit counts and the adjacent ridge courses, for 2**36 patterns.
* ``RegionModel``: a coarser modern reading treats the print as 47
  independent two-way regions, for 2**47 patterns.

The two disagree by a factor of 2**11; both are provided and neither is
declared canonical.
"""

import csv
import io
import math
import os
import re
from dataclasses import dataclass
from importlib import resources

from .collision import (
    DomainError,
    EvalResult,
    IterationBudgetError,
    SpaceSize,
    as_space_size,
    collision_probability,
    MAX_SPACE,
)

__all__ = [
    "IngestError",
    "GaltonModel",
    "RegionModel",
    "PopulationRecord",
    "RopEntry",
    "SATURATION_THRESHOLD",
    "space_size",
    "rop",
    "rop_table",
    "format_percent",
    "parse_populations",
    "load_populations",
    "dump_populations",
    "load_bundled_cities",
    "BUNDLED_DATASETS",
]

# Probabilities above this render as "~ 100%" instead of a number that
# would misleadingly print as 99.96% or 100.00%.
SATURATION_THRESHOLD = 0.9995

BUNDLED_DATASETS = ("us_cities",)

_DELIMITERS = (",", "\t", ";")

# group-separated non-negative integer: digits possibly broken by commas,
# underscores, or stray spaces ("8,419,600", "565, 239", "1_000")
_GROUPED_INT = re.compile(r"\+?\d[\d,_ ]*")


class IngestError(ValueError):
    """A population table could not be parsed; message lists row numbers."""


def _positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class GaltonModel:
    """Galton's three-part bit budget for a full fingerprint."""

    unit_squares: int = 24
    ridge_entry_exit_bits: int = 8
    adjacent_course_bits: int = 4

    def __post_init__(self):
        _positive_int(self.unit_squares, "unit_squares")
        _positive_int(self.ridge_entry_exit_bits, "ridge_entry_exit_bits")
        _positive_int(self.adjacent_course_bits, "adjacent_course_bits")


@dataclass(frozen=True)
class RegionModel:
    """Independent regions with a fixed number of readings each."""

    independent_regions: int = 47
    choices_per_region: int = 2

    def __post_init__(self):
        _positive_int(self.independent_regions, "independent_regions")
        _positive_int(self.choices_per_region, "choices_per_region")


def space_size(model) -> SpaceSize:
    """Distinct-pattern count implied by a decomposition model.

    The power is computed in exact integer arithmetic first; models whose
    pattern count exceeds the supported 1e30 space maximum are rejected.
    """
    if isinstance(model, GaltonModel):
        exponent = (
            model.unit_squares + model.ridge_entry_exit_bits + model.adjacent_course_bits
        )
        exact = 2**exponent
    elif isinstance(model, RegionModel):
        exact = model.choices_per_region**model.independent_regions
    else:
        raise DomainError(
            f"model must be GaltonModel or RegionModel, got {type(model).__name__}"
        )
    if exact > int(MAX_SPACE):
        raise DomainError(
            f"model implies {exact} patterns, beyond the supported maximum 1e30"
        )
    return as_space_size(exact)


@dataclass(frozen=True)
class PopulationRecord:
    """One named group and its head count."""

    name: str
    population: int

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise DomainError("record name must be a non-empty string")
        if isinstance(self.population, bool) or not isinstance(self.population, int):
            raise DomainError(f"population must be an integer, got {self.population!r}")
        if self.population < 0:
            raise DomainError(f"population must be >= 0, got {self.population}")


@dataclass(frozen=True)
class RopEntry:
    """A table row: the record, its evaluated overlap, and the display string."""

    record: PopulationRecord
    result: EvalResult
    display: str


def rop(population, space) -> EvalResult:
    """Random overlap probability for a group of this size in this space."""
    return collision_probability(space, population)


def format_percent(probability: float) -> str:
    """Render a probability as a table percentage.

    Values above the saturation threshold become "~ 100%".  Everything
    else gets exactly two decimals; Python's float formatting rounds the
    true binary value half to even, identically on every platform.
    """
    if probability > SATURATION_THRESHOLD:
        return "≈ 100%"
    return f"{100.0 * probability:.2f}%"


def rop_table(records, space) -> "list[RopEntry]":
    """Evaluate the overlap probability for every record, preserving order."""
    records = list(records)
    if not records:
        raise DomainError("need at least one population record")
    space = as_space_size(space)
    out = []
    for rec in records:
        if not isinstance(rec, PopulationRecord):
            raise DomainError(f"expected PopulationRecord, got {type(rec).__name__}")
        try:
            result = rop(rec.population, space)
        except (DomainError, IterationBudgetError) as err:
            raise type(err)(f"record '{rec.name}': {err}") from err
        out.append(RopEntry(rec, result, format_percent(result.probability)))
    return out


# --- tabular ingestion ------------------------------------------------------

def _parse_grouped_int(text: str) -> int:
    cleaned = text.strip().strip('"').strip()
    if not cleaned or not _GROUPED_INT.fullmatch(cleaned):
        raise ValueError(f"not a whole number: {text!r}")
    digits = re.sub(r"[,_ +]", "", cleaned)
    return int(digits)


def _detect_delimiter(line: str) -> str:
    counts = [(line.count(d), -i) for i, d in enumerate(_DELIMITERS)]
    best = max(range(len(_DELIMITERS)), key=lambda i: counts[i])
    if line.count(_DELIMITERS[best]) == 0:
        return ","
    return _DELIMITERS[best]


def parse_populations(text: str, *, delimiter=None) -> "list[PopulationRecord]":
    """Parse a delimiter-separated population table from a string.

    The first non-comment line must be a header naming (at least) the
    columns ``name`` and ``population``, case-insensitively.  The
    delimiter is auto-detected among comma, tab, and semicolon unless
    given.  Lines starting with '#' and blank lines are skipped.  Repeated
    thousands separators inside quoted numbers are tolerated.  All row
    errors are reported together, with 1-based file line numbers.
    """
    numbered = [
        (i + 1, line)
        for i, line in enumerate(text.splitlines())
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise IngestError("empty table: no header row found")

    header_no, header_line = numbered[0]
    if delimiter is None:
        delimiter = _detect_delimiter(header_line)
    elif delimiter not in _DELIMITERS:
        raise IngestError(f"unsupported delimiter {delimiter!r}; use one of , ; or tab")

    def split(line):
        return next(csv.reader(io.StringIO(line), delimiter=delimiter))

    header = [cell.strip().lower() for cell in split(header_line)]
    try:
        name_col = header.index("name")
        pop_col = header.index("population")
    except ValueError:
        raise IngestError(
            f"line {header_no}: header must name both a 'name' and a 'population' "
            f"column, got {header!r}"
        ) from None

    records = []
    errors = []
    seen = {}
    for line_no, line in numbered[1:]:
        cells = split(line)
        if len(cells) <= max(name_col, pop_col):
            errors.append(f"line {line_no}: expected {len(header)} columns, got {len(cells)}")
            continue
        name = cells[name_col].strip()
        if not name:
            errors.append(f"line {line_no}: empty name")
            continue
        try:
            population = _parse_grouped_int(cells[pop_col])
        except ValueError as err:
            errors.append(f"line {line_no}: {err}")
            continue
        if name in seen:
            errors.append(f"line {line_no}: duplicate name {name!r} (first seen on line {seen[name]})")
            continue
        seen[name] = line_no
        records.append(PopulationRecord(name, population))

    if errors:
        raise IngestError("; ".join(errors))
    if not records:
        raise IngestError("table has a header but no data rows")
    return records


def load_populations(source, *, delimiter=None) -> "list[PopulationRecord]":
    """Read a population table from a path or an open text stream."""
    if hasattr(source, "read"):
        return parse_populations(source.read(), delimiter=delimiter)
    with open(os.fspath(source), "r", encoding="utf-8") as fh:
        return parse_populations(fh.read(), delimiter=delimiter)


def dump_populations(records) -> str:
    """Serialize records back to normalized CSV (plain digits, comma-separated)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "population"])
    for rec in records:
        writer.writerow([rec.name, str(rec.population)])
    return buf.getvalue()


def load_bundled_cities() -> "list[PopulationRecord]":
    """The packaged us_cities demo table (22 large US cities)."""
    text = resources.files("ropcalc.data").joinpath("us_cities.csv").read_text("utf-8")
    return parse_populations(text)
