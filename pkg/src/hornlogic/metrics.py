"""Halstead and McCabe measures and a ratio-to-mean quality score.

Raw operator/operand counts and control-flow-graph sizes are inputs; this
module only derives values from them.  The quality score compares several
implementation approaches: each metric value is divided by the mean over
all approaches (lower is better), factors are averaged per artifact, and
artifact scores are averaged per approach.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Sequence

STROUD = 18


class MetricError(ValueError):
    """Counts or values outside a metric's domain."""


class MetricDirection(str, Enum):
    LOWER_IS_BETTER = "lower-is-better"
    HIGHER_IS_BETTER = "higher-is-better"


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def fmt2(x: float) -> str:
    """Two decimals, halves rounded up (tolerates float noise like 1.1249999...)."""
    return f"{math.floor(x * 100 + 0.5 + 1e-9) / 100:.2f}"


@dataclass(frozen=True)
class HalsteadCounts:
    n1: int  # distinct operators
    n2: int  # distinct operands
    N1: int  # total operators
    N2: int  # total operands

    def __post_init__(self):
        for name in ("n1", "n2", "N1", "N2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise MetricError(f"{name} must be a non-negative integer, got {value!r}")
        if self.n1 > self.N1:
            raise MetricError("n1 (distinct operators) exceeds N1 (total operators)")
        if self.n2 > self.N2:
            raise MetricError("n2 (distinct operands) exceeds N2 (total operands)")


@dataclass(frozen=True)
class HalsteadReport:
    length: float      # N
    vocabulary: float  # n
    volume: float      # U, program scope
    difficulty: float  # S
    effort: float      # A, workload
    time: float        # D, seconds

    def rounded(self) -> dict:
        return {"N": round_half_up(self.length), "n": round_half_up(self.vocabulary),
                "U": round_half_up(self.volume), "S": round_half_up(self.difficulty),
                "A": round_half_up(self.effort), "D": round_half_up(self.time)}

    def by_symbol(self) -> dict:
        return {"N": self.length, "n": self.vocabulary, "U": self.volume,
                "S": self.difficulty, "A": self.effort, "D": self.time}


def halstead(c: HalsteadCounts) -> HalsteadReport:
    length = c.N1 + c.N2
    vocabulary = c.n1 + c.n2
    if c.n2 == 0:
        raise MetricError("difficulty is undefined without operands (n2 = 0)")
    if vocabulary == 0:
        raise MetricError("volume is undefined for an empty vocabulary")
    volume = length * math.log2(vocabulary)
    difficulty = (c.n1 / 2) * (c.N2 / c.n2)
    effort = difficulty * volume
    return HalsteadReport(length, vocabulary, volume, difficulty, effort, effort / STROUD)


@dataclass(frozen=True)
class CfgCounts:
    edges: int
    nodes: int
    components: int = 1

    def __post_init__(self):
        for name in ("edges", "nodes", "components"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise MetricError(f"{name} must be a non-negative integer, got {value!r}")
        if self.components < 1:
            raise MetricError("a control flow graph has at least one component")


class CyclomaticWarning(UserWarning):
    pass


def cyclomatic(c: CfgCounts) -> int:
    v = c.edges - c.nodes + 2 * c.components
    if v < 1:
        warnings.warn(f"cyclomatic number {v} < 1: counts do not describe a CFG",
                      CyclomaticWarning, stacklevel=2)
    return v


def quality_factors(values: Sequence[float], direction=MetricDirection.LOWER_IS_BETTER) -> list[float]:
    """One ratio-to-mean factor per value; lower factors are better."""
    direction = MetricDirection(direction)
    values = [float(v) for v in values]
    if not values:
        raise MetricError("quality factors need at least one value")
    if any(not v > 0 or math.isinf(v) for v in values):
        raise MetricError("quality factors need finite positive values")
    mean = sum(values) / len(values)
    ratios = [v / mean for v in values]
    if direction is MetricDirection.HIGHER_IS_BETTER:
        return [1 / r for r in ratios]
    return ratios


def _mean(xs: Sequence[float], what: str) -> float:
    xs = list(xs)
    if not xs:
        raise MetricError(f"{what} needs at least one value")
    return sum(xs) / len(xs)


def artifact_quality(factors: Sequence[float]) -> float:
    return _mean(factors, "artifact quality")


def approach_quality(artifact_scores: Sequence[float]) -> float:
    return _mean(artifact_scores, "approach quality")


@dataclass
class QualitySheet:
    """Metric values per (artifact, approach, metric) plus metric directions."""

    approaches: list
    artifacts: list
    directions: dict   # metric -> MetricDirection
    values: dict       # (artifact, approach, metric) -> float

    @property
    def metrics(self) -> list:
        return list(self.directions)

    def missing(self) -> list:
        return [(art, app, m) for art in self.artifacts for app in self.approaches
                for m in self.directions if (art, app, m) not in self.values]

    def validate(self):
        if not self.approaches or not self.artifacts or not self.directions:
            raise MetricError("quality sheet needs approaches, artifacts and metrics")
        missing = self.missing()
        if missing:
            cells = ", ".join(f"{a}/{p}/{m}" for a, p, m in missing)
            raise MetricError(f"quality sheet is incomplete, missing: {cells}")
        bad = [k for k, v in self.values.items() if not float(v) > 0]
        if bad:
            cells = ", ".join(f"{a}/{p}/{m}" for a, p, m in bad)
            raise MetricError(f"quality values must be positive: {cells}")


@dataclass
class QualityReport:
    sheet: QualitySheet
    factors: dict          # (artifact, metric) -> list of factors, approach order
    artifact_scores: dict  # artifact -> {approach: Q_A}
    approach_scores: dict  # approach -> Q_P

    def to_dict(self) -> dict:
        s = self.sheet
        return {
            "approaches": list(s.approaches),
            "artifacts": {
                art: {
                    "values": {m: {app: s.values[(art, app, m)] for app in s.approaches}
                               for m in s.metrics},
                    "factors": {m: dict(zip(s.approaches, self.factors[(art, m)]))
                                for m in s.metrics},
                    "artifact_quality": dict(self.artifact_scores[art]),
                }
                for art in s.artifacts
            },
            "approach_quality": dict(self.approach_scores),
            "directions": {m: MetricDirection(d).value for m, d in s.directions.items()},
        }

    def render(self) -> str:
        s = self.sheet
        label_w = max([len(f"Q_M({m})") for m in s.metrics] + [len("Quality metric")])
        cols = [(art, app) for art in s.artifacts for app in s.approaches]
        col_w = max([len(app) for app in s.approaches] + [8])

        def row(label, cells):
            return (label.ljust(label_w) + "  "
                    + " ".join(c.rjust(col_w) for c in cells)).rstrip()

        lines = []
        header = "Quality metric".ljust(label_w) + "  "
        for art in s.artifacts:
            header += art[:len(s.approaches) * (col_w + 1) - 1].ljust(
                len(s.approaches) * (col_w + 1))
        lines.append(header.rstrip())
        lines.append(row("", [app for _, app in cols]))
        for m in s.metrics:
            lines.append(row(m, [fmt2(s.values[(art, app, m)]) for art, app in cols]))
        for m in s.metrics:
            cells = []
            for art in s.artifacts:
                cells += [fmt2(f) for f in self.factors[(art, m)]]
            lines.append(row(f"Q_M({m})", cells))
        lines.append(row("Q_A", [fmt2(self.artifact_scores[art][app]) for art, app in cols]))
        lines.append("Q_P: " + " ".join(f"{app}={fmt2(q)}" for app, q in self.approach_scores.items()))
        return "\n".join(lines)


def quality_report(sheet: QualitySheet) -> QualityReport:
    sheet.validate()
    factors = {}
    for art in sheet.artifacts:
        for m, direction in sheet.directions.items():
            vals = [sheet.values[(art, app, m)] for app in sheet.approaches]
            factors[(art, m)] = quality_factors(vals, direction)
    artifact_scores = {
        art: {app: artifact_quality([factors[(art, m)][i] for m in sheet.metrics])
              for i, app in enumerate(sheet.approaches)}
        for art in sheet.artifacts
    }
    approach_scores = {
        app: approach_quality([artifact_scores[art][app] for art in sheet.artifacts])
        for app in sheet.approaches
    }
    return QualityReport(sheet, factors, artifact_scores, approach_scores)


CFG_METRIC = "v(G)"


def sheet_from_json(doc: dict) -> QualitySheet:
    """Build a sheet from a measurement document.

    ``doc["metrics"]`` maps metric name to direction.  ``doc["artifacts"]``
    maps artifact -> approach -> cell, where a cell holds metric values
    directly and/or raw ``halstead`` (n1, n2, N1, N2) and ``cfg``
    (edges, nodes[, components]) counts.  Raw counts expand to the Halstead
    symbols N, n, U, S, A, D and to ``v(G)``.
    """
    if not isinstance(doc, dict):
        raise MetricError("measurement document must be a JSON object")
    try:
        metrics = doc["metrics"]
        artifacts = doc["artifacts"]
    except KeyError as exc:
        raise MetricError(f"measurement document lacks {exc.args[0]!r}") from None
    if not isinstance(metrics, dict) or not isinstance(artifacts, dict):
        raise MetricError("'metrics' and 'artifacts' must be objects")
    try:
        directions = {name: MetricDirection(d) for name, d in metrics.items()}
    except ValueError as exc:
        raise MetricError(str(exc)) from None

    approaches: list = []
    values = {}
    for art, per_approach in artifacts.items():
        if not isinstance(per_approach, dict):
            raise MetricError(f"artifact {art!r} must map approaches to measurements")
        for app, cell in per_approach.items():
            if app not in approaches:
                approaches.append(app)
            if not isinstance(cell, dict):
                raise MetricError(f"{art}/{app}: measurements must be an object")
            expanded = {}
            try:
                if "halstead" in cell:
                    expanded.update(halstead(HalsteadCounts(**cell["halstead"])).by_symbol())
                if "cfg" in cell:
                    expanded[CFG_METRIC] = cyclomatic(CfgCounts(**cell["cfg"]))
            except TypeError as exc:
                raise MetricError(f"{art}/{app}: {exc}") from None
            for k, v in cell.items():
                if k in ("halstead", "cfg"):
                    continue
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise MetricError(f"{art}/{app}/{k}: expected a number")
                expanded[k] = v
            for m in directions:
                if m in expanded:
                    values[(art, app, m)] = float(expanded[m])
    return QualitySheet(approaches, list(artifacts), directions, values)


def halstead_table(report: HalsteadReport) -> str:
    r = report.rounded()
    rows = [("Program length", "N", r["N"], ""), ("Vocabulary size", "n", r["n"], ""),
            ("Program scope", "U", r["U"], ""), ("Difficulty", "S", r["S"], ""),
            ("Workload", "A", r["A"], ""), ("Duration in seconds", "D", r["D"], " s")]
    return "\n".join(f"{label:<20} {sym} = {value}{unit}" for label, sym, value, unit in rows)


def halstead_dict(counts: HalsteadCounts, report: HalsteadReport) -> dict:
    return {"counts": asdict(counts), "report": report.by_symbol(), "rounded": report.rounded()}
