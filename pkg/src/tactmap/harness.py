"""Study instruments: learning time from logs, spatial-knowledge scoring.

Questions come in three kinds (landmark, route, survey) mirroring the
three levels of spatial knowledge a map reader can acquire. Scoring is
binary per question with whitespace/case normalization; descriptive
statistics only, no hypothesis testing. The bundled 18-question bank is
repo-authored over the built-in fixture map, not a published instrument.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .session import SessionLog

DEFAULT_BANK_RESOURCE = "question_bank.json"


class IncompleteLog(Exception):
    pass


class UnknownQuestion(KeyError):
    pass


class EmptyInput(ValueError):
    pass


class QuestionKind(Enum):
    LANDMARK = "landmark"
    ROUTE = "route"
    SURVEY = "survey"


@dataclass(frozen=True)
class Question:
    id: str
    kind: QuestionKind
    prompt: str
    answer_key: str | frozenset[str]
    points: int = 1

    def __post_init__(self) -> None:
        if self.points < 1:
            raise ValueError(f"question {self.id!r}: points must be >= 1")

    def accepts(self, given: str) -> bool:
        if isinstance(self.answer_key, frozenset):
            parts = frozenset(_normalize(part) for part in given.split(",") if part.strip())
            return parts == frozenset(_normalize(k) for k in self.answer_key)
        return _normalize(given) == _normalize(self.answer_key)


@dataclass(frozen=True)
class AnswerSheet:
    session_id: str
    answers: tuple[tuple[str, str], ...]  # (question_id, given_answer)

    def __post_init__(self) -> None:
        ids = [qid for qid, _ in self.answers]
        if len(ids) != len(set(ids)):
            raise ValueError("each question may be answered at most once")


@dataclass(frozen=True)
class SpatialScores:
    landmark: float
    route: float
    survey: float
    landmark_max: float
    route_max: float
    survey_max: float


@dataclass(frozen=True)
class SessionMetrics:
    session_id: str
    learning_time_min: float
    double_taps: int
    lassos: int
    holds: int
    announcements: int


def _normalize(text: str) -> str:
    return " ".join(text.split()).casefold()


def learning_time_minutes(log: SessionLog) -> float:
    """Minutes from the first map touch to the end of the session."""
    first_touch = None
    end = None
    for record in log.records:
        if record.dir != "in":
            continue
        msg_type = record.msg.get("type")
        if msg_type == "touch" and first_touch is None:
            first_touch = record.t_ms
        elif msg_type == "end_session":
            end = record.t_ms
    if first_touch is None:
        raise IncompleteLog("log contains no touch messages")
    if end is None:
        raise IncompleteLog("log contains no end_session")
    return (end - first_touch) / 60000.0


def metrics_from_log(log: SessionLog, session_id: str = "") -> SessionMetrics:
    """Per-session activity counts plus learning time."""
    counts = {"double_tap": 0, "lasso": 0, "hold_activate": 0}
    announcements = 0
    for record in log.records:
        if record.dir != "out":
            continue
        msg_type = record.msg.get("type")
        if msg_type == "gesture":
            kind = record.msg.get("kind")
            if kind in counts:
                counts[kind] += 1
        elif msg_type in ("speak", "earcon"):
            announcements += 1
    return SessionMetrics(
        session_id=session_id,
        learning_time_min=learning_time_minutes(log),
        double_taps=counts["double_tap"],
        lassos=counts["lasso"],
        holds=counts["hold_activate"],
        announcements=announcements,
    )


def score_answers(bank: list[Question], sheet: AnswerSheet) -> SpatialScores:
    """Binary scoring against the answer key, summed per question kind."""
    by_id = {q.id: q for q in bank}
    earned = {kind: 0.0 for kind in QuestionKind}
    for qid, given in sheet.answers:
        question = by_id.get(qid)
        if question is None:
            raise UnknownQuestion(qid)
        if question.accepts(given):
            earned[question.kind] += question.points
    maxima = {kind: 0.0 for kind in QuestionKind}
    for q in bank:
        maxima[q.kind] += q.points
    return SpatialScores(
        landmark=earned[QuestionKind.LANDMARK],
        route=earned[QuestionKind.ROUTE],
        survey=earned[QuestionKind.SURVEY],
        landmark_max=maxima[QuestionKind.LANDMARK],
        route_max=maxima[QuestionKind.ROUTE],
        survey_max=maxima[QuestionKind.SURVEY],
    )


CSV_HEADER = ("session", "learning_min", "L", "R", "S", "double_taps", "lassos", "holds")

_VARIABLES = ("learning_min", "L", "R", "S", "double_taps", "lassos", "holds")


def _row_values(metrics: SessionMetrics, scores: SpatialScores) -> dict[str, float]:
    return {
        "learning_min": metrics.learning_time_min,
        "L": scores.landmark,
        "R": scores.route,
        "S": scores.survey,
        "double_taps": metrics.double_taps,
        "lassos": metrics.lassos,
        "holds": metrics.holds,
    }


def mean_sd(values: list[float]) -> tuple[float, float | None]:
    """Arithmetic mean and sample (n-1) standard deviation; SD None for n < 2."""
    n = len(values)
    if n == 0:
        raise EmptyInput("no values")
    mean = sum(values) / n
    if n < 2:
        return mean, None
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


@dataclass(frozen=True)
class SummaryTable:
    """Per-variable mean and SD over a set of sessions."""

    stats: dict[str, tuple[float, float | None]]

    def mean(self, variable: str) -> float:
        return self.stats[variable][0]

    def sd(self, variable: str) -> float | None:
        return self.stats[variable][1]


def summarize_sessions(
    metrics: list[SessionMetrics], scores: list[SpatialScores]
) -> SummaryTable:
    """Descriptive statistics over parallel per-session lists."""
    if not metrics or not scores:
        raise EmptyInput("metrics and scores must be non-empty")
    if len(metrics) != len(scores):
        raise ValueError("metrics and scores must be the same length")
    columns: dict[str, list[float]] = {var: [] for var in _VARIABLES}
    for m, s in zip(metrics, scores):
        for var, value in _row_values(m, s).items():
            columns[var].append(float(value))
    return SummaryTable({var: mean_sd(vals) for var, vals in columns.items()})


def _fmt_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def export_sessions_csv(
    metrics: list[SessionMetrics],
    scores: list[SpatialScores],
    include_summary: bool = True,
) -> str:
    """One CSV row per session, optionally followed by mean and sd rows."""
    if not metrics or not scores:
        raise EmptyInput("metrics and scores must be non-empty")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for m, s in zip(metrics, scores):
        values = _row_values(m, s)
        writer.writerow([m.session_id] + [_fmt_number(values[var]) for var in _VARIABLES])
    if include_summary:
        table = summarize_sessions(metrics, scores)
        writer.writerow(["mean"] + [_fmt_number(table.mean(var)) for var in _VARIABLES])
        sd_row = ["sd"]
        for var in _VARIABLES:
            sd = table.sd(var)
            sd_row.append("" if sd is None else _fmt_number(sd))
        writer.writerow(sd_row)
    return buf.getvalue()


def load_question_bank(path: str | None = None) -> list[Question]:
    """Question list from a JSON file; bundled fixture bank by default."""
    if path is None:
        text = resources.files("tactmap").joinpath("data", DEFAULT_BANK_RESOURCE).read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    raw = json.loads(text)
    if not isinstance(raw, list):
        raise ValueError("question bank must be a JSON list")
    bank = []
    for item in raw:
        key = item["answer_key"]
        answer_key = frozenset(key) if isinstance(key, list) else key
        bank.append(
            Question(
                id=item["id"],
                kind=QuestionKind(item["kind"]),
                prompt=item["prompt"],
                answer_key=answer_key,
                points=item.get("points", 1),
            )
        )
    return bank
