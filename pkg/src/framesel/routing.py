"""Question-type prediction and type-to-preset routing.

A bag-of-words multinomial logistic regression predicts a question type
from raw text; a routing table fitted from a per-type validation accuracy
table maps that type to the preset that scored best for it.  Both halves
are deterministic: training is full-batch gradient descent from zero
initialization (the seed argument only matters if shuffling were enabled,
and it is not), and every argmax has a fixed tie order.

File formats (all UTF-8):
  - training data: one ``type<TAB>question`` pair per line;
  - model: JSON with ``types``, ``vocabulary``, ``weights`` (row-major),
    ``featurization``;
  - routing table: JSON with ``mapping`` and ``provenance``;
  - accuracy table: CSV with header
    ``type,relevance_only,relevance_oriented,coverage_oriented,coverage_only``.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateDataError,
    FormatError,
    IncompleteTableError,
    MissingClassError,
    ParameterError,
    RoutingGapError,
)
from .fileio import read_json, require_key, write_json
from .selection import Preset, make_preset

TOKEN_RE = re.compile(r"[a-z0-9]+")

FEATURIZATION = "token-counts:lowercase:[a-z0-9]+"

DEFAULT_TYPES = (
    "plotQA",
    "needle",
    "ego",
    "count",
    "order",
    "anomaly_reco",
    "topic_reasoning",
)

# Fixed tie order for routing-table argmax.
PRESET_ORDER = (
    "relevance_only",
    "relevance_oriented",
    "coverage_oriented",
    "coverage_only",
)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs."""
    return TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class QuestionTypeModel:
    """Multinomial logistic regression over token counts.

    ``weights`` is |types| x (|vocabulary| + 1); the last column is the
    bias.  ``training_loss`` holds the mean cross-entropy before training
    and after each epoch; it is diagnostics only and is not serialized.
    """

    types: tuple[str, ...]
    vocabulary: dict[str, int]
    weights: np.ndarray
    featurization: str = FEATURIZATION
    training_loss: tuple[float, ...] = field(default=(), compare=False)


def _infer_types(labels: list[str]) -> tuple[str, ...]:
    seen = list(dict.fromkeys(labels))
    if set(seen) <= set(DEFAULT_TYPES):
        return tuple(t for t in DEFAULT_TYPES if t in set(seen))
    return tuple(seen)


def _featurize(texts: list[str], vocabulary: dict[str, int]) -> np.ndarray:
    x = np.zeros((len(texts), len(vocabulary) + 1))
    for row, text in enumerate(texts):
        for token in tokenize(text):
            col = vocabulary.get(token)
            if col is not None:
                x[row, col] += 1.0
    x[:, -1] = 1.0
    return x


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def train_classifier(
    examples: list[tuple[str, str]],
    epochs: int = 10,
    learning_rate: float = 0.5,
    seed: int = 0,
    types: tuple[str, ...] | None = None,
) -> QuestionTypeModel:
    """Fit the classifier by full-batch gradient descent on cross-entropy.

    Weights start at zero, which makes the run independent of ``seed``.
    Any step that would raise the loss is retried at half the rate (the
    halving persists), so the per-epoch training loss never increases.

    Args:
        examples: (question text, type label) pairs.
        epochs: accepted gradient steps to run, >= 1.
        learning_rate: initial full-batch step size.
        seed: kept for interface stability; unused without shuffling.
        types: declared label list; inferred from the examples when None
            (default-type order when all labels are default types).

    Raises:
        MissingClassError: a declared type has no examples, or fewer than
            two distinct labels are present.
        DegenerateDataError: no text produces any token.
        ParameterError: a label outside the declared types, or bad
            hyperparameters.
    """
    if epochs < 1:
        raise ParameterError(f"epochs must be >= 1, got {epochs}")
    if learning_rate <= 0.0:
        raise ParameterError(f"learning rate must be positive, got {learning_rate}")
    texts = [text for text, _ in examples]
    labels = [label for _, label in examples]
    if types is None:
        declared = _infer_types(labels)
    else:
        declared = tuple(types)
    counts = {t: labels.count(t) for t in declared}
    missing = [t for t in declared if counts[t] == 0]
    if not examples or missing:
        raise MissingClassError(f"no training examples for types: {missing or list(declared)}")
    if len(declared) < 2:
        raise MissingClassError(f"need at least two classes, got {list(declared)}")
    unknown = sorted(set(labels) - set(declared))
    if unknown:
        raise ParameterError(f"labels outside the declared types: {unknown}")

    vocabulary = {token: i for i, token in enumerate(sorted({t for text in texts for t in tokenize(text)}))}
    if not vocabulary:
        raise DegenerateDataError("training texts contain no tokens")

    x = _featurize(texts, vocabulary)
    y = np.array([declared.index(label) for label in labels])
    m, n_classes = len(examples), len(declared)
    onehot = np.zeros((m, n_classes))
    onehot[np.arange(m), y] = 1.0

    def mean_loss(w: np.ndarray) -> float:
        logp = _log_softmax(x @ w.T)
        return float(-logp[np.arange(m), y].mean())

    weights = np.zeros((n_classes, len(vocabulary) + 1))
    losses = [mean_loss(weights)]
    rate = float(learning_rate)
    for _ in range(epochs):
        probs = np.exp(_log_softmax(x @ weights.T))
        grad = (probs - onehot).T @ x / m
        while True:
            stepped = weights - rate * grad
            new_loss = mean_loss(stepped)
            if new_loss <= losses[-1] or rate < 1e-12:
                break
            rate *= 0.5
        if new_loss <= losses[-1]:
            weights = stepped
            losses.append(new_loss)
        else:
            losses.append(losses[-1])
    return QuestionTypeModel(
        types=declared,
        vocabulary=vocabulary,
        weights=weights,
        featurization=FEATURIZATION,
        training_loss=tuple(losses),
    )


def predict_type(model: QuestionTypeModel, text: str) -> tuple[str, np.ndarray]:
    """Predict the question type; returns (type, class probability vector).

    Out-of-vocabulary tokens are ignored; text with no known tokens is
    scored on the bias column alone.  Ties go to the earlier type.
    """
    x = _featurize([text], model.vocabulary)[0]
    logits = model.weights @ x
    probs = np.exp(_log_softmax(logits))
    return model.types[int(np.argmax(logits))], probs


@dataclass(frozen=True)
class ClassifierEvaluation:
    """Accuracy plus a true-type x predicted-type confusion matrix."""

    accuracy: float
    confusion: np.ndarray
    total: int


def evaluate_classifier(
    model: QuestionTypeModel,
    examples: list[tuple[str, str]],
) -> ClassifierEvaluation:
    index = {t: i for i, t in enumerate(model.types)}
    unknown = sorted({label for _, label in examples} - set(model.types))
    if unknown:
        raise ParameterError(f"labels outside the model's types: {unknown}")
    confusion = np.zeros((len(model.types), len(model.types)), dtype=np.int64)
    hits = 0
    for text, label in examples:
        predicted, _ = predict_type(model, text)
        confusion[index[label], index[predicted]] += 1
        hits += predicted == label
    total = len(examples)
    accuracy = hits / total if total else 0.0
    return ClassifierEvaluation(accuracy=accuracy, confusion=confusion, total=total)


@dataclass(frozen=True)
class RoutingTable:
    """Per-type best preset, with the accuracy table it came from."""

    mapping: dict[str, str]
    provenance: dict[str, dict[str, float]]

    @property
    def types(self) -> tuple[str, ...]:
        return tuple(self.mapping)


def fit_routing(accuracy_table: dict[str, dict[str, float]]) -> RoutingTable:
    """Pick, per type, the preset with the highest validation accuracy.

    Ties break by the fixed preset order (relevance_only first, then
    relevance_oriented, coverage_oriented, coverage_only).

    Raises:
        IncompleteTableError: empty table or a type missing a preset cell.
    """
    if not accuracy_table:
        raise IncompleteTableError("empty accuracy table")
    mapping: dict[str, str] = {}
    provenance: dict[str, dict[str, float]] = {}
    for qtype, row in accuracy_table.items():
        missing = [p for p in PRESET_ORDER if p not in row]
        if missing:
            raise IncompleteTableError(f"type {qtype!r} lacks accuracy for presets: {missing}")
        best = PRESET_ORDER[0]
        for name in PRESET_ORDER[1:]:
            if row[name] > row[best]:
                best = name
        mapping[qtype] = best
        provenance[qtype] = {name: float(value) for name, value in row.items()}
    return RoutingTable(mapping=mapping, provenance=provenance)


def route_for_type(table: RoutingTable, qtype: str, lam: float = 0.5) -> Preset:
    """Oracle-routing bypass: look up the preset for a ground-truth type."""
    if qtype not in table.mapping:
        raise RoutingGapError(f"no preset mapped for question type {qtype!r}")
    return make_preset(table.mapping[qtype], lam)


def route(model: QuestionTypeModel, table: RoutingTable, text: str, lam: float = 0.5) -> Preset:
    """Predict the question's type, then apply that type's preset."""
    qtype, _ = predict_type(model, text)
    return route_for_type(table, qtype, lam)


def model_doc(model: QuestionTypeModel) -> dict:
    return {
        "types": list(model.types),
        "vocabulary": dict(model.vocabulary),
        "weights": [float(w) for w in model.weights.ravel()],
        "featurization": model.featurization,
    }


def write_model(model: QuestionTypeModel, path) -> None:
    write_json(path, model_doc(model))


def read_model(path) -> QuestionTypeModel:
    doc = read_json(path)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: model must be a JSON object")
    where = str(path)
    types = require_key(doc, "types", list, where)
    vocabulary = require_key(doc, "vocabulary", dict, where)
    weights = require_key(doc, "weights", list, where)
    featurization = require_key(doc, "featurization", str, where)
    if not types or not all(isinstance(t, str) for t in types):
        raise FormatError(f"{where}: types must be a non-empty list of strings")
    if sorted(vocabulary.values()) != list(range(len(vocabulary))):
        raise FormatError(f"{where}: vocabulary indices must cover 0..{len(vocabulary) - 1}")
    expected = len(types) * (len(vocabulary) + 1)
    if len(weights) != expected:
        raise FormatError(f"{where}: expected {expected} weights, got {len(weights)}")
    matrix = np.array(weights, dtype=np.float64).reshape(len(types), len(vocabulary) + 1)
    return QuestionTypeModel(
        types=tuple(types),
        vocabulary={str(k): int(v) for k, v in vocabulary.items()},
        weights=matrix,
        featurization=featurization,
    )


def routing_table_doc(table: RoutingTable) -> dict:
    return {
        "mapping": dict(table.mapping),
        "provenance": {t: dict(row) for t, row in table.provenance.items()},
    }


def write_routing_table(table: RoutingTable, path) -> None:
    write_json(path, routing_table_doc(table))


def read_routing_table(path) -> RoutingTable:
    doc = read_json(path)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: routing table must be a JSON object")
    where = str(path)
    mapping = require_key(doc, "mapping", dict, where)
    provenance = require_key(doc, "provenance", dict, where)
    if set(mapping) != set(provenance):
        raise FormatError(f"{where}: mapping and provenance cover different types")
    for qtype, name in mapping.items():
        if name not in PRESET_ORDER:
            raise FormatError(f"{where}: type {qtype!r} maps to unknown preset {name!r}")
        row = provenance[qtype]
        missing = [p for p in PRESET_ORDER if p not in row]
        if missing:
            raise FormatError(f"{where}: type {qtype!r} lacks accuracy for presets: {missing}")
        if row[name] < max(row[p] for p in PRESET_ORDER):
            raise FormatError(f"{where}: type {qtype!r} does not map to its best preset")
    return RoutingTable(
        mapping={str(k): str(v) for k, v in mapping.items()},
        provenance={str(t): {str(p): float(a) for p, a in row.items()} for t, row in provenance.items()},
    )


def read_training_examples(path) -> list[tuple[str, str]]:
    """Parse ``type<TAB>question`` lines into (text, type) pairs."""
    try:
        content = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8: {exc}") from None
    examples: list[tuple[str, str]] = []
    for lineno, line in enumerate(content.splitlines(), 1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise FormatError(f"{path}:{lineno}: expected type<TAB>question")
        qtype, question = line.split("\t", 1)
        examples.append((question, qtype))
    return examples


def read_accuracy_table(path) -> dict[str, dict[str, float]]:
    """Parse the accuracy CSV into a type -> preset -> accuracy table."""
    expected_header = ["type", *PRESET_ORDER]
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8: {exc}") from None
    if not rows:
        raise FormatError(f"{path}: empty accuracy table")
    if rows[0] != expected_header:
        raise IncompleteTableError(
            f"{path}: header must be {','.join(expected_header)}, got {','.join(rows[0])}"
        )
    table: dict[str, dict[str, float]] = {}
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != len(expected_header):
            raise IncompleteTableError(
                f"{path}:{lineno}: expected {len(expected_header)} fields, got {len(row)}"
            )
        qtype = row[0]
        if qtype in table:
            raise FormatError(f"{path}:{lineno}: duplicate type {qtype!r}")
        cells: dict[str, float] = {}
        for name, text in zip(PRESET_ORDER, row[1:]):
            try:
                value = float(text)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: accuracy {text!r} is not a number") from None
            if not 0.0 <= value <= 1.0:
                raise FormatError(f"{path}:{lineno}: accuracy {value} outside [0, 1]")
            cells[name] = value
        table[qtype] = cells
    return table
