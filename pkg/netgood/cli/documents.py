"""
Document handling for the CLI: game ingestion, graph export and report rendering
"""
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional, TextIO, Union

import networkx as nx
import numpy as np
import pydantic
from pydantic import BaseModel

from netgood.config import get_settings
from netgood.core.exceptions import DocumentError
from netgood.models.game import CoalitionPartition, DependenceMatrix
from netgood.models.schemas import GameDocument

logger = logging.getLogger(__name__)


def parse_document(text: str, source: str = "<input>") -> GameDocument:
    """Parse and validate a game document, keeping line/field diagnostics"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno)
    try:
        return GameDocument.model_validate(raw)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or None
        raise DocumentError(f"{source}: {first['msg']}", field=location)


def load_document(path: Union[str, Path]) -> GameDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}")
    document = parse_document(text, source=str(path))
    logger.debug("loaded %s: n=%d, %d edges", path, document.n, len(document.edges))
    return document


def parse_vector(text: str, n: int, flag: str) -> np.ndarray:
    """Comma-separated reals, e.g. "1,0.5,2" """
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise DocumentError(f"{flag} expects comma-separated numbers, got {text!r}", field=flag)
    if len(values) != n:
        raise DocumentError(f"{flag} needs {n} values, got {len(values)}", field=flag)
    return np.array(values)


def parse_coalitions(text: str, n: int) -> CoalitionPartition:
    """Blocks separated by '|', members by ',', e.g. "0|1,2,3" """
    try:
        blocks = [tuple(int(i) for i in block.split(",")) for block in text.split("|")]
    except ValueError:
        raise DocumentError(f"--coalitions expects blocks like 0|1,2, got {text!r}",
                            field="--coalitions")
    return CoalitionPartition(tuple(blocks)).validate(n)


# ============================================================================
# Graph export and re-ingestion
# ============================================================================

def to_networkx(dependence: DependenceMatrix) -> nx.DiGraph:
    """Directed graph with arcs i -> j for every nonzero g_ij, inserted in row-major order"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(dependence.n))
    for i, j, weight in dependence.edges():
        graph.add_edge(i, j, weight=weight)
    return graph


def format_float(value: float, digits: int) -> str:
    """Fixed significant digits, the rule shared by reports and DOT labels"""
    return f"{value:.{digits}g}"


def dot_lines(dependence: DependenceMatrix, name: str = "G",
              digits: Optional[int] = None) -> Iterable[str]:
    digits = get_settings().FLOAT_DIGITS if digits is None else digits
    graph = to_networkx(dependence)
    yield f"digraph {name} {{"
    for node in sorted(graph.nodes):
        yield f"  {node};"
    for i, j in sorted(graph.edges):
        weight = format_float(graph.edges[i, j]["weight"], digits)
        yield f'  {i} -> {j} [label="{weight}", weight={weight}];'
    yield "}"


def csv_lines(dependence: DependenceMatrix) -> Iterable[str]:
    """from,to,weight rows; str(float) round-trips exactly"""
    return nx.generate_edgelist(to_networkx(dependence), delimiter=",", data=["weight"])


def export_graph(dependence: DependenceMatrix, fmt: str, stream: TextIO):
    lines = dot_lines(dependence) if fmt == "dot" else csv_lines(dependence)
    for line in lines:
        stream.write(line + "\n")


def read_edge_csv(path: Union[str, Path], n: int) -> DependenceMatrix:
    """Rebuild the dependence matrix from an exported CSV edge list"""
    graph = nx.read_edgelist(str(path), delimiter=",", nodetype=int,
                             data=[("weight", float)], create_using=nx.DiGraph)
    graph.add_nodes_from(range(n))
    if any(not 0 <= node < n for node in graph.nodes):
        raise DocumentError(f"{path}: node index outside 0..{n - 1}")
    return DependenceMatrix(nx.to_numpy_array(graph, nodelist=range(n), weight="weight"))


# ============================================================================
# Report rendering
# ============================================================================

def _round(value: Any, digits: int) -> Any:
    if isinstance(value, float):
        # JSON has no inf/nan
        if not np.isfinite(value):
            return None
        return float(format_float(value, digits))
    if isinstance(value, dict):
        return {k: _round(v, digits) for k, v in value.items()}
    if isinstance(value, list):
        return [_round(v, digits) for v in value]
    return value


def render(report: BaseModel, digits: Optional[int] = None) -> str:
    """Stable JSON: sorted keys, floats at a fixed number of significant digits"""
    digits = get_settings().FLOAT_DIGITS if digits is None else digits
    payload = _round(report.model_dump(mode="json", by_alias=True, exclude_none=True), digits)
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False)
