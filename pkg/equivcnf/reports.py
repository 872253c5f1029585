"""Machine-readable JSON reports and rich console summaries."""
import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from equivcnf import constants

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Recursively turn numpy scalars and arrays, tuples and non-string keys into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, float) and value in (float("inf"), float("-inf")):
        return str(value)
    return value


def low_confidence(floor: int | None) -> bool:
    return floor is not None and floor > constants.LOW_CONFIDENCE_FLOOR


def render(document: dict) -> str:
    """Deterministic JSON text: sorted keys, no timestamps."""
    return json.dumps(to_jsonable(document), sort_keys=True, indent=2) + "\n"


def write_report(name: str, command: str, payload: dict, report_dir: str | Path, config: dict | None = None) -> Path:
    document = {"instance": name, "command": command, "result": payload}
    if config is not None:
        document["config"] = config
    directory = Path(report_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.{command}.json"
    path.write_text(render(document))
    logger.info(f"Wrote report {path}")
    return path


def _cell(value: Any) -> str:
    text = json.dumps(to_jsonable(value), sort_keys=True) if isinstance(value, (dict, list, tuple)) else str(value)
    return text if len(text) <= 80 else text[:77] + "..."


def summary_table(title: str, payload: dict) -> Table:
    table = Table(title=title, show_header=True, header_style="bold")
    table.add_column("field")
    table.add_column("value", overflow="fold")
    for key in sorted(payload):
        table.add_row(key, _cell(payload[key]))
    return table


def print_summary(name: str, command: str, payload: dict, console: Console | None = None) -> None:
    console = console or Console()
    console.print(summary_table(f"{command}: {name}", payload))
    holds = payload.get("holds")
    if holds is not None:
        style = "green" if holds else "red"
        console.print(Panel(f"{'holds' if holds else 'FAILS'}", title=command, style=style, expand=False))
    if payload.get("low_confidence"):
        console.print(Panel("verdict established above the low-confidence floor", style="yellow", expand=False))
