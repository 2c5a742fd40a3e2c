"""
Output Writer
Builds result envelopes and writes them as JSON, CSV or text
"""

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from core.dense_protocol import TrialBatch
from core.errors import ValidationError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0.0"
SIGNIFICANT_DIGITS = 12
TRIAL_COLUMNS = ('alpha_in_re', 'alpha_in_im', 'beta_re', 'beta_im',
                 'alpha_out_re', 'alpha_out_im')


def format_number(value) -> str:
    """Fixed 12-significant-digit text for floats"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def round_number(value):
    """Float rounded to 12 significant digits; other values unchanged"""
    if isinstance(value, bool):
        return value
    if isinstance(value, (float, np.floating)):
        return float(format(float(value), f".{SIGNIFICANT_DIGITS}g"))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, dict):
        return {k: round_number(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_number(v) for v in value]
    return value


@dataclass
class OutputEnvelope:
    """Machine-readable result of one command"""
    command: str
    parameters: Dict
    results: Dict
    units: str = "nats"
    results_units: Dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> Dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "units": self.units,
            "parameters": round_number(self.parameters),
            "results": round_number(self.results),
            "results_units": self.results_units,
        }

    def table(self) -> List[Dict]:
        """Results as CSV rows"""
        if "rows" in self.results:
            return list(self.results["rows"])
        if self.results and all(isinstance(v, dict) for v in self.results.values()):
            return [{"label": label, **row} for label, row in self.results.items()]
        return [self.results]


class OutputWriter:
    """Renders and saves envelopes"""

    FORMATS = ('json', 'csv', 'text')

    @classmethod
    def render(cls, envelope: OutputEnvelope, fmt: str = 'json') -> str:
        """Render in any format; inf and nan are refused rather than written"""
        try:
            text = json.dumps(envelope.to_dict(), indent=2, ensure_ascii=False,
                              allow_nan=False) + "\n"
        except ValueError as e:
            raise ValidationError(f"{envelope.command}: result is not finite ({e})") from e
        if fmt == 'json':
            return text
        if fmt == 'csv':
            return cls.render_csv(envelope)
        if fmt == 'text':
            return cls.render_text(envelope)
        raise ValidationError(f"unknown format {fmt!r} (choose from {', '.join(cls.FORMATS)})")

    @classmethod
    def render_csv(cls, envelope: OutputEnvelope) -> str:
        rows = envelope.table()
        buffer = io.StringIO()
        buffer.write(f"# units={envelope.units}\n")
        if rows:
            writer = csv.writer(buffer, lineterminator="\n")
            columns = list(rows[0].keys())
            writer.writerow(columns)
            for row in rows:
                writer.writerow([format_number(row[c]) for c in columns])
        return buffer.getvalue()

    @classmethod
    def render_text(cls, envelope: OutputEnvelope) -> str:
        lines = [f"{envelope.command} (units: {envelope.units})"]
        for key, value in envelope.parameters.items():
            lines.append(f"  {key} = {format_number(value)}")
        lines.append("")
        rows = envelope.table()
        if len(rows) == 1 and "label" not in rows[0]:
            width = max(len(k) for k in rows[0])
            for key, value in rows[0].items():
                unit = envelope.results_units.get(key, "")
                lines.append(f"{key.ljust(width)}  {format_number(value)} {unit}".rstrip())
        elif rows:
            columns = list(rows[0].keys())
            cells = [columns] + [[format_number(row[c]) for c in columns] for row in rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
            for r in cells:
                lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def write(cls, envelope: OutputEnvelope, fmt: str = 'json',
              filepath: Optional[str] = None) -> str:
        """
        Write an envelope to a file, or stdout when no path is given

        Returns:
            The rendered text
        """
        text = cls.render(envelope, fmt)
        if filepath:
            path = Path(filepath)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
            logger.info("%s output written to %s", envelope.command, path)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
        return text

    @classmethod
    def load_envelope(cls, filepath: str) -> OutputEnvelope:
        """Read back a JSON envelope"""
        try:
            with open(filepath, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"invalid JSON in {filepath}: {e}") from e

        missing = [k for k in ("schema_version", "command", "parameters", "results", "units")
                   if k not in data]
        if missing:
            raise ValidationError(f"not an output envelope, missing: {', '.join(missing)}")
        return OutputEnvelope(
            command=data["command"],
            parameters=data["parameters"],
            results=data["results"],
            units=data["units"],
            results_units=data.get("results_units", {}),
            schema_version=data["schema_version"],
        )

    @classmethod
    def export_trials(cls, batch: TrialBatch, filepath: str) -> None:
        """Per-trial CSV dump"""
        path = Path(filepath)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, batch.to_array(), fmt=f"%.{SIGNIFICANT_DIGITS}g", delimiter=",",
                   header=",".join(TRIAL_COLUMNS), comments="")
        logger.info("%d trials written to %s", len(batch), path)


