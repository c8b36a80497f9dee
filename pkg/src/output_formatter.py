"""Report formatters for the command line."""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


@dataclass
class Report:
    """Outcome of one command on one input.

    Attributes:
        headline: One-line verdict, e.g. "GOOD (6 faces checked)"
        details: Further human-readable lines
        payload: Machine-readable fields for JSON output
        exit_code: 0 success, 1 negative result, 2 input error
        label: Document name or source location, shown for batches
    """

    headline: str
    details: List[str] = field(default_factory=list)
    payload: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0
    label: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        data = dict(self.payload)
        data["headline"] = self.headline
        if self.label is not None:
            data["input"] = self.label
        return data


class OutputFormatter:
    """Formats command reports as text or JSON."""

    @staticmethod
    def format_output(reports: List[Report], format_type: str = "text") -> str:
        """Format reports based on specified format.

        Args:
            reports: Reports in input order
            format_type: Output format ("text" or "json")

        Returns:
            The formatted output, newline-terminated
        """
        if not reports:
            return ""
        if format_type == "json":
            return OutputFormatter._format_json(reports)
        else:
            return OutputFormatter._format_text(reports)

    @staticmethod
    def _format_text(reports: List[Report]) -> str:
        """Headline then indented details per report; batches get a label line per item."""
        lines = []
        for report in reports:
            if len(reports) > 1 and report.label is not None:
                lines.append(f"[{report.label}]")
            lines.append(report.headline)
            lines.extend(f"  {detail}" for detail in report.details)
        return "\n".join(lines) + "\n"

    @staticmethod
    def _format_json(reports: List[Report]) -> str:
        """One object for a single report, an array otherwise."""
        data: Any = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        logger.debug(f"Formatted {len(reports)} report(s) as JSON")
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
