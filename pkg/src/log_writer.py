"""Audit logs for conetoric command runs."""

import logging
import json
from pathlib import Path
from datetime import datetime
from typing import Dict, Any, List, Optional

logger = logging.getLogger(__name__)


class LogWriter:
    """Writes one JSON audit log per command run."""

    def __init__(
        self,
        logs_dir: str,
        enabled: bool = True
    ):
        """Initialize log writer.

        Args:
            logs_dir: Root directory for all logs (flat structure)
            enabled: Whether logging is enabled
        """
        self.logs_dir = Path(logs_dir)
        self.enabled = enabled

        # Ensure directory exists
        if self.enabled:
            self.logs_dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def _get_log_filename(command: str, suffix: str) -> str:
        """Generate log filename from command name and current UTC time.

        Args:
            command: Subcommand that ran (check-good, classify, ...)
            suffix: "run" or "error"

        Returns:
            Log filename including the .json extension
        """
        stamp = datetime.utcnow().strftime("%Y%m%d_%H%M%S_%f")
        return f"{command}_{stamp}_{suffix}.json"

    def _write(self, log_filename: str, log_data: Dict[str, Any]) -> bool:
        log_path = self.logs_dir / log_filename
        with open(log_path, "w", encoding="utf-8") as f:
            json.dump(log_data, f, indent=2, ensure_ascii=False)
        logger.debug(f"Wrote log: {log_filename}")
        return True

    def write_run_log(
        self,
        command: str,
        inputs: List[str],
        exit_code: int,
        duration_ms: int,
        payload: List[Dict[str, Any]]
    ) -> bool:
        """Write run audit log.

        Args:
            command: Subcommand that ran
            inputs: Paths or catalog names that were read
            exit_code: Exit code returned to the shell
            duration_ms: Run time in milliseconds
            payload: Report payloads, one per processed document

        Returns:
            True if written successfully
        """
        if not self.enabled:
            return False

        try:
            log_data = {
                "command": command,
                "inputs": inputs,
                "finished_at": datetime.utcnow().isoformat() + "Z",
                "duration_ms": duration_ms,
                "exit_code": exit_code,
                "reports": payload
            }
            return self._write(self._get_log_filename(command, "run"), log_data)

        except Exception as e:
            logger.error(f"Error writing run log: {e}")
            return False

    def write_error_log(
        self,
        command: str,
        source: str,
        error_type: str,
        error_message: str,
        line: Optional[int] = None
    ) -> bool:
        """Write error log.

        Args:
            command: Subcommand that ran
            source: Input the error came from
            error_type: Type/class of error
            error_message: Error message
            line: Optional 1-based line of the input

        Returns:
            True if written successfully
        """
        if not self.enabled:
            return False

        try:
            log_data = {
                "command": command,
                "source": source,
                "error_at": datetime.utcnow().isoformat() + "Z",
                "error_type": error_type,
                "error_message": error_message
            }

            if line is not None:
                log_data["line"] = line

            return self._write(self._get_log_filename(command, "error"), log_data)

        except Exception as e:
            logger.error(f"Error writing error log: {e}")
            return False
