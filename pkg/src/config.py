"""Configuration management using environment variables."""

import os
import logging
import sys
from dataclasses import dataclass
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

VALID_FORMATS = ["text", "json"]


@dataclass
class Config:
    """Application configuration from environment variables."""

    # Logging
    log_level: str

    # Reports
    output_format: str  # "text" or "json"

    # Catalog
    catalog_dir: Optional[str]

    # Equivalence search
    equivalence_ray_cap: int

    # Audit logs
    report_log_dir: Optional[str]
    enable_detailed_logs: bool

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        log_level = os.getenv("LOG_LEVEL", "WARNING").upper()
        if not isinstance(getattr(logging, log_level, None), int):
            raise ValueError(f"Invalid LOG_LEVEL: {log_level}")

        # Output Format
        output_format = os.getenv("OUTPUT_FORMAT", "text").lower()
        if output_format not in VALID_FORMATS:
            logger.warning(f"Invalid OUTPUT_FORMAT '{output_format}', defaulting to 'text'")
            output_format = "text"

        catalog_dir = os.getenv("CONETORIC_CATALOG") or None
        if catalog_dir and not os.path.isdir(catalog_dir):
            logger.warning(f"CONETORIC_CATALOG '{catalog_dir}' is not a directory, using the built-in catalog")
            catalog_dir = None

        ray_cap_str = os.getenv("EQUIVALENCE_RAY_CAP", "10")
        try:
            equivalence_ray_cap = int(ray_cap_str)
        except ValueError:
            raise ValueError(f"Invalid EQUIVALENCE_RAY_CAP: {ray_cap_str}. Must be an integer")
        if equivalence_ray_cap < 1:
            raise ValueError(f"Invalid EQUIVALENCE_RAY_CAP: {equivalence_ray_cap}. Must be positive")

        report_log_dir = os.getenv("REPORT_LOG_DIR") or None
        enable_detailed_logs = os.getenv("ENABLE_DETAILED_LOGS", "true").lower() == "true"

        if report_log_dir:
            os.makedirs(report_log_dir, exist_ok=True)

        return cls(
            log_level=log_level,
            output_format=output_format,
            catalog_dir=catalog_dir,
            equivalence_ray_cap=equivalence_ray_cap,
            report_log_dir=report_log_dir,
            enable_detailed_logs=enable_detailed_logs,
        )

    def setup_logging(self):
        """Configure logging based on log level.

        Records go to stderr; stdout carries only the report.
        """
        logging.basicConfig(
            level=getattr(logging, self.log_level),
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
            stream=sys.stderr,
        )
