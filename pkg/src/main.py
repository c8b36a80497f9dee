"""Main entry point for the conetoric command line."""

import argparse
import logging
import sys
import time
from typing import Callable, List, Optional, Sequence, TextIO

from .catalog import ConeCatalog
from .classify import (
    Case,
    classify,
    edge_weights,
    find_equivalence,
    homology_3d,
    lens_canonical_form,
)
from .config import VALID_FORMATS, Config
from .documents import ConeDocument, parse_documents, serialize_documents
from .errors import ConeToricError, DocumentError, InvalidInput
from .goodness import is_good_facewise, is_good_via_isotropy
from .lattice import det2, parallelogram_lattice_points
from .log_writer import LogWriter
from .output_formatter import OutputFormatter, Report
from .reduction import build_reduction, rational_grid, verify_level_set_samples

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2


def _slope_text(value) -> str:
    return "vertical" if value is None else str(value)


class ConeToricCLI:
    """Runs one subcommand over a batch of cone documents."""

    def __init__(self, config: Config, stdin: TextIO, stderr: TextIO):
        """Initialize the command runner.

        Args:
            config: Application configuration
            stdin: Stream read for the input "-"
            stderr: Stream receiving diagnostics
        """
        self.config = config
        self.stdin = stdin
        self.stderr = stderr
        self.catalog = ConeCatalog(config.catalog_dir)
        self.log_writer = (
            LogWriter(config.report_log_dir, config.enable_detailed_logs) if config.report_log_dir else None
        )
        self.command = ""
        self.exit_code = EXIT_OK

    # -------------------------------------------------------------------------
    # Input
    # -------------------------------------------------------------------------

    def report_error(self, error: DocumentError, error_type: Optional[str] = None):
        """Print a line-anchored diagnostic and mark the run as an input error."""
        print(str(error), file=self.stderr)
        self.exit_code = max(self.exit_code, EXIT_INPUT_ERROR)
        if self.log_writer:
            self.log_writer.write_error_log(
                self.command, error.source, error_type or type(error).__name__, error.message, error.line
            )

    def load_documents(self, inputs: Sequence[str]) -> List[ConeDocument]:
        """Read documents from paths, "-" (stdin) or "@NAME" catalog references.

        Unreadable inputs are reported and skipped.
        """
        documents: List[ConeDocument] = []
        for item in inputs or ["-"]:
            try:
                if item.startswith("@"):
                    documents.append(self.catalog.get(item[1:]))
                elif item == "-":
                    documents.extend(parse_documents(self.stdin.read(), "<stdin>"))
                else:
                    with open(item, "r", encoding="utf-8") as f:
                        documents.extend(parse_documents(f.read(), item))
            except DocumentError as e:
                self.report_error(e)
            except OSError as e:
                self.report_error(DocumentError(e.strerror or str(e), item), type(e).__name__)
        logger.debug(f"Loaded {len(documents)} document(s) from {len(inputs or ['-'])} input(s)")
        return documents

    def run_each(self, documents: List[ConeDocument], handler: Callable[[ConeDocument], Report]) -> List[Report]:
        """Apply handler to every document independently, keeping input order."""
        reports = []
        for document in documents:
            try:
                report = handler(document)
            except DocumentError as e:
                self.report_error(e)
                continue
            except ConeToricError as e:
                self.report_error(document.error(str(e)), type(e).__name__)
                continue
            report.label = document.label
            reports.append(report)
        return reports

    # -------------------------------------------------------------------------
    # Commands
    # -------------------------------------------------------------------------

    def check_good(self, document: ConeDocument, method: str) -> Report:
        cone = document.to_cone()
        report = is_good_via_isotropy(cone) if method == "isotropy" else is_good_facewise(cone)
        details = [
            f"{f.face.kind} {list(f.face.active_normal_indices)}: {f.reason}, obstruction {f.obstruction}"
            for f in report.failures
        ]
        return Report(report.summary(), details, report.to_dict(), EXIT_OK if report.is_good else EXIT_NEGATIVE)

    def classify(self, document: ConeDocument) -> Report:
        record = classify(document.to_moment_input())
        details = [f"model: {record.model}"]
        if record.winding_defaulted:
            details.append("winding not given, assumed n = 1")
        if record.homology is not None:
            details.append(f"H1={record.homology[0]} H2={record.homology[1]}")
        if record.interval is not None:
            interval = record.interval
            details.append(
                f"interval: tan t1 = {_slope_text(interval.tan_t1)}, "
                f"tan t2 = {_slope_text(interval.tan_t2)}, arc {interval.arc}"
            )
        if record.quotient_cone is not None:
            details.append(f"projected cone: {record.quotient_cone}")
        if record.goodness is not None:
            details.extend(
                f"{f.face.kind} {list(f.face.active_normal_indices)}: {f.reason}, obstruction {f.obstruction}"
                for f in record.goodness.failures
            )
        code = EXIT_NEGATIVE if record.case is Case.NOT_REALIZABLE else EXIT_OK
        return Report(record.summary(), details, record.to_dict(), code)

    def construct(self, document: ConeDocument, radius: int, denominator: int) -> Report:
        cone = document.to_cone()
        data = build_reduction(cone)
        description = data.describe()
        nontrivial = [isotropy for isotropy in data.face_isotropies if not isotropy.group.is_trivial()]
        if not nontrivial:
            headline = f"FREE N={data.N} dim K={data.torus_dimension} components={data.component_group}"
        else:
            headline = f"NOT FREE: nontrivial isotropy on {len(nontrivial)} of {len(data.face_isotropies)} faces"
        details = [
            f"W = {data.W}",
            description["total_space"],
            f"manifold dimension {description['manifold_dimension']}",
        ]
        details.extend(f"component generator {g}" for g in data.component_generators)
        details.extend(
            f"{i.face.kind} {list(i.face.active_normal_indices)}: isotropy {i.group}" for i in nontrivial
        )
        payload = data.to_dict()
        code = EXIT_OK if not nontrivial else EXIT_NEGATIVE

        if radius > 0:
            samples = rational_grid(cone.rank, radius, denominator)
            transpose = data.W.transpose()
            level_points = [transpose @ eta for eta in samples]
            outcome = verify_level_set_samples(data, cone, samples, level_points)
            payload["verification"] = {
                "passed": outcome.passed,
                "checked": len(outcome.checks),
                "failures": [check.to_dict() for check in outcome.failures],
            }
            if outcome.passed:
                details.append(f"level set verified on {len(outcome.checks)} samples")
            else:
                details.append(f"level set verification failed on {len(outcome.failures)} samples")
                code = EXIT_NEGATIVE
        return Report(headline, details, payload, code)

    def homology(self, document: ConeDocument) -> Report:
        if document.rank != 2:
            raise InvalidInput(f"homology is defined for rank-2 documents, got rank {document.rank}")
        if document.rays is not None and len(document.rays) == 2:
            mu1, mu2 = document.vectors()
        else:
            mu1, mu2 = edge_weights(document.to_cone())
        h1, h2 = homology_3d(mu1, mu2)
        details = [f"weights {mu1}, {mu2}"]
        payload = {"mu1": list(mu1.coords), "mu2": list(mu2.coords), "H1": str(h1), "H2": str(h2)}
        if det2(mu1, mu2) != 0:
            q, p = lens_canonical_form(mu1, mu2)
            points = parallelogram_lattice_points(mu1, mu2)
            details.append(f"lens pair (q, p) = ({q}, {p})")
            details.append(f"parallelogram lattice points: {points}")
            payload.update({"lens": {"q": q, "p": p}, "parallelogram_points": points})
        return Report(f"H1={h1} H2={h2}", details, payload)

    def equiv(self, documents: List[ConeDocument], ray_cap: int) -> List[Report]:
        if len(documents) < 2:
            self.report_error(DocumentError("equiv needs at least two cone documents", "<input>"))
            return []
        base = documents[0]
        try:
            base_cone = base.to_cone()
        except ConeToricError as e:
            self.report_error(base.error(str(e)), type(e).__name__)
            return []

        def compare(other: ConeDocument) -> Report:
            result = find_equivalence(base_cone, other.to_cone(), ray_cap)
            details = [f"{base.label} -> {other.label}", f"candidates checked: {result.candidates_checked}"]
            code = EXIT_OK if result.equivalent else EXIT_NEGATIVE
            return Report(result.summary(), details, result.to_dict(), code)

        return self.run_each(documents[1:], compare)

    def catalog_command(self, args: argparse.Namespace) -> List[Report]:
        if args.catalog_command == "list":
            entries = self.catalog.entries()
            details = []
            for document in entries:
                kind = "normals" if document.normals is not None else "rays"
                count = len(document.normals if document.normals is not None else document.rays)
                details.append(f"{document.name}: rank {document.rank}, {count} {kind}")
            payload = {"entries": [document.to_dict() for document in entries]}
            return [Report(f"{len(entries)} catalog entries", details, payload)]
        if args.catalog_command == "show":
            try:
                document = self.catalog.get(args.name)
            except DocumentError as e:
                self.report_error(e)
                return []
            text = serialize_documents([document])
            return [Report(document.name, text.splitlines(), document.to_dict())]
        written = self.catalog.export(args.directory)
        payload = {"exported": [path.name for path in written], "directory": args.directory}
        return [Report(f"exported {len(written)} entries to {args.directory}", [p.name for p in written], payload)]

    def dispatch(self, args: argparse.Namespace) -> List[Report]:
        """Run the parsed subcommand and return its reports in input order."""
        self.command = args.command
        if args.command == "catalog":
            return self.catalog_command(args)

        documents = self.load_documents(args.inputs)
        if args.command == "check-good":
            return self.run_each(documents, lambda d: self.check_good(d, args.method))
        if args.command == "classify":
            return self.run_each(documents, self.classify)
        if args.command == "construct":
            if args.verify_radius < 0 or args.denominator < 1:
                self.report_error(DocumentError("--verify-radius must be >= 0 and --denominator >= 1", "<args>"))
                return []
            return self.run_each(documents, lambda d: self.construct(d, args.verify_radius, args.denominator))
        if args.command == "homology":
            return self.run_each(documents, self.homology)
        ray_cap = args.ray_cap if args.ray_cap is not None else self.config.equivalence_ray_cap
        return self.equiv(documents, ray_cap)


def build_parser(default_format: str = "text") -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=VALID_FORMATS, default=default_format, help="report format (default: %(default)s)"
    )

    parser = argparse.ArgumentParser(
        prog="conetoric",
        description="Classify contact toric manifolds by their moment cones.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    input_help = "cone document files, '-' for stdin, or @NAME for a catalog entry"

    check = subparsers.add_parser("check-good", parents=[common], help="decide whether cones are good")
    check.add_argument("inputs", nargs="*", help=input_help)
    check.add_argument("--method", choices=["facewise", "isotropy"], default="facewise")

    classify_parser = subparsers.add_parser("classify", parents=[common], help="classify moment cones")
    classify_parser.add_argument("inputs", nargs="*", help=input_help)

    construct = subparsers.add_parser("construct", parents=[common], help="emit reduction data for cones")
    construct.add_argument("inputs", nargs="*", help=input_help)
    construct.add_argument(
        "--verify-radius", type=int, default=0, help="verify the level set on a rational grid of this radius"
    )
    construct.add_argument("--denominator", type=int, default=1, help="grid step is 1/denominator")

    equiv = subparsers.add_parser("equiv", parents=[common], help="compare the first cone with the others")
    equiv.add_argument("inputs", nargs="*", help=input_help)
    equiv.add_argument("--ray-cap", type=int, default=None, help="override EQUIVALENCE_RAY_CAP")

    homology = subparsers.add_parser("homology", parents=[common], help="H^1 and H^2 of rank-2 cases")
    homology.add_argument("inputs", nargs="*", help=input_help)

    catalog = subparsers.add_parser("catalog", parents=[common], help="named example cones")
    catalog_commands = catalog.add_subparsers(dest="catalog_command", required=True)
    catalog_commands.add_parser("list", help="list catalog entries")
    show = catalog_commands.add_parser("show", help="print one entry as a document")
    show.add_argument("name")
    export = catalog_commands.add_parser("export", help="write every entry to DIRECTORY/<name>.json")
    export.add_argument("directory")
    return parser


def run_command(
    argv: Sequence[str],
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
    config: Optional[Config] = None,
) -> int:
    """Run one command line and return its exit code.

    0 means success or a positive answer, 1 a negative mathematical result
    (not good, not free, not equivalent, not realizable) and 2 an input error.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    try:
        if config is None:
            config = Config.from_env()
    except ValueError as e:
        print(f"Configuration error: {e}", file=stderr)
        return EXIT_INPUT_ERROR
    config.setup_logging()

    parser = build_parser(config.output_format)
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT_ERROR

    started = time.monotonic()
    cli = ConeToricCLI(config, stdin, stderr)
    try:
        reports = cli.dispatch(args)
    except OSError as e:
        cli.report_error(DocumentError(e.strerror or str(e), getattr(e, "filename", None) or "<output>"))
        reports = []
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        print(f"Fatal error: {e}", file=stderr)
        return EXIT_INPUT_ERROR

    exit_code = max([cli.exit_code] + [report.exit_code for report in reports])
    stdout.write(OutputFormatter.format_output(reports, args.format))

    if cli.log_writer:
        duration_ms = int((time.monotonic() - started) * 1000)
        cli.log_writer.write_run_log(
            args.command,
            list(getattr(args, "inputs", [])),
            exit_code,
            duration_ms,
            [report.to_dict() for report in reports],
        )
    return exit_code


def main():
    """Main entry point."""
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
