#!/usr/bin/env python3
"""
Command line tests: golden headlines, exit codes, configuration and audit logs.
"""

import io
import json
import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from tests.support import print_success, print_test_header, run_tests
from src.config import Config
from src.log_writer import LogWriter
from src.main import EXIT_INPUT_ERROR, EXIT_NEGATIVE, EXIT_OK, run_command


def make_config(**overrides):
    settings = dict(
        log_level="WARNING",
        output_format="text",
        catalog_dir=None,
        equivalence_ray_cap=10,
        report_log_dir=None,
        enable_detailed_logs=False,
    )
    settings.update(overrides)
    return Config(**settings)


def run(argv, stdin_text="", config=None):
    """Run one command line and return (exit code, stdout, stderr)."""
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run_command(argv, io.StringIO(stdin_text), stdout, stderr, config or make_config())
    return code, stdout.getvalue(), stderr.getvalue()


@contextmanager
def environment(**values):
    """Temporarily set environment variables."""
    saved = {key: os.environ.get(key) for key in values}
    try:
        for key, value in values.items():
            os.environ[key] = value
        yield
    finally:
        for key, value in saved.items():
            if value is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = value


def test_check_good():
    """Golden headlines and exit codes of check-good."""
    print_test_header("check-good")

    code, out, err = run(["check-good", "@orthant3"])
    assert (code, out, err) == (EXIT_OK, "GOOD (6 faces checked)\n", ""), f"Got {(code, out, err)}"
    print_success(out.strip())

    code, out, _ = run(["check-good", "@cone-over-square"])
    assert code == EXIT_NEGATIVE
    assert out.splitlines()[0] == "NOT GOOD: 4 edge obstructions Z/2"
    assert len(out.splitlines()) == 5
    print_success(out.splitlines()[0])

    code, out, _ = run(["check-good", "--method", "isotropy", "@nongood-pair"])
    assert code == EXIT_NEGATIVE and out.splitlines()[0] == "NOT GOOD: 1 edge obstruction Z/2"
    print_success("Isotropy method from the command line")

    code, out, _ = run(["check-good", "@orthant2", "@cone-over-square"])
    lines = out.splitlines()
    assert code == EXIT_NEGATIVE
    assert lines[:3] == ["[orthant2]", "GOOD (2 faces checked)", "[cone-over-square]"]
    print_success("Batches keep input order and report the worst exit code")


def test_classify_and_homology():
    """Classification and homology headlines."""
    print_test_header("classify and homology")

    code, out, _ = run(["classify", "@wedge-rp3"])
    assert code == EXIT_OK and out.splitlines()[0] == "Lens3D q=2 p=1 H2=Z/2"
    assert "  model: RP^3" in out.splitlines()
    print_success(out.splitlines()[0])

    code, out, _ = run(["classify", "@nongood-pair"])
    assert code == EXIT_NEGATIVE and out.startswith("NotRealizable: NOT GOOD")

    code, out, _ = run(["classify", "-"], '{"rank": 2, "normals": []}')
    assert code == EXIT_OK and out.splitlines()[:2] == ["Free3D n=1 T^3", "  model: T^3"]
    assert "  winding not given, assumed n = 1" in out.splitlines()
    print_success("Whole plane defaults its winding number")

    code, out, _ = run(["homology", "@wedge-rp3"])
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0] == "H1=0 H2=Z/2"
    assert "  lens pair (q, p) = (2, 1)" in lines
    assert "  parallelogram lattice points: 5" in lines
    print_success("RP^3: H1=0 H2=Z/2, five parallelogram points")

    code, out, _ = run(["homology", "@s2xs1"])
    assert code == EXIT_OK and out.splitlines()[0] == "H1=Z H2=Z"
    print_success("S^2 x S^1: H1=Z H2=Z")

    code, out, err = run(["homology", "@orthant3"])
    assert code == EXIT_INPUT_ERROR and out == ""
    assert err.strip() == "<builtin>: homology is defined for rank-2 documents, got rank 3", f"Got {err}"
    print_success("Rank-3 input rejected")


def test_construct():
    """Reduction headlines with optional verification."""
    print_test_header("construct")

    code, out, _ = run(["construct", "@wedge-rp3"])
    assert code == EXIT_OK and out.splitlines()[0] == "FREE N=2 dim K=0 components=Z/2"
    print_success(out.splitlines()[0])

    code, out, _ = run(["construct", "@nongood-pair"])
    assert code == EXIT_NEGATIVE
    assert out.splitlines()[0] == "NOT FREE: nontrivial isotropy on 1 of 3 faces"
    print_success(out.splitlines()[0])

    code, out, _ = run(["construct", "--verify-radius", "2", "@orthant2"])
    assert code == EXIT_OK and "  level set verified on 50 samples" in out.splitlines()
    print_success("Level set verified on a 5x5 grid")

    code, _, err = run(["construct", "@full3"])
    assert code == EXIT_INPUT_ERROR and "no reduction presentation" in err
    code, _, _ = run(["construct", "--denominator", "0", "@orthant2"])
    assert code == EXIT_INPUT_ERROR
    print_success("Whole space and bad grid arguments rejected")


def test_equiv():
    """Equivalence witnesses, negatives and the ray cap."""
    print_test_header("equiv")

    stdin_text = json.dumps([
        {"rank": 2, "normals": [[1, 0], [0, 1]]},
        {"rank": 2, "rays": [[1, 0], [1, 1]]},
    ])
    code, out, _ = run(["equiv", "-"], stdin_text)
    assert code == EXIT_OK and out.splitlines()[0] == "EQUIVALENT A=[[1, 1], [0, 1]]", f"Got {out}"
    print_success(out.splitlines()[0])

    code, out, _ = run(["equiv", "@orthant2", "@wedge-rp3"])
    assert code == EXIT_NEGATIVE and out.splitlines()[0] == "NOT EQUIVALENT"
    print_success("Quadrant and RP^3 wedge are not equivalent")

    stdin_text = json.dumps([
        {"rank": 3, "rays": [[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]},
        {"rank": 3, "rays": [[1, 0, 2], [-1, 0, 0], [0, 1, 2], [0, -1, 0]]},
    ])
    code, out, _ = run(["equiv", "--ray-cap", "3", "-"], stdin_text)
    assert code == EXIT_NEGATIVE and out.splitlines()[0] == "UNDECIDED: ray cap exceeded"
    code, out, _ = run(["equiv", "-"], stdin_text, make_config(equivalence_ray_cap=3))
    assert out.splitlines()[0] == "UNDECIDED: ray cap exceeded"
    code, out, _ = run(["equiv", "-"], stdin_text)
    assert code == EXIT_OK and out.startswith("EQUIVALENT A=")
    print_success("Ray cap from the flag and from the configuration")

    code, _, err = run(["equiv", "@orthant2"])
    assert code == EXIT_INPUT_ERROR and "at least two" in err


def test_input_errors():
    """Malformed documents and missing files exit with code 2."""
    print_test_header("Input Errors")

    with tempfile.TemporaryDirectory() as tmpdir:
        path = Path(tmpdir) / "bad.json"
        path.write_text('{\n  "rank": 2,\n  "normals": [[1, 0, 0]]\n}\n', encoding="utf-8")
        code, out, err = run(["check-good", str(path)])
        assert code == EXIT_INPUT_ERROR and out == ""
        assert err.strip() == f"{path}:3: 'normals'[0] has length 3, expected rank 2", f"Got {err}"
        print_success("Diagnostic names the file and line 3")

        missing = Path(tmpdir) / "missing.json"
        code, _, err = run(["classify", str(missing)])
        assert code == EXIT_INPUT_ERROR and str(missing) in err
        print_success("Missing file reported")

        code, out, err = run(["check-good", str(path), "@orthant2"])
        assert code == EXIT_INPUT_ERROR and out == "GOOD (2 faces checked)\n"
        print_success("Valid inputs in a batch are still processed")

    code, _, err = run(["check-good", "-"], '{"rank": 2,')
    assert code == EXIT_INPUT_ERROR and err.startswith("<stdin>:1:")

    code, _, err = run(["check-good", "@nope"])
    assert code == EXIT_INPUT_ERROR and err.strip() == "catalog: unknown catalog entry 'nope'"

    code, _, _ = run(["check-good", "-"], '{"rank": 2, "normals": [[1, 0], [-1, 0]]}')
    assert code == EXIT_INPUT_ERROR
    print_success("Bad stdin, unknown catalog entries and empty interiors")

    code, out, err = run(["classify", "-"], '{"rank": 2, "normals": [[1, 0], [-1, 0]]}')
    assert code == EXIT_NEGATIVE and err == "", f"Got {code}: {err}"
    assert out == "NotRealizable: EMPTY INTERIOR (dimension 1 of 2)\n  model: not the moment cone of a contact toric manifold\n", f"Got {out!r}"
    print_success("classify reports an empty interior as not realizable")

    wedge = '{"name": "wedge", "rank": 2, "normals": [[1, 0], [1, 2]]}'
    code, out, _ = run(["classify", "-"], wedge)
    assert code == EXIT_OK and out.startswith("Lens3D q=2 p=1 H2=Z/2\n"), f"Got {code}: {out!r}"
    code, out, err = run(["classify", "-"], wedge.replace("}", ', "winding": 1}'))
    assert code == EXIT_INPUT_ERROR and out == "" and "winding" in err, f"Got {code}: {err!r}"
    print_success("A wedge document classifies; a winding on a wedge is refused")


def test_json_output():
    """JSON reports are deterministic."""
    print_test_header("JSON Output")

    code, out, _ = run(["check-good", "--format", "json", "@orthant3"])
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["headline"] == "GOOD (6 faces checked)" and data["is_good"] and data["input"] == "orthant3"
    assert run(["check-good", "--format", "json", "@orthant3"])[1] == out
    print_success("Single report is one object, identical across runs")

    code, out, _ = run(["classify", "@orthant2", "@orthant3"], config=make_config(output_format="json"))
    data = json.loads(out)
    assert [item["case"] for item in data] == ["Lens3D", "GoodCone"]
    print_success("Batch report is an array in input order")


def test_catalog_command():
    """catalog list, show and export."""
    print_test_header("catalog")

    code, out, _ = run(["catalog", "list"])
    assert code == EXIT_OK and out.splitlines()[0] == "13 catalog entries"
    assert "  wedge-rp3: rank 2, 2 rays" in out.splitlines()

    code, out, _ = run(["catalog", "show", "wedge-rp3"])
    assert code == EXIT_OK and out.splitlines()[0] == "wedge-rp3"
    assert '    "rays": [[0, 1], [2, -1]],' in out.splitlines()

    code, _, err = run(["catalog", "show", "nope"])
    assert code == EXIT_INPUT_ERROR and "unknown catalog entry" in err
    print_success("list and show")

    with tempfile.TemporaryDirectory() as tmpdir:
        code, out, _ = run(["catalog", "export", tmpdir])
        assert code == EXIT_OK and out.splitlines()[0] == f"exported 13 entries to {tmpdir}"
        code, out, _ = run(["classify", str(Path(tmpdir) / "wedge-rp3.json")])
        assert code == EXIT_OK and out.splitlines()[0] == "Lens3D q=2 p=1 H2=Z/2"
        code, out, _ = run(["check-good", str(Path(tmpdir) / "cone-over-square.json")])
        assert code == EXIT_NEGATIVE and out.splitlines()[0] == "NOT GOOD: 4 edge obstructions Z/2"
        print_success("Exported files reproduce the catalog results")

        code, out, _ = run(["check-good", "@orthant2"], config=make_config(catalog_dir=tmpdir))
        assert code == EXIT_OK
    print_success("Catalog directory from the configuration")


def test_usage_errors():
    """argparse errors map to exit code 2."""
    print_test_header("Usage Errors")

    assert run(["frobnicate"])[0] == EXIT_INPUT_ERROR
    assert run(["check-good", "--method", "magic", "@orthant2"])[0] == EXIT_INPUT_ERROR
    assert run([])[0] == EXIT_INPUT_ERROR
    print_success("Unknown commands and options")


def test_config_from_env():
    """Environment variables and their validation."""
    print_test_header("Configuration")

    with tempfile.TemporaryDirectory() as tmpdir:
        log_dir = str(Path(tmpdir) / "logs")
        with environment(
            LOG_LEVEL="debug",
            OUTPUT_FORMAT="xml",
            CONETORIC_CATALOG=str(Path(tmpdir) / "missing"),
            EQUIVALENCE_RAY_CAP="7",
            REPORT_LOG_DIR=log_dir,
            ENABLE_DETAILED_LOGS="false",
        ):
            config = Config.from_env()
        assert config.log_level == "DEBUG"
        assert config.output_format == "text"
        assert config.catalog_dir is None
        assert config.equivalence_ray_cap == 7
        assert config.report_log_dir == log_dir and os.path.isdir(log_dir)
        assert config.enable_detailed_logs is False
        print_success("Values parsed, bad format and catalog fall back")

    for key, value in [("LOG_LEVEL", "LOUD"), ("EQUIVALENCE_RAY_CAP", "0"), ("EQUIVALENCE_RAY_CAP", "ten")]:
        with environment(**{key: value}):
            try:
                Config.from_env()
                assert False, f"Expected ValueError for {key}={value}"
            except ValueError:
                pass
    print_success("Invalid LOG_LEVEL and EQUIVALENCE_RAY_CAP rejected")

    with environment(EQUIVALENCE_RAY_CAP="ten"):
        stdout, stderr = io.StringIO(), io.StringIO()
        code = run_command(["catalog", "list"], io.StringIO(), stdout, stderr)
    assert code == EXIT_INPUT_ERROR and stderr.getvalue().startswith("Configuration error:")
    print_success("Configuration errors exit with code 2")


def test_log_writing():
    """Run and error audit logs."""
    print_test_header("Audit Logs")

    with tempfile.TemporaryDirectory() as tmpdir:
        logs_dir = Path(tmpdir) / "Logs"

        log_writer = LogWriter(logs_dir=str(logs_dir), enabled=True)
        assert log_writer.write_run_log("classify", ["@orthant2"], 0, 12, [{"headline": "Lens3D q=1 p=0 H2=0"}])
        assert log_writer.write_error_log("classify", "bad.json", "DocumentError", "broken", line=3)

        run_logs = list(logs_dir.glob("classify_*_run.json"))
        error_logs = list(logs_dir.glob("classify_*_error.json"))
        assert len(run_logs) == 1 and len(error_logs) == 1
        with open(run_logs[0]) as f:
            data = json.load(f)
        assert data["exit_code"] == 0 and data["inputs"] == ["@orthant2"]
        with open(error_logs[0]) as f:
            data = json.load(f)
        assert data["line"] == 3 and data["error_type"] == "DocumentError"
        print_success(f"Created: {run_logs[0].name}, {error_logs[0].name}")

        disabled = LogWriter(logs_dir=str(Path(tmpdir) / "Off"), enabled=False)
        assert not disabled.write_run_log("classify", [], 0, 0, [])
        assert not (Path(tmpdir) / "Off").exists()
        print_success("Disabled writer writes nothing")

    with tempfile.TemporaryDirectory() as tmpdir:
        config = make_config(report_log_dir=tmpdir, enable_detailed_logs=True)
        run(["check-good", "@orthant2", "@nope"], config=config)
        run_logs = list(Path(tmpdir).glob("check-good_*_run.json"))
        error_logs = list(Path(tmpdir).glob("check-good_*_error.json"))
        assert len(run_logs) == 1 and len(error_logs) == 1
        with open(run_logs[0]) as f:
            data = json.load(f)
        assert data["exit_code"] == EXIT_INPUT_ERROR
        assert data["reports"][0]["headline"] == "GOOD (2 faces checked)"
        print_success("Command runs write run and error logs")


def run_all_tests():
    """Run all command line tests."""
    return run_tests("COMMAND LINE TEST SUITE", [
        ("check-good", test_check_good),
        ("classify and homology", test_classify_and_homology),
        ("construct", test_construct),
        ("equiv", test_equiv),
        ("Input Errors", test_input_errors),
        ("JSON Output", test_json_output),
        ("catalog", test_catalog_command),
        ("Usage Errors", test_usage_errors),
        ("Configuration", test_config_from_env),
        ("Audit Logs", test_log_writing),
    ])


if __name__ == "__main__":
    sys.exit(run_all_tests())
