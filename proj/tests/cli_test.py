"""End-to-end checks of the command-line tool: determinism, schema, exit codes."""
import json
import os
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = None
SCHEMA = None


def run(*args, env=None, check=True):
    full_env = dict(os.environ)
    full_env.pop("SECONDCHANGE_THREADS", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([BINARY, *args], capture_output=True, text=True, env=full_env)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    return proc


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = pathlib.Path(cls.tmp.name)
        cls.null_csv = cls.dir / "null.csv"
        cls.corr_csv = cls.dir / "corr.csv"
        run("simulate", "--model", "I", "--n", "500", "--seed", "1", "--out", str(cls.null_csv))
        run("simulate", "--model", "VI", "--n", "300", "--seed", "4", "--out", str(cls.corr_csv))
        cls.validator = jsonschema.Draft7Validator(json.loads(pathlib.Path(SCHEMA).read_text()))

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def validate(self, text):
        doc = json.loads(text)
        errors = sorted(self.validator.iter_errors(doc), key=str)
        self.assertEqual(errors, [], "\n".join(e.message for e in errors[:5]))
        return doc

    def test_simulated_csv_has_header_and_rows(self):
        lines = self.null_csv.read_text().splitlines()
        self.assertEqual(lines[0], "y")
        self.assertEqual(len(lines), 501)

    def test_variance_report_is_byte_identical_across_reruns(self):
        args = ("test-variance", "--input", str(self.null_csv), "--bandwidth", "mv", "--B", "2000", "--seed", "7")
        first, second = run(*args).stdout, run(*args).stdout
        self.assertEqual(first, second)
        doc = self.validate(first)
        # a typical null run does not reject
        self.assertGreater(doc["p_value"], 0.05)

    def test_thread_count_does_not_change_output(self):
        args = ("test-relevant-correlation", "--input", str(self.corr_csv), "--delta", "0.2", "--B", "499")
        one = run(*args, "--threads", "1").stdout
        four = run(*args, "--threads", "4").stdout
        from_env = run(*args, env={"SECONDCHANGE_THREADS": "3"}).stdout
        self.assertEqual(one, four)
        self.assertEqual(one, from_env)

    def test_study_is_identical_across_thread_counts(self):
        args = ("simstudy", "--model", "IV", "--n", "120", "--runs", "100", "--B", "199", "--bandwidth", "0.2")
        self.assertEqual(run(*args, "--threads", "1").stdout, run(*args, "--threads", "4").stdout)

    def test_every_report_kind_validates(self):
        y = str(self.corr_csv)
        for args in [
            ("test-variance", "--input", y, "--B", "199"),
            ("test-correlation", "--input", y, "--B", "199"),
            ("test-correlation", "--input", y, "--B", "199", "--no-variance-break", "--bandwidth", "0.15"),
            ("test-relevant-variance", "--input", y, "--delta", "0.01", "--B", "199", "--delta-curve", "0.005:0.02:4"),
            ("test-relevant-correlation", "--input", y, "--delta", "0.2", "--B", "199", "--lag", "2"),
            ("locate", "--input", y),
            ("bandwidth", "--input", y),
            ("simstudy", "--model", "IIp", "--n", "100", "--runs", "100", "--B", "199", "--lambda", "0,1"),
            ("test-variance", "--input", y, "--B", "199", "--timestamp"),
        ]:
            with self.subTest(args=args):
                self.validate(run(*args).stdout)

    def test_schema_rejects_unknown_fields(self):
        doc = json.loads(run("locate", "--input", str(self.corr_csv)).stdout)
        doc["extra"] = 1
        self.assertTrue(list(self.validator.iter_errors(doc)))

    def test_report_carries_table_columns(self):
        doc = json.loads(run("test-correlation", "--input", str(self.corr_csv), "--B", "199").stdout)
        tuning = doc["tuning"]
        for key in ("b", "c", "m"):
            self.assertIsInstance(tuning[key], (int, float))
        self.assertEqual([lvl["quantile_level"] for lvl in doc["levels"]], [0.9, 0.95])

    def test_tsv_and_curve_outputs(self):
        out = self.dir / "report.tsv"
        curve = self.dir / "curve.tsv"
        run("test-relevant-variance", "--input", str(self.corr_csv), "--delta", "0.01", "--B", "199",
            "--format", "tsv", "--out", str(out), "--delta-curve", "0.005:0.02:4", "--curve-out", str(curve))
        rows = dict(line.split("\t", 1) for line in out.read_text().splitlines())
        self.assertEqual(rows["test"], "relevant-variance")
        self.assertIn("critical_value_0.05", rows)
        lines = curve.read_text().splitlines()
        self.assertEqual(lines[0].split("\t"), ["delta", "p_value", "reject_0.1", "reject_0.05"])
        self.assertEqual(len(lines), 5)

    def test_usage_errors_exit_2(self):
        y = str(self.null_csv)
        for args in [
            ("test-relevant-variance", "--input", y),
            ("test-relevant-variance", "--input", y, "--delta", "-0.1"),
            ("test-variance", "--input", y, "--no-such-flag"),
            ("test-variance", "--input", y, "--B", "50"),
            ("test-variance", "--input", y, "--bandwidth", "wide"),
            ("simstudy", "--model", "VII"),
            ("simstudy", "--model", "I", "--runs", "10"),
            ("frobnicate",),
        ]:
            with self.subTest(args=args):
                self.assertEqual(run(*args, check=False).returncode, 2)

    def test_data_errors_exit_3_and_name_the_line(self):
        bad = self.dir / "bad.csv"
        bad.write_text("v\n" + "".join(f"{i}\n" for i in range(30)) + "NaN\n1\n")
        proc = run("test-variance", "--input", str(bad), "--B", "199", check=False)
        self.assertEqual(proc.returncode, 3)
        self.assertIn("line 32", proc.stderr)
        empty = self.dir / "empty.csv"
        empty.write_text("")
        self.assertEqual(run("test-variance", "--input", str(empty), check=False).returncode, 3)
        missing = self.dir / "missing.csv"
        self.assertEqual(run("locate", "--input", str(missing), check=False).returncode, 3)

    def test_help_exits_0(self):
        self.assertEqual(run("--help", check=False).returncode, 0)
        self.assertEqual(run("simstudy", "--help", check=False).returncode, 0)


if __name__ == "__main__":
    BINARY, SCHEMA = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
