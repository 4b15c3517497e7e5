import json
import subprocess
import sys

import pytest

from sharparc.cli import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, construct, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestBuild:
    def test_theta(self, capsys):
        code, payload = run_json(capsys, "build", "--family", "theta", "-n", "3")
        assert code == EXIT_OK
        assert payload["n"] == 3 and len(payload["arcs"]) == 6
        assert payload["schema"] == 1

    def test_z_quotient(self, capsys):
        code, payload = run_json(capsys, "build", "--family", "z-quotient",
                                 "--delta", "theta:3", "-k", "2", "-q", "6")
        assert code == EXIT_OK and payload["n"] == 54
        assert payload["labels"][0] == [0, 0, 0]
        assert payload["modulus"] == 6

    def test_praeger(self, capsys):
        code, payload = run_json(capsys, "build", "--family", "praeger",
                                 "-r", "4", "-v", "2", "-m", "2")
        assert code == EXIT_OK and payload["n"] == 16

    def test_dot_faithful_and_merged(self, capsys):
        _, dot, _ = run(capsys, "build", "--family", "complete", "-d", "3", "--dot")
        assert dot.count("->") == 6
        _, merged, _ = run(capsys, "build", "--family", "complete", "-d", "3", "--dot",
                           "--merge-antiparallel")
        assert merged.count("->") == 3

    def test_missing_field_names_path(self, capsys):
        code, _, err = run(capsys, "build", "--family", "z-quotient", "--delta", "theta:3",
                           "-k", "2")
        assert code == EXIT_USAGE and "z_quotient.q" in err

    def test_unknown_family(self, capsys):
        code, _, err = run(capsys, "build", "--family", "nope")
        assert code == EXIT_USAGE and "nope" in err

    def test_bad_quotient(self, capsys):
        code, _, _ = run(capsys, "build", "--family", "z-quotient", "--delta", "theta:3",
                         "-k", "2", "-q", "5")
        assert code == EXIT_USAGE

    def test_descriptor_file(self, capsys, tmp_path):
        path = tmp_path / "desc.json"
        path.write_text(json.dumps({"family": "z_window", "delta": {"n": 2, "arcs": [[0, 1], [1, 0]]},
                                    "k": 1, "lo": 0, "hi": 2}))
        code, payload = run_json(capsys, "build", "--descriptor", str(path))
        assert code == EXIT_OK and payload["n"] == 6

    def test_diestel_leader(self):
        built = construct({"family": "diestel-leader", "p": 2, "tree_q": 2, "depth": 2})
        assert built.leveled is not None and built.graph.vertex_count > 0


class TestVerify:
    def test_sharp_theta(self, capsys):
        code, payload = run_json(capsys, "verify", "sharp-theta", "-n", "3", "-k", "2", "-q", "6")
        assert code == EXIT_OK and payload["status"] == "PASS"
        assert payload["observed"]["sharp_k"] == 2

    def test_sharp_complete(self, capsys):
        code, payload = run_json(capsys, "verify", "sharp-complete", "-d", "2", "-k", "2", "-q", "4")
        assert code == EXIT_OK
        assert payload["observed"]["fiber_stabilizer_trivial"] is True

    def test_theta_iso(self, capsys):
        code, payload = run_json(capsys, "verify", "theta-iso", "--delta", "theta:3",
                                 "-k", "2", "-q", "6")
        assert code == EXIT_OK and payload["status"] == "PASS"

    @pytest.mark.parametrize("preset,args", [
        ("praeger", ["-r", "4", "-v", "2", "-m", "2"]),
        ("tf-dihedral", ["-n", "5"]),
        ("stable", ["--delta", "complete:4"]),
        ("lifted", ["--delta", "complete:3", "-k", "2", "-q", "4"]),
    ])
    def test_other_presets(self, capsys, preset, args):
        code, payload = run_json(capsys, "verify", preset, *args)
        assert code == EXIT_OK, payload

    def test_mismatch_exit_and_diff(self, capsys):
        code, payload = run_json(capsys, "verify", "stable", "--delta", "theta:3")
        assert code == EXIT_MISMATCH
        assert payload["status"] == "FAIL"
        assert payload["diff"]["stable"] == {"expected": True, "observed": False}

    def test_validity_constraint(self, capsys):
        code, _, err = run(capsys, "verify", "sharp-theta", "-n", "3", "-k", "2", "-q", "4")
        assert code == EXIT_USAGE and "k*n" in err

    def test_missing_parameter(self, capsys):
        code, _, _ = run(capsys, "verify", "praeger", "-r", "4")
        assert code == EXIT_USAGE

    def test_budget_exit(self, capsys):
        code, _, err = run(capsys, "verify", "sharp-theta", "-n", "3", "-k", "2", "-q", "6",
                           "--budget", "2")
        assert code == EXIT_BUDGET and "resource" in err

    def test_descriptor_preset(self, capsys):
        code, payload = run_json(capsys, "verify", "descriptor", "--family", "praeger",
                                 "-r", "3", "-v", "2", "-m", "1", "--expect-sharp", "2")
        assert code == EXIT_OK and payload["observed"]["sharp_k"] == 2


class TestOtherCommands:
    def test_growth_csv(self, capsys):
        code, out, _ = run(capsys, "growth", "-k", "1", "-n", "2")
        assert code == EXIT_OK and out == "n,b_n\n0,1\n1,5\n2,13\n"

    def test_growth_zero(self, capsys):
        _, out, _ = run(capsys, "growth", "-k", "1", "-n", "0")
        assert out.splitlines()[1:] == ["0,1"]

    def test_growth_json(self, capsys):
        code, payload = run_json(capsys, "growth", "-k", "2", "-n", "24", "--json")
        assert code == EXIT_OK and "degree_estimate" in payload
        assert payload["values"][:3] == [1, 5, 17]

    def test_profile(self, capsys):
        code, payload = run_json(capsys, "profile", "--family", "praeger", "-r", "4", "-v", "2",
                                 "-m", "2", "--k-max", "3", "--group")
        assert code == EXIT_OK
        assert payload["sharp_k"] == 2 and payload["group_order"] == 64
        assert payload["generators"]

    def test_presets_listing(self, capsys):
        code, payload = run_json(capsys, "presets")
        names = {p["name"] for p in payload["presets"]}
        assert {"sharp-theta", "sharp-complete", "theta-iso"} <= names

    def test_usage_error_from_argparse(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["growth"])
        assert exc.value.code == EXIT_USAGE


class TestDeterminismAndOutput:
    def test_byte_identical(self, capsys):
        argv = ["profile", "--family", "z-quotient", "--delta", "complete:3", "-k", "2",
                "-q", "4", "--group"]
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "g.json"
        code, out, _ = run(capsys, "-o", str(target), "build", "--family", "theta", "-n", "4")
        assert code == EXIT_OK and out == ""
        assert json.loads(target.read_text())["n"] == 4

    def test_output_dir_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("SHARPARC_OUTPUT_DIR", str(tmp_path))
        code, _, _ = run(capsys, "-o", "sub/growth.csv", "growth", "-k", "1", "-n", "1")
        assert code == EXIT_OK
        assert (tmp_path / "sub" / "growth.csv").read_text() == "n,b_n\n0,1\n1,5\n"

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "sharparc", "growth", "-k", "1", "-n", "1"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0 and proc.stdout.startswith("n,b_n")
