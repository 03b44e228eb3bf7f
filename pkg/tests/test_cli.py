import hashlib
import json

import pytest

from hhglab.cli import main

STRUCTURES = "structures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


class TestCheck:
    def test_standard_file_passes(self, capsys):
        code, doc, _ = run_json(capsys, "check", f"{STRUCTURES}/f2xz.json")
        assert code == 0
        assert doc["schema_version"] == 1
        assert doc["command"] == "check"
        assert doc["structure"] == "f2xz"
        assert doc["report"]["passed"] is True
        assert doc["report"]["axioms"]["failed_axioms"] == []
        assert doc["report"]["validators"]["ok"] is True

    def test_file_hash_embedded(self, capsys):
        path = f"{STRUCTURES}/f2xz.json"
        code, doc, _ = run_json(capsys, "check", path)
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        assert doc["structure_source"] == {
            "kind": "file", "source": path, "sha256": digest}

    def test_catalog_name_hash_is_recipe(self, capsys):
        code, doc, _ = run_json(capsys, "check", "z1")
        assert code == 0
        assert doc["structure_source"]["kind"] == "recipe"
        assert len(doc["structure_source"]["sha256"]) == 64

    def test_constants_embedded(self, capsys):
        _, doc, _ = run_json(capsys, "check", "z1")
        assert doc["constants"]["tau0"] == 1.0
        assert doc["constants"]["N_rank"] == 1

    def test_corrupt_fixture_fails_axiom_four(self, capsys):
        code, doc, _ = run_json(capsys, "check", "f2xz-corrupt-rho")
        assert code == 1
        assert doc["report"]["passed"] is False
        assert doc["report"]["axioms"]["failed_axioms"] == [4]

    def test_missing_file_is_usage_error(self, capsys):
        code, _, err = run(capsys, "check", f"{STRUCTURES}/missing.json")
        assert code == 2
        assert "error:" in err

    def test_unknown_name_is_usage_error(self, capsys):
        code, _, err = run(capsys, "check", "nonesuch")
        assert code == 2

    def test_csv_format_rejected(self, capsys):
        code, _, err = run(capsys, "check", "z1", "--format", "csv")
        assert code == 2

    def test_summary_to_stdout_with_out_file(self, capsys, tmp_path):
        out = tmp_path / "check.json"
        code, text, _ = run(capsys, "check", "z1", "--out", str(out))
        assert code == 0
        assert "all checks passed" in text
        assert json.loads(out.read_text())["structure"] == "z1"

    def test_missing_argument_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["check"])
        assert exc.value.code == 2


class TestCertify:
    def test_product_semigroup(self, capsys):
        code, doc, _ = run_json(capsys, "certify",
                                f"{STRUCTURES}/f2xz.json",
                                "--genset", "a,b,t")
        assert code == 0
        assert doc["report"]["variant"] == "free-semigroup"
        assert doc["report"]["schema_version"] == 1
        assert doc["report"]["ledger"]["k1"] == 240

    def test_summary_lines(self, capsys, tmp_path):
        out = tmp_path / "cert.json"
        code, text, _ = run(capsys, "certify", "free2",
                            "--genset", "a,b", "--out", str(out))
        assert code == 0
        assert "variant: free-subgroup" in text
        assert "words: a, baB" in text
        doc = json.loads(out.read_text())
        assert doc["report"]["words"] == {"u": [0], "w": [2, 0, 3]}

    def test_depth_flag_recorded(self, capsys):
        code, doc, _ = run_json(capsys, "certify", "free2",
                                "--genset", "a,b", "--depth", "5")
        assert doc["report"]["verified_depth"] == 5

    def test_missing_genset_usage(self, capsys):
        code, _, err = run(capsys, "certify", "free2")
        assert code == 2
        assert "genset" in err

    def test_non_generating_usage(self, capsys):
        code, _, err = run(capsys, "certify", "free2", "--genset", "a")
        assert code == 2

    def test_anomaly_exits_one_with_witness(self, capsys):
        code, _, err = run(capsys, "certify", "bad-orth-closure",
                           "--genset", "t")
        assert code == 1
        dump = json.loads(err)
        assert dump["error"] == "ClassificationAnomalyError"
        assert "big set" in dump["message"]


class TestScan:
    def test_free_group_tiny_scan(self, capsys):
        code, out, _ = run(capsys, "scan", "free2", "--scan-size", "2",
                           "--scan-length", "1", "--radius", "4",
                           "--growth-n", "6", "--depth", "5")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("# schema_version=1 command=scan")
        assert lines[1].startswith("row,generating_set,variant")
        assert lines[2].startswith("0,a b,free-subgroup")
        assert lines[-1].startswith("summary,rows=1,errors=0")

    def test_empty_bounds_header_only(self, capsys):
        code, out, _ = run(capsys, "scan", "z1")
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 3
        assert lines[-1].startswith("summary,rows=0,errors=0")

    def test_cyclic_row(self, capsys):
        code, out, _ = run(capsys, "scan", "z1", "--scan-size", "1",
                           "--scan-length", "2", "--radius", "3",
                           "--growth-n", "6")
        assert code == 0
        assert "0,t,virtually-cyclic" in out

    def test_json_format(self, capsys):
        code, doc, _ = run_json(capsys, "scan", "z1", "--scan-size", "1",
                                "--scan-length", "2", "--radius", "3",
                                "--growth-n", "6", "--format", "json")
        assert code == 0
        assert doc["report"]["summary"]["rows"] == 1
        assert doc["report"]["rows"][0]["variant"] == "virtually-cyclic"


class TestGrowth:
    def test_standard_free_group_table(self, capsys):
        code, out, _ = run(capsys, "growth", "free2", "--n", "5")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[1] == "n,count,log_count_over_n"
        counts = [int(line.split(",")[1]) for line in lines[2:]]
        assert counts == [2 * 3 ** n - 1 for n in range(1, 6)]

    def test_verbatim_genset(self, capsys):
        code, out, _ = run(capsys, "growth", "z1", "--genset", "t",
                           "--n", "3")
        counts = [int(line.split(",")[1])
                  for line in out.strip().split("\n")[2:]]
        assert counts == [2, 3, 4]

    def test_symmetrize_flag(self, capsys):
        code, out, _ = run(capsys, "growth", "z1", "--genset", "t",
                           "--n", "3", "--symmetrize")
        counts = [int(line.split(",")[1])
                  for line in out.strip().split("\n")[2:]]
        assert counts == [3, 5, 7]

    def test_json_format(self, capsys):
        code, doc, _ = run_json(capsys, "growth", "z2", "--n", "4",
                                "--format", "json")
        assert [r["count"] for r in doc["report"]["rows"]] == [
            2 * n * n + 2 * n + 1 for n in range(1, 5)]


class TestDistance:
    def test_product_fit_is_exact(self, capsys):
        code, doc, _ = run_json(capsys, "distance", f"{STRUCTURES}/f2xz.json",
                                "--s", "0", "--pairs", "50")
        assert code == 0
        assert doc["report"]["ok"] is True
        assert doc["report"]["K"] <= 1.5
        assert doc["report"]["C"] <= 2.0
        assert doc["report"]["n_samples"] == 50


class TestDecompose:
    def test_two_tree_blocks(self, capsys):
        code, doc, _ = run_json(capsys, "decompose",
                                f"{STRUCTURES}/f2xf2.json")
        assert code == 0
        assert doc["report"]["blocks"] == [["T1"], ["T2"]]
        assert [d["kind"] for d in doc["report"]["descriptors"]] == [
            "tree", "tree"]

    def test_single_block(self, capsys):
        code, doc, _ = run_json(capsys, "decompose", "z1")
        assert doc["report"]["blocks"] == [["S"]]
        assert doc["report"]["descriptors"][0]["kind"] == "line"


class TestDeterminism:
    def rerun(self, tmp_path, name, *argv):
        a, b = tmp_path / f"{name}-a", tmp_path / f"{name}-b"
        assert main(list(argv) + ["--out", str(a)]) == main(
            list(argv) + ["--out", str(b)])
        return a.read_bytes(), b.read_bytes()

    def test_check_bytes(self, capsys, tmp_path):
        a, b = self.rerun(tmp_path, "check", "check",
                          f"{STRUCTURES}/f2xz.json", "--seed", "3")
        assert a == b

    def test_certify_bytes(self, capsys, tmp_path):
        a, b = self.rerun(tmp_path, "cert", "certify", "f2freez",
                          "--genset", "a,b,c", "--depth", "4")
        assert a == b

    def test_scan_bytes(self, capsys, tmp_path):
        a, b = self.rerun(tmp_path, "scan", "scan", "z1",
                          "--scan-size", "1", "--scan-length", "2",
                          "--radius", "3", "--growth-n", "6")
        assert a == b

    def test_distance_bytes(self, capsys, tmp_path):
        a, b = self.rerun(tmp_path, "dist", "distance", "f2xz",
                          "--pairs", "30", "--seed", "7")
        assert a == b
