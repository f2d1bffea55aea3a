"""CLI behaviour: exit codes, determinism, artifacts, fault injection."""

import json

import pytest

from quantalib.cli import main
from quantalib.corpus import three_chain_quantale


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_corpus_grothendieck(self, capsys):
        code, out, _ = run(capsys, "check", "corpus:chain3", "--predicates", "grothendieck")
        assert code == 0
        assert "[PASS] chain3: grothendieck" in out

    def test_failing_predicate_exits_1(self, capsys):
        code, out, _ = run(capsys, "check", "corpus:truncated-sum",
                           "--predicates", "modular")
        assert code == 1
        assert "[FAIL]" in out and "counterexample" in out

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 2
        assert "input error" in err

    def test_invalid_structure_exits_2(self, tmp_path, capsys):
        broken = three_chain_quantale().to_json()
        broken["comp"]["*->*->*"] = [e for e in broken["comp"]["*->*->*"]
                                     if e[:2] != ["m", "m"]]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(broken))
        code, _, err = run(capsys, "check", str(path))
        assert code == 2
        assert "no entry" in err

    def test_empty_quantaloid_all_vacuous(self, tmp_path, capsys):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"objects": [], "homs": {}, "comp": {},
                                    "id": {}, "inv": {}}))
        code, out, _ = run(capsys, "check", str(path))
        assert code == 0
        assert "[FAIL]" not in out

    def test_file_roundtrip(self, tmp_path, capsys):
        path = tmp_path / "chain3.json"
        path.write_text(json.dumps(three_chain_quantale().to_json()))
        code, out, _ = run(capsys, "check", str(path), "--predicates",
                           "modular,locally_localic")
        assert code == 0

    def test_unknown_predicate_exits_2(self, capsys):
        code, _, err = run(capsys, "check", "corpus:chain3", "--predicates", "sparkly")
        assert code == 2

    def test_deterministic_output(self, capsys):
        _, out1, _ = run(capsys, "check", "corpus:z2", "--format", "json")
        _, out2, _ = run(capsys, "check", "corpus:z2", "--format", "json")
        assert out1 == out2


class TestConstruct:
    def test_ssi_artifact_reloads(self, tmp_path, capsys):
        out_path = tmp_path / "ssi.json"
        code, out, _ = run(capsys, "construct", "corpus:chain3", "--op", "ssi",
                           "--out", str(out_path))
        assert code == 0
        from quantalib.quantaloid import FiniteQuantaloid
        reloaded = FiniteQuantaloid.from_json(json.loads(out_path.read_text()))
        assert set(reloaded.objects) == {"*:0", "*:m", "*:1"}

    def test_split_requires_idempotents_arg(self, capsys):
        code, _, err = run(capsys, "construct", "corpus:chain3", "--op", "split")
        assert code == 2

    def test_split(self, tmp_path, capsys):
        out_path = tmp_path / "split.json"
        code, out, _ = run(capsys, "construct", "corpus:chain3", "--op", "split",
                           "--idempotents", "*:m,*:1", "--out", str(out_path))
        assert code == 0
        data = json.loads(out_path.read_text())
        assert set(data["objects"]) == {"*:m", "*:1"}

    def test_sheaf_census(self, tmp_path, capsys):
        out_path = tmp_path / "census.json"
        code, out, _ = run(capsys, "construct", "corpus:z2", "--op", "sh-q",
                           "--max", "2", "--out", str(out_path))
        assert code == 0
        data = json.loads(out_path.read_text())
        assert len(data["classes"]) == 4
        # representatives reload against the emitted base
        from quantalib.quantaloid import FiniteQuantaloid
        from quantalib.qcat import QCategory
        base = FiniteQuantaloid.from_json(data["base"])
        for cls in data["classes"]:
            QCategory.from_json(base, cls["representative"])

    def test_morita_quantale(self, capsys):
        code, out, _ = run(capsys, "construct", "corpus:boolean",
                           "--op", "morita-quantale")
        assert code == 0

    def test_order_census(self, tmp_path, capsys):
        out_path = tmp_path / "orders.json"
        code, out, _ = run(capsys, "construct", "corpus:boolean", "--op", "rel-q",
                           "--max", "2", "--out", str(out_path))
        assert code == 0
        data = json.loads(out_path.read_text())
        assert data["mode"] == "all"
        assert len(data["classes"]) == 4  # the posets with at most two points

    def test_resource_cap_exits_3(self, capsys):
        code, _, err = run(capsys, "construct", "corpus:rel2",
                           "--op", "morita-quantale", "--max-matrices", "8")
        assert code == 3
        assert "resource limit" in err

    def test_site_roundtrip(self, capsys):
        code, out, _ = run(capsys, "construct", "corpus:crible2chain",
                           "--op", "site-roundtrip")
        assert code == 0
        assert "[PASS]" in out

    def test_crible_quantaloid_from_site_file(self, tmp_path, capsys):
        from quantalib.lattice import chain
        from quantalib.sites import (poset_category, site_to_json,
                                     trivial_topology)
        cat = poset_category(chain(["0", "1"]))
        path = tmp_path / "site.json"
        path.write_text(json.dumps(site_to_json(cat, trivial_topology(cat))))
        out_path = tmp_path / "crible.json"
        code, out, _ = run(capsys, "construct", str(path), "--op",
                           "crible-quantaloid", "--out", str(out_path))
        assert code == 0
        from quantalib.quantaloid import FiniteQuantaloid, find_isomorphism
        from quantalib.corpus import crible_2chain_quantale
        q = FiniteQuantaloid.from_json(json.loads(out_path.read_text()))
        assert find_isomorphism(q, crible_2chain_quantale()) is not None


class TestVerify:
    @pytest.mark.parametrize("suite", ["c-lemmas", "d-theorems", "e-theorems", "walters"])
    def test_suites_pass(self, capsys, suite):
        code, out, _ = run(capsys, "verify", "--suite", suite)
        assert code == 0, out
        assert "[FAIL]" not in out

    def test_fault_injection_reports_counterexample(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "c-lemmas", "--inject-fault")
        assert code == 0
        assert "fault_detected_and_replayed" in out
        assert "counterexample" in out

    def test_verify_deterministic(self, capsys):
        _, out1, _ = run(capsys, "verify", "--suite", "walters", "--format", "json")
        _, out2, _ = run(capsys, "verify", "--suite", "walters", "--format", "json")
        assert out1 == out2


class TestOracle:
    def test_sets(self, capsys):
        code, out, _ = run(capsys, "oracle", "sets", "--max", "3")
        assert code == 0
        assert json.loads(out)["classes"] == 4

    def test_gsets_default_z2(self, capsys):
        code, out, _ = run(capsys, "oracle", "gsets", "--max", "2")
        assert code == 0
        assert json.loads(out)["classes"] == 4

    def test_locale_sheaves(self, tmp_path, capsys):
        from quantalib.corpus import three_chain_locale
        path = tmp_path / "chain3.json"
        path.write_text(json.dumps(three_chain_locale().to_json()))
        code, out, _ = run(capsys, "oracle", "locale-sheaves", str(path), "--max", "2")
        assert code == 0
        assert json.loads(out)["classes"] == 4
