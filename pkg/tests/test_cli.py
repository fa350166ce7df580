"""Command-line interface: exit codes, file formats, determinism."""

import json

import pytest

from linkmorse.cli import main
from linkmorse.graphs import make_polygon, make_three_chain
from linkmorse.instances import max16_three_chain


def write_linkage(path, g, gamma=None, terminals=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(g.to_json_dict(gamma=gamma, terminals=terminals), fh)
    return str(path)


@pytest.fixture
def three_chain_file(tmp_path):
    g, gamma = make_three_chain([1.0, 1.2], [0.8, 1.1], [0.7, 0.75])
    return write_linkage(tmp_path / "tc.json", g, gamma)


class TestRecognize:
    def test_three_chain_ok(self, three_chain_file, capsys):
        assert main(["recognize", three_chain_file]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["ptt"] is True
        assert report["sp_tree"] is not None
        assert len(report["relative_decomposition"]) == 1

    def test_k4_exit_3(self, tmp_path, capsys):
        from linkmorse.graphs import LinkageGraph
        pairs = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]
        g = LinkageGraph(("a", "b", "c", "d"), tuple((u, v, 1.0) for u, v in pairs))
        path = write_linkage(tmp_path / "k4.json", g)
        assert main(["recognize", path]) == 3
        assert json.loads(capsys.readouterr().out)["ptt"] is False

    def test_malformed_json_exit_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SystemExit) as exc:
            main(["recognize", str(path)])
        assert exc.value.code == 2


class TestCritical:
    def test_pentagon_records(self, tmp_path, capsys):
        g, gamma = make_polygon([1.0, 1.3, 0.8, 1.4, 1.1])
        path = write_linkage(tmp_path / "pent.json", g, gamma)
        assert main(["critical", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["mode"] == "symbolic"
        assert payload["wall_check"]["clean"]
        from linkmorse.geometry import enumerate_cyclic
        assert len(payload["records"]) == len(enumerate_cyclic([1.0, 1.3, 0.8, 1.4, 1.1]))

    def test_max16_instance(self, tmp_path, capsys):
        g, gamma = max16_three_chain()
        path = write_linkage(tmp_path / "m16.json", g, gamma)
        assert main(["critical", path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["records"]) == 12  # 16 points, circles counted once

    def test_wall_strict_exit_4(self, tmp_path, capsys):
        g, gamma = make_polygon([1.0, 1.0, 1.0, 3.0])
        path = write_linkage(tmp_path / "wall.json", g, gamma)
        assert main(["--strict", "critical", path]) == 4

    def test_numeric_fallback_outside_class(self, tmp_path, capsys):
        from linkmorse.instances import non_ptt_example
        g, gamma = non_ptt_example()
        path = write_linkage(tmp_path / "nonptt.json", g, gamma)
        assert main(["--n-seeds", "120", "critical", path]) == 0
        captured = capsys.readouterr()
        payload = json.loads(captured.out)
        assert payload["mode"] == "numeric"
        assert "fallback" in captured.err
        assert payload["records"]

    def test_determinism(self, tmp_path):
        g, gamma = make_three_chain([1.0, 1.2], [0.8, 1.1], [0.7, 0.75])
        path = write_linkage(tmp_path / "tc.json", g, gamma)
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["--out", str(out1), "critical", path]) == 0
        assert main(["--out", str(out2), "critical", path]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestVerify:
    def test_round_trip_agreement(self, tmp_path, three_chain_file):
        records = tmp_path / "records.json"
        assert main(["--out", str(records), "critical", three_chain_file]) == 0
        assert main(["--n-seeds", "400", "verify", three_chain_file,
                     str(records)]) == 0

    def test_corrupted_index_exit_5(self, tmp_path, three_chain_file, capsys):
        records = tmp_path / "records.json"
        assert main(["--out", str(records), "critical", three_chain_file]) == 0
        payload = json.loads(records.read_text())
        payload["records"][0]["index"]["index"] += 1
        records.write_text(json.dumps(payload))
        assert main(["--n-seeds", "400", "verify", three_chain_file,
                     str(records)]) == 5
        verdict = json.loads(capsys.readouterr().out)
        assert any("record 0" in d and "index mismatch" in d for d in verdict["diffs"])


class TestContinue:
    def test_writes_json_and_csv(self, tmp_path):
        from linkmorse.instances import pitchfork_family
        g, gamma, edge, (lo, hi) = pitchfork_family()
        path = write_linkage(tmp_path / "fam.json", g, gamma)
        out = tmp_path / "diagram"
        assert main(["--n-seeds", "150", "--out", str(out), "continue", path,
                     "--edge", str(edge), "--from", "0.62", "--to", "0.70",
                     "--steps", "4"]) == 0
        diag = json.loads((tmp_path / "diagram.json").read_text())
        csv_text = (tmp_path / "diagram.csv").read_text()
        assert diag["branches"]
        assert csv_text.splitlines()[0] == "param,branch,area,neg,zero,pos"
        assert len(csv_text.splitlines()) > 5

    def test_bad_edge_exit_2(self, three_chain_file):
        assert main(["continue", three_chain_file, "--edge", "99",
                     "--from", "0.5", "--to", "0.6"]) == 2

    def test_bad_range_exit_2(self, three_chain_file):
        assert main(["continue", three_chain_file, "--edge", "0",
                     "--from", "-1.0", "--to", "0.6"]) == 2
