import numpy as np
import pytest

from ridgelet_sampler.cli import main, read_dataset, read_nodes, write_dataset
from ridgelet_sampler.domain import FiniteDomain


def run_cli(args):
    return main(list(args))


def gen_dataset(tmp_path, name="data.txt", p=3, d=2, m=30, seed=1):
    path = tmp_path / name
    rc = run_cli(["gen", "--p", str(p), "--d", str(d), "--m", str(m),
                  "--seed", str(seed), "--out", str(path)])
    assert rc == 0
    return path


def write_zero_label_dataset(path, p=3, d=1):
    lines = [f"{p} {d} 4"]
    for i in range(4):
        lines.append(f"{i % p} 0.0")
    path.write_text("\n".join(lines) + "\n")


class TestGen:
    def test_writes_expected_rows(self, tmp_path, capsys):
        path = gen_dataset(tmp_path, m=100)
        lines = path.read_text().splitlines()
        assert lines[0] == "3 2 100"
        assert len(lines) == 101
        out = capsys.readouterr().out
        assert "K=" in out

    def test_deterministic_output(self, tmp_path):
        p1 = gen_dataset(tmp_path, name="a.txt", seed=9)
        p2 = gen_dataset(tmp_path, name="b.txt", seed=9)
        assert p1.read_bytes() == p2.read_bytes()

    def test_non_prime_modulus_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli(["gen", "--p", "4", "--d", "1", "--m", "5",
                     "--out", str(tmp_path / "x.txt")])
        assert exc.value.code == 2
        assert "prime" in capsys.readouterr().err

    def test_roundtrip_through_reader(self, tmp_path):
        path = gen_dataset(tmp_path, p=7, d=3, m=25, seed=4)
        dom, points, labels = read_dataset(str(path))
        assert dom == FiniteDomain(7, 3)
        assert points.shape == (25, 3)
        np.testing.assert_allclose(
            labels, np.sin(4 * np.pi / 7 * (points.sum(axis=1) % 7)), atol=1e-15
        )


class TestSample:
    def test_uniform_nodes_are_valid(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        capsys.readouterr()  # drop the gen output
        rc = run_cli(["sample", "--data", str(data), "--method", "uniform",
                      "--n", "3", "--seed", "0"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3
        for line in lines:
            fields = [int(t) for t in line.split(",")]
            assert len(fields) == 4  # D=2 coords, b, accepted
            assert all(0 <= v < 3 for v in fields[:3])
            assert fields[3] == 1

    def test_degenerate_dataset_is_runtime_error(self, tmp_path, capsys):
        data = tmp_path / "zeros.txt"
        write_zero_label_dataset(data)
        rc = run_cli(["sample", "--data", str(data), "--method", "dequantized",
                      "--n", "5"])
        assert rc == 1
        assert "degenerate target" in capsys.readouterr().err

    def test_exact_method_respects_cap(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        rc = run_cli(["sample", "--data", str(data), "--method", "exact",
                      "--n", "5", "--enum-cap", "10"])
        assert rc == 1
        assert "cap" in capsys.readouterr().err

    def test_deterministic_given_seed(self, tmp_path):
        data = gen_dataset(tmp_path)
        out1, out2 = tmp_path / "n1.txt", tmp_path / "n2.txt"
        for out in (out1, out2):
            rc = run_cli(["sample", "--data", str(data), "--n", "50",
                          "--seed", "21", "--out", str(out)])
            assert rc == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_bad_delta_smooth_is_usage_error(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        with pytest.raises(SystemExit) as exc:
            run_cli(["sample", "--data", str(data), "--n", "1",
                     "--delta-smooth", "nope"])
        assert exc.value.code == 2

    def test_empirical_tv_between_exact_and_dequantized(self, tmp_path):
        # both methods target the same law; delta_tv = 0.1 bounds the gap
        data = gen_dataset(tmp_path, m=30, seed=3)
        files = {}
        for method in ("exact", "dequantized"):
            out = tmp_path / f"{method}.txt"
            rc = run_cli(["sample", "--data", str(data), "--method", method,
                          "--n", "100000", "--seed", "7", "--delta-tv", "0.1",
                          "--out", str(out)])
            assert rc == 0
            files[method] = out
        dom = FiniteDomain(3, 2)
        counts = {}
        for method, path in files.items():
            hist = np.zeros(dom.num_nodes)
            for node in read_nodes(str(path), dom):
                flat = (node.a[0] * 3 + node.a[1]) * 3 + node.b
                hist[flat] += 1
            counts[method] = hist / hist.sum()
        tv = 0.5 * np.abs(counts["exact"] - counts["dequantized"]).sum()
        assert tv <= 0.1 + 0.02


class TestFit:
    def test_empty_node_file_gives_zero_predictor_risk(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        nodes = tmp_path / "nodes.txt"
        nodes.write_text("")
        rc = run_cli(["fit", "--data", str(data), "--nodes", str(nodes)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "N=0 N_eff=0" in out
        dom, points, labels = read_dataset(str(data))
        from ridgelet_sampler.sampler import EmpiricalDistribution

        emp = EmpiricalDistribution.from_samples(points, labels, dom)
        expected = float(emp.probs @ emp.labels**2)
        risk = float(out.split("risk=")[1])
        assert risk == pytest.approx(expected, rel=1e-12)

    def test_duplicate_only_node_file(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        nodes = tmp_path / "nodes.txt"
        nodes.write_text("1,2,0,1\n1,2,0,1\n1,2,0,1\n")
        rc = run_cli(["fit", "--data", str(data), "--nodes", str(nodes)])
        assert rc == 0
        assert "N=3 N_eff=1" in capsys.readouterr().out

    def test_mismatched_dimensions_rejected(self, tmp_path, capsys):
        data = gen_dataset(tmp_path, d=2)
        nodes = tmp_path / "nodes.txt"
        nodes.write_text("1,0,1\n")  # D=1 node list against a D=2 dataset
        rc = run_cli(["fit", "--data", str(data), "--nodes", str(nodes)])
        assert rc == 1
        assert "mismatch" in capsys.readouterr().err

    def test_out_of_range_residue_rejected(self, tmp_path, capsys):
        data = gen_dataset(tmp_path, p=3, d=1)
        nodes = tmp_path / "nodes.txt"
        nodes.write_text("5,0,1\n")
        rc = run_cli(["fit", "--data", str(data), "--nodes", str(nodes)])
        assert rc == 1
        assert "mismatch" in capsys.readouterr().err

    def test_model_file_written(self, tmp_path, capsys):
        data = gen_dataset(tmp_path)
        nodes = tmp_path / "nodes.txt"
        rc = run_cli(["sample", "--data", str(data), "--n", "20", "--seed", "2",
                      "--out", str(nodes)])
        assert rc == 0
        model = tmp_path / "model.txt"
        rc = run_cli(["fit", "--data", str(data), "--nodes", str(nodes),
                      "--out", str(model)])
        assert rc == 0
        lines = model.read_text().splitlines()
        header = lines[0].split()
        assert header[0] == "3" and header[1] == "2"
        assert len(lines) == 1 + int(header[2])

    def test_risk_decreases_with_more_exact_nodes(self, tmp_path, capsys):
        data = gen_dataset(tmp_path, p=3, d=1, m=30, seed=6)
        risks = {}
        for n in (8, 200):
            nodes = tmp_path / f"nodes{n}.txt"
            rc = run_cli(["sample", "--data", str(data), "--method", "exact",
                          "--n", str(n), "--seed", "8", "--out", str(nodes)])
            assert rc == 0
            rc = run_cli(["fit", "--data", str(data), "--nodes", str(nodes)])
            assert rc == 0
            risks[n] = float(capsys.readouterr().out.split("risk=")[1])
        assert risks[200] < risks[8]


class TestExperimentsCli:
    def test_risk_experiment_reduced_grid(self, tmp_path, capsys):
        out1, out2 = tmp_path / "risk1.csv", tmp_path / "risk2.csv"
        args = ["risk-experiment", "--p", "3", "--d-max", "1", "--reps", "2",
                "--n-grid", "8,16", "--delta-tvs", "0.1", "--m-factor", "10",
                "--seed", "3"]
        assert run_cli(args + ["--out", str(out1)]) == 0
        assert run_cli(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        lines = out1.read_text().splitlines()
        assert lines[0] == "method,delta_tv,P,D,M,N,rep,N_eff,risk,seed"
        assert len(lines) == 1 + 3 * 2 * 2

    def test_runtime_experiment_emits_both_methods(self, tmp_path, capsys):
        out = tmp_path / "runtime.csv"
        rc = run_cli(["runtime-experiment", "--naive-d", "1,2", "--deq-d", "1,2",
                      "--reps", "2", "--seed", "4", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "method,P,D,M,rep,wall_seconds,timeout,seed"
        methods = {line.split(",")[0] for line in lines[1:]}
        assert methods == {"naive", "dequantized"}

    def test_bad_method_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli(["risk-experiment", "--methods", "bogus",
                     "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestDatasetIo:
    def test_write_read_roundtrip_exact_floats(self, tmp_path):
        path = tmp_path / "ds.txt"
        points = np.array([[0, 1], [2, 2], [1, 0]])
        labels = np.array([0.1, -0.25, 1e-17])
        write_dataset(str(path), 3, points, labels)
        dom, pts, labs = read_dataset(str(path))
        np.testing.assert_array_equal(pts, points)
        np.testing.assert_array_equal(labs, labels)  # repr round-trips exactly

    def test_malformed_rows_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 2 1\n0 1\n")
        with pytest.raises(ValueError, match="fields"):
            read_dataset(str(path))
