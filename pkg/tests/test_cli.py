"""End-to-end coverage of the command-line entry points."""

import csv

import numpy as np
import pytest

from tscbench.cli import main
from tscbench.experiments import read_results
from synthetic import gaussian_bumps, mean_shift, phase_shift, write_ucr_layout


@pytest.fixture
def corpus(tmp_path):
    root = tmp_path / "data"
    root.mkdir()
    specs = [
        ("Bumps", gaussian_bumps(n_per_class=6, m=24, seed=0)),
        ("Level", mean_shift(n=12, m=24, seed=1, lo=6, hi=14)),
        ("Phase", phase_shift(n_per_class=6, m=24, seed=2, shift=4)),
    ]
    for name, (train, test) in specs:
        write_ucr_layout(root, name, train, test)
    return root


def run_cli(*argv):
    return main(list(argv))


class TestRun:
    def test_single_task_writes_one_row(self, corpus, tmp_path, capsys):
        out = tmp_path / "results.csv"
        code = run_cli(
            "run", "--data-dir", str(corpus), "--output", str(out),
            "--classifiers", "ed", "--datasets", "Bumps",
        )
        assert code == 0
        assert "completed 1, skipped 0, failed 0" in capsys.readouterr().out
        rows = read_results(str(out))
        assert len(rows) == 1
        assert rows[0]["fold"] == "0"

    def test_unknown_classifier_is_a_config_error(self, corpus, tmp_path, capsys):
        code = run_cli(
            "run", "--data-dir", str(corpus), "--output", str(tmp_path / "r.csv"),
            "--classifiers", "dtw2", "--datasets", "Bumps",
        )
        assert code == 1
        assert "unknown classifier 'dtw2'" in capsys.readouterr().err

    def test_datasets_default_to_the_whole_corpus(self, corpus, tmp_path, capsys):
        out = tmp_path / "all.csv"
        code = run_cli(
            "run", "--data-dir", str(corpus), "--output", str(out),
            "--classifiers", "ed",
        )
        assert code == 0
        rows = read_results(str(out))
        assert sorted({r["dataset"] for r in rows}) == ["Bumps", "Level", "Phase"]

    def test_rerun_skips_everything(self, corpus, tmp_path, capsys):
        out = tmp_path / "resume.csv"
        argv = (
            "run", "--data-dir", str(corpus), "--output", str(out),
            "--classifiers", "ed", "--datasets", "Bumps,Level", "--folds", "2",
        )
        assert run_cli(*argv) == 0
        capsys.readouterr()
        assert run_cli(*argv) == 0
        assert "completed 0, skipped 4, failed 0" in capsys.readouterr().out

    def test_thread_count_leaves_results_unchanged(self, corpus, tmp_path):
        serial = tmp_path / "serial.csv"
        threaded = tmp_path / "threaded.csv"
        base = (
            "--data-dir", str(corpus), "--classifiers", "ed,randf",
            "--datasets", "Bumps,Level", "--folds", "2",
        )
        assert run_cli("run", "--output", str(serial), *base) == 0
        assert run_cli("run", "--output", str(threaded), "--threads", "2", *base) == 0
        strip = lambda rows: [
            {k: v for k, v in row.items() if k != "train_ms"} for row in rows
        ]
        assert strip(read_results(str(serial))) == strip(read_results(str(threaded)))

    def test_config_file_with_flag_override(self, corpus, tmp_path, capsys):
        out = tmp_path / "fromfile.csv"
        config = tmp_path / "bench.cfg"
        config.write_text(
            "# benchmark settings\n"
            f"data_dir = {corpus}\n"
            f"output = {out}\n"
            "classifiers = ed\n"
            "datasets = Bumps\n"
            "folds = 3\n"
        )
        code = run_cli("run", "--config", str(config), "--folds", "1")
        assert code == 0
        assert len(read_results(str(out))) == 1

    def test_unknown_config_key_rejected(self, corpus, tmp_path, capsys):
        config = tmp_path / "bad.cfg"
        config.write_text("classifier_list = ed\n")
        code = run_cli("run", "--config", str(config))
        assert code == 1
        assert "unknown key 'classifier_list'" in capsys.readouterr().err

    def test_malformed_config_line_rejected(self, corpus, tmp_path, capsys):
        config = tmp_path / "bad2.cfg"
        config.write_text("just some words\n")
        assert run_cli("run", "--config", str(config)) == 1
        assert "expected key=value" in capsys.readouterr().err

    def test_missing_required_settings_rejected(self, tmp_path, capsys):
        assert run_cli("run", "--classifiers", "ed") == 1
        assert "data directory is required" in capsys.readouterr().err

    def test_failed_tasks_exit_two(self, corpus, tmp_path, capsys):
        broken = corpus / "Broken"
        broken.mkdir()
        (broken / "Broken_TRAIN.txt").write_text("1 0.1 0.2\n1 0.3\n")
        (broken / "Broken_TEST.txt").write_text("1 0.1 0.2\n")
        code = run_cli(
            "run", "--data-dir", str(corpus), "--output", str(tmp_path / "f.csv"),
            "--classifiers", "ed", "--datasets", "Broken",
        )
        assert code == 2
        assert "failed: ed/Broken/0" in capsys.readouterr().err


@pytest.fixture
def results_file(corpus, tmp_path):
    out = tmp_path / "bench.csv"
    code = run_cli(
        "run", "--data-dir", str(corpus), "--output", str(out),
        "--classifiers", "ed,dtw,randf", "--folds", "3",
    )
    assert code == 0
    return out


class TestCompare:
    def test_reports_joint_statistics(self, results_file, capsys):
        assert run_cli("compare", "--results", str(results_file)) == 0
        out = capsys.readouterr().out
        assert "classifiers=3 datasets=3" in out
        assert "friedman chi2=" in out
        assert "iman-davenport f=" in out
        assert "mean ranks:" in out

    def test_two_way_comparison_adds_paired_tests(self, results_file, capsys):
        code = run_cli(
            "compare", "--results", str(results_file), "--classifiers", "ed,dtw"
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "wilcoxon ed vs dtw:" in out
        assert "sign test ed vs dtw:" in out
        assert "per-dataset: better=" in out

    def test_missing_cells_are_an_error(self, results_file, capsys):
        assert run_cli(
            "compare", "--results", str(results_file), "--classifiers", "ed,boss"
        ) == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_results_file_is_an_error(self, tmp_path, capsys):
        assert run_cli("compare", "--results", str(tmp_path / "none.csv")) == 1
        capsys.readouterr()


class TestCriticalDifference:
    def test_stdout_report_shape(self, results_file, capsys):
        assert run_cli("cd", "--results", str(results_file)) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "alpha,k,N,cd"
        alpha, k, n, cd = lines[1].split(",")
        assert (alpha, k, n) == ("0.05", "3", "3")
        assert float(cd) > 0
        assert lines[2] == "classifier,mean_rank"
        assert len(lines) == 6

    def test_written_file_ranks_sum_to_triangle(self, results_file, tmp_path):
        out = tmp_path / "cd.csv"
        assert run_cli("cd", "--results", str(results_file), "--output", str(out)) == 0
        lines = out.read_text().strip().splitlines()
        ranks = [float(line.split(",")[1]) for line in lines[3:]]
        assert sum(ranks) == pytest.approx(3 * 4 / 2, abs=1e-6)
        assert ranks == sorted(ranks)

    def test_identical_classifiers_rank_evenly(self, corpus, tmp_path, capsys):
        out = tmp_path / "dup.csv"
        run_cli(
            "run", "--data-dir", str(corpus), "--output", str(out),
            "--classifiers", "ed", "--folds", "2",
        )
        rows = read_results(str(out))
        with open(out, "w", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=tuple(rows[0]))
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
                twin = dict(row)
                twin["classifier"] = "dtw"
                writer.writerow(twin)
        capsys.readouterr()
        assert run_cli("cd", "--results", str(out)) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        ranks = {line.split(",")[0]: float(line.split(",")[1]) for line in lines[3:]}
        assert ranks == {"ed": 1.5, "dtw": 1.5}

    def test_single_classifier_is_an_error(self, results_file, capsys):
        assert run_cli(
            "cd", "--results", str(results_file), "--classifiers", "ed"
        ) == 1
        assert "error:" in capsys.readouterr().err

    def test_repeat_invocations_are_byte_identical(self, results_file, tmp_path):
        a, b = tmp_path / "cd_a.csv", tmp_path / "cd_b.csv"
        run_cli("cd", "--results", str(results_file), "--output", str(a))
        run_cli("cd", "--results", str(results_file), "--output", str(b))
        assert a.read_bytes() == b.read_bytes()
