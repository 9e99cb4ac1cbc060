import subprocess
import sys

from clustertopics.bench import bench_scaling, write_csv


def test_rows_and_csv_format(tmp_path):
    rows = bench_scaling(
        "n", [200, 400], algorithm="km", repetitions=2, iterations=3,
        base={"n": 200, "m": 8, "k": 3},
    )
    assert [r["size"] for r in rows] == [200, 400]
    assert all(r["median_seconds"] > 0 for r in rows)
    path = tmp_path / "bench.csv"
    write_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "axis,size,algorithm,median_seconds,reps"
    assert lines[1].startswith("n,200,km,")


def test_k_equals_one_all_algorithms():
    for algorithm in ("km", "sk", "kd", "gmm"):
        rows = bench_scaling(
            "n", [150], algorithm=algorithm, repetitions=1, iterations=2,
            base={"n": 150, "m": 6, "k": 1},
        )
        assert rows[0]["median_seconds"] > 0


def test_cli(tmp_path):
    out = tmp_path / "b.csv"
    result = subprocess.run(
        [sys.executable, "-m", "clustertopics.bench", "--axis", "m",
         "--sizes", "6,12", "--algorithm", "gmm", "--reps", "1",
         "--iterations", "2", "--n", "120", "--k", "2", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    assert out.read_text().count("\n") == 3
