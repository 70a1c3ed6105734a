import hashlib
import json
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import random_fn
from tropconv.main import main
from tropconv.models.files import DagFile, GraphFile, SetFunctionFile
from tropconv.models.graphs import ColoredDag
from tropconv.services.setfunction import MIN_SUM, SetFunction


def dump(fn, path):
    SetFunctionFile.from_set_function(fn).dump(path)
    return str(path)


@pytest.fixture
def pair(tmp_path):
    def build(n, bound=1000, inf_frac=0.0):
        f = dump(random_fn(n, bound=bound, inf_frac=inf_frac, seed=1), tmp_path / "f.json")
        g = dump(random_fn(n, bound=bound, inf_frac=inf_frac, seed=2), tmp_path / "g.json")
        return f, g
    return build


def test_identity_round_trip(tmp_path):
    g = dump(random_fn(4, bound=100, inf_frac=0.2, seed=3), tmp_path / "g.json")
    f = dump(MIN_SUM.identity(4), tmp_path / "f.json")
    out = tmp_path / "h.json"
    code = main(["convolve", "--semiring", "minsum", "--algo", "naive",
                 "--in-f", f, "--in-g", g, "--out", str(out)])
    assert code == 0
    assert out.read_bytes() == (tmp_path / "g.json").read_bytes()


def test_approx_strong_verified(pair, tmp_path, capsys):
    f, g = pair(8, bound=1 << 20)
    code = main(["convolve", "--semiring", "minsum", "--algo", "approx-strong", "--eps", "0.1",
                 "--in-f", f, "--in-g", g, "--out", str(tmp_path / "h.json"), "--verify"])
    assert code == 0
    assert "violations=0" in capsys.readouterr().out


def test_minmax_chunked_verified(pair, tmp_path):
    f, g = pair(9, inf_frac=0.1)
    code = main(["convolve", "--semiring", "minmax", "--algo", "minmax-chunked",
                 "--in-f", f, "--in-g", g, "--out", str(tmp_path / "h.json"), "--verify"])
    assert code == 0


def test_bounded_exact_verified(pair, tmp_path):
    f, g = pair(6, bound=50)
    code = main(["convolve", "--semiring", "maxsum", "--algo", "bounded",
                 "--in-f", f, "--in-g", g, "--out", str(tmp_path / "h.json"), "--verify"])
    assert code == 0


def test_violated_guarantee_exits_3(pair, tmp_path, monkeypatch):
    import tropconv.commands.convolve as convolve

    monkeypatch.setattr(convolve, "approx_minsum_weak",
                        lambda f, g, eps: SetFunction.constant(f.n, 0))
    f, g = pair(3, bound=100)
    code = main(["convolve", "--semiring", "minsum", "--algo", "approx-weak", "--eps", "1/2",
                 "--in-f", f, "--in-g", g, "--out", str(tmp_path / "h.json"), "--verify"])
    assert code == 3


@pytest.mark.parametrize("args", [
    ["--semiring", "minsum", "--algo", "fast"],
    ["--semiring", "minmax", "--algo", "bounded"],
    ["--semiring", "minsum", "--algo", "approx-simple"],
    ["--semiring", "minsum", "--algo", "approx-weak", "--eps", "2"],
])
def test_usage_errors_exit_1(pair, tmp_path, args):
    f, g = pair(2)
    assert main(["convolve", *args, "--in-f", f, "--in-g", g,
                 "--out", str(tmp_path / "h.json")]) == 1


def test_unknown_flag_exits_1():
    assert main(["convolve", "--nope"]) == 1


def test_mismatched_orders_exit_1(tmp_path):
    f = dump(random_fn(2), tmp_path / "f.json")
    g = dump(random_fn(3), tmp_path / "g.json")
    assert main(["convolve", "--semiring", "minsum", "--algo", "naive",
                 "--in-f", f, "--in-g", g, "--out", str(tmp_path / "h.json")]) == 1


def test_malformed_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 1, "values": [0, "oops"]}))
    code = main(["convolve", "--semiring", "minsum", "--algo", "naive",
                 "--in-f", str(bad), "--in-g", str(bad), "--out", str(tmp_path / "h.json")])
    assert code == 2
    assert "index 1" in capsys.readouterr().err


def test_coloring_triangle(tmp_path, capsys, triangle):
    path = tmp_path / "g.json"
    GraphFile.from_graph(triangle).dump(path)
    assert main(["coloring", "--graph", str(path), "-k", "3", "--witness"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "3"
    assert out[1] == "mode=exact eps=- vertices=3 k=3"
    assert sorted(out[2].split()[1:]) == ["1", "2", "3"]
    assert main(["coloring", "--graph", str(path), "-k", "2", "--exact"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "infeasible"


def test_coloring_approx(tmp_path, capsys, triangle):
    path = tmp_path / "g.json"
    GraphFile.from_graph(triangle).dump(path)
    assert main(["coloring", "--graph", str(path), "-k", "3", "--approx", "--eps", "0.1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert 3 <= Fraction(out[0]) <= Fraction(33, 10)
    assert out[1].startswith("mode=approx eps=1/10")
    assert main(["coloring", "--graph", str(path), "-k", "3", "--approx"]) == 1


def test_subtree(tmp_path, capsys):
    path = tmp_path / "d.json"
    DagFile.from_dag(ColoredDag(k=2, colors=[1, 2], edges=[(0, 1, 7)])).dump(path)
    assert main(["subtree", "--dag", str(path)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "7"


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["gen", "setfn", "--n", "5", "--dist", "bimodal:100", "--seed", "7",
                     "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["meta"]["seed"] == 7


def test_gen_uniform_table(tmp_path):
    out = tmp_path / "f.json"
    assert main(["gen", "setfn", "--n", "10", "--dist", "uniform:1024", "--seed", "7",
                 "--out", str(out)]) == 0
    values = SetFunctionFile.load(out).to_set_function().tolist()
    assert len(values) == 1024 and all(0 <= v <= 1024 for v in values)
    assert main(["gen", "setfn", "--n", "3", "--inf-frac", "1.0", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["values"] == ["inf"] * 8
    assert main(["gen", "setfn", "--n", "3", "--inf-frac", "1.5", "--out", str(out)]) == 1


GOLDEN_DIGEST = Path(__file__).parent / "data" / "gen_uniform_1024_n10_seed7.sha256"


def test_gen_uniform_table_digest(tmp_path):
    out = tmp_path / "f.json"
    assert main(["gen", "setfn", "--n", "10", "--dist", "uniform:1024", "--seed", "7",
                 "--out", str(out)]) == 0
    digest = hashlib.sha256(out.read_bytes()).hexdigest()
    if not GOLDEN_DIGEST.exists():
        GOLDEN_DIGEST.parent.mkdir(exist_ok=True)
        GOLDEN_DIGEST.write_text(digest + "\n")
        pytest.skip(f"recorded golden digest {digest}")
    assert digest == GOLDEN_DIGEST.read_text().strip()


def test_gen_graph_and_dag(tmp_path):
    graph, dag = tmp_path / "g.json", tmp_path / "d.json"
    assert main(["gen", "graph", "--n", "5", "--k", "3", "--out", str(graph)]) == 0
    assert main(["gen", "dag", "--n", "6", "--k", "3", "--out", str(dag)]) == 0
    assert GraphFile.load(graph).to_graph().n == 5
    assert DagFile.load(dag).to_dag().size == 6


def test_verify_equivalence(pair, tmp_path, capsys):
    f, g = pair(4, bound=30, inf_frac=0.1)
    out = tmp_path / "h.json"
    assert main(["verify-equivalence", "--in-f", f, "--in-g", g, "--out", str(out)]) == 0
    assert "0 mismatches" in capsys.readouterr().out
    assert out.exists()


def test_bench_appends_rows(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--suite", "crossover", "--n", "2..3", "--M", "64",
                 "--out", str(out)]) == 0
    assert main(["bench", "--suite", "crossover", "--n", "2", "--M", "64",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 6 + 3


def test_info_json(capsys):
    assert main(["info", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["service"] == "tropconv"
    assert "minsum" in report["algorithms"]["bounded"]
    assert report["settings"]["threads"] == 1


def test_invalid_environment_exits_1(monkeypatch):
    monkeypatch.setenv("TROPCONV_THREADS", "0")
    assert main(["info"]) == 1


def test_bench_oracle_sweep(tmp_path, capsys, monkeypatch):
    out = tmp_path / "sweep.csv"
    assert main(["bench", "--suite", "oracle-sweep", "--n", "2", "--eps", "1/2",
                 "--instances", "2", "--out", str(out)]) == 0
    assert "passed=2/2" in capsys.readouterr().out
    from tropconv.services.approx import SOLVERS

    monkeypatch.setitem(SOLVERS, "approx-simple", lambda f, g, eps: SetFunction.constant(f.n, 0))
    assert main(["bench", "--suite", "oracle-sweep", "--n", "2", "--eps", "1/2",
                 "--instances", "2", "--out", str(out)]) == 3
