import random

from sdnkit.cli import main
from sdnkit.codec import read_container

from oracles import random_tree, relabel_shuffle


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_encode_decode_roundtrip(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("1 2 3 4\n")
    container = tmp_path / "out.sdn"
    code, out, _ = run_cli(capsys, "encode", str(src), "-o", str(container))
    assert code == 0
    assert "k=4" in out
    with open(container, "rb") as f:
        seq = read_container(f)
    assert seq.values() == [1, 2, 3, 4]
    # payload is the concatenation 101 11010 11011 1110100
    want_bits = "101" + "11010" + "11011" + "1110100"
    got_bits = "".join(str(seq.bits.get(i)) for i in range(seq.write_cursor))
    assert got_bits == want_bits

    code, out, _ = run_cli(capsys, "decode", str(container))
    assert code == 0
    assert out.split() == ["1", "2", "3", "4"]


def test_encode_empty_input(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("")
    container = tmp_path / "out.sdn"
    code, out, _ = run_cli(capsys, "encode", str(src), "-o", str(container))
    assert code == 0 and "N=0 k=0" in out


def test_encode_malformed_integer(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("12 34\n 5x6\n")
    code, _, err = run_cli(capsys, "encode", str(src), "-o", str(tmp_path / "o"))
    assert code == 2
    assert "line 2" in err and "column 2" in err


def test_sort_command(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("6 9 2 2 0")
    raw = tmp_path / "raw.sdn"
    run_cli(capsys, "encode", str(src), "-o", str(raw))
    out_c = tmp_path / "sorted.sdn"
    code, _, _ = run_cli(capsys, "sort", str(raw), "-o", str(out_c))
    assert code == 0
    code, out, _ = run_cli(capsys, "decode", str(out_c))
    assert out.split() == ["0", "2", "2", "6", "9"]


def test_rank_commands(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("6 9 2 2 0")
    raw = tmp_path / "raw.sdn"
    run_cli(capsys, "encode", str(src), "-o", str(raw))
    code, out, _ = run_cli(capsys, "dense-rank", str(raw), "0", "1", "2", "3", "4")
    assert code == 0 and out.split() == ["2", "3", "1", "1", "0"]
    code, out, _ = run_cli(capsys, "rank", str(raw))
    assert code == 0 and out.split() == ["3", "4", "1", "1", "0"]


def test_rank_query_out_of_range(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("1 2")
    raw = tmp_path / "raw.sdn"
    run_cli(capsys, "encode", str(src), "-o", str(raw))
    code, _, err = run_cli(capsys, "rank", str(raw), "5")
    assert code == 2 and "out of range" in err


def test_bad_container(tmp_path, capsys):
    bad = tmp_path / "bad.sdn"
    bad.write_bytes(b"XXXX" + b"\x00" * 30)
    code, _, err = run_cli(capsys, "sort", str(bad), "-o", str(tmp_path / "o"))
    assert code == 2 and "magic" in err


def test_tree_iso_command(tmp_path, capsys):
    a = tmp_path / "a.tree"
    b = tmp_path / "b.tree"
    a.write_text("4\n0 1\n1 2\n2 3\n")
    b.write_text("4\n0 1\n0 2\n0 3\n")
    code, out, _ = run_cli(capsys, "tree-iso", str(a), str(a))
    assert code == 0 and out.strip() == "isomorphic"
    code, out, _ = run_cli(capsys, "tree-iso", str(a), str(b))
    assert code == 1 and out.strip() == "not-isomorphic"


def test_tree_iso_rooted_flag(tmp_path, capsys):
    a = tmp_path / "a.tree"
    b = tmp_path / "b.tree"
    a.write_text("3\n0 1\n1 2\nroot 0\n")
    b.write_text("3\n0 1\n1 2\nroot 1\n")
    code, out, _ = run_cli(capsys, "tree-iso", "--rooted", str(a), str(b))
    assert code == 1
    code, _, err = run_cli(capsys, "tree-iso", "--rooted", str(a), str(tmp_path / "c.tree"))
    assert code == 2


def test_tree_iso_colored(tmp_path, capsys):
    a = tmp_path / "a.tree"
    b = tmp_path / "b.tree"
    a.write_text("3\n0 1\n0 2\n1 0 0\n")
    b.write_text("3\n0 1\n0 2\n1 0 2\n")
    code, out, _ = run_cli(capsys, "tree-iso", "--colored", str(a), str(a))
    assert code == 0
    code, out, _ = run_cli(capsys, "tree-iso", "--colored", str(a), str(b))
    assert code == 1


def test_tree_iso_random_relabeled(tmp_path, capsys):
    rng = random.Random(83)
    for i in range(10):
        n = rng.randrange(2, 60)
        edges = random_tree(n, rng)
        edges2, _, _ = relabel_shuffle(n, edges, rng)
        a = tmp_path / f"a{i}.tree"
        b = tmp_path / f"b{i}.tree"
        a.write_text(f"{n}\n" + "".join(f"{u} {v}\n" for u, v in edges))
        b.write_text(f"{n}\n" + "".join(f"{u} {v}\n" for u, v in edges2))
        code, _, _ = run_cli(capsys, "tree-iso", str(a), str(b))
        assert code == 0


def test_bench_rows(capsys):
    code, out, _ = run_cli(
        capsys,
        "bench",
        "--suite",
        "sort",
        "--sizes",
        "4096",
        "8192",
        "16384",
        "--seed",
        "3",
        "--runs",
        "1",
    )
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert lines[0] == "operation,N_or_n,k,wall_ns,peak_aux_bits,result"
    assert len(lines) == 1 + 3
    ratios = [l for l in out.splitlines() if l.startswith("# ratio")]
    assert len(ratios) == 2


def test_bench_iso_suite(capsys):
    code, out, _ = run_cli(
        capsys, "bench", "--suite", "iso", "--sizes", "64", "128", "--runs", "1"
    )
    assert code == 0
    rows = [l for l in out.splitlines() if l.startswith("iso,")]
    assert len(rows) == 2
    assert all(r.endswith("isomorphic") for r in rows)
