import io
import subprocess
import sys
import threading

from gqswitch.cli import main
from gqswitch.graphcore import Graph, graph6_decode, graph6_encode
from gqswitch.isocanon import are_isomorphic, canonical_form
from gqswitch.specalg import check_srg
from gqswitch.store import GraphStore
from tests.conftest import H1_STRING


def run_cli(args, stdin_bytes=b"", capsys=None):
    """Invoke the CLI in-process; returns (exit_code, stdout_text)."""
    old_stdin = sys.stdin
    sys.stdin = io.TextIOWrapper(io.BytesIO(stdin_bytes), encoding="ascii")
    try:
        code = main(args)
    finally:
        sys.stdin = old_stdin
    out = capsys.readouterr().out if capsys else ""
    return code, out


def test_construct_wq(capsys):
    code, out = run_cli(["construct", "wq", "2"], capsys=capsys)
    assert code == 0
    g = graph6_decode(out.strip())
    assert check_srg(g).as_tuple() == (15, 6, 1, 3)


def test_construct_affine_dump(capsys):
    code, out = run_cli(["construct", "affine", "3"], capsys=capsys)
    assert code == 0
    assert "9 points, 12 lines" in out
    assert sum(1 for line in out.splitlines() if line.startswith("class")) == 12


def test_construct_bad_q(capsys):
    code, _ = run_cli(["construct", "wq", "6"], capsys=capsys)
    assert code == 2


def test_analyze_w3(w3, capsys):
    code, out = run_cli(["analyze"], stdin_bytes=graph6_encode(w3) + b"\n", capsys=capsys)
    assert code == 0
    assert "strongly regular: (40,12,2,4)" in out
    assert "regular points (40)" in out
    assert "affine plane of order 3" in out


def test_analyze_h1_cover(capsys):
    code, out = run_cli(["analyze"], stdin_bytes=H1_STRING + b"\n", capsys=capsys)
    assert code == 0
    assert "antipodal 3-cover of K9" in out
    assert "{8,6,1;1,3,8}" in out


def test_analyze_dump_format(w2, capsys):
    code, out = run_cli(["analyze", "--dump"], stdin_bytes=graph6_encode(w2) + b"\n", capsys=capsys)
    assert code == 0
    assert sum(1 for l in out.splitlines() if l.strip().startswith("fibre ")) == 15 * 4
    assert "phi: 0 1 2 3" in out
    assert any(l.strip().startswith("block 0 ") for l in out.splitlines())


def test_switch_all_sweeps_w2(w2, tmp_path, capsys):
    db = str(tmp_path / "db")
    code, out = run_cli(
        ["switch", "-v", "0", "--all", "--store", db],
        stdin_bytes=graph6_encode(w2) + b"\n",
        capsys=capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1  # all 24 switches of W(2) are one class
    assert are_isomorphic(graph6_decode(lines[0]), w2)
    assert len(GraphStore(db)) == 1


def test_analyze_petersen_not_pseudo_gq(petersen, capsys):
    code, out = run_cli(["analyze"], stdin_bytes=graph6_encode(petersen) + b"\n", capsys=capsys)
    assert code == 0
    assert "not pseudo-GQ" in out


def test_analyze_garbage_is_bad_input(capsys):
    code, _ = run_cli(["analyze"], stdin_bytes=b"!!!not graph6\n", capsys=capsys)
    assert code == 2


def test_switch_identity_sigma(w3, capsys):
    sigma = " ".join(str(i) for i in range(9))
    code, out = run_cli(
        ["switch", "-v", "0", "--sigma", sigma], stdin_bytes=graph6_encode(w3) + b"\n", capsys=capsys
    )
    assert code == 0
    assert graph6_decode(out.strip()) == w3


def test_switch_random_seeded_reproducible(w3, capsys):
    args = ["switch", "-v", "0", "--random", "5", "--seed", "42"]
    code1, out1 = run_cli(args, stdin_bytes=graph6_encode(w3) + b"\n", capsys=capsys)
    code2, out2 = run_cli(args, stdin_bytes=graph6_encode(w3) + b"\n", capsys=capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    for line in out1.strip().splitlines():
        assert check_srg(graph6_decode(line)).as_tuple() == (40, 12, 2, 4)


def test_switch_dedupe(w3, capsys):
    args = ["switch", "-v", "0", "--random", "30", "--seed", "1", "--dedupe"]
    code, out = run_cli(args, stdin_bytes=graph6_encode(w3) + b"\n", capsys=capsys)
    assert code == 0
    lines = out.strip().splitlines()
    forms = {canonical_form(graph6_decode(l)) for l in lines}
    assert len(forms) == len(lines)


def test_switch_requires_regular_point(petersen, capsys):
    code, _ = run_cli(
        ["switch", "-v", "0", "--sigma", "0 1 2"], stdin_bytes=graph6_encode(petersen) + b"\n", capsys=capsys
    )
    assert code == 1


def test_switch_bad_sigma(w3, capsys):
    code, _ = run_cli(
        ["switch", "-v", "0", "--sigma", "0 0 1 2 3 4 5 6 7"],
        stdin_bytes=graph6_encode(w3) + b"\n",
        capsys=capsys,
    )
    assert code == 2


def test_spreads_and_cover_roundtrip(w3, capsys):
    from gqswitch.graphcore import induced_subgraph
    from gqswitch.switchkit import add_spread, antipodal_classes

    far = [u for u in range(40) if u != 0 and not w3.has_edge(0, u)]
    cover, _ = induced_subgraph(w3, far)
    srg = add_spread(cover, antipodal_classes(cover))
    code, out = run_cli(["spreads", "-s", "2"], stdin_bytes=graph6_encode(srg) + b"\n", capsys=capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 200

    code, out = run_cli(
        ["cover", "remove", "--dedupe"], stdin_bytes=graph6_encode(srg) + b"\n", capsys=capsys
    )
    assert code == 0
    covers = [graph6_decode(l) for l in out.strip().splitlines()]
    assert len(covers) == 2
    assert any(are_isomorphic(c, cover) for c in covers)

    code, out = run_cli(["cover", "add"], stdin_bytes=graph6_encode(cover) + b"\n", capsys=capsys)
    assert code == 0
    assert are_isomorphic(graph6_decode(out.strip()), srg)


def test_store_insert_dedupe(tmp_path, w2, capsys):
    store = GraphStore(tmp_path / "db")
    assert store.insert(w2)
    assert not store.insert(w2)
    perm = list(range(15))
    perm[0], perm[1] = 1, 0
    assert not store.insert(w2.relabel(perm))
    assert len(store) == 1


def test_store_concurrent_inserts(tmp_path, w3_data):
    import random as _random

    from gqswitch.switchkit import switch_sigma

    rng = _random.Random(31)
    graphs = []
    for _ in range(12):
        s = list(range(9))
        rng.shuffle(s)
        graphs.append(switch_sigma(w3_data, tuple(s)))
    store = GraphStore(tmp_path / "db")
    errors = []

    def worker(gs):
        try:
            for g in gs:
                store.insert(g)
        except Exception as e:  # pragma: no cover
            errors.append(e)

    threads = [threading.Thread(target=worker, args=(graphs[i::3],)) for i in range(3)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    hashes = [e.canon_hash for e in store.entries()]
    assert len(hashes) == len(set(hashes))
    forms = {canonical_form(g) for g in graphs}
    assert len(hashes) == len(forms)


def test_store_cli_and_export_roundtrip(tmp_path, w2, w3, capsys):
    db = str(tmp_path / "db")
    lines = graph6_encode(w2) + b"\n" + graph6_encode(w3) + b"\n" + graph6_encode(w2) + b"\n"
    code, out = run_cli(["store", "insert", "--dir", db], stdin_bytes=lines, capsys=capsys)
    assert code == 0
    assert "inserted 2 new of 3" in out
    code, out = run_cli(["store", "list", "--dir", db], capsys=capsys)
    assert code == 0
    assert len(out.strip().splitlines()) == 2
    code, out = run_cli(["store", "export", "--dir", db], capsys=capsys)
    assert code == 0
    exported = [graph6_decode(l) for l in out.strip().splitlines()]
    assert exported[0] == w2 and exported[1] == w3


def test_store_rejects_non_srg(tmp_path, capsys):
    db = str(tmp_path / "db")
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    code, _ = run_cli(["store", "insert", "--dir", db], stdin_bytes=graph6_encode(path) + b"\n", capsys=capsys)
    assert code == 1


def test_console_script_installed():
    out = subprocess.run(["gqswitch", "construct", "wq", "2"], capture_output=True, text=True)
    assert out.returncode == 0
    g = graph6_decode(out.stdout.strip())
    assert g.n == 15
