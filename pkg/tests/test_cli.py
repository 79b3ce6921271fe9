import json

import numpy as np
import pytest

from g2algebra.canonical import g2_block
from g2algebra.cli import main
from g2algebra.io import MatrixDocument, read_documents, write_documents
from g2algebra.splitting import is_in_g2, phi_contract, wedge2


@pytest.fixture
def write(tmp_path):
    def _write(name, *docs):
        path = tmp_path / name
        write_documents(list(docs), path)
        return str(path)
    return _write


def test_identities(capsys):
    assert main(["identities", "--trials", "0"]) == 0
    assert main(["identities", "--trials", "20", "--seed", "42"]) == 0
    assert main(["identities", "--trials", "0", "--corrupt-phi", "1", "2", "3"]) == 1
    assert "witness=" in capsys.readouterr().out


def test_random_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["random", "g2", "--seed", "7", "--count", "3", "--output", str(a)]) == 0
    assert main(["random", "g2", "--seed", "7", "--count", "3", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert all(is_in_g2(d.data) for d in read_documents(a))
    assert main(["random", "g2", "--count", "0"]) == 2


def test_canonical_displayed_matrix(write, tmp_path, capsys):
    path = write("x.json", MatrixDocument("skew7", g2_block(2.0, 1.0)))
    out = tmp_path / "out.json"
    assert main(["canonical", path, "--output", str(out)]) == 0
    text = capsys.readouterr().out
    assert "lambda = 2\n" in text and "nu = 1\n" in text and "mu = 1\n" in text and "rank class 6" in text
    kinds = [d.kind for d in read_documents(out)]
    assert kinds == ["frame7", "skew7"]


def test_canonical_zero_and_so7(write, E, capsys):
    assert main(["canonical", write("z.json", MatrixDocument("skew7", np.zeros((7, 7))))]) == 0
    assert "type: zero" in capsys.readouterr().out
    assert main(["canonical", "--mode", "so7", write("w.json", MatrixDocument("skew7", wedge2(E[0], E[1])))]) == 0
    text = capsys.readouterr().out
    assert "lambda = 1\n" in text and "rank = 2" in text


def test_canonical_precondition(write, E, capsys):
    assert main(["canonical", write("p.json", MatrixDocument("skew7", phi_contract(E[0])))]) == 2
    assert "membership residual" in capsys.readouterr().out
    path = write("v.json", MatrixDocument("vector7", E[0]))
    assert main(["canonical", path]) == 2


def test_classify(write, E, capsys):
    assert main(["classify", write("a.json", MatrixDocument("skew7", phi_contract(E[0])))]) == 0
    assert "rank = 6" in capsys.readouterr().out
    assert main(["classify", write("b.json", MatrixDocument("skew7", wedge2(E[0], E[1])))]) == 0
    assert "mixed type" in capsys.readouterr().out
    assert main(["classify", write("c.json", MatrixDocument("skew7", g2_block(1.0, 0.0)))]) == 0
    assert "kernel contains associative plane = True" in capsys.readouterr().out


def test_classify_marginal(write):
    from g2algebra.canonical import so7_block
    assert main(["classify", write("m.json", MatrixDocument("skew7", so7_block(1.0, 1.0, 1e-9)))]) == 3


def test_theta(write, E, capsys):
    p = MatrixDocument("plane3", E[:3])
    q = MatrixDocument("plane3", np.array([-E[2], E[4], E[5]]))
    assert main(["theta", write("p.json", p)]) == 0
    assert main(["theta", write("pq.json", p, q)]) == 0
    assert "dim Theta(P) cap Theta(Q) = 1" in capsys.readouterr().out
    assert main(["theta", write("pp.json", p, p)]) == 0
    assert "= 6" in capsys.readouterr().out
    assert main(["theta", write("n.json", MatrixDocument("plane3", E[[0, 1, 3]]))]) == 2


def test_random_planes_feed_theta(tmp_path):
    path = tmp_path / "planes.json"
    assert main(["random", "assoc-plane", "--seed", "2", "--count", "2", "--format", "hex",
                 "--output", str(path)]) == 0
    assert main(["theta", str(path)]) == 0
