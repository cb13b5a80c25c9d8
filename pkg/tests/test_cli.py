import pytest

from impure_s5.cli import main, run


def test_eval_on_exported_model(tmp_path):
    path = tmp_path / "ck.smc"
    code, out = run(["corpus", "export", "c_K", "-o", str(path)])
    assert code == 0 and path.exists()
    code, out = run(["eval", "-m", str(path), "-X", "v_b0,v_a0", "-f", "K[a] p_b"])
    assert (code, out.strip()) == (0, "F")
    code, out = run(["eval", "-m", str(path), "-X", "@Y", "-f", "K[a] p_c"])
    assert (code, out.strip()) == (0, "T")


def test_eval_corpus_name_and_valuation():
    code, out = run(["eval", "-m", "xmas", "--valuation", "010", "-X", "@Z_l", "-f", "p_b"])
    assert (code, out.strip()) == (0, "U")
    code, out = run(["eval", "-m", "xmas", "--valuation", "010", "-X", "@U_l", "-f", "p_b"])
    assert (code, out.strip()) == (0, "T")


def test_machine_format():
    code, out = run(["--format", "machine", "eval", "-m", "b_dead_edge", "-X", "@U",
                     "-f", "K[a] p_b"])
    assert code == 0
    assert "value=U" in out.splitlines()


def test_valid():
    code, out = run(["valid", "-m", "c_K", "-f", "~(K[a] (p_c -> p_b) -> (K[a] p_c -> K[a] p_b))"])
    assert code == 0 and out.startswith("VALID")
    code, out = run(["valid", "-m", "c_K", "-f", "(K[a] (p_c -> p_b) -> (K[a] p_c -> K[a] p_b))"])
    assert code == 1 and "false at" in out


def test_countermodel():
    code, out = run(["countermodel", "-f", "(K[a] (p_c -> p_b) -> (K[a] p_c -> K[a] p_b))",
                     "--agents", "a,b,c", "--max-verts", "2", "--vars", "1"])
    assert code == 1 and out.startswith("FOUND") and "facet" in out
    code, out = run(["countermodel", "-f", "(K[a] p_b -> p_b)"])
    assert (code, out.strip()) == (0, "NONE")


def test_defcons(monkeypatch):
    code, out = run(["defcons", "--gamma", "K[a] p_c;p_b", "--psi", "K[a] p_b"])
    assert code == 0 and out.startswith("PROVEN")
    code, out = run(["defcons", "--gamma", "p_a", "--psi", "p_b"])
    assert code == 1 and out.startswith("REFUTED")
    monkeypatch.setenv("SE_PROVER_STEPS", "1")
    code, out = run(["defcons", "--gamma", "K[a] (K[b] p_c & p_b)", "--psi", "K[a] K[b] p_b"])
    assert code == 1 and out.startswith("UNKNOWN")
    monkeypatch.setenv("SE_PROVER_STEPS", "many")
    code, out = run(["defcons", "--gamma", "p_a", "--psi", "p_a"])
    assert code == 2 and "SE_PROVER_STEPS" in out


def test_check(tmp_path):
    good = tmp_path / "good.der"
    code, _ = run(["corpus", "derivation", "lemma_4_12", "-o", str(good)])
    assert code == 0
    code, out = run(["check", str(good), "--require-proven-provisos"])
    assert code == 0 and out.startswith("ACCEPTED")
    bad = tmp_path / "bad.der"
    run(["corpus", "derivation", "unrestricted_mp", "-o", str(bad)])
    code, out = run(["--format", "machine", "check", str(bad)])
    assert code == 1
    assert "verdict=REJECTED" in out and "line=3" in out


def test_demo():
    code, out = run(["demo", "lemma_4_2"])
    assert code == 0 and out.rstrip().endswith("PASS")
    code, out = run(["demo", "nonsense"])
    assert code == 2


@pytest.mark.parametrize("argv", [
    [],
    ["eval", "-m", "c_K", "-X", "@nowhere", "-f", "p_a"],
    ["eval", "-m", "c_K", "-X", "v_b0,v_b1", "-f", "p_a"],
    ["eval", "-m", "c_K", "-X", "@X", "-f", "(p_a &"],
    ["eval", "-m", "/no/such/file", "-X", "a", "-f", "p_a"],
    ["eval", "-m", "c_K", "--valuation", "1", "-X", "@X", "-f", "p_a"],
    ["check", "/no/such/file"],
    ["demo"],
    ["corpus", "export", "nope"],
])
def test_usage_errors_exit_2(argv):
    code, out = run(argv)
    assert code == 2
    if argv:
        assert out.startswith("error:")


def test_main_writes_streams(capsys):
    assert main(["corpus", "list"]) == 0
    assert "xmas" in capsys.readouterr().out
    assert main(["eval", "-m", "c_K", "-X", "@nope", "-f", "p_a"]) == 2
    assert "unknown landmark" in capsys.readouterr().err
