# tests/test_cli.py

import json
import math
import numpy as np
import pytest
from click.testing import CliRunner

from app.config.tolerances import DEFAULT_TOLERANCES, REPORT_SCHEMA
from app.main import cli
from app.schemas.report import Report
from app.services.matrix_io_service import MatrixIOService
from app.services.projection_pair_service import canonical_cell

runner = CliRunner()

HALF = 0.5 * np.ones((2, 2))


def invoke(*args):
    result = runner.invoke(cli, [str(a) for a in args])
    document = json.loads(result.stdout) if result.stdout.strip() else None
    return result, document


@pytest.fixture
def write_matrix(tmp_path):
    def _write(name, M):
        path = tmp_path / f"{name}.json"
        MatrixIOService.save_matrix(str(path), np.asarray(M, dtype=np.complex128))
        return str(path)
    return _write


def test_decompose_corners(write_matrix):
    """diag(1,0) consigo misma: m11 = m00 = 1"""
    path = write_matrix("P", np.diag([1, 0]))
    result, document = invoke("decompose", path, path)
    assert result.exit_code == 0
    decomposition = document["payload"]["decomposition"]
    assert (decomposition["m11"], decomposition["m00"]) == (1, 1)
    assert document["schema"] == REPORT_SCHEMA
    assert document["exit_code"] == 0
    assert set(document["inputs"]) == {path}


def test_decompose_micro_instance(write_matrix):
    """diag(1,0) frente a ½ unos: un ángulo π/2"""
    result, document = invoke("decompose", write_matrix("P", np.diag([1, 0])), write_matrix("Q", HALF))
    assert result.exit_code == 0
    assert document["payload"]["decomposition"]["angles"] == [pytest.approx(math.pi / 2)]
    assert document["flags"]["decomposition_verified"]
    assert document["residuals"]["verification"] < 1e-12


def test_decompose_reports_near_degenerate_cell(write_matrix):
    """λ = 1 - 5e-8 se clasifica como esquina; el Report lo señala y el residuo explica el código 1"""
    P, Q = canonical_cell(2 * math.asin(1 - 5e-8))
    result, document = invoke("decompose", write_matrix("P", P), write_matrix("Q", Q))
    assert result.exit_code == 1
    decomposition = document["payload"]["decomposition"]
    assert (decomposition["m10"], decomposition["m01"]) == (1, 1)
    assert len(decomposition["near_degenerate"]) == 2
    assert not document["flags"]["decomposition_verified"]
    assert document["residuals"]["verification"] > DEFAULT_TOLERANCES.tol_report


def test_decompose_non_projection(write_matrix):
    """Una matriz que no es proyección sale con código 3"""
    result, document = invoke("decompose", write_matrix("P", np.diag([1, 0])), write_matrix("Q", [[1, 1], [0, 0]]))
    assert result.exit_code == 3
    assert document["flags"] == {"parsed": True, "validated": False}
    assert document["error"].startswith("ValidationFailed")


def test_decompose_unreadable_input(tmp_path, write_matrix):
    """JSON roto o extensión no soportada: código 2"""
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    text_file = tmp_path / "P.txt"
    text_file.write_text("1 0\n0 0\n")
    good = write_matrix("P", np.diag([1, 0]))

    result, document = invoke("decompose", str(broken), good)
    assert result.exit_code == 2
    assert document["flags"] == {"parsed": False}

    result, _ = invoke("decompose", str(text_file), good)
    assert result.exit_code == 2


def test_decompose_inconsistent_data(tmp_path, write_matrix):
    """MatrixFile con data de longitud incorrecta: código 2"""
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rows": 2, "cols": 2, "data": [[1, 0]]}))
    result, _ = invoke("decompose", str(bad), write_matrix("Q", np.diag([1, 0])))
    assert result.exit_code == 2


@pytest.mark.parametrize("P,Q,expected", [
    (np.diag([1, 1, 0]), np.diag([1, 0, 0]), 1),
    (np.diag([1, 0]), np.diag([1, 0]), 0),
    (np.diag([1, 0]), HALF, 0),
])
def test_index(write_matrix, P, Q, expected):
    """Índice por las tres rutas"""
    result, document = invoke("index", write_matrix("P", P), write_matrix("Q", Q), "--k-max", 2)
    assert result.exit_code == 0
    certificate = document["payload"]["certificate"]
    assert certificate["index_by_rank"] == expected
    assert certificate["kernel_dim"] - certificate["cokernel_dim"] == expected
    assert [r["integer"] for r in certificate["index_by_pairing"]] == [expected] * 3
    assert document["flags"]["agree"]


def test_gen_then_index(tmp_path):
    """Par generado con m10=2, m01=1 y semilla fija: índice 1"""
    prefix = str(tmp_path / "g_")
    result, document = invoke("gen", "--m10", 2, "--m01", 1, "--point", "1.2:2", "--seed", 7, "--out-prefix", prefix)
    assert result.exit_code == 0
    assert document["payload"]["truth"]["expected_index"] == 1

    result, document = invoke("index", prefix + "P.json", prefix + "Q.json")
    assert result.exit_code == 0
    assert document["payload"]["certificate"]["index_by_rank"] == 1


def test_gen_rank_one(tmp_path):
    """{m10=1}: P de rango 1 y Q = 0"""
    prefix = str(tmp_path / "r_")
    result, _ = invoke("gen", "--m10", 1, "--seed", 1, "--out-prefix", prefix)
    assert result.exit_code == 0
    P = MatrixIOService.load_matrix(prefix + "P.json")
    Q = MatrixIOService.load_matrix(prefix + "Q.json")
    assert P.shape == (1, 1)
    assert P[0, 0].real == pytest.approx(1.0)
    assert Q[0, 0] == pytest.approx(0.0, abs=1e-15)
    truth = json.loads((tmp_path / "r_truth.json").read_text())
    assert truth["spec"]["m10"] == 1
    assert truth["seed"] == 1


def test_gen_single_cell(tmp_path):
    """{(π/2, 1)}: par 2x2 y autovalores ±0.7071 registrados"""
    prefix = str(tmp_path / "c_")
    result, document = invoke("gen", "--point", f"{math.pi / 2}", "--seed", 5, "--out-prefix", prefix)
    assert result.exit_code == 0
    assert document["payload"]["truth"]["difference_eigenvalues"] == pytest.approx([-0.70710678, 0.70710678])
    assert MatrixIOService.load_matrix(prefix + "P.json").shape == (2, 2)


def test_gen_is_deterministic(tmp_path):
    """Dos invocaciones iguales escriben archivos idénticos"""
    for folder in ("a", "b"):
        (tmp_path / folder).mkdir()
        invoke("gen", "--m11", 1, "--m01", 2, "--point", "0.5", "--point", "2.0:3", "--seed", 42,
               "--out-prefix", str(tmp_path / folder) + "/")
    for name in ("P.json", "Q.json", "truth.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_gen_random_spec_from_seed(tmp_path):
    """Sin spec se usa una spec aleatoria sembrada"""
    prefix = str(tmp_path / "s_")
    result, document = invoke("gen", "--seed", 3, "--out-prefix", prefix)
    assert result.exit_code == 0
    truth = document["payload"]["truth"]
    assert truth["expected_index"] == truth["spec"]["m10"] - truth["spec"]["m01"]
    assert len(truth["difference_eigenvalues"]) == MatrixIOService.load_matrix(prefix + "P.json").shape[0]


def test_gen_from_spec_file(tmp_path):
    """RepSpec leída de archivo"""
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({"m11": 1, "m00": 0, "m10": 2, "m01": 1, "points": [{"theta": 1.0, "mult": 1}]}))
    prefix = str(tmp_path / "f_")
    result, document = invoke("gen", "--spec", str(spec_path), "--seed", 2, "--out-prefix", prefix)
    assert result.exit_code == 0
    assert document["payload"]["truth"]["expected_index"] == 1
    assert str(spec_path) in document["inputs"]


def test_word_iso():
    """iso "V W1" = "U2" """
    result, document = invoke("word", "iso", "V W1")
    assert result.exit_code == 0
    assert document["payload"]["image"]["text"] == "U2"
    assert document["payload"]["image"]["kind"] == "free_product"
    assert document["flags"]["round_trip"]


def test_word_iso_from_free_product():
    """iso "U1 U2" = W1"""
    result, document = invoke("word", "iso", "U1 U2")
    assert result.exit_code == 0
    assert document["payload"]["image"]["text"] == "W1"


def test_word_iso_image_may_exceed_cap():
    """W1^6000 está dentro del tope; su imagen de 12000 letras no es un error de entrada"""
    result, document = invoke("word", "iso", "W1^6000")
    assert result.exit_code == 0
    assert len(document["payload"]["image"]["word"]["letters"]) == 12_000
    assert document["flags"]["round_trip"]


def test_word_multiply():
    """U1 · U1 = e y arity inferida de ambos operandos"""
    result, document = invoke("word", "multiply", "U1", "U1")
    assert result.exit_code == 0
    assert document["payload"]["result"]["text"] == "e"

    result, document = invoke("word", "multiply", "V W1", "W2^-1")
    assert result.exit_code == 0
    assert document["payload"]["result"]["text"] == "V W1 W2^-1"
    assert document["payload"]["result"]["n"] == 3


def test_word_parse_error():
    """Tokens inválidos: código 2"""
    result, document = invoke("word", "multiply", "U1", "X7")
    assert result.exit_code == 2
    assert document["error"].startswith("WordParseError")


def test_word_eval(write_matrix):
    """eval U1 con P1 = ½ unos da [[0,1],[1,0]]"""
    result, document = invoke("word", "eval", "U1", "-p", write_matrix("P1", HALF))
    assert result.exit_code == 0
    matrix = document["payload"]["matrix"]
    assert (matrix["rows"], matrix["cols"]) == (2, 2)
    values = [complex(re, im) for re, im in matrix["data"]]
    assert values == [pytest.approx(v, abs=1e-15) for v in (0, 1, 1, 0)]


def test_word_eval_crossed(write_matrix):
    """eval de un elemento cruzado sobre dos proyecciones"""
    p1 = write_matrix("P1", np.diag([1, 0]))
    p2 = write_matrix("P2", HALF)
    result, document = invoke("word", "eval", "V W1^-2", "-p", p1, "-p", p2)
    assert result.exit_code == 0
    assert document["flags"]["unitary"]


def test_word_eval_wrong_arity(write_matrix):
    """W2 sobre dos proyecciones: código 2"""
    p1 = write_matrix("P1", np.diag([1, 0]))
    result, _ = invoke("word", "eval", "W2", "-p", p1, "-p", p1)
    assert result.exit_code == 2


def test_build_rep(tmp_path):
    """build-rep verifica las relaciones y escribe P1, P2 y V"""
    prefix = str(tmp_path / "rep_")
    result, document = invoke("build-rep", "--m11", 1, "--m10", 1, "--point", f"{math.pi / 2}", "--out-prefix", prefix)
    assert result.exit_code == 0
    assert document["flags"]["verified"]
    assert document["payload"]["dimension"] == 4
    V = MatrixIOService.load_matrix(prefix + "V.json")
    np.testing.assert_array_equal(V @ V, np.eye(4))


@pytest.mark.parametrize("point,code", [("4.0", 3), ("abc", 2), ("1.0:0", 2)])
def test_build_rep_invalid_points(point, code):
    """θ fuera de rango: 3; punto ilegible: 2"""
    result, _ = invoke("build-rep", "--point", point)
    assert result.exit_code == code


def test_check_generated_pair(tmp_path):
    """Un par generado pasa toda la batería"""
    prefix = str(tmp_path / "k_")
    invoke("gen", "--m11", 1, "--m10", 2, "--m01", 1, "--point", f"{math.pi / 2}", "--point", "1.0:2",
           "--seed", 11, "--out-prefix", prefix)
    result, document = invoke("check", prefix + "P.json", prefix + "Q.json")
    assert result.exit_code == 0, document["payload"]
    names = [item["name"] for item in document["payload"]["checks"]]
    assert "module_axioms" in names and "index_chain" in names


def test_check_corrupted_pair(tmp_path, write_matrix):
    """Q con una entrada perturbada en 1e-2: salida no nula"""
    prefix = str(tmp_path / "x_")
    invoke("gen", "--m10", 1, "--point", "1.0", "--seed", 4, "--out-prefix", prefix)
    Q = MatrixIOService.load_matrix(prefix + "Q.json").copy()
    Q[0, 1] += 1e-2
    result, document = invoke("check", prefix + "P.json", write_matrix("Qbad", Q))
    assert result.exit_code == 3
    assert document["flags"]["projection_Q"] is False


def test_check_identity_pair(write_matrix):
    """P = Q = I: todo pasa trivialmente"""
    path = write_matrix("I", np.eye(3))
    result, document = invoke("check", path, path)
    assert result.exit_code == 0
    assert all(document["flags"].values())


def test_trace_powers(write_matrix):
    """Trazas impares nulas para la celda π/2"""
    result, document = invoke("trace-powers", write_matrix("P", np.diag([1, 0])), write_matrix("Q", HALF))
    assert result.exit_code == 0
    stability = document["payload"]["stability"]
    assert stability["traces"] == [pytest.approx(0.0, abs=1e-14)] * 5
    assert document["payload"]["powers"] == [1, 3, 5, 7, 9]


def test_out_flag_writes_report(tmp_path, write_matrix):
    """--out deja una copia del Report en disco"""
    out = tmp_path / "report.json"
    path = write_matrix("P", np.diag([1, 0]))
    result, document = invoke("index", path, path, "--out", str(out))
    assert result.exit_code == 0
    assert json.loads(out.read_text()) == document


def test_global_tolerances_are_echoed(write_matrix):
    """Las tolerancias globales llegan al Report"""
    path = write_matrix("P", np.diag([1, 0]))
    result, document = invoke("--tol-cluster", "1e-6", "decompose", path, path)
    assert result.exit_code == 0
    assert document["tolerances"]["tol_cluster"] == 1e-6


def test_invalid_global_tolerances(write_matrix):
    """tol_validate > tol_report es un error de uso"""
    path = write_matrix("P", np.diag([1, 0]))
    result = runner.invoke(cli, ["--tol-validate", "1e-3", "--tol-report", "1e-6", "decompose", path, path])
    assert result.exit_code == 2


def test_sweep_small_corpus():
    """Corpus pequeño sin fallos"""
    result, document = invoke("sweep", "--count", 3, "--seed", 100, "--max-dim", 12)
    assert result.exit_code == 0, document["payload"]["failures"]
    payload = document["payload"]
    assert payload["failures"] == []
    assert payload["instances"] == 3 + 1 + 3
    assert "decomposition_round_trip" in payload["checks"]
    assert "relation_image" in payload["checks"]


def test_report_exit_codes():
    """El código de salida es función total de los flags"""
    def code(flags):
        return Report(command="t", tolerances=DEFAULT_TOLERANCES, flags=flags).exit_code

    assert code({"parsed": False}) == 2
    assert code({"parsed": True, "validated": False}) == 3
    assert code({"parsed": True, "validated": True, "agree": False}) == 1
    assert code({"parsed": True, "validated": True, "agree": True}) == 0
