import io
import json

import pytest

from qcoord.cli.main import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, run
from qcoord.core.config import settings
from qcoord.schemas.reports import CheckCase, CheckReport


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_det_success():
    code, out, _ = invoke("det", "--n", "2")
    assert code == EXIT_OK
    assert out.strip() == "t[1,1] t[2,2] - q t[1,2] t[2,1]"


def test_det_gl_is_d():
    code, out, _ = invoke("det", "--variant", "gl")
    assert code == EXIT_OK
    assert out.strip() == "D"


def test_nf_success():
    code, out, _ = invoke("nf", "t[2,2]*t[1,1]", "--n", "2")
    assert code == EXIT_OK
    assert out.strip() == "t[1,1] t[2,2] + (q^-1 - q) t[1,2] t[2,1]"


def test_nf_json_output():
    code, out, _ = invoke("nf", "t[1,2] t[1,1]", "--json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["schema"] == 1
    assert payload["value"] == "q^-1 t[1,1] t[1,2]"
    assert payload["terms"] == [
        {"monomial": "t[1,1] t[1,2]", "coefficient": "q^-1", "exponents": [1, 1, 0, 0], "dpower": 0}
    ]


def test_mul_success():
    code, out, _ = invoke("mul", "t[2,2]", "t[1,1]")
    assert code == EXIT_OK
    assert out.strip() == "t[1,1] t[2,2] + (q^-1 - q) t[1,2] t[2,1]"


def test_expand_success():
    code, out, _ = invoke("expand", "t[1,1]^4", "--ell", "3")
    assert code == EXIT_OK
    assert out.strip() == "t[1,1]: Tbar[1,1]"


def test_expand_json():
    code, out, _ = invoke("expand", "t[1,1]^4 + 2", "--ell", "3", "--json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["entries"] == [
        {"basis_key": "t[1,1]", "classical_coeff": "Tbar[1,1]"},
        {"basis_key": "1", "classical_coeff": "2"},
    ]


def test_phi_success():
    code, out, _ = invoke("phi", "t[1,1]^2 t[1,2]^2 t[2,1]^2 t[2,2]^2", "--ell", "3")
    assert code == EXIT_OK
    assert out.strip() == "1"


def test_nakayama_success():
    code, out, _ = invoke("nakayama", "t[1,1] + t[2,2]")
    assert code == EXIT_OK
    assert out.strip() == "q^2 t[1,1] + q^-2 t[2,2]"


def test_basis_limit():
    code, out, _ = invoke("basis", "--ell", "3", "--limit", "2")
    assert code == EXIT_OK
    assert out.splitlines() == ["1", "t[2,2]", "# 2 of 81 keys"]


def test_check_central_passes():
    code, out, _ = invoke("check", "central", "--n", "2")
    assert code == EXIT_OK
    assert out.strip() == "check central n=2: 4/4 passed [PASS]"


def test_check_failure_exit_code(mocker):
    failing = CheckReport(
        check="central", n=2, cases=[CheckCase(input="[D, t[1,1]]", residual="t[1,1]", passed=False)]
    )
    mocker.patch("qcoord.services.computations.check_central", return_value=failing)
    code, out, _ = invoke("check", "central")
    assert code == EXIT_CHECK_FAILED
    assert out.splitlines()[0] == "FAIL [D, t[1,1]]: t[1,1]"


def test_check_json_report(mocker):
    mocker.patch.object(settings, "CONFLUENCE_MAX_LENGTH", 2)
    code, out, _ = invoke("check", "pbw-confluence", "--json")
    payload = json.loads(out)
    assert code == EXIT_OK
    assert payload["check"] == "pbw-confluence"
    assert len(payload["cases"]) == 1 + 4 + 16
    assert all(case["pass"] for case in payload["cases"])


@pytest.mark.parametrize(
    "argv, message",
    [
        (("nf", "t[1,2]^-1"), "at position 7"),
        (("nf", "D"), "at position 0"),
        (("expand", "t[1,1]"), "needs a root order"),
        (("det", "--ell", "4"), "odd positive integer"),
        (("basis", "--ell", "3", "--variant", "sl"), "SL"),
        (("check", "module", "--variant", "sl"), "SL"),
        (("nf", "t[1,1]^100000000"), "exceeds the limit"),
    ],
)
def test_usage_errors(argv, message):
    code, out, err = invoke(*argv)
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("qcoord: error: ")
    assert message in err


def test_argparse_errors_exit_2(capsys):
    code, _, _ = invoke("frobnicate")
    assert code == EXIT_USAGE
    assert "invalid choice" in capsys.readouterr().err


def test_basis_negative_limit_exit_2(capsys):
    code, out, _ = invoke("basis", "--ell", "3", "--limit", "-1")
    assert code == EXIT_USAGE
    assert out == ""
    assert "must be non-negative" in capsys.readouterr().err
