"""HTTP surface: payload shapes, error envelope, and status codes."""

import asyncio

import httpx
import pytest

from qnalg.service import app


def call(method, path, json=None):
    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://service"
        ) as client:
            if method == "get":
                return await client.get(path)
            return await client.post(path, json=json)

    return asyncio.run(go())


def result_of(resp):
    body = resp.json()
    assert resp.status_code == 200
    assert body["ok"] is True
    return body["result"]


def error_of(resp, status, kind):
    body = resp.json()
    assert resp.status_code == status
    assert body["ok"] is False
    assert body["error"]["kind"] == kind
    return body["error"]


def test_health():
    res = result_of(call("get", "/health"))
    assert res["status"] == "up"


def test_normalize_known_relation():
    res = result_of(
        call(
            "post",
            "/v1/normalize",
            {"n": 2, "expr": "z{1},{2}*z{},{1} - z{2},{1}*z{},{2}"},
        )
    )
    assert res == {"canonical": "0", "terms": []}


def test_normalize_payload_shape():
    res = result_of(call("post", "/v1/normalize", {"n": 2, "expr": "r{1,2}r{1}"}))
    assert res["canonical"]
    assert all(
        set(t) == {"coefficient", "string"} for t in res["terms"]
    )
    degrees = [sum(len(b) for b in t["string"]) for t in res["terms"]]
    assert degrees == sorted(degrees, reverse=True)


def test_equal_endpoint_passes_and_fails():
    res = result_of(
        call(
            "post",
            "/v1/equal",
            {"n": 2, "left": "r{1}r{2}", "right": "r{2}r{1}"},
        )
    )
    assert res["passed"] is False
    assert res["difference"] != "0"
    res = result_of(
        call(
            "post",
            "/v1/equal",
            {"n": 2, "left": "z{1},{2} + z{},{1}", "right": "z{2},{1} + z{},{2}"},
        )
    )
    assert res == {"passed": True, "equal": True, "difference": "0"}


def test_symfun_methods_agree():
    base = {"n": 3, "k": 2, "subset": [1, 2, 3]}
    rec = result_of(
        call("post", "/v1/symfun", {**base, "method": "recursion"})
    )
    clo = result_of(
        call("post", "/v1/symfun", {**base, "method": "closed_form"})
    )
    assert rec == clo
    assert rec["terms"]


def test_symfun_rejects_out_of_range_subset():
    error_of(
        call(
            "post",
            "/v1/symfun",
            {"n": 2, "k": 1, "subset": [3], "method": "recursion"},
        ),
        400,
        "usage",
    )


def test_specialize_both_maps():
    res = result_of(
        call(
            "post",
            "/v1/specialize",
            {"n": 2, "expr": "r{1,2}", "map": "psi"},
        )
    )
    assert "v1" in res["rendered"] and "v2" in res["rendered"]
    res = result_of(
        call(
            "post",
            "/v1/specialize",
            {"n": 2, "expr": "r{1}", "map": "phi"},
        )
    )
    assert res["rendered"] == "w1"


def test_evaluate_with_explicit_roots():
    res = result_of(
        call(
            "post",
            "/v1/evaluate",
            {"n": 2, "expr": "z{1},{2}", "ring": "quat", "roots": ["i", "j"]},
        )
    )
    assert res["value"] == "-i"
    assert res["roots"] == ["i", "j"]
    assert res["roots_drawn"] is False


def test_evaluate_draws_roots_when_missing():
    res = result_of(
        call(
            "post",
            "/v1/evaluate",
            {"n": 2, "expr": "r{1}", "ring": "quat", "seed": 3},
        )
    )
    assert res["roots_drawn"] is True
    assert len(res["roots"]) == 2
    again = result_of(
        call(
            "post",
            "/v1/evaluate",
            {"n": 2, "expr": "r{1}", "ring": "quat", "seed": 3},
        )
    )
    assert again == res


def test_evaluate_root_count_mismatch():
    error_of(
        call(
            "post",
            "/v1/evaluate",
            {"n": 2, "expr": "r{1}", "ring": "quat", "roots": ["i", "j", "k"]},
        ),
        400,
        "usage",
    )


def test_enumerate_basis_published_list():
    res = result_of(
        call(
            "post",
            "/v1/enumerate-basis",
            {"n": 2, "max_degree": 2, "variant": "reduced"},
        )
    )
    assert res["count"] == 9
    assert "({1,2},{1})" in res["rendered"]
    assert "({1,2},{2})" not in res["rendered"]
    assert [[1, 2], [1]] in res["strings"]


def test_enumerate_basis_resource_guard():
    err = error_of(
        call(
            "post",
            "/v1/enumerate-basis",
            {"n": 2, "max_degree": 25, "variant": "reduced"},
        ),
        400,
        "resource",
    )
    assert "exceeds" in err["message"]


def test_factor_roots_published_pair():
    res = result_of(
        call(
            "post",
            "/v1/factor-roots",
            {"ring": "quat", "roots": ["i", "j"]},
        )
    )
    assert res["coefficients"] == ["1", "0", "1"]
    assert [f["ordering"] for f in res["factorizations"]] == [[1, 2], [2, 1]]
    by_order = {tuple(f["ordering"]): f for f in res["factorizations"]}
    assert by_order[(1, 2)]["factors"] == ["i", "-i"]
    assert by_order[(2, 1)]["factors"] == ["j", "-j"]


def test_factor_roots_genericity_failure():
    error_of(
        call(
            "post",
            "/v1/factor-roots",
            {"ring": "rational", "roots": ["1", "1"]},
        ),
        422,
        "genericity",
    )


def test_factor_roots_scalar_parse_error_names_entry():
    err = error_of(
        call(
            "post",
            "/v1/factor-roots",
            {"ring": "quat", "roots": ["i", "$"]},
        ),
        400,
        "parse",
    )
    assert err["message"].startswith("roots[1]:")


def test_vieta_matches_coefficients():
    res = result_of(
        call("post", "/v1/vieta", {"ring": "quat", "roots": ["i", "j"]})
    )
    assert res["passed"] is True
    assert res["signed_sums"] == ["1", "0", "1"]
    assert res["coefficients"] == ["1", "0", "1"]
    assert res["ordering"] == [1, 2]


def test_vieta_rejects_bad_ordering():
    error_of(
        call(
            "post",
            "/v1/vieta",
            {"ring": "quat", "roots": ["i", "j"], "ordering": [1, 1]},
        ),
        400,
        "usage",
    )


def test_verify_relations_three_targets():
    res = result_of(call("post", "/v1/verify-relations", {"target": "qn", "n": 2}))
    assert res == {"target": "qn", "n": 2, "passed": True, "failures": []}
    res = result_of(
        call(
            "post",
            "/v1/verify-relations",
            {"target": "roots", "ring": "quat", "n": 2, "seed": 1},
        )
    )
    assert res["passed"] is True
    assert res["inputs_drawn"] is True
    res = result_of(
        call(
            "post",
            "/v1/verify-relations",
            {"target": "diff", "ring": "mat2", "n": 2, "seed": 1},
        )
    )
    assert res["passed"] is True


def test_verify_relations_requires_n_for_algebra_target():
    error_of(
        call("post", "/v1/verify-relations", {"target": "qn"}), 400, "usage"
    )


def test_diff_factor_with_explicit_inputs():
    res = result_of(
        call(
            "post",
            "/v1/diff-factor",
            {"ring": "ratfunc", "fs": ["1/x", "3/x"]},
        )
    )
    assert res["fs_drawn"] is False
    assert res["operator"].startswith("D^2")
    assert len(res["factorizations"]) == 2
    assert len(res["coefficients"]) == 3


def test_miura_published_flag():
    res = result_of(
        call("post", "/v1/miura", {"ring": "ratfunc", "flag": ["x", "x^2"]})
    )
    assert res["passed"] is True
    assert res["annihilates"] == [True, True]
    assert res["operator"] == "D^2 + ((-2)/(x))*D + ((2)/(x^2))"
    assert res["bs"] == ["(1)/(x)", "(1)/(x)"]


def test_check_rs_small_sizes():
    res = result_of(call("post", "/v1/check-rs", {"n": 2}))
    assert res == {"n": 2, "passed": True, "failures": []}


def test_parse_error_carries_position():
    err = error_of(
        call("post", "/v1/normalize", {"n": 2, "expr": "z{1},{1}"}),
        400,
        "parse",
    )
    assert err["position"] == 5
    err = error_of(
        call("post", "/v1/normalize", {"n": 2, "expr": "r{1} +"}),
        400,
        "parse",
    )
    assert err["expected"] == ["'('", "'L'", "'r'", "'u'", "'z'", "integer"]


def test_unknown_ring_is_usage():
    error_of(
        call("post", "/v1/evaluate", {"n": 1, "expr": "r{1}", "ring": "octonion"}),
        400,
        "usage",
    )


def test_schema_validation_maps_to_usage():
    err = error_of(call("post", "/v1/normalize", {"n": 2}), 400, "usage")
    assert "expr" in err["message"]
    error_of(call("post", "/v1/check-rs", {"n": 4}), 400, "usage")
    error_of(call("post", "/v1/normalize", {"n": 17, "expr": "r{1}"}), 400, "usage")
