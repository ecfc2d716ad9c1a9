"""HTTP service exposing the algebra engine.

One POST endpoint per CLI command under /v1/, plus GET /health.  All
handlers are synchronous and stateless; the normalization contexts are
shared per ground-set size through `qn.get_context`.

Error mapping (mirrored by the CLI's exit codes):

    parse       bad expression or scalar text           HTTP 400
    usage       bad parameters or ranges                 HTTP 400
    resource    request exceeds the built-in caps        HTTP 400
    genericity  inputs hit a non-invertible denominator  HTTP 422
    internal    cross-check disagreement or bug          HTTP 500
"""

from __future__ import annotations

import random

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import diffop, orepoly
from ..errors import (
    ConsistencyViolation,
    GenericityFailure,
    NonTermination,
    NotInvertible,
    ParseError,
    QnAlgError,
    ResourceLimit,
)
from ..exprparse import parse_expression
from ..qn import (
    check_RS_commute,
    evaluate,
    get_context,
    relation_suite,
)
from ..scalars import make_context
from ..strings import (
    MAX_DEGREE,
    elems,
    enumerate_reduced,
    enumerate_standard,
    mask_of,
    string_degree,
    subset_str,
)
from . import schemas

SERVICE_VERSION = "1"


# -- serialization helpers ------------------------------------------------

def _element_payload(el) -> dict:
    def term_key(bs):
        return (-string_degree(bs), len(bs), tuple(elems(b) for b in bs))

    terms = [
        {
            "coefficient": str(el.terms[bs]),
            "string": [list(elems(b)) for b in bs],
        }
        for bs in sorted(el.terms, key=term_key)
    ]
    return {"canonical": el.render(), "terms": terms}


def _string_text(bs) -> str:
    return "(" + ",".join(subset_str(b) for b in bs) + ")"


def _ring(spec: str):
    try:
        return make_context(spec)
    except ValueError as exc:
        raise ValueError(str(exc)) from None


def _parse_scalars(dctx, texts, what: str):
    out = []
    for idx, text in enumerate(texts):
        try:
            out.append(dctx.parse(text))
        except ParseError as exc:
            raise ParseError(
                f"{what}[{idx}]: {exc.message}", exc.position, exc.expected
            ) from None
    return out


def _resolve_roots(dctx, req_roots, req_n, seed, drawer, what="roots"):
    """Parse explicit scalars, or draw a generic tuple of length req_n."""
    if req_roots is not None:
        if not req_roots:
            raise ValueError(f"{what} must be nonempty")
        return _parse_scalars(dctx, req_roots, what), False
    if req_n is None:
        raise ValueError(f"either {what} or n is required")
    rng = random.Random(seed)
    return list(drawer(dctx, req_n, rng)), True


def _factorization_payload(dctx, fact) -> dict:
    return {
        "ordering": list(fact.ordering),
        "factors": [dctx.render(x) for x in fact.factors],
        "coefficients": [dctx.render(c) for c in fact.coefficients],
    }


# -- handlers --------------------------------------------------------------

def create_app() -> FastAPI:
    app = FastAPI(title="qnalg", version=SERVICE_VERSION)

    @app.exception_handler(ParseError)
    def _parse_error(request: Request, exc: ParseError):
        body = {
            "kind": "parse",
            "message": exc.message,
            "position": exc.position,
        }
        if exc.expected:
            body["expected"] = list(exc.expected)
        return JSONResponse(
            status_code=400, content={"ok": False, "error": body}
        )

    @app.exception_handler(ValueError)
    def _usage_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={
                "ok": False,
                "error": {"kind": "usage", "message": str(exc)},
            },
        )

    @app.exception_handler(RequestValidationError)
    def _validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        return JSONResponse(
            status_code=400,
            content={
                "ok": False,
                "error": {
                    "kind": "usage",
                    "message": f"{where}: {first.get('msg', 'invalid')}",
                },
            },
        )

    @app.exception_handler(ResourceLimit)
    def _resource_error(request: Request, exc: ResourceLimit):
        return JSONResponse(
            status_code=400,
            content={
                "ok": False,
                "error": {"kind": "resource", "message": str(exc)},
            },
        )

    @app.exception_handler(GenericityFailure)
    def _genericity_error(request: Request, exc: GenericityFailure):
        return JSONResponse(
            status_code=422,
            content={
                "ok": False,
                "error": {"kind": "genericity", "message": str(exc)},
            },
        )

    @app.exception_handler(ConsistencyViolation)
    def _consistency_error(request: Request, exc: ConsistencyViolation):
        return JSONResponse(
            status_code=500,
            content={
                "ok": False,
                "error": {"kind": "internal", "message": str(exc)},
            },
        )

    @app.exception_handler(NotInvertible)
    def _not_invertible_error(request: Request, exc: NotInvertible):
        return JSONResponse(
            status_code=400,
            content={
                "ok": False,
                "error": {"kind": "usage", "message": str(exc)},
            },
        )

    @app.exception_handler(QnAlgError)
    def _fallback_error(request: Request, exc: QnAlgError):
        return JSONResponse(
            status_code=500,
            content={
                "ok": False,
                "error": {"kind": "internal", "message": str(exc)},
            },
        )

    def ok(result: dict) -> dict:
        return {"ok": True, "result": result}

    @app.get("/health")
    def health():
        return ok({"status": "up", "version": SERVICE_VERSION})

    @app.post("/v1/normalize")
    def normalize(req: schemas.NormalizeRequest):
        ctx = get_context(req.n)
        el = ctx.normalize(parse_expression(req.expr, req.n))
        return ok(_element_payload(el))

    @app.post("/v1/equal")
    def equal(req: schemas.EqualRequest):
        ctx = get_context(req.n)
        left = ctx.normalize(parse_expression(req.left, req.n))
        right = ctx.normalize(parse_expression(req.right, req.n))
        diff = left - right
        return ok(
            {
                "passed": diff.is_zero(),
                "equal": diff.is_zero(),
                "difference": diff.render(),
            }
        )

    @app.post("/v1/symfun")
    def symfun(req: schemas.SymfunRequest):
        ctx = get_context(req.n)
        for e in req.subset:
            if not 1 <= e <= req.n:
                raise ValueError(f"subset element {e} outside 1..{req.n}")
        el = ctx.lambda_k(req.k, mask_of(req.subset), method=req.method)
        return ok(_element_payload(el))

    @app.post("/v1/specialize")
    def specialize(req: schemas.SpecializeRequest):
        ctx = get_context(req.n)
        el = ctx.normalize(parse_expression(req.expr, req.n))
        if req.map == "phi":
            poly = ctx.specialize_phi(el)
        else:
            poly = ctx.specialize_psi(el)
        return ok({"rendered": poly.render()})

    @app.post("/v1/evaluate")
    def evaluate_cmd(req: schemas.EvaluateRequest):
        dctx = _ring(req.ring)
        roots, drawn = _resolve_roots(
            dctx, req.roots, req.n, req.seed, orepoly.random_generic_roots
        )
        if len(roots) != req.n:
            raise ValueError(f"{len(roots)} roots given but n={req.n}")
        words = parse_expression(req.expr, req.n)
        value = evaluate(words, roots, dctx)
        return ok(
            {
                "value": dctx.render(value),
                "ring": dctx.name,
                "roots": [dctx.render(x) for x in roots],
                "roots_drawn": drawn,
            }
        )

    @app.post("/v1/enumerate-basis")
    def enumerate_basis(req: schemas.EnumerateBasisRequest):
        if req.max_degree > MAX_DEGREE:
            raise ResourceLimit(
                f"degree bound {req.max_degree} exceeds {MAX_DEGREE}")
        fn = enumerate_reduced if req.variant == "reduced" else enumerate_standard
        strings = fn(req.n, req.max_degree)
        return ok(
            {
                "count": len(strings),
                "variant": req.variant,
                "strings": [[list(elems(b)) for b in bs] for bs in strings],
                "rendered": [_string_text(bs) for bs in strings],
            }
        )

    @app.post("/v1/factor-roots")
    def factor_roots(req: schemas.FactorRootsRequest):
        dctx = _ring(req.ring)
        roots, drawn = _resolve_roots(
            dctx, req.roots, req.n, req.seed, orepoly.random_generic_roots
        )
        a0 = None
        if req.a0 is not None:
            a0 = dctx.parse(req.a0)
        common, facts = orepoly.factorize_all(dctx, roots, a0=a0)
        return ok(
            {
                "ring": dctx.name,
                "roots": [dctx.render(x) for x in roots],
                "roots_drawn": drawn,
                "polynomial": common.render(),
                "coefficients": [dctx.render(c) for c in common.coeffs],
                "factorizations": [
                    _factorization_payload(dctx, f) for f in facts
                ],
            }
        )

    @app.post("/v1/vieta")
    def vieta_cmd(req: schemas.VietaRequest):
        dctx = _ring(req.ring)
        roots, drawn = _resolve_roots(
            dctx, req.roots, req.n, req.seed, orepoly.random_generic_roots
        )
        n = len(roots)
        ordering = tuple(req.ordering) if req.ordering else tuple(range(1, n + 1))
        if sorted(ordering) != list(range(1, n + 1)):
            raise ValueError(f"ordering must be a permutation of 1..{n}")
        sums = orepoly.vieta(dctx, roots, ordering)
        common, _ = orepoly.factorize_all(dctx, roots)
        matches = all(
            dctx.eq(
                common.coeffs[m],
                sums[m] if m % 2 == 0 else -sums[m],
            )
            for m in range(n + 1)
        )
        return ok(
            {
                "ring": dctx.name,
                "roots": [dctx.render(x) for x in roots],
                "roots_drawn": drawn,
                "ordering": list(ordering),
                "signed_sums": [dctx.render(s) for s in sums],
                "coefficients": [dctx.render(c) for c in common.coeffs],
                "passed": matches,
            }
        )

    @app.post("/v1/verify-relations")
    def verify_relations(req: schemas.VerifyRelationsRequest):
        if req.target == "qn":
            if req.n is None:
                raise ValueError("n is required for target 'qn'")
            failures = relation_suite(req.n)
            return ok(
                {
                    "target": "qn",
                    "n": req.n,
                    "passed": not failures,
                    "failures": failures[:20],
                }
            )
        dctx = _ring(req.ring)
        if req.target == "roots":
            roots, drawn = _resolve_roots(
                dctx, req.roots, req.n, req.seed, orepoly.random_generic_roots
            )
            failures = orepoly.verify_relations_32(dctx, roots)
            values = [dctx.render(x) for x in roots]
        else:
            fs, drawn = _resolve_roots(
                dctx,
                req.fs,
                req.n,
                req.seed,
                diffop.random_generic_diff_roots,
                what="fs",
            )
            failures = diffop.verify_relations_43(dctx, fs)
            values = [dctx.render(x) for x in fs]
        return ok(
            {
                "target": req.target,
                "ring": dctx.name,
                "inputs": values,
                "inputs_drawn": drawn,
                "passed": not failures,
                "failures": failures[:20],
            }
        )

    @app.post("/v1/diff-factor")
    def diff_factor(req: schemas.DiffFactorRequest):
        dctx = _ring(req.ring)
        fs, drawn = _resolve_roots(
            dctx,
            req.fs,
            req.n,
            req.seed,
            diffop.random_generic_diff_roots,
            what="fs",
        )
        common, facts = diffop.factorize_all_diff(dctx, fs)
        return ok(
            {
                "ring": dctx.name,
                "fs": [dctx.render(x) for x in fs],
                "fs_drawn": drawn,
                "operator": common.render(),
                "coefficients": [dctx.render(c) for c in common.coeffs],
                "factorizations": [
                    _factorization_payload(dctx, f) for f in facts
                ],
            }
        )

    @app.post("/v1/miura")
    def miura(req: schemas.MiuraRequest):
        dctx = _ring(req.ring)
        if not req.flag:
            raise ValueError("flag must be nonempty")
        phis = _parse_scalars(dctx, req.flag, "flag")
        op, bs = diffop.miura_factorize(dctx, phis)
        annihilates = [
            dctx.is_zero(diffop.diffop_apply(op, phi)) for phi in phis
        ]
        return ok(
            {
                "ring": dctx.name,
                "flag": [dctx.render(x) for x in phis],
                "operator": op.render(),
                "coefficients": [dctx.render(c) for c in op.coeffs],
                "bs": [dctx.render(b) for b in bs],
                "annihilates": annihilates,
                "passed": all(annihilates),
            }
        )

    @app.post("/v1/check-rs")
    def check_rs(req: schemas.CheckRSRequest):
        failures = check_RS_commute(req.n, get_context(req.n))
        return ok({"n": req.n, "passed": not failures, "failures": failures})

    return app


app = create_app()
