"""Command-line front end.

Every data command is a thin client of the HTTP service: the payload
is posted to the in-process app by default, or to a running server
when --server is given, and the JSON envelope is rendered as text or
passed through.  Exit codes:

    0  success
    1  a verification command reported a counterexample
       (or the engine detected an internal cross-check violation)
    2  usage or parse error
    3  the inputs were not generic enough (an inversion failed)

Randomized commands draw their inputs from --seed; omitting the flag
uses seed 0 and says so on stderr, so every published result is
reproducible by construction.
"""

from __future__ import annotations

import asyncio
import json
import sys

import click
import httpx

_EXIT_BY_KIND = {
    "parse": 2,
    "usage": 2,
    "resource": 2,
    "genericity": 3,
    "internal": 1,
}


def _get_app():
    from .service import app

    return app


def _call(server: str | None, path: str, payload: dict) -> dict:
    if server:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
    else:
        async def go():
            transport = httpx.ASGITransport(app=_get_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://qnalg"
            ) as ac:
                return await ac.post(path, json=payload)

        resp = asyncio.run(go())
    try:
        body = resp.json()
    except ValueError:
        click.echo(f"error: malformed response (HTTP {resp.status_code})", err=True)
        sys.exit(1)
    if not body.get("ok"):
        err = body.get("error") or {}
        kind = err.get("kind", "internal")
        message = err.get("message", "unknown error")
        if err.get("position") is not None:
            message += f" (at position {err['position']})"
        click.echo(f"error [{kind}]: {message}", err=True)
        sys.exit(_EXIT_BY_KIND.get(kind, 1))
    return body["result"]


def _emit(result: dict, fmt: str, out: str | None, text_fn) -> None:
    if fmt == "json":
        rendered = json.dumps(result, sort_keys=True, indent=2) + "\n"
    else:
        rendered = text_fn(result)
        if not rendered.endswith("\n"):
            rendered += "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(rendered)
    else:
        click.echo(rendered, nl=False)


def _finish(result: dict) -> None:
    if result.get("passed") is False:
        sys.exit(1)


def _seed_value(seed: int | None, uses_randomness: bool) -> int:
    if seed is None:
        if uses_randomness:
            click.echo("notice: no --seed given; using seed 0", err=True)
        return 0
    return seed


def _split_list(text: str | None) -> list[str] | None:
    if text is None:
        return None
    parts = [p.strip() for p in text.split(";")]
    return [p for p in parts if p]


def _parse_subset(text: str) -> list[int]:
    inner = text.strip()
    if inner.startswith("{") and inner.endswith("}"):
        inner = inner[1:-1]
    inner = inner.strip()
    if not inner:
        return []
    try:
        return [int(p) for p in inner.split(",")]
    except ValueError:
        raise click.UsageError(f"bad subset literal {text!r}")


def common_options(f):
    f = click.option(
        "--server",
        default=None,
        metavar="URL",
        help="Base URL of a running service; defaults to in-process.",
    )(f)
    f = click.option(
        "--format",
        "fmt",
        type=click.Choice(["text", "json"]),
        default="text",
        show_default=True,
    )(f)
    f = click.option(
        "--out",
        type=click.Path(dir_okay=False, writable=True),
        default=None,
        help="Write the output to a file instead of stdout.",
    )(f)
    return f


@click.group()
def main():
    """Exact computations in the subset-indexed quadratic algebra and
    its factorization calculus."""


@main.command()
@click.option("--n", required=True, type=int)
@click.argument("expr")
@common_options
def normalize(n, expr, server, fmt, out):
    """Rewrite an expression onto the reduced-string basis."""
    result = _call(server, "/v1/normalize", {"n": n, "expr": expr})
    _emit(result, fmt, out, lambda r: r["canonical"])


@main.command()
@click.option("--n", required=True, type=int)
@click.argument("left")
@click.argument("right")
@common_options
def equal(n, left, right, server, fmt, out):
    """Decide whether two expressions denote the same element.

    Exits 1 when they differ."""
    result = _call(server, "/v1/equal", {"n": n, "left": left, "right": right})

    def text(r):
        if r["equal"]:
            return "equal"
        return f"not equal\ndifference: {r['difference']}"

    _emit(result, fmt, out, text)
    _finish(result)


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--k", required=True, type=int)
@click.option("--subset", required=True, metavar="{a,b,...}")
@click.option(
    "--method",
    type=click.Choice(["recursion", "closed_form"]),
    default="recursion",
    show_default=True,
)
@common_options
def symfun(n, k, subset, method, server, fmt, out):
    """Elementary symmetric element of a subset, in basis form."""
    result = _call(
        server,
        "/v1/symfun",
        {"n": n, "k": k, "subset": _parse_subset(subset), "method": method},
    )
    _emit(result, fmt, out, lambda r: r["canonical"])


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--map", "map_", type=click.Choice(["phi", "psi"]), required=True)
@click.argument("expr")
@common_options
def specialize(n, map_, expr, server, fmt, out):
    """Apply one of the two commutative specializations."""
    result = _call(
        server, "/v1/specialize", {"n": n, "expr": expr, "map": map_}
    )
    _emit(result, fmt, out, lambda r: r["rendered"])


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--ring", default="quat", show_default=True)
@click.option("--roots", default=None, metavar='"a;b;..."')
@click.option("--seed", type=int, default=None)
@click.argument("expr")
@common_options
def evaluate(n, ring, roots, seed, expr, server, fmt, out):
    """Evaluate an expression at scalar roots via the root tower."""
    roots_list = _split_list(roots)
    payload = {
        "n": n,
        "expr": expr,
        "ring": ring,
        "roots": roots_list,
        "seed": _seed_value(seed, roots_list is None),
    }
    result = _call(server, "/v1/evaluate", payload)

    def text(r):
        return f"roots: {'; '.join(r['roots'])}\nvalue: {r['value']}"

    _emit(result, fmt, out, text)


@main.command(name="enumerate-basis")
@click.option("--n", required=True, type=int)
@click.option("--max-degree", required=True, type=int)
@click.option(
    "--variant",
    type=click.Choice(["reduced", "standard"]),
    default="reduced",
    show_default=True,
)
@common_options
def enumerate_basis(n, max_degree, variant, server, fmt, out):
    """List the basis strings inside a degree budget."""
    result = _call(
        server,
        "/v1/enumerate-basis",
        {"n": n, "max_degree": max_degree, "variant": variant},
    )

    def text(r):
        return "\n".join(r["rendered"] + [f"count: {r['count']}"])

    _emit(result, fmt, out, text)


def _factorization_text(r, key, indet):
    lines = [f"{key}: {r[key]}"]
    lines.append("coefficients: " + "; ".join(r["coefficients"]))
    for f in r["factorizations"]:
        order = ",".join(str(i) for i in f["ordering"])
        factors = "  ".join(f"({indet} - [{x}])" for x in reversed(f["factors"]))
        lines.append(f"ordering {order}: {factors}")
    return "\n".join(lines)


@main.command(name="factor-roots")
@click.option("--ring", default="quat", show_default=True)
@click.option("--roots", default=None, metavar='"a;b;..."')
@click.option("--n", type=int, default=None, help="Draw this many generic roots.")
@click.option("--a0", default=None, help="Leading coefficient (defaults to 1).")
@click.option("--seed", type=int, default=None)
@common_options
def factor_roots(ring, roots, n, a0, seed, server, fmt, out):
    """Expand all factorizations of the polynomial with the given roots."""
    roots_list = _split_list(roots)
    payload = {
        "ring": ring,
        "roots": roots_list,
        "n": n,
        "a0": a0,
        "seed": _seed_value(seed, roots_list is None),
    }
    result = _call(server, "/v1/factor-roots", payload)
    _emit(result, fmt, out, lambda r: _factorization_text(r, "polynomial", "t"))


@main.command()
@click.option("--ring", default="quat", show_default=True)
@click.option("--roots", default=None, metavar='"a;b;..."')
@click.option("--n", type=int, default=None)
@click.option("--ordering", default=None, metavar='"2,1"')
@click.option("--seed", type=int, default=None)
@common_options
def vieta(ring, roots, n, ordering, seed, server, fmt, out):
    """Signed coefficient sums of the conjugated roots.

    Exits 1 if they fail to match the expansion coefficients."""
    roots_list = _split_list(roots)
    payload = {
        "ring": ring,
        "roots": roots_list,
        "n": n,
        "ordering": _parse_subset(ordering) if ordering else None,
        "seed": _seed_value(seed, roots_list is None),
    }
    result = _call(server, "/v1/vieta", payload)

    def text(r):
        return (
            "sums: " + "; ".join(r["signed_sums"])
            + "\ncoefficients: " + "; ".join(r["coefficients"])
            + "\nmatch: " + ("yes" if r["passed"] else "no")
        )

    _emit(result, fmt, out, text)
    _finish(result)


@main.command(name="verify-relations")
@click.option(
    "--target",
    type=click.Choice(["qn", "roots", "diff"]),
    default="qn",
    show_default=True,
)
@click.option("--n", type=int, default=None)
@click.option("--ring", default="quat", show_default=True)
@click.option("--roots", default=None, metavar='"a;b;..."')
@click.option("--fs", default=None, metavar='"a;b;..."')
@click.option("--seed", type=int, default=None)
@common_options
def verify_relations(target, n, ring, roots, fs, seed, server, fmt, out):
    """Check a family of defining identities; exits 1 on a counterexample."""
    roots_list = _split_list(roots)
    fs_list = _split_list(fs)
    uses_rng = target == "roots" and roots_list is None
    uses_rng = uses_rng or (target == "diff" and fs_list is None)
    payload = {
        "target": target,
        "n": n,
        "ring": ring,
        "roots": roots_list,
        "fs": fs_list,
        "seed": _seed_value(seed, uses_rng),
    }
    result = _call(server, "/v1/verify-relations", payload)

    def text(r):
        if r["passed"]:
            return "all relations hold"
        lines = [f"failed: {len(r['failures'])} counterexample(s)"]
        for rec in r["failures"]:
            lines.append("  " + json.dumps(rec, sort_keys=True))
        return "\n".join(lines)

    _emit(result, fmt, out, text)
    _finish(result)


@main.command(name="diff-factor")
@click.option("--ring", default="mat2", show_default=True)
@click.option("--fs", default=None, metavar='"a;b;..."')
@click.option("--n", type=int, default=None, help="Draw this many generic values.")
@click.option("--seed", type=int, default=None)
@common_options
def diff_factor(ring, fs, n, seed, server, fmt, out):
    """Expand all factorizations of the operator built from the values."""
    fs_list = _split_list(fs)
    payload = {
        "ring": ring,
        "fs": fs_list,
        "n": n,
        "seed": _seed_value(seed, fs_list is None),
    }
    result = _call(server, "/v1/diff-factor", payload)
    _emit(result, fmt, out, lambda r: _factorization_text(r, "operator", "D"))


@main.command()
@click.option("--ring", default="ratfunc", show_default=True)
@click.option("--flag", required=True, metavar='"f1;f2;..."')
@common_options
def miura(ring, flag, server, fmt, out):
    """Factor the operator annihilating a solution flag.

    Exits 1 if the composed operator fails to annihilate the flag."""
    payload = {"ring": ring, "flag": _split_list(flag)}
    result = _call(server, "/v1/miura", payload)

    def text(r):
        return (
            f"operator: {r['operator']}"
            + "\nfactors b_k: " + "; ".join(r["bs"])
            + "\nannihilates: "
            + "; ".join("yes" if a else "no" for a in r["annihilates"])
        )

    _emit(result, fmt, out, text)
    _finish(result)


@main.command(name="check-rs")
@click.option("--n", required=True, type=int)
@common_options
def check_rs(n, server, fmt, out):
    """Entrywise commutation of the diagonal/step matrix pair."""
    result = _call(server, "/v1/check-rs", {"n": n})

    def text(r):
        if r["passed"]:
            return "all pairs commute"
        return f"failed: {len(r['failures'])} nonzero entries"

    _emit(result, fmt, out, text)
    _finish(result)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(_get_app(), host=host, port=port)


if __name__ == "__main__":
    main()
